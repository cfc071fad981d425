"""Growth functions of graphs and chamber complexes, the domination
preorder with explicit witnesses, and the exact tree recurrence relating a
graph's growth to that of its chamber realisation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Protocol

from .coxeter import spherical_subsets
from .functor import ChamberComplex, FunctorContext, _jkey
from .gog import OrientedGraph


class GrowthError(ValueError):
    pass


class LazyGraph(Protocol):
    """Minimal interface for possibly-infinite graphs explored by radius."""

    def basepoint(self): ...

    def neighbors(self, v) -> list:  # [(edge id, other endpoint)]
        ...

    def horizon(self) -> Optional[int]:
        """Largest safe exploration radius, None if unbounded."""
        ...


@dataclass(frozen=True)
class GrowthPrefix:
    values: tuple
    basepoint: object
    source: str

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not vals or vals[0] < 1:
            raise GrowthError("growth prefix needs g(0) >= 1")
        if any(b < a for a, b in zip(vals, vals[1:])):
            raise GrowthError("growth prefix must be nondecreasing")

    def __len__(self):
        return len(self.values)

    def __getitem__(self, k: int) -> int:
        return self.values[k]


class FiniteGraphAdapter:
    """LazyGraph view of a finite OrientedGraph."""

    def __init__(self, graph: OrientedGraph, base):
        self.graph = graph
        self.base = base

    def basepoint(self):
        return self.base

    def neighbors(self, v):
        return [(oe[0], self.graph.t(oe)) for oe in self.graph.edges_at(v)]

    def horizon(self):
        return None


def graph_growth(source, basepoint=None, kmax: int = 8) -> GrowthPrefix:
    """Vertex counts of combinatorial balls by breadth-first search."""
    if isinstance(source, OrientedGraph):
        if basepoint is None:
            basepoint = source.vertices[0]
        lazy = FiniteGraphAdapter(source, basepoint)
    else:
        lazy = source
        if basepoint is None:
            basepoint = lazy.basepoint()
    hz = lazy.horizon()
    if hz is not None and kmax > hz:
        raise GrowthError(f"kmax {kmax} beyond generator horizon {hz}")
    seen = {basepoint}
    frontier = [basepoint]
    values = [1]
    for _ in range(kmax):
        nxt = []
        for v in frontier:
            for _, u in lazy.neighbors(v):
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        values.append(len(seen))
        frontier = nxt
    return GrowthPrefix(tuple(values), basepoint, "graph-bfs")


# chamber-ball growth of a realised complex -------------------------------


class LazyChamberComplex:
    """Chamber-level view of F(Y) for a lazy graph Y, materialising only
    the cells the ball expansion touches.

    Uses the coloured gluing (vertices alternate i1/i2 types along the
    bipartite classes); basepoint vertices must carry type i1 when used
    with the recurrence.
    """

    def __init__(self, ctx: FunctorContext, lazy: LazyGraph, base_colour=None):
        self.ctx = ctx
        self.lazy = lazy
        self.sph = spherical_subsets(ctx.system)
        self.colour: dict = {lazy.basepoint(): base_colour or ctx.i1}
        self.i1, self.i2 = ctx.i1, ctx.i2
        self.edge_ends: dict = {}  # eid -> (v, u)

    def _colour_of(self, v):
        return self.colour[v]

    def basepoint_cell(self):
        v = self.lazy.basepoint()
        return ("f", v, frozenset([self._colour_of(v)]))

    def chambers_of_cell(self, cell) -> list:
        kind = cell[0]
        if kind == "m":
            return [cell[1]]
        v = cell[1]
        out = []
        for eid, u in self.lazy.neighbors(v):
            if u not in self.colour:
                self.colour[u] = self.i2 if self._colour_of(v) == self.i1 else self.i1
            self.edge_ends.setdefault(eid, (v, u))
            out.append(eid)
        return out

    def cells_of_chamber(self, eid) -> list:
        v, u = self.edge_ends[eid]
        if u not in self.colour:
            self.colour[u] = self.i2 if self._colour_of(v) == self.i1 else self.i1
        cv, cu = self._colour_of(v), self._colour_of(u)
        cells = []
        for J in self.sph:
            if cv in J:
                cells.append(("f", v, J))
            elif cu in J:
                cells.append(("f", u, J))
            else:
                cells.append(("m", eid, J))
        return cells


class RealizedComplexAdapter:
    """Chamber-level view of an already materialised ChamberComplex."""

    def __init__(self, cx: ChamberComplex, basepoint_vertex=None):
        self.cx = cx
        v = basepoint_vertex if basepoint_vertex is not None else cx.graph.vertices[0]
        self.base_cell = cx.vertex_cell(v)

    def basepoint_cell(self):
        return self.base_cell

    def chambers_of_cell(self, cell):
        return self.cx.chambers_of_cell(cell)

    def cells_of_chamber(self, chamber):
        return list(self.cx.cells_of_chamber(chamber))


def complex_growth(source, kmax: int = 8, basepoint_vertex=None) -> GrowthPrefix:
    """Vertex counts of chamber balls: B(k) is the union of the chambers
    meeting B(k-1), counted by vertices."""
    if isinstance(source, ChamberComplex):
        adapter = RealizedComplexAdapter(source, basepoint_vertex)
    else:
        adapter = source
    base = adapter.basepoint_cell()
    ball = {base}
    values = [1]
    boundary = {base}
    chambers_seen: set = set()
    for _ in range(kmax):
        new_chambers = []
        for cell in boundary:
            for ch in adapter.chambers_of_cell(cell):
                if ch not in chambers_seen:
                    chambers_seen.add(ch)
                    new_chambers.append(ch)
        new_cells = set()
        for ch in new_chambers:
            for cell in adapter.cells_of_chamber(ch):
                if cell not in ball:
                    new_cells.add(cell)
        ball |= new_cells
        values.append(len(ball))
        boundary = new_cells
    return GrowthPrefix(tuple(values), base, "chamber-bfs")


# the exact recurrence -------------------------------------------------------


def recurrence_predict(g: GrowthPrefix, l: int, l1: int, l2: int) -> tuple:
    """Predicted chamber-complex growth from a tree's growth prefix.

    G(k) = (l - l_j) g(k) - l + 2 l1 + C * sum_{m=1}^{k-1} (-1)^m g(m),
    with C = l1 - l2 >= 0, j = 1 for odd k and j = 2 for even k, valid for
    tree inputs whose basepoint carries the first distinguished type.
    """
    if l1 < l2:
        raise GrowthError("normalisation requires l1 >= l2 (swap the faces)")
    C = l1 - l2
    out = [1]
    alt = 0  # sum_{m=1}^{k-1} (-1)^m g(m)
    for k in range(1, len(g)):
        lj = l1 if k % 2 == 1 else l2
        out.append((l - lj) * g[k] - l + 2 * l1 + C * alt)
        alt += (-1) ** k * g[k]
    return tuple(out)


def alternating_sum_bound_holds(g: GrowthPrefix) -> bool:
    """The proof's bound: sum_{m=1}^{k-1} (-1)^m g(m) <= g(k) for all k."""
    alt = 0
    for k in range(1, len(g)):
        if alt > g[k]:
            return False
        alt += (-1) ** k * g[k]
    return True


# domination preorder ---------------------------------------------------------


@dataclass(frozen=True)
class DominationWitness:
    alpha: int
    beta: int
    checked_range: int


def preceq_witness(
    f: GrowthPrefix, g: GrowthPrefix, alpha_max: int = 64, beta_max: int = 8
) -> Optional[DominationWitness]:
    """Smallest (beta, alpha) in lexicographic order with
    f(k) <= alpha * g(k + beta) on the overlapping range, or None within
    the bounds (finite evidence only, never a refutation)."""
    n = min(len(f), len(g))
    for beta in range(0, beta_max + 1):
        rng = n - beta
        if rng <= 0:
            break
        needed = 0
        ok = True
        for k in range(rng):
            gk = g[k + beta]
            if gk == 0:
                ok = False
                break
            needed = max(needed, -(-f[k] // gk))  # ceil division
        if ok and needed <= alpha_max:
            return DominationWitness(max(needed, 1), beta, rng)
    return None


def compose_witnesses(w1: DominationWitness, w2: DominationWitness) -> DominationWitness:
    """Transitivity: f <= a1 g(.+b1), g <= a2 h(.+b2) gives
    f <= a1 a2 h(.+b1+b2)."""
    return DominationWitness(
        w1.alpha * w2.alpha, w1.beta + w2.beta, min(w1.checked_range, w2.checked_range)
    )


@dataclass(frozen=True)
class SeparationVerdict:
    verdict: str  # 'equivalent-evidence' | 'a-strictly-below-evidence' | 'incomparable-within-bounds'
    forward: Optional[DominationWitness]
    backward: Optional[DominationWitness]


def growth_type_separation(
    a: GrowthPrefix, b: GrowthPrefix, alpha_max: int = 64, beta_max: int = 8
) -> SeparationVerdict:
    """Evidence-level comparison of two growth prefixes.

    'a-strictly-below-evidence' means a <= b has a witness but b <= a has
    none within the bounds; this is finite evidence of separation, not a
    proof about the infinite objects.
    """
    fw = preceq_witness(a, b, alpha_max, beta_max)
    bw = preceq_witness(b, a, alpha_max, beta_max)
    if fw is not None and bw is not None:
        return SeparationVerdict("equivalent-evidence", fw, bw)
    if fw is not None and bw is None:
        return SeparationVerdict("a-strictly-below-evidence", fw, bw)
    return SeparationVerdict("incomparable-within-bounds", fw, bw)


# lazy generators ------------------------------------------------------------


class LazyRay:
    """The half-line: vertices 0, 1, 2, ...; horizon bounded by max_len."""

    def __init__(self, max_len: int = 10_000):
        self.max_len = max_len

    def basepoint(self):
        return 0

    def neighbors(self, v):
        out = []
        if v > 0:
            out.append((f"r{v-1}", v - 1))
        if v + 1 <= self.max_len:
            out.append((f"r{v}", v + 1))
        return out

    def horizon(self):
        return self.max_len - 1


class LazyRegularTree:
    """Rooted (p, q)-biregular tree: even-depth vertices have valence p."""

    def __init__(self, p: int, q: int, max_depth: int = 30):
        self.p, self.q, self.max_depth = p, q, max_depth

    def basepoint(self):
        return ()

    def neighbors(self, v):
        out = []
        depth = len(v)
        if depth > 0:
            out.append((("up",) + v, v[:-1]))
        valence = self.p if depth % 2 == 0 else self.q
        down = valence if depth == 0 else valence - 1
        if depth < self.max_depth:
            for c in range(down):
                child = v + (c,)
                out.append((("up",) + child, child))
        return out

    def horizon(self):
        return self.max_depth - 1


class LazyBranchingQuotient:
    """Self-similar tree: a spine where every `period`-th vertex sprouts an
    extra branch; all branches continue the same pattern.  Gives growth
    strictly between linear and the full tree."""

    def __init__(self, period: int = 2, max_depth: int = 64):
        self.period = period
        self.max_depth = max_depth

    def basepoint(self):
        return ()

    def neighbors(self, v):
        out = []
        depth = len(v)
        if depth > 0:
            out.append((("up",) + v, v[:-1]))
        if depth >= self.max_depth:
            return out
        out.append((("down",) + v + (0,), v + (0,)))
        if depth % self.period == self.period - 1:
            out.append((("down",) + v + (1,), v + (1,)))
        return out

    def horizon(self):
        return self.max_depth - 1
