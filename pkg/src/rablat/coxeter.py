"""Right-angled Coxeter systems and the combinatorics of the chamber.

A right-angled system has Coxeter matrix entries in {1, 2, inf}.  The
spherical subsets are the cliques of the commutation graph; the chamber is
the simplicial cone on the barycentric subdivision of the nerve, with one
vertex per spherical subset and the empty set as cone point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Optional, Sequence

INF = math.inf

Label = Hashable


class CoxeterError(ValueError):
    pass


@dataclass(frozen=True)
class RightAngledSystem:
    generators: tuple
    m: tuple  # tuple of tuples with entries 1, 2 or INF

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        mat = tuple(tuple(row) for row in self.m)
        object.__setattr__(self, "m", mat)
        n = len(gens)
        if len(set(gens)) != n:
            raise CoxeterError("duplicate generator labels")
        if len(mat) != n or any(len(row) != n for row in mat):
            raise CoxeterError("Coxeter matrix shape mismatch")
        for i in range(n):
            if mat[i][i] != 1:
                raise CoxeterError("diagonal entries must be 1")
            for j in range(n):
                if mat[i][j] != mat[j][i]:
                    raise CoxeterError("Coxeter matrix must be symmetric")
                if i != j and mat[i][j] not in (2, INF):
                    raise CoxeterError("off-diagonal entries must be 2 or inf")

    def idx(self, label) -> int:
        return self.generators.index(label)

    def entry(self, a, b):
        return self.m[self.idx(a)][self.idx(b)]

    def commute(self, a, b) -> bool:
        return a != b and self.entry(a, b) == 2


@dataclass(frozen=True)
class BuildingParams:
    system: RightAngledSystem
    q: dict

    def __post_init__(self):
        q = dict(self.q)
        object.__setattr__(self, "q", q)
        for i in self.system.generators:
            if i not in q:
                raise CoxeterError(f"missing thickness for generator {i!r}")
            if q[i] < 2:
                raise CoxeterError("thickness q_i must be >= 2")


def spherical_subsets(sys: RightAngledSystem) -> list[frozenset]:
    """All J generating a finite W_J: the cliques of the commutation graph."""
    gens = sys.generators
    out = [frozenset()]
    cliques = [frozenset([g]) for g in gens]
    out.extend(cliques)
    frontier = cliques
    while frontier:
        nxt = set()
        for cl in frontier:
            for g in gens:
                if g in cl:
                    continue
                if all(sys.commute(g, x) for x in cl):
                    nxt.add(cl | {g})
        frontier = sorted(nxt, key=_subset_key)
        out.extend(frontier)
    # dedupe, preserve rank-then-lex order
    seen = set()
    uniq = []
    for J in sorted(out, key=_subset_key):
        if J not in seen:
            seen.add(J)
            uniq.append(J)
    return uniq


def _subset_key(J: frozenset):
    return (len(J), tuple(sorted(map(str, J))))


@dataclass(frozen=True)
class Chamber:
    """The chamber P': one vertex per spherical subset, faces by containment."""

    system: RightAngledSystem
    spherical: tuple
    l: int
    l_by_generator: dict

    def l_i(self, i) -> int:
        return self.l_by_generator[i]

    def faces(self) -> list[tuple[frozenset, frozenset]]:
        """Strict containments J' < J between spherical subsets."""
        out = []
        for a in self.spherical:
            for b in self.spherical:
                if a < b:
                    out.append((a, b))
        return out


def chamber(sys: RightAngledSystem) -> Chamber:
    sph = tuple(spherical_subsets(sys))
    counts = {i: sum(1 for J in sph if i in J) for i in sys.generators}
    return Chamber(system=sys, spherical=sph, l=len(sph), l_by_generator=counts)


def _bijection_search(
    domain: Sequence, codomain: Sequence, required: dict, compatible
) -> Optional[dict]:
    """Backtracking search for a bijection respecting `compatible(a,b,partial)`."""
    domain = list(domain)
    codomain = list(codomain)
    if len(domain) != len(codomain):
        return None
    assign = dict(required)
    if any(a not in domain or b not in codomain for a, b in required.items()):
        return None
    used = set(assign.values())
    if len(used) != len(assign):
        return None
    rest = [a for a in domain if a not in assign]

    def ok(a, b, partial) -> bool:
        return compatible(a, b, partial)

    for a, b in assign.items():
        if not ok(a, b, assign):
            return None

    def rec(k: int) -> bool:
        if k == len(rest):
            return True
        a = rest[k]
        for b in codomain:
            if b in used:
                continue
            if ok(a, b, assign):
                assign[a] = b
                used.add(b)
                if rec(k + 1):
                    return True
                del assign[a]
                used.discard(b)
        return False

    return dict(assign) if rec(0) else None


def find_type_swap(sys: RightAngledSystem, i1, i2) -> Optional[dict]:
    """A bijection g of generators with g(i1) = i2 preserving the matrix.

    This is the paper-level symmetry that swaps the two distinguished faces
    of the chamber.  Requires m[i1][i2] = inf.
    """
    if sys.entry(i1, i2) != INF:
        raise CoxeterError("find_type_swap needs m[i1][i2] = inf")
    gens = sys.generators

    def compatible(a, b, partial):
        for x, y in partial.items():
            if x == a:
                continue
            if sys.entry(a, x) != sys.entry(b, y):
                return False
        return True

    g = _bijection_search(gens, gens, {i1: i2}, compatible)
    if g is None:
        return None
    for a in gens:
        for b in gens:
            assert sys.entry(g[a], g[b]) == sys.entry(a, b)
    return g


def finite_neighborhood(sys: RightAngledSystem, i) -> list:
    """Generators at finite Coxeter distance from i (including i itself)."""
    return [j for j in sys.generators if sys.entry(i, j) != INF]


def find_face_isometry(params: BuildingParams, i1, i2) -> Optional[dict]:
    """Bijection h between the finite-m neighborhoods of i1 and i2.

    Preserves the restricted matrix and the thickness parameters, with
    h(i1) = i2.  This is the face isometry used for self-gluing chambers.
    """
    sys = params.system
    if sys.entry(i1, i2) != INF:
        raise CoxeterError("find_face_isometry needs m[i1][i2] = inf")
    dom = finite_neighborhood(sys, i1)
    cod = finite_neighborhood(sys, i2)
    q = params.q

    def compatible(a, b, partial):
        if q[a] != q[b]:
            return False
        for x, y in partial.items():
            if x == a:
                continue
            if sys.entry(a, x) != sys.entry(b, y):
                return False
        return True

    return _bijection_search(dom, cod, {i1: i2}, compatible)


def extends(g: dict, h: dict) -> bool:
    """Whether the generator bijection g restricts to the face isometry h."""
    return all(g.get(a) == b for a, b in h.items())


# right-angled simple 3-polytope face check ---------------------------------


@dataclass(frozen=True)
class PolytopeReport:
    ok: bool
    face_count: int
    excess_sum: int
    pentagon_pair: Optional[tuple[int, int]]
    message: str


def polytope_pentagon_pair(faces: Sequence[tuple[int, Sequence[int]]]) -> PolytopeReport:
    """Check the face-count identity a2 = 12 + sum(ex(F)) and find a
    nonadjacent pentagon pair.

    `faces[k]` is (side count, adjacent face indices).  Inputs failing the
    identity are rejected as non right-angled simple 3-polytope candidates.
    """
    a2 = len(faces)
    for k, (sides, adj) in enumerate(faces):
        if sides != len(adj):
            return PolytopeReport(False, a2, 0, None, f"face {k}: side count {sides} != degree {len(adj)}")
        if k in adj:
            return PolytopeReport(False, a2, 0, None, f"face {k} adjacent to itself")
        for other in adj:
            if not (0 <= other < a2) or k not in faces[other][1]:
                return PolytopeReport(False, a2, 0, None, f"adjacency not symmetric at face {k}")
        if sides < 5:
            return PolytopeReport(False, a2, 0, None, f"face {k} has fewer than 5 sides")
    excess = sum(sides - 5 for sides, _ in faces)
    if a2 != 12 + excess:
        return PolytopeReport(
            False, a2, excess, None, f"identity fails: {a2} != 12 + {excess}"
        )
    pentagons = [k for k, (sides, _) in enumerate(faces) if sides == 5]
    pair = None
    for a, b in combinations(pentagons, 2):
        if b not in faces[a][1]:
            pair = (a, b)
            break
    return PolytopeReport(True, a2, excess, pair, "identity holds")


def dodecahedron_faces() -> list[tuple[int, tuple[int, ...]]]:
    """Face adjacency of the regular dodecahedron (12 pentagons)."""
    # faces: 0 top, 1..5 upper ring, 6..10 lower ring, 11 bottom
    adj = {
        0: (1, 2, 3, 4, 5),
        11: (6, 7, 8, 9, 10),
    }
    for k in range(5):
        up = 1 + k
        adj[up] = (0, 1 + (k + 1) % 5, 1 + (k - 1) % 5, 6 + k, 6 + (k + 1) % 5)
    for k in range(5):
        lo = 6 + k
        adj[lo] = (11, 6 + (k + 1) % 5, 6 + (k - 1) % 5, 1 + (k - 1) % 5, 1 + k)
    return [(5, tuple(adj[k])) for k in range(12)]


# convenient example systems -------------------------------------------------


def cycle_system(n: int) -> RightAngledSystem:
    """n generators in a cycle: adjacent pairs commute, the rest are inf."""
    gens = tuple(range(1, n + 1))
    m = [[INF] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = 1
        j = (i + 1) % n
        m[i][j] = m[j][i] = 2
    return RightAngledSystem(gens, tuple(tuple(r) for r in m))


def pentagon_system() -> RightAngledSystem:
    return cycle_system(5)


def free_pair_system() -> RightAngledSystem:
    """Two generators with m = inf: the chamber is a subdivided edge."""
    return RightAngledSystem((1, 2), ((1, INF), (INF, 1)))


def path3_system() -> RightAngledSystem:
    """Generators 1-2-3 with m12 = 2 and m13 = m23 = inf (asymmetric chamber)."""
    return RightAngledSystem(
        (1, 2, 3),
        ((1, 2, INF), (2, 1, INF), (INF, INF, 1)),
    )
