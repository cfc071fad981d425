"""Graphs of finite groups: covolumes, morphisms, coverings, covers,
faithfulness kernels and fundamental-group presentations.

Oriented edges are pairs (eid, end) with end in {0, 1}; the edge with id
`eid` joins endpoints (u, w) and orientation `end` points INTO endpoint
`end` (i(e) = endpoints[end]).  Reversal flips the end bit.  Loops and
multi-edges are allowed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .groups import (
    FiniteGroup,
    GroupError,
    Homomorphism,
    Subgroup,
    abelian_of_order,
    core_of_image_set,
    cyclic,
    direct_product,
    identity_hom,
    subgroup_group,
)

OEdge = tuple[str, int]


class GogError(ValueError):
    pass


@dataclass(frozen=True)
class OrientedGraph:
    """Finite graph with an explicit fixed-point-free edge reversal."""

    vertices: tuple
    edges: tuple  # of (eid, u, w)

    def __post_init__(self):
        vs = tuple(self.vertices)
        es = tuple((str(e), u, w) for (e, u, w) in self.edges)
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", es)
        if len(set(vs)) != len(vs):
            raise GogError("duplicate vertex labels")
        ids = [e for e, _, _ in es]
        if len(set(ids)) != len(ids):
            raise GogError("duplicate edge ids")
        vset = set(vs)
        for e, u, w in es:
            if u not in vset or w not in vset:
                raise GogError(f"edge {e} has unknown endpoint")

    def edge_ids(self) -> list[str]:
        return [e for e, _, _ in self.edges]

    def endpoints(self, eid: str) -> tuple:
        for e, u, w in self.edges:
            if e == eid:
                return (u, w)
        raise GogError(f"unknown edge {eid}")

    def i(self, oe: OEdge):
        eid, end = oe
        return self.endpoints(eid)[end]

    def t(self, oe: OEdge):
        eid, end = oe
        return self.endpoints(eid)[1 - end]

    @staticmethod
    def rev(oe: OEdge) -> OEdge:
        return (oe[0], 1 - oe[1])

    def oriented_edges(self) -> list[OEdge]:
        return [(e, end) for e, _, _ in self.edges for end in (0, 1)]

    def edges_at(self, v) -> list[OEdge]:
        """Oriented edges with i(e) = v; loops contribute both orientations."""
        out = []
        for e, u, w in self.edges:
            if u == v:
                out.append((e, 0))
            if w == v:
                out.append((e, 1))
        return out

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        seen = {self.vertices[0]}
        frontier = [self.vertices[0]]
        while frontier:
            v = frontier.pop()
            for oe in self.edges_at(v):
                u = self.t(oe)
                if u not in seen:
                    seen.add(u)
                    frontier.append(u)
        return len(seen) == len(self.vertices)

    def spanning_tree(self) -> set[str]:
        """Edge ids of a BFS spanning tree."""
        if not self.vertices:
            return set()
        seen = {self.vertices[0]}
        tree: set[str] = set()
        frontier = [self.vertices[0]]
        while frontier:
            v = frontier.pop(0)
            for oe in sorted(self.edges_at(v)):
                u = self.t(oe)
                if u not in seen:
                    seen.add(u)
                    tree.add(oe[0])
                    frontier.append(u)
        return tree


class GraphOfGroups:
    """Connected graph decorated with finite vertex/edge groups and edge
    monomorphisms alpha_e: A_e -> A_{i(e)}."""

    def __init__(
        self,
        graph: OrientedGraph,
        vgroups: dict,
        egroups: dict,
        alpha: dict,
        name: str = "gog",
    ):
        self.graph = graph
        self.vgroups = dict(vgroups)
        self.egroups = dict(egroups)
        self.alpha = dict(alpha)
        self.name = name
        if not graph.is_connected():
            raise GogError("graph of groups must be connected")
        for v in graph.vertices:
            if v not in self.vgroups:
                raise GogError(f"missing vertex group at {v!r}")
        for eid in graph.edge_ids():
            if eid not in self.egroups:
                raise GogError(f"missing edge group at {eid}")
            for end in (0, 1):
                oe = (eid, end)
                if oe not in self.alpha:
                    raise GogError(f"missing monomorphism for oriented edge {oe}")
                hom = self.alpha[oe]
                if hom.source != self.egroups[eid]:
                    raise GogError(f"alpha{oe} has wrong source")
                if hom.target != self.vgroups[graph.i(oe)]:
                    raise GogError(f"alpha{oe} has wrong target")
                if not hom.mono:
                    raise GogError(f"alpha{oe} is not injective")

    def edge_group(self, eid: str) -> FiniteGroup:
        return self.egroups[eid]

    def vertex_group(self, v) -> FiniteGroup:
        return self.vgroups[v]

    def __repr__(self):
        return f"GraphOfGroups({self.name}, V={len(self.graph.vertices)}, E={len(self.graph.edges)})"


# covolume and valences ------------------------------------------------------


def edge_covolume(gog: GraphOfGroups) -> Fraction:
    """Sum over geometric edges of 1/|A_e| (the chamber-normalised covolume)."""
    return sum((Fraction(1, gog.egroups[e].order) for e in gog.graph.edge_ids()), Fraction(0))


def vertex_covolume(gog: GraphOfGroups) -> Fraction:
    return sum((Fraction(1, g.order) for g in gog.vgroups.values()), Fraction(0))


def edge_index(gog: GraphOfGroups, oe: OEdge) -> int:
    return gog.vgroups[gog.graph.i(oe)].order // gog.egroups[oe[0]].order


def local_valences(gog: GraphOfGroups) -> dict:
    """valence(v) = sum over oriented edges at v of [A_v : alpha_e(A_e)].

    This is the valence of any lift of v in the universal covering tree.
    """
    return {
        v: sum(edge_index(gog, oe) for oe in gog.graph.edges_at(v))
        for v in gog.graph.vertices
    }


@dataclass(frozen=True)
class IndexedGraph:
    graph: OrientedGraph
    idx: dict  # oriented edge -> positive integer

    def __post_init__(self):
        for oe, k in self.idx.items():
            if k < 1:
                raise GogError(f"index at {oe} must be >= 1")


def indexing(gog: GraphOfGroups) -> IndexedGraph:
    return IndexedGraph(
        gog.graph,
        {oe: edge_index(gog, oe) for oe in gog.graph.oriented_edges()},
    )


@dataclass(frozen=True)
class BiregularReport:
    ok: bool
    valences: dict
    colouring: Optional[dict]
    message: str


def two_colouring(g: OrientedGraph):
    """Proper 2-colouring, or None plus an odd closed walk as witness."""
    colour: dict = {}
    parent: dict = {}
    for start in g.vertices:
        if start in colour:
            continue
        colour[start] = 0
        parent[start] = None
        frontier = [start]
        while frontier:
            v = frontier.pop(0)
            for oe in g.edges_at(v):
                u = g.t(oe)
                if u == v:  # loop: odd cycle of length 1
                    return None, [v, v]
                if u not in colour:
                    colour[u] = 1 - colour[v]
                    parent[u] = v
                    frontier.append(u)
                elif colour[u] == colour[v]:
                    path_v = _path_to_root(v, parent)
                    path_u = _path_to_root(u, parent)
                    return None, _odd_walk(path_v, path_u)
    return colour, None


def _path_to_root(v, parent) -> list:
    out = [v]
    while parent[out[-1]] is not None:
        out.append(parent[out[-1]])
    return out


def _odd_walk(path_v: list, path_u: list) -> list:
    sv, su = set(path_v), set(path_u)
    meet = next(x for x in path_v if x in su)
    iv, iu = path_v.index(meet), path_u.index(meet)
    return path_v[: iv + 1] + list(reversed(path_u[:iu]))


def check_biregular(gog: GraphOfGroups, p: int, q: int) -> BiregularReport:
    """True iff the covering tree is the (p, q)-biregular tree.

    For p != q the valence classes must properly 2-colour the graph; for
    p == q every valence must equal p.
    """
    val = local_valences(gog)
    values = set(val.values())
    if p == q:
        ok = values == {p}
        return BiregularReport(ok, val, None, "regular" if ok else f"valences {sorted(values)} != {p}")
    if not values <= {p, q}:
        return BiregularReport(False, val, None, f"valences {sorted(values)} not in {{{p},{q}}}")
    for eid, u, w in gog.graph.edges:
        if val[u] == val[w]:
            return BiregularReport(False, val, None, f"edge {eid} joins equal valences")
    colouring = {v: (0 if val[v] == p else 1) for v in gog.graph.vertices}
    return BiregularReport(True, val, colouring, "biregular")


# morphisms and coverings ----------------------------------------------------


@dataclass
class GoGMorphism:
    """Morphism of graphs of groups in C1 normal form.

    delta[(eid, end)] is the twisting element in the target vertex group at
    f(i(e)).  Optional gamma annotations are literal words used only by the
    non-injectivity demonstration; they are never reduced.
    """

    f_vertex: dict
    f_edge: dict  # oriented edge -> oriented edge
    phi_v: dict  # vertex -> Homomorphism
    phi_e: dict  # eid -> Homomorphism
    delta: dict  # oriented edge -> element index of target vertex group
    gamma_v: Optional[dict] = None
    gamma_e: Optional[dict] = None


def identity_morphism(gog: GraphOfGroups) -> GoGMorphism:
    return GoGMorphism(
        f_vertex={v: v for v in gog.graph.vertices},
        f_edge={oe: oe for oe in gog.graph.oriented_edges()},
        phi_v={v: identity_hom(gog.vgroups[v]) for v in gog.graph.vertices},
        phi_e={e: identity_hom(gog.egroups[e]) for e in gog.graph.edge_ids()},
        delta={oe: 0 for oe in gog.graph.oriented_edges()},
    )


@dataclass(frozen=True)
class Report:
    ok: bool
    lines: tuple[str, ...]

    def __bool__(self):
        return self.ok


def verify_morphism(src: GraphOfGroups, dst: GraphOfGroups, m: GoGMorphism) -> Report:
    """Check the graph map is nondegenerate and every edge square commutes
    up to the Ad(delta) twist."""
    lines = []
    ok = True
    for v in src.graph.vertices:
        if m.f_vertex.get(v) not in dst.graph.vertices:
            return Report(False, (f"vertex {v!r} has no valid image",))
    for oe in src.graph.oriented_edges():
        img = m.f_edge.get(oe)
        if img is None or img[0] not in dst.graph.edge_ids():
            return Report(False, (f"oriented edge {oe} has no valid image",))
        if m.f_edge.get(OrientedGraph.rev(oe)) != OrientedGraph.rev(img):
            return Report(False, (f"edge map not reversal-equivariant at {oe}",))
        if dst.graph.i(img) != m.f_vertex[src.graph.i(oe)]:
            return Report(False, (f"edge map degenerate/incompatible at {oe}",))
    for v in src.graph.vertices:
        hom = m.phi_v[v]
        if hom.source != src.vgroups[v] or hom.target != dst.vgroups[m.f_vertex[v]]:
            return Report(False, (f"phi_v at {v!r} has wrong signature",))
    for eid in src.graph.edge_ids():
        hom = m.phi_e[eid]
        if hom.source != src.egroups[eid] or hom.target != dst.egroups[m.f_edge[(eid, 0)][0]]:
            return Report(False, (f"phi_e at {eid} has wrong signature",))
    for oe in src.graph.oriented_edges():
        v = src.graph.i(oe)
        B = dst.vgroups[m.f_vertex[v]]
        d = m.delta[oe]
        a_src = src.alpha[oe]
        a_dst = dst.alpha[m.f_edge[oe]]
        phiv, phie = m.phi_v[v], m.phi_e[oe[0]]
        good = all(
            phiv(a_src(x)) == B.conj(d, a_dst(phie(x)))
            for x in range(src.egroups[oe[0]].order)
        )
        if not good:
            ok = False
            lines.append(f"edge square fails at {oe}")
        else:
            lines.append(f"edge square holds at {oe}")
    return Report(ok, tuple(lines))


def verify_covering(src: GraphOfGroups, dst: GraphOfGroups, m: GoGMorphism) -> Report:
    """Covering check: injective local maps plus the coset bijection

        coprod_{e in f^-1(e'), i(e)=v} A_v/alpha_e(A_e) -> B_f(v)/alpha_e'(B_e')

    induced by g -> phi_v(g) delta_e, for every vertex v and edge e' at f(v).
    """
    base = verify_morphism(src, dst, m)
    if not base.ok:
        return Report(False, base.lines + ("not a morphism, covering check aborted",))
    lines = list(base.lines)
    for v in src.graph.vertices:
        if not m.phi_v[v].mono:
            return Report(False, tuple(lines + [f"phi_v not injective at {v!r}"]))
    for eid in src.graph.edge_ids():
        if not m.phi_e[eid].mono:
            return Report(False, tuple(lines + [f"phi_e not injective at {eid}"]))
    for v in src.graph.vertices:
        fv = m.f_vertex[v]
        B = dst.vgroups[fv]
        for oe_dst in dst.graph.edges_at(fv):
            im_dst = set(dst.alpha[oe_dst].map)
            dst_cosets = _left_cosets(B, im_dst)
            want = len(dst_cosets)
            seen: dict[frozenset, tuple] = {}
            total = 0
            for oe in src.graph.edges_at(v):
                if m.f_edge[oe] != oe_dst:
                    continue
                A = src.vgroups[v]
                im_src = set(src.alpha[oe].map)
                for coset in _left_cosets(A, im_src):
                    g = coset[0]
                    img = B.mul(m.phi_v[v](g), m.delta[oe])
                    target = frozenset(B.mul(img, y) for y in im_dst)
                    total += 1
                    if target in seen:
                        return Report(
                            False,
                            tuple(
                                lines
                                + [
                                    f"coset collision over vertex {v!r}, edge {oe_dst}: "
                                    f"{seen[target]} and {(oe, coset[0])}"
                                ]
                            ),
                        )
                    seen[target] = (oe, coset[0])
            if total != want:
                return Report(
                    False,
                    tuple(
                        lines
                        + [f"coset count mismatch over vertex {v!r}, edge {oe_dst}: {total} != {want}"]
                    ),
                )
    lines.append("covering conditions hold")
    return Report(True, tuple(lines))


def _left_cosets(g: FiniteGroup, subset: set[int]) -> list[tuple[int, ...]]:
    seen: set[int] = set()
    out = []
    for x in g.elements():
        if x in seen:
            continue
        block = tuple(sorted(g.mul(x, y) for y in subset))
        seen.update(block)
        out.append(block)
    return out


# covers and order multiplication ---------------------------------------------


def sheeted_cover(
    gog: GraphOfGroups, voltages: dict, nsheets: int
) -> tuple[GraphOfGroups, GoGMorphism, bool]:
    """Topological n-sheeted cover from a voltage assignment.

    voltages maps each edge id to a permutation of range(nsheets) read along
    orientation (eid, 0); the reverse orientation uses the inverse.  Local
    groups pull back unchanged.  Returns (cover, covering morphism,
    connected flag); covolume multiplies by exactly n when connected.
    """
    g = gog.graph
    for eid in g.edge_ids():
        perm = voltages.get(eid, tuple(range(nsheets)))
        if sorted(perm) != list(range(nsheets)):
            raise GogError(f"voltage at {eid} is not a permutation of {nsheets} sheets")
    verts = [(v, s) for v in g.vertices for s in range(nsheets)]
    edges = []
    for eid, u, w in g.edges:
        perm = tuple(voltages.get(eid, tuple(range(nsheets))))
        for s in range(nsheets):
            edges.append((f"{eid}#{s}", (u, s), (w, perm[s])))
    cover_graph = OrientedGraph(tuple(verts), tuple(edges))
    vgroups = {(v, s): gog.vgroups[v] for (v, s) in verts}
    egroups = {}
    alpha = {}
    f_edge = {}
    for eid, u, w in g.edges:
        perm = tuple(voltages.get(eid, tuple(range(nsheets))))
        for s in range(nsheets):
            ceid = f"{eid}#{s}"
            egroups[ceid] = gog.egroups[eid]
            alpha[(ceid, 0)] = gog.alpha[(eid, 0)]
            alpha[(ceid, 1)] = gog.alpha[(eid, 1)]
            f_edge[(ceid, 0)] = (eid, 0)
            f_edge[(ceid, 1)] = (eid, 1)
    connected = cover_graph.is_connected()
    if not connected:
        # keep only the component of the first vertex? no: return as-is with flag
        pass
    cover = _gog_maybe_disconnected(cover_graph, vgroups, egroups, alpha, f"{gog.name}^{nsheets}", connected)
    morphism = GoGMorphism(
        f_vertex={(v, s): v for (v, s) in verts},
        f_edge=f_edge,
        phi_v={(v, s): identity_hom(gog.vgroups[v]) for (v, s) in verts},
        phi_e={ceid: identity_hom(egroups[ceid]) for ceid in egroups},
        delta={oe: 0 for oe in cover_graph.oriented_edges()},
    )
    return cover, morphism, connected


def _gog_maybe_disconnected(graph, vgroups, egroups, alpha, name, connected) -> GraphOfGroups:
    if connected:
        return GraphOfGroups(graph, vgroups, egroups, alpha, name=name)
    gog = GraphOfGroups.__new__(GraphOfGroups)
    gog.graph = graph
    gog.vgroups = dict(vgroups)
    gog.egroups = dict(egroups)
    gog.alpha = dict(alpha)
    gog.name = name + " (disconnected)"
    return gog


def cyclic_voltages(gog: GraphOfGroups, eid: str, nsheets: int) -> dict:
    """Voltage dict sending one chosen edge around an n-cycle of sheets."""
    cyc = tuple((s + 1) % nsheets for s in range(nsheets))
    return {eid: cyc}


def multiply_orders(gog: GraphOfGroups, p: int, k: int) -> tuple[GraphOfGroups, GoGMorphism]:
    """Multiply every local group by (Z/p)^k, extending alpha identically.

    Indices, hence valences and the covering tree, are unchanged; covolume
    divides by p^k.  The inclusion morphism is a covering over the identity
    graph map.  The new central factor transports consistently, so the
    result is never faithful for k >= 1; callers needing faithfulness must
    use a different construction.
    """
    stab = abelian_of_order(p**k)
    new_v = {}
    inj_v = {}
    for v, g in gog.vgroups.items():
        data = direct_product(g, stab)
        new_v[v] = data.group
        inj_v[v] = data
    new_e = {}
    inj_e = {}
    for eid, g in gog.egroups.items():
        data = direct_product(g, stab)
        new_e[eid] = data.group
        inj_e[eid] = data
    alpha = {}
    for oe, hom in gog.alpha.items():
        eid = oe[0]
        v = gog.graph.i(oe)
        src, dst = new_e[eid], new_v[v]
        m = stab.order
        mapping = [hom.map[i // m] * m + (i % m) for i in range(src.order)]
        alpha[oe] = Homomorphism(src, dst, mapping, check=False)
    bigger = GraphOfGroups(gog.graph, new_v, new_e, alpha, name=f"{gog.name}*{p}^{k}")
    morphism = GoGMorphism(
        f_vertex={v: v for v in gog.graph.vertices},
        f_edge={oe: oe for oe in gog.graph.oriented_edges()},
        phi_v={v: inj_v[v].inject_left for v in gog.graph.vertices},
        phi_e={e: inj_e[e].inject_left for e in gog.graph.edge_ids()},
        delta={oe: 0 for oe in gog.graph.oriented_edges()},
    )
    return bigger, morphism


# faithfulness ----------------------------------------------------------------


def faithfulness_kernel(gog: GraphOfGroups) -> dict:
    """Stable kernel filtration K(v) = elements of A_v fixing arbitrarily
    large balls around a lift of v in the covering tree.

    K_0(v) = A_v and K_{r+1}(v) consists of the g in K_r(v) with every
    A_v-conjugate inside every edge image at v whose transport lies in
    K_r(t(e)): equivalently the intersection over edges of the core of the
    transported-preimage subgroup.  The gog is faithful iff every stable
    kernel is trivial.
    """
    g = gog.graph
    kernels = {v: frozenset(gog.vgroups[v].elements()) for v in g.vertices}
    while True:
        nxt = {}
        for v in g.vertices:
            A = gog.vgroups[v]
            current = kernels[v]
            for oe in g.edges_at(v):
                E = gog.egroups[oe[0]]
                a_in = gog.alpha[oe]
                a_out = gog.alpha[OrientedGraph.rev(oe)]
                far = kernels[gog.graph.t(oe)]
                allowed = frozenset(
                    a_in(x) for x in E.elements() if a_out(x) in far
                )
                current = current & core_of_image_set(A, allowed)
                if len(current) == 1:
                    break
            nxt[v] = frozenset(current)
        if nxt == kernels:
            break
        kernels = nxt
    return {
        v: Subgroup(gog.vgroups[v], tuple(sorted(kernels[v]))) for v in g.vertices
    }


def is_faithful(gog: GraphOfGroups) -> bool:
    return all(len(s.elements) == 1 for s in faithfulness_kernel(gog).values())


# brute-force oracle: develop a covering-tree ball and act on it -------------


def brute_force_ball_kernel(gog: GraphOfGroups, radius: int) -> dict:
    """Kernel of the A_v-action on the developed tree ball of given radius.

    The ball around the standard lift of v consists of coset paths
    ((e1, c1), (e2, c2), ...); g in A_v acts by rewriting the first coset
    and transporting a residual along the path.  This is the independent
    oracle for faithfulness_kernel.
    """
    out = {}
    for v in gog.graph.vertices:
        A = gog.vgroups[v]
        paths = _enumerate_paths(gog, v, radius)
        kernel = [
            g
            for g in A.elements()
            if all(_act_on_path(gog, v, g, path) == path for path in paths)
        ]
        out[v] = Subgroup(A, tuple(kernel))
    return out


def _coset_reps(g: FiniteGroup, image: set[int]) -> list[int]:
    reps = []
    seen: set[int] = set()
    for x in g.elements():
        if x in seen:
            continue
        reps.append(x)
        seen.update(g.mul(x, y) for y in image)
    return reps


def _enumerate_paths(gog: GraphOfGroups, v, radius: int) -> list[tuple]:
    """All coset paths of length <= radius from the standard lift of v,
    never stepping straight back through the same coset."""
    paths: list[tuple] = []
    frontier: list[tuple] = [()]
    for _ in range(radius):
        nxt = []
        for path in frontier:
            cur = v if not path else gog.graph.t(path[-1][0])
            for oe in gog.graph.edges_at(cur):
                A = gog.vgroups[cur]
                image = set(gog.alpha[oe].map)
                for rep in _coset_reps(A, image):
                    if path and rep == 0 and oe == OrientedGraph.rev(path[-1][0]):
                        continue  # that is the parent vertex
                    new = path + ((oe, rep),)
                    nxt.append(new)
        paths.extend(nxt)
        frontier = nxt
    return paths


def _act_on_path(gog: GraphOfGroups, v, g: int, path: tuple) -> tuple:
    if not path:
        return path
    (oe, rep), rest = path[0], path[1:]
    A = gog.vgroups[v]
    image = set(gog.alpha[oe].map)
    moved = A.mul(g, rep)
    new_rep = _rep_of(A, image, moved)
    residual = A.mul(A.inv(new_rep), moved)  # lies in the edge image
    x = gog.alpha[oe].section(residual)
    transported = gog.alpha[OrientedGraph.rev(oe)](x)
    w = gog.graph.t(oe)
    return ((oe, new_rep),) + _act_on_path(gog, w, transported, rest)


def _rep_of(g: FiniteGroup, image: set[int], x: int) -> int:
    # _coset_reps scans elements in increasing order, so the canonical
    # representative of a left coset is its minimum.
    return min(g.mul(x, y) for y in image)


def fundamental_presentation(
    gog: GraphOfGroups, base=None, tree: Optional[set[str]] = None
):
    """Standard presentation of the fundamental group of a graph of groups.

    Generators: one symbol per vertex-group element plus a letter t_e per
    oriented edge.  Relators: vertex multiplication tables, reversal
    relations t_ebar = t_e^-1, the Bass relations
    t_e alpha_ebar(a) t_e^-1 = alpha_e(a), and t_e = 1 on a spanning tree.
    """
    g = gog.graph
    if base is None:
        base = g.vertices[0]
    if tree is None:
        tree = g.spanning_tree()
    gens: list = []
    for v in g.vertices:
        for x in range(1, gog.vgroups[v].order):
            gens.append(("g", v, x))
    for eid in g.edge_ids():
        gens.append(("t", eid))
    relators: list[tuple] = []
    for v in g.vertices:
        A = gog.vgroups[v]
        for x in range(1, A.order):
            for y in range(1, A.order):
                relators.append((("g", v, x), ("g", v, y), ("eq", ("g", v, A.mul(x, y)))))
    for eid in g.edge_ids():
        for a in range(1, gog.egroups[eid].order):
            lhs_in = gog.alpha[(eid, 1)](a)   # alpha_ebar(a) in A_{t(e,0)}
            rhs_in = gog.alpha[(eid, 0)](a)   # alpha_e(a) in A_{i(e,0)}
            u = g.i((eid, 0))
            w = g.t((eid, 0))
            relators.append(
                (("t", eid), ("g", w, lhs_in), ("tinv", eid), ("eq", ("g", u, rhs_in)))
            )
        if eid in tree:
            relators.append((("t", eid), ("eq", ("one",))))
    return Presentation(tuple(gens), tuple(relators), base, frozenset(tree))


@dataclass(frozen=True)
class Presentation:
    generators: tuple
    relators: tuple
    base: object
    tree_edges: frozenset


def presentation_group_order_if_small(gog: GraphOfGroups, cap: int = 64) -> Optional[int]:
    """Order of pi_1 for tree gogs with trivial edge groups, by brute-force
    closure of reduced words, or None when the cap is exceeded.

    With trivial edge groups over a tree, pi_1 is the free product of the
    vertex groups; reduced words are alternating sequences of nontrivial
    vertex elements.  The closure is finite iff at most one factor is
    nontrivial.
    """
    if gog.graph.spanning_tree() != set(gog.graph.edge_ids()):
        return None
    if any(g.order > 1 for g in gog.egroups.values()):
        return None
    words = {()}
    frontier = [()]
    letters = [
        (v, x) for v in gog.graph.vertices for x in range(1, gog.vgroups[v].order)
    ]
    while frontier:
        nxt = []
        for w in frontier:
            for (v, x) in letters:
                new = _free_product_append(gog, w, v, x)
                if new not in words:
                    if len(words) >= cap:
                        return None
                    words.add(new)
                    nxt.append(new)
        frontier = nxt
    return len(words)


def _free_product_append(gog: GraphOfGroups, word: tuple, v, x: int) -> tuple:
    if word and word[-1][0] == v:
        A = gog.vgroups[v]
        prod = A.mul(word[-1][1], x)
        if prod == 0:
            return word[:-1]
        return word[:-1] + ((v, prod),)
    return word + ((v, x),)


# spectrum membership ---------------------------------------------------------


def covolume_spectrum_member(v: Fraction, qmax: int) -> bool:
    """True iff every prime divisor of the reduced denominator is < qmax."""
    if v <= 0:
        raise GogError("covolume must be positive")
    den = Fraction(v).denominator
    d = 2
    while d * d <= den:
        if den % d == 0:
            if d >= qmax:
                return False
            while den % d == 0:
                den //= d
        d += 1
    if den > 1 and den >= qmax:
        return False
    return True


# morphism composition --------------------------------------------------------


def compose_morphisms(
    src: GraphOfGroups,
    inner: GoGMorphism,
    mid: GraphOfGroups,
    outer: GoGMorphism,
    dst: GraphOfGroups,
) -> GoGMorphism:
    """outer o inner, where inner: src -> mid and outer: mid -> dst.

    delta of the composite at e is phi2(delta1_e) * delta2_{f1(e)}.
    """
    f_vertex = {v: outer.f_vertex[fv] for v, fv in inner.f_vertex.items()}
    f_edge = {oe: outer.f_edge[fe] for oe, fe in inner.f_edge.items()}
    phi_v = {
        v: outer.phi_v[inner.f_vertex[v]].compose(hom) for v, hom in inner.phi_v.items()
    }
    phi_e = {
        e: outer.phi_e[inner.f_edge[(e, 0)][0]].compose(hom)
        for e, hom in inner.phi_e.items()
    }
    delta = {}
    for oe, d1 in inner.delta.items():
        mid_vertex = inner.f_vertex[src.graph.i(oe)]
        d2 = outer.delta[inner.f_edge[oe]]
        B = dst.vgroups[outer.f_vertex[mid_vertex]]
        delta[oe] = B.mul(outer.phi_v[mid_vertex](d1), d2)
    return GoGMorphism(f_vertex, f_edge, phi_v, phi_e, delta)
