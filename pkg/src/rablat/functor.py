"""The building functor: graphs to chamber complexes, graphs of groups to
complexes of groups, morphisms to morphisms.

Given a right-angled system with parameters, a pair i1, i2 with
m[i1][i2] = inf, and a graph Y, each geometric edge becomes a copy of the
chamber (one vertex per spherical subset) with its midpoint at the cone
point; chambers are glued along i1/i2-faces at shared graph vertices,
type-preservingly under a 2-colouring and via the face isometry h
otherwise.  Local groups follow the product formulas: A_e x prod G_j away
from the distinguished faces and A_v x prod G_j on them, with G_j cyclic
of order q_j.
"""

from __future__ import annotations

import numpy as np
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .cog import Arrow, Cell, CoGMorphism, Scwol, SimpleComplexOfGroups
from .coxeter import (
    INF,
    BuildingParams,
    RightAngledSystem,
    extends,
    find_face_isometry,
    find_type_swap,
    spherical_subsets,
)
from .gog import (
    GogError,
    GoGMorphism,
    GraphOfGroups,
    OrientedGraph,
    check_biregular,
    local_valences,
    two_colouring,
)
from .groups import FiniteGroup, Homomorphism, cyclic, table_cap


class FunctorError(ValueError):
    pass


class NotSufficientlySymmetric(FunctorError):
    pass


@dataclass(frozen=True)
class FunctorContext:
    """Building data plus the distinguished pair and its symmetries.

    g is a type swap of the whole system with g(i1) = i2; h is a face
    isometry between the finite-m neighborhoods preserving q.  h enables
    gluing of non-2-colourable graphs; g enables morphisms that exchange
    the two colours.  When both are present g must extend h.
    """

    params: BuildingParams
    i1: object
    i2: object
    g: Optional[dict] = None
    h: Optional[dict] = None

    def __post_init__(self):
        sys = self.params.system
        if sys.entry(self.i1, self.i2) != INF:
            raise FunctorError("context needs m[i1][i2] = inf")
        if self.h is not None:
            if self.h.get(self.i1) != self.i2:
                raise FunctorError("h must send i1 to i2")
            for a, b in self.h.items():
                if self.params.q[a] != self.params.q[b]:
                    raise FunctorError("h must preserve q")
        if self.g is not None and self.g.get(self.i1) != self.i2:
            raise FunctorError("g must send i1 to i2")
        if self.g is not None and self.h is not None and not extends(self.g, self.h):
            raise FunctorError("g must extend h")

    @property
    def system(self) -> RightAngledSystem:
        return self.params.system

    @property
    def q(self) -> dict:
        return self.params.q

    def h_inv(self) -> dict:
        return {b: a for a, b in (self.h or {}).items()}


def make_context(params: BuildingParams, i1, i2) -> FunctorContext:
    """Build a context, searching for the symmetries g and h if they exist.

    Prefers a g that swaps i1 and i2 outright (needed to flip chambers
    under morphisms) and that extends h when h exists.
    """
    h = find_face_isometry(params, i1, i2)
    g = None
    if h is not None:
        g = _swap_extending(params.system, i1, i2, h)
    if g is None and h is None:
        from .coxeter import _bijection_search

        sys = params.system

        def compatible(a, b, partial):
            for x, y in partial.items():
                if x == a:
                    continue
                if sys.entry(a, x) != sys.entry(b, y):
                    return False
            return True

        g = _bijection_search(
            sys.generators, sys.generators, {i1: i2, i2: i1}, compatible
        )
        if g is None:
            g = find_type_swap(sys, i1, i2)
    return FunctorContext(params, i1, i2, g=g, h=h)


def _swap_extending(sys, i1, i2, h) -> Optional[dict]:
    from .coxeter import _bijection_search

    required = dict(h)
    required[i1] = i2
    if i2 not in required and all(v != i1 for v in required.values()):
        required[i2] = i1

    def compatible(a, b, partial):
        for x, y in partial.items():
            if x == a:
                continue
            if sys.entry(a, x) != sys.entry(b, y):
                return False
        return True

    return _bijection_search(sys.generators, sys.generators, required, compatible)


# cell bookkeeping ------------------------------------------------------------


@dataclass(frozen=True)
class CellInfo:
    kind: str  # 'mid' or 'face'
    owner: object  # edge id or vertex label
    rep: frozenset  # canonical type (i1-side representative when glued)
    types: frozenset  # one or two types carried by the cell
    face_gen: object = None  # the generator whose face this is (faces only)


@dataclass(frozen=True)
class ArrowInfo:
    eid: Optional[str]  # chamber that induced the arrow (None: face-to-face)
    via: Optional[int]  # endpoint slot for mid->face arrows


def _jkey(J: frozenset) -> str:
    return ",".join(str(j) for j in sorted(J, key=str))


@dataclass
class ChamberComplex:
    """Polyhedral realisation F(Y): one chamber per geometric edge."""

    ctx: FunctorContext
    graph: OrientedGraph
    scwol: Scwol
    cell_info: dict
    arrow_info: dict
    chamber_cells: dict  # eid -> tuple of cell ids
    end_itype: dict  # (eid, slot) -> i1 or i2
    mode: str  # 'coloured' or 'glued'
    colouring: Optional[dict]  # vertex -> i1 or i2 (coloured mode)

    def midpoint_cell(self, eid: str) -> str:
        return f"m|{eid}|"

    def vertex_cell(self, v) -> str:
        """The face cell carrying the image of the graph vertex v."""
        if self.mode == "coloured":
            return f"f|{v}|{_jkey(frozenset([self.colouring[v]]))}"
        return f"f|{v}|{_jkey(frozenset([self.ctx.i1]))}"

    def cells_of_chamber(self, eid: str) -> tuple:
        return self.chamber_cells[eid]

    def chambers_of_cell(self, cid: str) -> list[str]:
        info = self.cell_info[cid]
        if info.kind == "mid":
            return [info.owner]
        v = info.owner
        return sorted(
            eid for eid, cells in self.chamber_cells.items() if cid in cells
        )

    def vertex_count(self) -> int:
        return len(self.cell_info)


def _resolve_face(ctx: FunctorContext, mode: str, colouring, v, J: frozenset):
    """Global id, rep type and relabel map for the face cell of type J at v.

    J must contain i1 or i2.  In glued mode the canonical representative is
    the i1-side type, reached through h^-1 when J contains i2.
    """
    i1, i2 = ctx.i1, ctx.i2
    if mode == "coloured":
        rep = J
        relabel = {j: j for j in J}
        types = frozenset([J])
        gen = i1 if i1 in J else i2
    else:
        if i1 in J:
            rep = J
            relabel = {j: j for j in J}
        else:
            hinv = ctx.h_inv()
            rep = frozenset(hinv[j] for j in J)
            relabel = {j: hinv[j] for j in J}
        h = ctx.h or {}
        types = frozenset([rep, frozenset(h[j] for j in rep)])
        gen = i1
    cid = f"f|{v}|{_jkey(rep)}"
    return cid, rep, relabel, types, gen


def realize_graph(
    ctx: FunctorContext, graph: OrientedGraph, colouring: Optional[dict] = None
) -> ChamberComplex:
    """Glue one chamber per geometric edge of the graph.

    `colouring` optionally assigns i1/i2 to the vertices; when absent a
    proper 2-colouring is computed, and if none exists the face isometry h
    is required (self- and cross-gluing through h).
    """
    i1, i2 = ctx.i1, ctx.i2
    sph = spherical_subsets(ctx.system)
    nmax = max(len(J) for J in sph)
    if colouring is not None:
        mode = "coloured"
        for eid, u, w in graph.edges:
            if colouring[u] == colouring[w]:
                raise FunctorError(f"colouring not proper at edge {eid}")
    else:
        col01, _ = two_colouring(graph)
        if col01 is not None:
            mode = "coloured"
            colouring = {v: (i1 if c == 0 else i2) for v, c in col01.items()}
        else:
            if ctx.h is None:
                raise NotSufficientlySymmetric(
                    "graph is not 2-colourable and no face isometry h is available"
                )
            mode = "glued"
            colouring = None

    end_itype: dict = {}
    for eid, u, w in graph.edges:
        if mode == "coloured":
            end_itype[(eid, 0)] = colouring[u]
            end_itype[(eid, 1)] = colouring[w]
        else:
            # normalisation: the lexicographically smaller endpoint gets i1
            if str(u) <= str(w):
                end_itype[(eid, 0)], end_itype[(eid, 1)] = i1, i2
            else:
                end_itype[(eid, 0)], end_itype[(eid, 1)] = i2, i1

    cells: dict[str, Cell] = {}
    cell_info: dict[str, CellInfo] = {}
    chamber_cells: dict[str, list] = {}
    resolver: dict[tuple, tuple] = {}  # (eid, J) -> (cid, relabel)

    for eid, u, w in graph.edges:
        ends = {0: u, 1: w}
        chamber: list[str] = []
        for J in sph:
            if i1 in J or i2 in J:
                gen_here = i1 if i1 in J else i2
                slot = 0 if end_itype[(eid, 0)] == gen_here else 1
                v = ends[slot]
                cid, rep, relabel, types, face_gen = _resolve_face(
                    ctx, mode, colouring, v, J
                )
                if cid not in cells:
                    cells[cid] = Cell(cid, _jkey(rep), nmax - len(rep))
                    cell_info[cid] = CellInfo("face", v, rep, types, face_gen)
            else:
                cid = f"m|{eid}|{_jkey(J)}"
                relabel = {j: j for j in J}
                cells[cid] = Cell(cid, _jkey(J), nmax - len(J))
                cell_info[cid] = CellInfo("mid", eid, J, frozenset([J]))
            resolver[(eid, J)] = (cid, relabel)
            if cid not in chamber:
                chamber.append(cid)
        chamber_cells[eid] = chamber

    arrows: dict[str, Arrow] = {}
    arrow_info: dict[str, ArrowInfo] = {}
    comp: dict[tuple, str] = {}

    def arrow_id(eid: str, Jsrc: frozenset, Jdst: frozenset) -> str:
        src_cid, _ = resolver[(eid, Jsrc)]
        dst_cid, dst_rel = resolver[(eid, Jdst)]
        src_is_face = i1 in Jsrc or i2 in Jsrc
        dst_is_face = i1 in Jdst or i2 in Jdst
        if dst_is_face and not src_is_face:
            gen_here = i1 if i1 in Jdst else i2
            slot = 0 if end_itype[(eid, 0)] == gen_here else 1
            aid = f"a|{src_cid}|{dst_cid}|s{slot}"
            via = slot
        else:
            aid = f"a|{src_cid}|{dst_cid}|"
            via = None
        if aid not in arrows:
            arrows[aid] = Arrow(aid, src_cid, dst_cid)
            if dst_is_face and src_is_face:
                arrow_info[aid] = ArrowInfo(None, None)
            else:
                arrow_info[aid] = ArrowInfo(eid, via)
        return aid

    for eid, u, w in graph.edges:
        for J1 in sph:
            for J2 in sph:
                if J1 < J2:
                    arrow_id(eid, J1, J2)
        for J1 in sph:
            for J2 in sph:
                for J3 in sph:
                    if J1 < J2 and J2 < J3:
                        inner = arrow_id(eid, J1, J2)
                        outer = arrow_id(eid, J2, J3)
                        whole = arrow_id(eid, J1, J3)
                        key = (outer, inner)
                        if key in comp and comp[key] != whole:
                            raise FunctorError("inconsistent composition in gluing")
                        comp[key] = whole

    scwol = Scwol(list(cells.values()), list(arrows.values()), comp)
    return ChamberComplex(
        ctx=ctx,
        graph=graph,
        scwol=scwol,
        cell_info=cell_info,
        arrow_info=arrow_info,
        chamber_cells={e: tuple(c) for e, c in chamber_cells.items()},
        end_itype=end_itype,
        mode=mode,
        colouring=colouring,
    )


# product groups with factor bookkeeping --------------------------------------


@dataclass(frozen=True)
class FactorSpec:
    keys: tuple  # ('edge', eid) / ('vertex', v) / ('res', j)
    groups: tuple  # FiniteGroup per key
    strides: tuple

    def encode(self, comps) -> int:
        return sum(c * s for c, s in zip(comps, self.strides))

    def decode(self, idx: int):
        out = []
        for g, s in zip(self.groups, self.strides):
            out.append((idx // s) % g.order)
        return tuple(out)

    def position(self, key) -> int:
        return self.keys.index(key)


def build_product(keys, groups) -> tuple[FiniteGroup, FactorSpec]:
    keys = tuple(keys)
    groups = tuple(groups)
    order = 1
    for g in groups:
        order *= g.order
    if order * order > table_cap():
        raise FunctorError("local group exceeds table cap")
    strides = []
    s = order
    for g in groups:
        s //= g.order
        strides.append(s)
    spec = FactorSpec(keys, groups, tuple(strides))
    idx = np.arange(order)
    total = np.zeros((order, order), dtype=np.int64)
    for g, stride in zip(groups, strides):
        comp = (idx // stride) % g.order
        tab = np.array(g.table, dtype=np.int64)
        total += tab[comp[:, None], comp[None, :]] * stride
    label = "*".join(g.name for g in groups) if groups else "1"
    return FiniteGroup(total.tolist(), name=label, check=False), spec


def product_hom(
    src: FiniteGroup,
    src_spec: FactorSpec,
    dst: FiniteGroup,
    dst_spec: FactorSpec,
    key_map: dict,
    component_maps: dict,
) -> Homomorphism:
    """Homomorphism between factored products.

    key_map sends each source factor key to a destination key; factors not
    hit are sent to 0.  component_maps optionally gives an element map per
    source key (defaults to the identity).
    """
    mapping = []
    for idx in range(src.order):
        comps = src_spec.decode(idx)
        out = [0] * len(dst_spec.keys)
        for k, c in zip(src_spec.keys, comps):
            dk = key_map[k]
            f = component_maps.get(k)
            out[dst_spec.position(dk)] = f(c) if f is not None else c
        mapping.append(dst_spec.encode(out))
    return Homomorphism(src, dst, mapping, check=False)


# the functor on objects -------------------------------------------------------


@dataclass
class FunctorImage:
    ctx: FunctorContext
    gog: GraphOfGroups
    complex: ChamberComplex
    cog: SimpleComplexOfGroups
    specs: dict  # cid -> FactorSpec

    def drop_class(self, arrow: Arrow):
        """Class of a codimension-one arrow for the link join check."""
        dst = self.complex.cell_info[arrow.dst]
        src = self.complex.cell_info[arrow.src]
        if dst.kind == "face" and src.kind == "mid":
            return dst.face_gen
        drop = dst.rep - src.rep
        if len(drop) == 1:
            return next(iter(drop))
        return None

    def expected_link_sizes(self, cid: str) -> dict:
        info = self.complex.cell_info[cid]
        q = self.ctx.q
        if info.kind == "mid":
            return {j: q[j] for j in info.rep}
        sizes = {j: q[j] for j in info.rep if j != info.face_gen}
        sizes[info.face_gen] = q[info.face_gen]
        return sizes


def functor_F(
    ctx: FunctorContext, gog: GraphOfGroups, colouring: Optional[dict] = None
) -> FunctorImage:
    """Apply the functor to a graph of groups.

    Preconditions: the covering tree must be (q_i1, q_i2)-biregular.  When
    the two parameters differ, the colouring is forced by valences.
    """
    i1, i2 = ctx.i1, ctx.i2
    q1, q2 = ctx.q[i1], ctx.q[i2]
    rep = check_biregular(gog, q1, q2)
    if not rep.ok:
        raise FunctorError(f"covering tree is not ({q1},{q2})-biregular: {rep.message}")
    if colouring is None and q1 != q2:
        val = local_valences(gog)
        colouring = {v: (i1 if val[v] == q1 else i2) for v in gog.graph.vertices}
    cx = realize_graph(ctx, gog.graph, colouring)
    q = ctx.q
    G_res = {j: cyclic(q[j]) for j in ctx.system.generators}

    groups: dict[str, FiniteGroup] = {}
    specs: dict[str, FactorSpec] = {}
    for cid, info in cx.cell_info.items():
        if info.kind == "mid":
            keys = [("edge", info.owner)] + [("res", j) for j in sorted(info.rep, key=str)]
            gs = [gog.egroups[info.owner]] + [G_res[j] for j in sorted(info.rep, key=str)]
        else:
            rest = sorted((j for j in info.rep if j != info.face_gen), key=str)
            keys = [("vertex", info.owner)] + [("res", j) for j in rest]
            gs = [gog.vgroups[info.owner]] + [G_res[j] for j in rest]
        groups[cid], specs[cid] = build_product(keys, gs)

    psi: dict[str, Homomorphism] = {}
    for aid, arrow in cx.scwol.arrows.items():
        sinfo = cx.cell_info[arrow.src]
        dinfo = cx.cell_info[arrow.dst]
        ainfo = cx.arrow_info[aid]
        key_map = {}
        component_maps = {}
        if sinfo.kind == "mid" and dinfo.kind == "mid":
            key_map[("edge", sinfo.owner)] = ("edge", dinfo.owner)
            for j in sinfo.rep:
                key_map[("res", j)] = ("res", j)
        elif sinfo.kind == "mid" and dinfo.kind == "face":
            eid = sinfo.owner
            slot = ainfo.via
            alpha = gog.alpha[(eid, slot)]
            key_map[("edge", eid)] = ("vertex", dinfo.owner)
            component_maps[("edge", eid)] = alpha
            # res labels of the source live in chamber coordinates; when the
            # chamber attaches through its i2 side of a glued face they are
            # translated by h^-1 to the representative coordinates.
            local_gen = cx.end_itype[(eid, slot)]
            if cx.mode == "glued" and local_gen == i2:
                hinv = ctx.h_inv()
                trans = {j: hinv[j] for j in sinfo.rep}
            else:
                trans = {j: j for j in sinfo.rep}
            for j in sinfo.rep:
                key_map[("res", j)] = ("res", trans[j])
        else:
            key_map[("vertex", sinfo.owner)] = ("vertex", dinfo.owner)
            for j in sinfo.rep:
                if j != sinfo.face_gen:
                    key_map[("res", j)] = ("res", j)
        psi[aid] = product_hom(
            groups[arrow.src], specs[arrow.src], groups[arrow.dst], specs[arrow.dst],
            key_map, component_maps,
        )

    cog = SimpleComplexOfGroups(cx.scwol, groups, psi, name=f"F({gog.name})")
    return FunctorImage(ctx=ctx, gog=gog, complex=cx, cog=cog, specs=specs)


def realize_gog_1dim(gog: GraphOfGroups) -> SimpleComplexOfGroups:
    """The one-dimensional realisation: a complex of groups over the
    barycentric subdivision of the graph, midpoint groups the edge groups,
    psi the alphas."""
    cells = []
    arrows = []
    for v in gog.graph.vertices:
        cells.append(Cell(f"v|{v}", str(v), 0))
    for eid in gog.graph.edge_ids():
        cells.append(Cell(f"m|{eid}", eid, 1))
        for end in (0, 1):
            vv = gog.graph.i((eid, end))
            arrows.append(Arrow(f"a|{eid}|{end}", f"m|{eid}", f"v|{vv}"))
    lgroups = {f"v|{v}": gog.vgroups[v] for v in gog.graph.vertices}
    lgroups.update({f"m|{eid}": gog.egroups[eid] for eid in gog.graph.edge_ids()})
    psi = {
        f"a|{eid}|{end}": gog.alpha[(eid, end)]
        for eid in gog.graph.edge_ids()
        for end in (0, 1)
    }
    scwol = Scwol(cells, arrows, {})
    return SimpleComplexOfGroups(scwol, lgroups, psi, name=f"C1({gog.name})")


def realize_morphism_1dim(
    src: GraphOfGroups, dst: GraphOfGroups, m: GoGMorphism
) -> CoGMorphism:
    """Image of a graph-of-groups morphism in the 1-dimensional category.

    Only the delta data enters; distinct gamma annotations with the same
    deltas realise identically.
    """
    f_cell = {f"v|{v}": f"v|{m.f_vertex[v]}" for v in src.graph.vertices}
    f_cell.update(
        {f"m|{eid}": f"m|{m.f_edge[(eid, 0)][0]}" for eid in src.graph.edge_ids()}
    )
    f_arrow = {}
    phi_a = {}
    for eid in src.graph.edge_ids():
        for end in (0, 1):
            fe = m.f_edge[(eid, end)]
            f_arrow[f"a|{eid}|{end}"] = f"a|{fe[0]}|{fe[1]}"
            phi_a[f"a|{eid}|{end}"] = m.delta[(eid, end)]
    phi = {f"v|{v}": m.phi_v[v] for v in src.graph.vertices}
    phi.update({f"m|{eid}": m.phi_e[eid] for eid in src.graph.edge_ids()})
    return CoGMorphism(f_cell=f_cell, f_arrow=f_arrow, phi=phi, phi_a=phi_a)


# the functor on morphisms ------------------------------------------------------


def functor_F_morphism(
    src_img: FunctorImage, dst_img: FunctorImage, m: GoGMorphism
) -> CoGMorphism:
    """Image of a morphism of graphs of groups under the functor.

    Local maps act by phi on the first factor and the identity on residue
    factors; phi(b) is delta_e on the arrows whose first factor is an
    alpha, and trivial elsewhere.  Colour flips require the type swap g.
    """
    ctx = src_img.ctx
    i1, i2 = ctx.i1, ctx.i2
    scx, dcx = src_img.complex, dst_img.complex

    flips = {}
    for eid, u, w in scx.graph.edges:
        fe0 = m.f_edge[(eid, 0)]
        flips[eid] = scx.end_itype[(eid, 0)] != dcx.end_itype[fe0]
    if any(flips.values()):
        if ctx.g is None:
            raise FunctorError("morphism flips colours and no type swap g is available")
        for j, gj in ctx.g.items():
            if ctx.q[j] != ctx.q[gj]:
                raise FunctorError("type swap does not preserve q; not sufficiently symmetric")

    gmap = ctx.g or {}

    def translate_J(eid: str, J: frozenset) -> frozenset:
        return frozenset(gmap[j] for j in J) if flips[eid] else J

    f_cell = {}
    for cid, info in scx.cell_info.items():
        if info.kind == "mid":
            eid = info.owner
            fe = m.f_edge[(eid, 0)][0]
            f_cell[cid] = f"m|{fe}|{_jkey(translate_J(eid, info.rep))}"
        else:
            v = info.owner
            fv = m.f_vertex[v]
            # find a chamber at v realising this cell to learn its local type
            eid, slot, localJ = _attachment_of_face(scx, ctx, cid)
            fe, fslot = m.f_edge[(eid, slot)]
            J_img = translate_J(eid, localJ)
            cid2, _, _, _, _ = _resolve_face(
                dst_img.ctx, dcx.mode, dcx.colouring, fv, J_img
            )
            f_cell[cid] = cid2
    for cid, target in f_cell.items():
        if target not in dcx.cell_info:
            raise FunctorError(f"cell {cid} maps outside the target complex")

    f_arrow = {}
    for aid, arrow in scx.scwol.arrows.items():
        ainfo = scx.arrow_info[aid]
        src2, dst2 = f_cell[arrow.src], f_cell[arrow.dst]
        if ainfo.via is not None:
            eid = scx.cell_info[arrow.src].owner
            fe, fslot = m.f_edge[(eid, ainfo.via)]
            cand = f"a|{src2}|{dst2}|s{fslot}"
        else:
            cand = f"a|{src2}|{dst2}|"
        if cand not in dcx.scwol.arrows:
            raise FunctorError(f"arrow {aid} has no image arrow {cand}")
        f_arrow[aid] = cand

    phi = {}
    for cid, info in scx.cell_info.items():
        src_spec = src_img.specs[cid]
        dst_cid = f_cell[cid]
        dst_spec = dst_img.specs[dst_cid]
        key_map = {}
        component_maps = {}
        if info.kind == "mid":
            eid = info.owner
            fe = m.f_edge[(eid, 0)][0]
            key_map[("edge", eid)] = ("edge", fe)
            component_maps[("edge", eid)] = m.phi_e[eid]
            for j in info.rep:
                key_map[("res", j)] = ("res", gmap[j] if flips[eid] else j)
        else:
            v = info.owner
            key_map[("vertex", v)] = ("vertex", m.f_vertex[v])
            component_maps[("vertex", v)] = m.phi_v[v]
            dinfo = dcx.cell_info[dst_cid]
            eid, slot, localJ = _attachment_of_face(scx, ctx, cid)
            # residue keys of source rep map onto residue keys of target rep
            src_rest = sorted((j for j in info.rep if j != info.face_gen), key=str)
            dst_rest = sorted((j for j in dinfo.rep if j != dinfo.face_gen), key=str)
            pairing = _match_residues(
                ctx, dst_img.ctx, info, dinfo, flips[eid], gmap
            )
            for j in src_rest:
                key_map[("res", j)] = ("res", pairing[j])
        phi[cid] = product_hom(
            src_img.cog.lgroups[cid], src_spec,
            dst_img.cog.lgroups[dst_cid], dst_spec,
            key_map, component_maps,
        )

    phi_a = {}
    for aid, arrow in scx.scwol.arrows.items():
        ainfo = scx.arrow_info[aid]
        if ainfo.via is None:
            phi_a[aid] = 0
            continue
        eid = scx.cell_info[arrow.src].owner
        d = m.delta[(eid, ainfo.via)]
        dst_cid = f_cell[arrow.dst]
        dspec = dst_img.specs[dst_cid]
        dinfo = dcx.cell_info[dst_cid]
        pos = dspec.position(("vertex", dinfo.owner))
        comps = [0] * len(dspec.keys)
        comps[pos] = d
        phi_a[aid] = dspec.encode(comps)
    return CoGMorphism(f_cell=f_cell, f_arrow=f_arrow, phi=phi, phi_a=phi_a)


def _attachment_of_face(scx: ChamberComplex, ctx: FunctorContext, cid: str):
    """Some (edge, slot, local type) attaching to the face cell cid."""
    info = scx.cell_info[cid]
    v = info.owner
    h = ctx.h or {}
    for eid, cells in sorted(scx.chamber_cells.items()):
        if cid not in cells:
            continue
        for slot in (0, 1):
            if scx.graph.i((eid, slot)) != v:
                continue
            gen = scx.end_itype[(eid, slot)]
            if gen in info.rep:
                return eid, slot, info.rep
            # glued: the chamber attaches through the h-image type
            other = frozenset(h[j] for j in info.rep) if h else None
            if other is not None and gen in other:
                return eid, slot, other
    raise FunctorError(f"face cell {cid} has no attachment")


def _match_residues(ctx, dst_ctx, sinfo: CellInfo, dinfo: CellInfo, flip: bool, gmap):
    """Pair residue generators of a source face rep with the target's."""
    pairing = {}
    for j in sinfo.rep:
        if j == sinfo.face_gen:
            continue
        out = gmap[j] if flip else j
        if out in dinfo.rep:
            pairing[j] = out
        else:
            hinv = dst_ctx.h_inv()
            if out in hinv and hinv[out] in dinfo.rep:
                pairing[j] = hinv[out]
            else:
                raise FunctorError("residue generators do not match under the map")
    return pairing


def compose_cog_morphisms(
    src: SimpleComplexOfGroups,
    m1: CoGMorphism,
    mid: SimpleComplexOfGroups,
    m2: CoGMorphism,
    dst: SimpleComplexOfGroups,
) -> CoGMorphism:
    f_cell = {c: m2.f_cell[fc] for c, fc in m1.f_cell.items()}
    f_arrow = {a: m2.f_arrow[fa] for a, fa in m1.f_arrow.items()}
    phi = {c: m2.phi[m1.f_cell[c]].compose(hom) for c, hom in m1.phi.items()}
    phi_a = {}
    for aid, el1 in m1.phi_a.items():
        a = src.base.arrows[aid]
        fa = m1.f_arrow[aid]
        mid_dst = mid.base.arrows[fa].dst
        H = dst.lgroups[m2.f_cell[mid_dst]]
        phi_a[aid] = H.mul(m2.phi[mid_dst](el1), m2.phi_a[fa])
    return CoGMorphism(f_cell=f_cell, f_arrow=f_arrow, phi=phi, phi_a=phi_a)


# non-injectivity demonstration -------------------------------------------------


@dataclass(frozen=True)
class NonInjectivityDemo:
    morphism_a: GoGMorphism
    morphism_b: GoGMorphism
    control: GoGMorphism
    realization_a: CoGMorphism
    realization_b: CoGMorphism
    realization_control: CoGMorphism
    same: bool
    control_differs: bool


def demo_noninjectivity() -> NonInjectivityDemo:
    """Two literally distinct morphisms with the same deltas realise
    identically in the one-dimensional category; a control pair with a
    different delta realises differently."""
    from .groups import cyclic, identity_hom, trivial_hom

    c2 = cyclic(2)
    triv = cyclic(1)
    loop = OrientedGraph(("v",), (("l", "v", "v"),))
    gog = GraphOfGroups(
        loop,
        {"v": c2},
        {"l": triv},
        {("l", 0): trivial_hom(triv, c2), ("l", 1): trivial_hom(triv, c2)},
        name="loop-C2",
    )

    def morphism(delta0: int, delta1: int, gamma_v, gamma_e) -> GoGMorphism:
        return GoGMorphism(
            f_vertex={"v": "v"},
            f_edge={("l", 0): ("l", 0), ("l", 1): ("l", 1)},
            phi_v={"v": identity_hom(c2)},
            phi_e={"l": identity_hom(triv)},
            delta={("l", 0): delta0, ("l", 1): delta1},
            gamma_v=gamma_v,
            gamma_e=gamma_e,
        )

    # delta = gamma_v^-1 gamma_e: the words below are literally distinct
    m_a = morphism(1, 0, {"v": ()}, {("l", 0): (("g", "v", 1),), ("l", 1): ()})
    m_b = morphism(
        1,
        0,
        {"v": (("g", "v", 1),)},
        {("l", 0): (("g", "v", 1), ("g", "v", 1), ("g", "v", 1)), ("l", 1): (("g", "v", 1),)},
    )
    m_c = morphism(0, 0, {"v": ()}, {("l", 0): (), ("l", 1): ()})

    ra = realize_morphism_1dim(gog, gog, m_a)
    rb = realize_morphism_1dim(gog, gog, m_b)
    rc = realize_morphism_1dim(gog, gog, m_c)

    def equal(x: CoGMorphism, y: CoGMorphism) -> bool:
        return (
            x.f_cell == y.f_cell
            and x.f_arrow == y.f_arrow
            and all(x.phi[c].map == y.phi[c].map for c in x.phi)
            and x.phi_a == y.phi_a
        )

    return NonInjectivityDemo(
        morphism_a=m_a,
        morphism_b=m_b,
        control=m_c,
        realization_a=ra,
        realization_b=rb,
        realization_control=rc,
        same=equal(ra, rb),
        control_differs=not equal(ra, rc),
    )
