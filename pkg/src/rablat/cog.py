"""Simple complexes of groups over scwols: verification, coverings, local
developments at top-type cells, chamber covolume, and towers.

Cells carry a rank equal to the dimension of the polyhedral cell they
barycentrically represent; every arrow goes from a higher-rank cell to a
lower-rank one (i(a) = sigma, t(a) = tau with tau contained in sigma), and
the local monomorphism psi_a points from G_{i(a)} into G_{t(a)}.  All
complexes here are simple: composition of psi's is on the nose.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .groups import FiniteGroup, Homomorphism, identity_hom


class CogError(ValueError):
    pass


@dataclass(frozen=True)
class Cell:
    cid: str
    tag: str
    rank: int


@dataclass(frozen=True)
class Arrow:
    aid: str
    src: str  # i(a): higher-rank cell
    dst: str  # t(a): lower-rank cell


class Scwol:
    """A small category of cells and strictly rank-decreasing arrows.

    Parallel arrows between the same pair of cells are allowed (they arise
    from self-glued chambers over loop edges), so composition is stored as
    an explicit table.  When every composable pair has a unique candidate
    composite the table is filled in automatically.
    """

    def __init__(
        self,
        cells: Sequence[Cell],
        arrows: Sequence[Arrow],
        comp: Optional[dict] = None,
    ):
        self.cells = {c.cid: c for c in cells}
        if len(self.cells) != len(cells):
            raise CogError("duplicate cell ids")
        self.arrows = {a.aid: a for a in arrows}
        if len(self.arrows) != len(arrows):
            raise CogError("duplicate arrow ids")
        by_pair: dict[tuple[str, str], list[str]] = {}
        for a in arrows:
            if a.src not in self.cells or a.dst not in self.cells:
                raise CogError(f"arrow {a.aid} touches unknown cell")
            if a.src == a.dst:
                raise CogError(f"identity arrow {a.aid}")
            if self.cells[a.src].rank <= self.cells[a.dst].rank:
                raise CogError(f"arrow {a.aid} does not decrease rank")
            by_pair.setdefault((a.src, a.dst), []).append(a.aid)
        self.comp: dict[tuple[str, str], str] = dict(comp or {})
        for a in arrows:
            for b in arrows:
                if a.src != b.dst:
                    continue
                key = (a.aid, b.aid)
                if key in self.comp:
                    c = self.arrows.get(self.comp[key])
                    if c is None or c.src != b.src or c.dst != a.dst:
                        raise CogError(f"invalid composite for {key}")
                    continue
                candidates = by_pair.get((b.src, a.dst), [])
                if len(candidates) == 1:
                    self.comp[key] = candidates[0]
                elif not candidates:
                    raise CogError(f"missing composite of {b.aid} then {a.aid}")
                else:
                    raise CogError(
                        f"ambiguous composite of {b.aid} then {a.aid}: supply comp"
                    )
        # associativity where defined
        for a in arrows:
            for b in arrows:
                if a.src != b.dst:
                    continue
                ab = self.arrows[self.comp[(a.aid, b.aid)]]
                for c in arrows:
                    if b.src != c.dst:
                        continue
                    bc = self.arrows[self.comp[(b.aid, c.aid)]]
                    if self.comp[(ab.aid, c.aid)] != self.comp[(a.aid, bc.aid)]:
                        raise CogError(
                            f"composition not associative at {a.aid},{b.aid},{c.aid}"
                        )

    def compose(self, a: Arrow, b: Arrow) -> Arrow:
        """The composite ab with i(ab) = i(b), t(ab) = t(a); needs i(a) = t(b)."""
        if a.src != b.dst:
            raise CogError("arrows not composable")
        return self.arrows[self.comp[(a.aid, b.aid)]]

    def composable_pairs(self) -> list[tuple[Arrow, Arrow]]:
        return [
            (a, b)
            for a in self.arrows.values()
            for b in self.arrows.values()
            if a.src == b.dst
        ]

    def arrows_into(self, cid: str) -> list[Arrow]:
        return sorted(
            (a for a in self.arrows.values() if a.dst == cid), key=lambda a: a.aid
        )

    def arrows_out_of(self, cid: str) -> list[Arrow]:
        return sorted(
            (a for a in self.arrows.values() if a.src == cid), key=lambda a: a.aid
        )

    def max_rank_cells(self) -> list[Cell]:
        """Cells of maximal polyhedral dimension: no incoming arrows."""
        return sorted(
            (c for c in self.cells.values() if not self.arrows_into(c.cid)),
            key=lambda c: c.cid,
        )

    def min_rank_cells(self) -> list[Cell]:
        """Deepest-type cells: no outgoing arrows."""
        return sorted(
            (c for c in self.cells.values() if not self.arrows_out_of(c.cid)),
            key=lambda c: c.cid,
        )


class SimpleComplexOfGroups:
    def __init__(self, base: Scwol, lgroups: dict, psi: dict, name: str = "cog"):
        self.base = base
        self.lgroups = dict(lgroups)
        self.psi = dict(psi)
        self.name = name
        for cid in base.cells:
            if cid not in self.lgroups:
                raise CogError(f"missing local group at {cid}")
        for aid, a in base.arrows.items():
            if aid not in self.psi:
                raise CogError(f"missing psi at {aid}")
            hom = self.psi[aid]
            if hom.source != self.lgroups[a.src] or hom.target != self.lgroups[a.dst]:
                raise CogError(f"psi at {aid} has wrong signature")

    def __repr__(self):
        return f"SimpleComplexOfGroups({self.name}, cells={len(self.base.cells)})"


@dataclass(frozen=True)
class Report:
    ok: bool
    lines: tuple[str, ...]

    def __bool__(self):
        return self.ok


def verify_complex(cog: SimpleComplexOfGroups) -> Report:
    """Monomorphism and simple-functoriality checks, first failure localized."""
    lines = []
    for aid in sorted(cog.base.arrows):
        if not cog.psi[aid].mono:
            return Report(False, (f"psi not injective at arrow {aid}",))
    for a, b in cog.base.composable_pairs():
        ab = cog.base.compose(a, b)
        lhs = cog.psi[a.aid].compose(cog.psi[b.aid])
        if lhs.map != cog.psi[ab.aid].map:
            return Report(
                False, (f"psi_{a.aid} o psi_{b.aid} != psi_{ab.aid}",)
            )
    lines.append(f"{len(cog.base.arrows)} monomorphisms, composition closed")
    return Report(True, tuple(lines))


@dataclass
class CoGMorphism:
    """Morphism of simple complexes of groups over a nondegenerate scwol map."""

    f_cell: dict
    f_arrow: dict
    phi: dict  # cid -> Homomorphism
    phi_a: dict  # aid -> element of target local group at t(f(a))


def identity_cog_morphism(cog: SimpleComplexOfGroups) -> CoGMorphism:
    return CoGMorphism(
        f_cell={c: c for c in cog.base.cells},
        f_arrow={a: a for a in cog.base.arrows},
        phi={c: identity_hom(cog.lgroups[c]) for c in cog.base.cells},
        phi_a={a: 0 for a in cog.base.arrows},
    )


def verify_cog_morphism(
    src: SimpleComplexOfGroups, dst: SimpleComplexOfGroups, m: CoGMorphism
) -> Report:
    for cid in src.base.cells:
        if m.f_cell.get(cid) not in dst.base.cells:
            return Report(False, (f"cell {cid} has no valid image",))
    for aid, a in src.base.arrows.items():
        fa = m.f_arrow.get(aid)
        if fa is None or fa not in dst.base.arrows:
            return Report(False, (f"arrow {aid} has no valid image",))
        da = dst.base.arrows[fa]
        if da.src != m.f_cell[a.src] or da.dst != m.f_cell[a.dst]:
            return Report(False, (f"arrow map degenerate/incompatible at {aid}",))
    for cid in src.base.cells:
        hom = m.phi[cid]
        if hom.source != src.lgroups[cid] or hom.target != dst.lgroups[m.f_cell[cid]]:
            return Report(False, (f"phi at {cid} has wrong signature",))
    lines = []
    for aid, a in sorted(src.base.arrows.items()):
        H = dst.lgroups[m.f_cell[a.dst]]
        el = m.phi_a[aid]
        psi_f = dst.psi[m.f_arrow[aid]]
        lhs_ok = all(
            H.conj(el, psi_f(m.phi[a.src](x))) == m.phi[a.dst](src.psi[aid](x))
            for x in range(src.lgroups[a.src].order)
        )
        if not lhs_ok:
            return Report(False, tuple(lines + [f"morphism square fails at arrow {aid}"]))
        lines.append(f"square holds at {aid}")
    for a, b in src.base.composable_pairs():
        ab = src.base.compose(a, b)
        fa = dst.base.arrows[m.f_arrow[a.aid]]
        H = dst.lgroups[fa.dst]
        lhs = m.phi_a[ab.aid]
        rhs = H.mul(m.phi_a[a.aid], dst.psi[fa.aid](m.phi_a[b.aid]))
        if lhs != rhs:
            return Report(
                False,
                tuple(lines + [f"phi({ab.aid}) != phi({a.aid}) psi(phi({b.aid}))"]),
            )
    lines.append("composition rule holds")
    return Report(True, tuple(lines))


def verify_cog_covering(
    src: SimpleComplexOfGroups, dst: SimpleComplexOfGroups, m: CoGMorphism
) -> Report:
    """Covering check over every cell sigma and arrow b with t(b) = f(sigma):
    the union of cosets G_sigma/psi_a(G_{i(a)}) over a in f^-1(b) ending at
    sigma must biject onto H_{f(sigma)}/psi_b(H_{i(b)}) via g -> phi(g) phi(a).
    """
    base = verify_cog_morphism(src, dst, m)
    if not base.ok:
        return Report(False, base.lines + ("not a morphism, covering aborted",))
    lines = list(base.lines)
    for cid in src.base.cells:
        if not m.phi[cid].mono:
            return Report(False, tuple(lines + [f"phi not injective at {cid}"]))
    for cid in sorted(src.base.cells):
        fc = m.f_cell[cid]
        H = dst.lgroups[fc]
        for b in dst.base.arrows_into(fc):
            im_b = set(dst.psi[b.aid].map)
            want = H.order // len(im_b)
            seen: dict[frozenset, tuple] = {}
            total = 0
            G = src.lgroups[cid]
            for a in src.base.arrows_into(cid):
                if m.f_arrow[a.aid] != b.aid:
                    continue
                im_a = set(src.psi[a.aid].map)
                for coset in _left_cosets(G, im_a):
                    g = coset[0]
                    img = H.mul(m.phi[cid](g), m.phi_a[a.aid])
                    target = frozenset(H.mul(img, y) for y in im_b)
                    total += 1
                    if target in seen:
                        return Report(
                            False,
                            tuple(
                                lines
                                + [
                                    f"coset collision at cell {cid}, arrow {b.aid}: "
                                    f"{seen[target]} vs {(a.aid, g)}"
                                ]
                            ),
                        )
                    seen[target] = (a.aid, g)
            if total != want:
                return Report(
                    False,
                    tuple(
                        lines
                        + [f"coset count mismatch at cell {cid}, arrow {b.aid}: {total} != {want}"]
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


def chamber_covolume(cog: SimpleComplexOfGroups) -> Fraction:
    """Sum of 1/|local group| over the top-dimensional (chamber) cells."""
    return sum(
        (Fraction(1, cog.lgroups[c.cid].order) for c in cog.base.max_rank_cells()),
        Fraction(0),
    )


# local development at a deepest-type cell ------------------------------------


@dataclass(frozen=True)
class LinkReport:
    ok: bool
    cell: str
    part_sizes: dict  # class label -> number of link vertices
    message: str


def link_at_max_vertex(
    cog: SimpleComplexOfGroups,
    cid: str,
    drop_class,
    expected_sizes: Optional[dict] = None,
) -> LinkReport:
    """Local-development link at a cell tau of deepest type.

    Link vertices are pairs (a, coset of psi_a image) over arrows a into
    tau, grouped by drop_class(a) (for functor-built complexes: the
    generator dropped along a).  The link must be the join of these
    discrete sets: cross-class cosets always meet, same-class cosets are
    disjoint.  Only codimension-one arrows (from cells one rank up) count
    as link vertices; deeper arrows give higher simplices of the join.
    """
    cell = cog.base.cells[cid]
    if cog.base.arrows_out_of(cid):
        return LinkReport(False, cid, {}, "cell has outgoing arrows: not of deepest type")
    G = cog.lgroups[cid]
    verts = []  # (class, arrow, coset-frozenset)
    for a in cog.base.arrows_into(cid):
        if cog.base.cells[a.src].rank != cell.rank + 1:
            continue
        cls = drop_class(a)
        if cls is None:
            continue
        im = set(cog.psi[a.aid].map)
        for coset in _left_cosets(G, im):
            verts.append((cls, a.aid, frozenset(coset)))
    sizes: dict = {}
    for cls, _, _ in verts:
        sizes[cls] = sizes.get(cls, 0) + 1
    # vertices over the same class are lifts of distinct cells or distinct
    # cosets, hence distinct non-adjacent points; the join property is that
    # every cross-class pair spans an edge, i.e. the cosets meet.
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            ci, ai, bi = verts[i]
            cj, aj, bj = verts[j]
            if ci != cj and not (bi & bj):
                return LinkReport(
                    False, cid, sizes, f"cross-class cosets disjoint: {ai}/{aj}"
                )
    if expected_sizes is not None and sizes != expected_sizes:
        return LinkReport(
            False, cid, sizes, f"part sizes {sizes} != expected {expected_sizes}"
        )
    return LinkReport(True, cid, sizes, "link is a join of discrete sets")


# full subcomplexes and towers -------------------------------------------------


@dataclass(frozen=True)
class SubcomplexReport:
    ok: bool
    proper_at: frozenset
    lines: tuple[str, ...]

    def __bool__(self):
        return self.ok


def verify_full_subcomplex(
    sub: SimpleComplexOfGroups,
    sup: SimpleComplexOfGroups,
    inclusions: Optional[dict] = None,
) -> SubcomplexReport:
    """Check `sub` is a full complex of subgroups of `sup`: the inclusion
    over the identity with all phi(a) = 1 is a covering.  Reports at which
    cells the inclusion is proper.

    `inclusions` optionally supplies the per-cell inclusion homomorphisms;
    otherwise stride/prefix index conventions are tried.
    """
    if sub.base is not sup.base and set(sub.base.cells) != set(sup.base.cells):
        return SubcomplexReport(False, frozenset(), ("base scwols differ",))
    phi = {}
    for cid in sub.base.cells:
        G, H = sub.lgroups[cid], sup.lgroups[cid]
        if inclusions is not None:
            hom = inclusions[cid]
            if hom.source != G or hom.target != H or not hom.mono:
                return SubcomplexReport(
                    False, frozenset(), (f"supplied inclusion invalid at {cid}",)
                )
            phi[cid] = hom
            continue
        mapping = _inclusion_map(G, H)
        if mapping is None:
            return SubcomplexReport(
                False, frozenset(), (f"no compatible inclusion at {cid}",)
            )
        phi[cid] = Homomorphism(G, H, mapping, check=True)
    m = CoGMorphism(
        f_cell={c: c for c in sub.base.cells},
        f_arrow={a: a for a in sub.base.arrows},
        phi=phi,
        phi_a={a: 0 for a in sub.base.arrows},
    )
    rep = verify_cog_covering(sub, sup, m)
    proper = frozenset(
        cid
        for cid in sub.base.cells
        if sub.lgroups[cid].order < sup.lgroups[cid].order
    )
    return SubcomplexReport(rep.ok, proper, rep.lines)


def _inclusion_map(G: FiniteGroup, H: FiniteGroup) -> Optional[list[int]]:
    """Identity-style inclusion for compatible product tables.

    Towers in this package grow groups as G x (Z/p)^k blocks with the index
    convention (a, b) -> a * |block| + b, so the inclusion of level k into
    level k+1 sends a_k * m to a_k * (m * p) shifted; here it suffices that
    H restricted to the first G.order indices scaled matches.  We detect the
    stride automatically.
    """
    if H.order % G.order != 0:
        return None
    stride = H.order // G.order
    candidate = [x * stride for x in range(G.order)]
    ok = all(
        H.mul(candidate[a], candidate[b]) == candidate[G.mul(a, b)]
        for a in range(G.order)
        for b in range(G.order)
    )
    if ok:
        return candidate
    candidate = list(range(G.order))
    ok = all(
        H.mul(candidate[a], candidate[b]) == candidate[G.mul(a, b)]
        for a in range(G.order)
        for b in range(G.order)
    )
    return candidate if ok else None


@dataclass(frozen=True)
class TowerReport:
    ok: bool
    covolumes: tuple
    lines: tuple[str, ...]

    def __bool__(self):
        return self.ok


def verify_tower(
    chain: Sequence[SimpleComplexOfGroups],
    link_classifier=None,
    inclusions: Optional[Sequence[dict]] = None,
) -> TowerReport:
    """Verify a strictly ascending chain of complexes of groups over one base.

    Each step must be a full complex of subgroups with a proper inclusion
    somewhere, chamber covolumes must strictly decrease, all local groups
    stay finite, and deepest-cell links stay identical across the chain.
    `inclusions[k]` optionally gives the per-cell inclusion maps of step k.
    """
    lines = []
    if len(chain) < 1:
        return TowerReport(False, (), ("empty chain",))
    covs = tuple(chamber_covolume(c) for c in chain)
    links: list[dict] = []
    for cog in chain:
        rep = verify_complex(cog)
        if not rep.ok:
            return TowerReport(False, covs, rep.lines)
        if link_classifier is not None:
            level_links = {}
            for cell in cog.base.min_rank_cells():
                lrep = link_at_max_vertex(cog, cell.cid, link_classifier)
                if not lrep.ok:
                    return TowerReport(
                        False, covs, (f"link failure at {cell.cid}: {lrep.message}",)
                    )
                level_links[cell.cid] = lrep.part_sizes
            links.append(level_links)
    if link_classifier is not None and any(l != links[0] for l in links[1:]):
        return TowerReport(False, covs, ("links change along the chain",))
    for k in range(len(chain) - 1):
        incl = inclusions[k] if inclusions is not None else None
        step = verify_full_subcomplex(chain[k], chain[k + 1], inclusions=incl)
        if not step.ok:
            return TowerReport(
                False, covs, (f"step {k} is not a full complex of subgroups",) + step.lines
            )
        if not step.proper_at:
            return TowerReport(False, covs, (f"step {k} is nowhere proper",))
        if covs[k] <= covs[k + 1]:
            return TowerReport(False, covs, (f"covolume does not decrease at step {k}",))
        lines.append(
            f"step {k}: covering ok, proper at {len(step.proper_at)} cells, "
            f"covolume {covs[k]} -> {covs[k+1]}"
        )
    lines.append("tower verified")
    return TowerReport(True, covs, tuple(lines))
