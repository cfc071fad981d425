"""Exact finite-group arithmetic on explicit multiplication tables.

Groups are stored as full Cayley tables with element 0 the identity.  All
constructions in this package stay small (a few hundred elements), so every
coset, core and kernel computation is done by brute force, exactly.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DEFAULT_TABLE_CAP = 1_000_000
ASSOC_CHECK_LIMIT = 512


def table_cap() -> int:
    """Maximum number of table entries allowed for a constructed group."""
    raw = os.environ.get("RABLAT_TABLE_CAP")
    if raw:
        return int(raw)
    return DEFAULT_TABLE_CAP


class GroupError(ValueError):
    pass


class CapacityError(GroupError):
    pass


class FiniteGroup:
    """A finite group as an order x order multiplication table.

    Element 0 is the two-sided identity.  Tables of order <= 512 are checked
    exhaustively for associativity at construction; canonical constructors
    produce correct tables beyond that size.
    """

    __slots__ = ("order", "table", "name", "_np", "_inv")

    def __init__(self, table: Sequence[Sequence[int]], name: str = "G", check: bool = True):
        tab = tuple(tuple(int(x) for x in row) for row in table)
        n = len(tab)
        if n == 0:
            raise GroupError("empty table")
        if n * n > table_cap():
            raise CapacityError(f"table with {n * n} entries exceeds cap {table_cap()}")
        arr = np.array(tab, dtype=np.int32)
        if arr.shape != (n, n):
            raise GroupError("table is not square")
        self.order = n
        self.table = tab
        self.name = name
        self._np = arr
        if check:
            self._validate()
        inv = np.empty(n, dtype=np.int32)
        for a in range(n):
            hits = np.nonzero(arr[a] == 0)[0]
            if len(hits) != 1:
                raise GroupError(f"element {a} has no unique inverse")
            inv[a] = hits[0]
        self._inv = inv

    def _validate(self) -> None:
        arr = self._np
        n = self.order
        if arr.min() < 0 or arr.max() >= n:
            raise GroupError("table entries out of range")
        ident = np.arange(n, dtype=np.int32)
        if not np.array_equal(arr[0], ident) or not np.array_equal(arr[:, 0], ident):
            raise GroupError("element 0 is not a two-sided identity")
        if not np.array_equal(np.sort(arr, axis=1), np.tile(ident, (n, 1))):
            raise GroupError("a row of the table is not a permutation")
        if not np.array_equal(np.sort(arr, axis=0), np.tile(ident.reshape(-1, 1), (1, n))):
            raise GroupError("a column of the table is not a permutation")
        if n <= ASSOC_CHECK_LIMIT:
            for a in range(n):
                left = arr[arr[a]]          # left[b, c] = (a*b)*c
                right = arr[a][arr]         # right[b, c] = a*(b*c)
                if not np.array_equal(left, right):
                    raise GroupError(f"associativity fails at element {a}")

    # basic arithmetic -----------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return int(self._inv[a])

    def conj(self, g: int, x: int) -> int:
        """g * x * g^-1."""
        return self.mul(self.mul(g, x), self.inv(g))

    def elements(self) -> range:
        return range(self.order)

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            k += 1
        return k

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self._np, self._np.T))

    def subgroup_closure(self, gens: Iterable[int]) -> tuple[int, ...]:
        seen = {0}
        frontier = [0]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    for y in (self.mul(x, g), self.mul(x, self.inv(g))):
                        if y not in seen:
                            seen.add(y)
                            nxt.append(y)
            frontier = nxt
        return tuple(sorted(seen))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self) -> int:
        return hash(self.table)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of `parent` given by its sorted element set."""

    parent: FiniteGroup
    elements: tuple[int, ...]

    def __post_init__(self):
        elems = tuple(sorted(set(self.elements)))
        object.__setattr__(self, "elements", elems)
        g = self.parent
        if 0 not in elems:
            raise GroupError("subgroup does not contain the identity")
        eset = set(elems)
        for a in elems:
            if g.inv(a) not in eset:
                raise GroupError("subgroup not closed under inverses")
            for b in elems:
                if g.mul(a, b) not in eset:
                    raise GroupError("subgroup not closed under multiplication")
        if g.order % len(elems) != 0:
            raise GroupError("subgroup size does not divide group order")

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self) -> int:
        return self.parent.order // self.order


class Homomorphism:
    """Group homomorphism stored as a full element map."""

    __slots__ = ("source", "target", "map", "mono")

    def __init__(self, source: FiniteGroup, target: FiniteGroup, elem_map: Sequence[int], check: bool = True):
        m = tuple(int(x) for x in elem_map)
        if len(m) != source.order:
            raise GroupError("map length does not match source order")
        if m[0] != 0:
            raise GroupError("map does not send identity to identity")
        self.source = source
        self.target = target
        self.map = m
        if check:
            marr = np.array(m, dtype=np.int32)
            lhs = marr[source._np]                      # phi(x*y)
            rhs = target._np[marr[:, None], marr[None, :]]  # phi(x)*phi(y)
            if not np.array_equal(lhs, rhs):
                raise GroupError("map is not a homomorphism")
        self.mono = len(set(m)) == source.order

    def __call__(self, x: int) -> int:
        return self.map[x]

    def compose(self, inner: "Homomorphism") -> "Homomorphism":
        """self o inner."""
        if inner.target is not self.source and inner.target != self.source:
            raise GroupError("homomorphisms not composable")
        return Homomorphism(inner.source, self.target, tuple(self.map[x] for x in inner.map), check=False)

    def image(self) -> Subgroup:
        return Subgroup(self.target, tuple(sorted(set(self.map))))

    def kernel(self) -> Subgroup:
        return Subgroup(self.source, tuple(i for i, v in enumerate(self.map) if v == 0))

    def section(self, y: int) -> int:
        """Preimage of y under an injective map."""
        return self.map.index(y)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Homomorphism)
            and self.map == other.map
            and self.source == other.source
            and self.target == other.target
        )

    def __repr__(self) -> str:
        return f"Homomorphism({self.source.name}->{self.target.name})"


def identity_hom(g: FiniteGroup) -> Homomorphism:
    return Homomorphism(g, g, range(g.order), check=False)


def trivial_hom(source: FiniteGroup, target: FiniteGroup) -> Homomorphism:
    return Homomorphism(source, target, [0] * source.order, check=False)


# canonical constructors ---------------------------------------------------


def cyclic(n: int) -> FiniteGroup:
    """Z/nZ with i*j = (i+j) mod n."""
    if n < 1:
        raise GroupError("cyclic group needs order >= 1")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroup(table, name=f"cyclic({n})", check=False)


def trivial_group() -> FiniteGroup:
    return cyclic(1)


def _perm_mul(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """(p*q)(i) = p[q[i]]; apply q first."""
    return tuple(p[q[i]] for i in range(len(p)))


def _perm_inv(p: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


class PermGroup(FiniteGroup):
    """FiniteGroup carrying the permutation realisation of its elements."""

    __slots__ = ("perms",)

    def __init__(self, perms: Sequence[tuple[int, ...]], name: str):
        perms = list(perms)
        index = {p: i for i, p in enumerate(perms)}
        n = len(perms)
        if n * n > table_cap():
            raise CapacityError(f"permutation group table would exceed cap ({n} elements)")
        table = [[index[_perm_mul(perms[a], perms[b])] for b in range(n)] for a in range(n)]
        super().__init__(table, name=name, check=False)
        self.perms = tuple(perms)


def perm_group(generators: Sequence[Sequence[int]], name: str = "perm") -> PermGroup:
    """Closure of a set of permutations (all of one degree), identity first."""
    gens = [tuple(g) for g in generators]
    if not gens:
        raise GroupError("need at least one generator")
    deg = len(gens[0])
    ident = tuple(range(deg))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = _perm_mul(p, g)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    perms = [ident] + sorted(seen - {ident})
    return PermGroup(perms, name=name)


SYMMETRIC_CAP = 8


def symmetric(k: int, cap: int = SYMMETRIC_CAP) -> PermGroup:
    """Symmetric group on k letters, elements in lexicographic order."""
    if k < 1:
        raise GroupError("symmetric group needs k >= 1")
    if k > cap:
        raise CapacityError(f"symmetric({k}) exceeds cap {cap}")
    if math.factorial(k) ** 2 > table_cap():
        raise CapacityError(f"symmetric({k}) table exceeds table cap")
    perms = list(itertools.permutations(range(k)))
    return PermGroup(perms, name=f"symmetric({k})")


def alternating(k: int) -> PermGroup:
    if k < 3:
        return perm_group([tuple(range(max(k, 1)))], name=f"alternating({k})")
    threecycle = tuple([1, 2, 0] + list(range(3, k)))
    if k == 3:
        gens = [threecycle]
    else:
        rot = tuple(list(range(1, k)) + [0])
        if k % 2 == 0:
            rot = tuple([0] + list(range(2, k)) + [1])
        gens = [threecycle, rot]
    g = perm_group(gens, name=f"alternating({k})")
    if g.order != math.factorial(k) // 2:
        raise GroupError("alternating group construction failed")
    return g


def dihedral(n: int) -> PermGroup:
    """Dihedral group of order 2n acting on n points."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    g = perm_group([rot, ref], name=f"dihedral({n})")
    if g.order != 2 * n:
        raise GroupError("dihedral construction failed")
    return g


def frobenius20() -> PermGroup:
    """The Frobenius group of order 20 acting on 5 points (C5 : C4)."""
    rot = (1, 2, 3, 4, 0)
    mul2 = tuple((2 * i) % 5 for i in range(5))
    g = perm_group([rot, mul2], name="frobenius20")
    if g.order != 20:
        raise GroupError("frobenius20 construction failed")
    return g


@dataclass(frozen=True)
class ProductData:
    group: FiniteGroup
    inject_left: Homomorphism
    inject_right: Homomorphism
    project_left: Homomorphism
    project_right: Homomorphism


def direct_product(g: FiniteGroup, h: FiniteGroup) -> ProductData:
    """Direct product with canonical injections and projections.

    Element (a, b) has index a * h.order + b.
    """
    n, m = g.order, h.order
    if (n * m) ** 2 > table_cap():
        raise CapacityError(f"product of orders {n} and {m} exceeds table cap")
    table = [
        [g.mul(a, a2) * m + h.mul(b, b2) for a2 in range(n) for b2 in range(m)]
        for a in range(n)
        for b in range(m)
    ]
    prod = FiniteGroup(table, name=f"product({g.name},{h.name})", check=False)
    inj_l = Homomorphism(g, prod, [a * m for a in range(n)], check=False)
    inj_r = Homomorphism(h, prod, list(range(m)), check=False)
    proj_l = Homomorphism(prod, g, [i // m for i in range(n * m)], check=False)
    proj_r = Homomorphism(prod, h, [i % m for i in range(n * m)], check=False)
    return ProductData(prod, inj_l, inj_r, proj_l, proj_r)


def product_many(groups: Sequence[FiniteGroup]) -> tuple[FiniteGroup, list[Homomorphism]]:
    """Iterated direct product; returns the group and one injection per factor."""
    if not groups:
        return trivial_group(), []
    acc = groups[0]
    injections = [identity_hom(acc)]
    for h in groups[1:]:
        data = direct_product(acc, h)
        injections = [data.inject_left.compose(inj) for inj in injections]
        injections.append(data.inject_right)
        acc = data.group
    return acc, injections


# abelian groups with full coordinate control ------------------------------


def _factorize(n: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            k = 0
            while n % d == 0:
                n //= d
                k += 1
            out.append((d, k))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def abelian_of_order(n: int) -> FiniteGroup:
    """Product of prime-order cyclic groups realising order n.

    Has a subgroup of every order dividing n, which makes it the default
    carrier for interior vertex groups in synthesized lattices.
    """
    coords = abelian_coordinates(n)
    if not coords:
        return cyclic(1)
    size = n
    if size * size > table_cap():
        raise CapacityError("abelian group exceeds table cap")
    radix = coords

    def encode(tup):
        idx = 0
        for v, p in zip(tup, radix):
            idx = idx * p + v
        return idx

    tuples = list(itertools.product(*[range(p) for p in radix]))
    table = [
        [encode(tuple((a + b) % p for a, b, p in zip(t1, t2, radix))) for t2 in tuples]
        for t1 in tuples
    ]
    return FiniteGroup(table, name=f"abelian({n})", check=False)


def abelian_coordinates(n: int) -> tuple[int, ...]:
    """The primes, with multiplicity, of the coordinates of abelian_of_order."""
    coords: list[int] = []
    for p, k in _factorize(n):
        coords.extend([p] * k)
    return tuple(coords)


def abelian_embedding(d: int, n: int) -> Homomorphism:
    """Canonical embedding abelian_of_order(d) -> abelian_of_order(n) for d | n.

    Uses the first v_p(d) coordinates of each prime block.
    """
    if n % d != 0:
        raise GroupError("embedding needs d | n")
    src = abelian_of_order(d)
    dst = abelian_of_order(n)
    cs, cn = abelian_coordinates(d), abelian_coordinates(n)
    # position of each source coordinate inside destination coordinates
    pos = []
    used: set[int] = set()
    for p in cs:
        for j, q in enumerate(cn):
            if q == p and j not in used:
                used.add(j)
                pos.append(j)
                break
        else:
            raise GroupError("coordinate mismatch")
    mapping = []
    for idx in range(d):
        tup = _abelian_decode(idx, cs)
        out = [0] * len(cn)
        for v, j in zip(tup, pos):
            out[j] = v
        mapping.append(_abelian_encode(out, cn))
    return Homomorphism(src, dst, mapping, check=False)


def _abelian_decode(idx: int, radix: tuple[int, ...]) -> tuple[int, ...]:
    out = []
    for p in reversed(radix):
        out.append(idx % p)
        idx //= p
    return tuple(reversed(out))


def _abelian_encode(tup: Sequence[int], radix: tuple[int, ...]) -> int:
    idx = 0
    for v, p in zip(tup, radix):
        idx = idx * p + v
    return idx


# subgroup machinery -------------------------------------------------------


def subgroup_group(sub: Subgroup, name: str | None = None) -> tuple[FiniteGroup, Homomorphism]:
    """Reindex a subgroup as a standalone group plus its inclusion map."""
    parent = sub.parent
    elems = sub.elements
    index = {e: i for i, e in enumerate(elems)}
    table = [[index[parent.mul(a, b)] for b in elems] for a in elems]
    g = FiniteGroup(table, name=name or f"sub{len(elems)}<{parent.name}", check=False)
    incl = Homomorphism(g, parent, list(elems), check=False)
    return g, incl


def cosets(g: FiniteGroup, h: Subgroup) -> list[tuple[int, ...]]:
    """Left cosets x·H, as sorted tuples, ordered by minimal representative."""
    if h.parent is not g and h.parent != g:
        raise GroupError("subgroup of a different group")
    hset = h.elements
    seen: set[int] = set()
    blocks = []
    for x in g.elements():
        if x in seen:
            continue
        block = tuple(sorted(g.mul(x, y) for y in hset))
        seen.update(block)
        blocks.append(block)
    return blocks


def kernel_core(g: FiniteGroup, h: Subgroup) -> Subgroup:
    """Largest normal subgroup of g contained in h (the core of h)."""
    hset = set(h.elements)
    core = [k for k in h.elements if all(g.conj(x, k) in hset for x in g.elements())]
    return Subgroup(g, tuple(core))


def core_of_image_set(g: FiniteGroup, elems: Iterable[int]) -> frozenset[int]:
    """Core of an arbitrary subgroup-as-set, returned as a set."""
    eset = set(elems)
    return frozenset(k for k in eset if all(g.conj(x, k) in eset for x in g.elements()))


@dataclass(frozen=True)
class FixOrder:
    order: int
    primes: frozenset[int]


def fix_subgroup_order(J: Iterable, q: dict) -> FixOrder:
    """Order and prime divisors of prod_{j in J} S_{q_j - 1}.

    This is the pointwise fixator of a codimension-one cell in the link of a
    top-dimensional vertex; its primes are all strictly below max q_j.
    """
    total = 1
    primes: set[int] = set()
    qmax = 0
    for j in J:
        qj = q[j]
        if qj < 2:
            raise GroupError("q values must be >= 2")
        qmax = max(qmax, qj)
        total *= math.factorial(qj - 1)
        for p, _ in _factorize(math.factorial(qj - 1)):
            primes.add(p)
    if primes and max(primes) >= qmax:
        raise GroupError("prime bound violated")  # cannot happen; defensive
    return FixOrder(total, frozenset(primes))


def isomorphic_brute(g: FiniteGroup, h: FiniteGroup, order_cap: int = 64) -> bool:
    """Brute-force isomorphism test, offered only for small orders."""
    if g.order != h.order:
        return False
    if g.order > order_cap:
        raise CapacityError(f"isomorphism testing capped at order {order_cap}")
    g_orders = [g.element_order(a) for a in g.elements()]
    h_orders = [h.element_order(a) for a in h.elements()]
    if sorted(g_orders) != sorted(h_orders):
        return False
    n = g.order
    mapping = [-1] * n
    mapping[0] = 0
    used = [False] * n
    used[0] = True

    def extend(a: int) -> bool:
        if a == n:
            return True
        candidates = [b for b in range(n) if not used[b] and h_orders[b] == g_orders[a]]
        for b in candidates:
            mapping[a] = b
            used[b] = True
            ok = True
            for x in range(a + 1):
                if mapping[x] < 0:
                    continue
                y = g.mul(x, a)
                z = g.mul(a, x)
                if mapping[y] >= 0 and h.mul(mapping[x], b) != mapping[y]:
                    ok = False
                    break
                if mapping[z] >= 0 and h.mul(b, mapping[x]) != mapping[z]:
                    ok = False
                    break
            if ok and extend(a + 1):
                return True
            mapping[a] = -1
            used[b] = False
        return False

    # fill mapping in index order, constraining products as we go
    def consistent() -> bool:
        for x in range(n):
            for y in range(n):
                if mapping[x] >= 0 and mapping[y] >= 0 and mapping[g.mul(x, y)] >= 0:
                    if h.mul(mapping[x], mapping[y]) != mapping[g.mul(x, y)]:
                        return False
        return True

    result = extend(1)
    return result and consistent()
