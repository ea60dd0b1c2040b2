"""The hyperspace of closed sets with the lower Vietoris topology.

Points of HX are the closed subsets of X (always including the empty set),
ordered by inclusion; the lower Vietoris topology generated by the sets
Hit(U) coincides with the up-set topology of that order, which the builder
cross-checks on small spaces.  Iterated hyperspaces reuse the same
machinery through inclusion orders on bit-masks, so HHX and HHHX never
materialize a power set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import (
    LawViolation,
    NotAValidFunctional,
    NotClosedFamily,
    ShapeMismatch,
)
from .spaces import (
    ContinuousMap,
    FiniteSpace,
    Product,
    _min_nbhds,
    bits,
    check_separation,
    product,
    upsets_of_up_masks,
)


def inclusion_up_masks(member_masks: Sequence[int]) -> list[int]:
    """up[i] = indices j with member_masks[i] included in member_masks[j]."""
    n = len(member_masks)
    return [
        sum(1 << j for j in range(n) if member_masks[i] & ~member_masks[j] == 0)
        for i in range(n)
    ]


def inclusion_downsets(member_masks: Sequence[int]) -> list[int]:
    """All down-sets of the inclusion order on member_masks, as bit-masks.

    A down-set may add j whenever all members below j are in; this walks the
    down-set lattice and never touches the ambient power set.
    """
    n = len(member_masks)
    # down-sets of <= are up-sets of >=
    rev_up = [
        sum(1 << j for j in range(n) if member_masks[j] & ~member_masks[i] == 0)
        for i in range(n)
    ]
    return upsets_of_up_masks(n, rev_up)


@dataclass(frozen=True)
class ClosedSet:
    space: FiniteSpace
    members: int

    def __post_init__(self):
        if self.members & ~self.space.full:
            raise ShapeMismatch("members outside the point set")
        if self.space.closure(self.members) != self.members:
            raise NotClosedFamily(
                f"{self.space.mask_names(self.members)} is not closed"
            )

    def names(self) -> list[str]:
        return self.space.mask_names(self.members)


@dataclass(frozen=True)
class Hyperspace:
    base: FiniteSpace
    space: FiniteSpace
    members: tuple[int, ...]  # closed-set mask of the base per HX point

    def point_of(self, mask: int) -> int:
        cached = getattr(self, "_index_cache", None)
        if cached is None:
            cached = {m: i for i, m in enumerate(self.members)}
            object.__setattr__(self, "_index_cache", cached)
        return cached[mask]

    def closed_of(self, idx: int) -> ClosedSet:
        return ClosedSet(self.base, self.members[idx])

    def hit_mask(self, u: int) -> int:
        """Hit(U) as a bit-mask over HX points."""
        self.base.require_open(u)
        return sum(1 << i for i, m in enumerate(self.members) if m & u)


def _hyperspace_name(base: FiniteSpace, mask: int) -> str:
    return "{" + ",".join(base.mask_names(mask)) + "}"


def build_hyperspace(x: FiniteSpace, validate: bool | None = None) -> Hyperspace:
    """Construct HX; validates lower-Vietoris = up-sets-of-inclusion when small."""
    closed = tuple(sorted(x.closed_sets()))
    n = len(closed)
    up_masks = inclusion_up_masks(closed)
    family = upsets_of_up_masks(n, up_masks)
    names = tuple(_hyperspace_name(x, c) for c in closed)
    space = FiniteSpace(names, tuple(family), _min_nbhds(n, family))
    hx = Hyperspace(x, space, closed)
    if validate is None:
        validate = x.n <= 4
    if validate:
        generated = _vietoris_topology(hx)
        if generated != set(family):
            raise LawViolation(
                "lower Vietoris topology differs from inclusion up-sets"
            )
        for i in range(n):
            for j in range(n):
                want = closed[i] & ~closed[j] == 0
                if space.leq(i, j) != want:
                    raise LawViolation("HX specialization is not inclusion")
    return hx


def _vietoris_topology(hx: Hyperspace) -> set[int]:
    """Topology generated by the subbasis {Hit(U) : U open}, via closure
    under pairwise intersection then pairwise union."""
    full = hx.space.full
    subbasis = {hx.hit_mask(u) for u in hx.base.opens}
    basis = {full} | subbasis
    frontier = set(basis)
    while frontier:
        new = set()
        for a in frontier:
            for b in subbasis:
                c = a & b
                if c not in basis:
                    new.add(c)
        basis |= new
        frontier = new
    family = {0} | basis
    frontier = set(family)
    while frontier:
        new = set()
        for a in frontier:
            for b in basis:
                c = a | b
                if c not in family:
                    new.add(c)
        family |= new
        frontier = new
    return family


# --- hit coupling and duality -------------------------------------------


def hit(c: ClosedSet, u: int) -> bool:
    """The coupling <C|U>: true iff C intersects the open U."""
    c.space.require_open(u)
    return bool(c.members & u)


@dataclass(frozen=True)
class HitFunctional:
    """A strict, join-preserving boolean functional on the open lattice."""

    space: FiniteSpace
    table: tuple[bool, ...]  # aligned with space.opens

    def __post_init__(self):
        opens = self.space.opens
        if len(self.table) != len(opens):
            raise NotAValidFunctional("table size differs from number of opens")
        lookup = {u: t for u, t in zip(opens, self.table)}
        if lookup[0]:
            raise NotAValidFunctional("not strict", witness=(0,))
        for u in opens:
            for v in opens:
                if lookup[u | v] != (lookup[u] or lookup[v]):
                    raise NotAValidFunctional(
                        "not join-preserving",
                        witness=(
                            self.space.mask_names(u),
                            self.space.mask_names(v),
                        ),
                    )

    def value(self, u: int) -> bool:
        self.space.require_open(u)
        return self.table[self.space.opens.index(u)]


def functional_of_closed(c: ClosedSet) -> HitFunctional:
    return HitFunctional(
        c.space, tuple(bool(c.members & u) for u in c.space.opens)
    )


def closed_of_functional(phi: HitFunctional) -> ClosedSet:
    null = 0
    for u, t in zip(phi.space.opens, phi.table):
        if not t:
            null |= u
    c = ClosedSet(phi.space, phi.space.full & ~null)
    for u in phi.space.opens:
        if hit(c, u) != phi.value(u):
            raise LawViolation("functional does not reproduce its closed set")
    return c


# --- monad structure ------------------------------------------------------


def unit_sigma(space: FiniteSpace, x: int) -> ClosedSet:
    """The unit of H: the closure of the singleton {x}."""
    return ClosedSet(space, space.closure(1 << x))


def push_closed(f: ContinuousMap, c: ClosedSet) -> ClosedSet:
    """Functorial action: the closure of the image of C under f."""
    if c.space != f.source:
        raise ShapeMismatch("closed set does not live on the map's source")
    result = ClosedSet(f.target, f.target.closure(f.image(c.members)))
    for u in f.target.opens:
        if hit(result, u) != hit(c, f.preimage(u)):
            raise LawViolation("push_closed hit identity fails")
    return result


def mult_union(hx: Hyperspace, family) -> ClosedSet:
    """The multiplication of H: closure of the union of a closed family."""
    if isinstance(family, ClosedSet):
        if family.space != hx.space:
            raise ShapeMismatch("family does not live on the hyperspace")
        mask = family.members
    else:
        mask = int(family)
        for i in bits(mask):
            for j, m in enumerate(hx.members):
                if m & ~hx.members[i] == 0 and not mask >> j & 1:
                    raise NotClosedFamily(
                        "family is not down-closed under inclusion"
                    )
    union = 0
    for i in bits(mask):
        union |= hx.members[i]
    result = ClosedSet(hx.base, hx.base.closure(union))
    for u in hx.base.opens:
        if hit(result, u) != bool(mask & hx.hit_mask(u)):
            raise LawViolation("mult_union hit identity fails")
    return result


def sigma_is_embedding(space: FiniteSpace) -> bool:
    """sigma is a subspace embedding exactly when the space is T0."""
    return check_separation(space).is_T0


def unit_closure_membership(space: FiniteSpace, c: ClosedSet) -> bool:
    """Is c in the closure of the image of sigma inside HX?

    Decided by the finite-intersection criterion (all opens hit by c must
    have a common point) and cross-checked against the closure computed
    directly in the inclusion order.
    """
    if c.space != space:
        raise ShapeMismatch("closed set lives on a different space")
    common = space.full
    for u in space.opens:
        if c.members & u:
            common &= u
    criterion = bool(common)
    # direct: cl(sigma(X)) is the inclusion down-set of the point closures
    direct = any(
        c.members & ~space.closure(1 << x) == 0 for x in range(space.n)
    )
    if criterion != direct:
        raise LawViolation("finite-intersection criterion disagrees with closure")
    return criterion


# --- strength and products ------------------------------------------------


def strength_H(prod: Product, x: int, c: ClosedSet, check: bool = True) -> ClosedSet:
    """s(x, C) = closure of {x} x C inside the product space."""
    if c.space != prod.right:
        raise ShapeMismatch("closed set must live on the right factor")
    raw = 0
    for y in bits(c.members):
        raw |= 1 << prod.pair(x, y)
    result = ClosedSet(prod.space, prod.space.closure(raw))
    if check:
        for u in prod.left.opens:
            for v in prod.right.opens:
                want = bool(u >> x & 1) and hit(c, v)
                if hit(result, prod.rectangle(u, v)) != want:
                    raise LawViolation("strength rectangle law fails")
    return result


def costrength_H(prod: Product, c: ClosedSet, y: int, check: bool = True) -> ClosedSet:
    if c.space != prod.left:
        raise ShapeMismatch("closed set must live on the left factor")
    raw = 0
    for x in bits(c.members):
        raw |= 1 << prod.pair(x, y)
    result = ClosedSet(prod.space, prod.space.closure(raw))
    if check:
        for u in prod.left.opens:
            for v in prod.right.opens:
                want = hit(c, u) and bool(v >> y & 1)
                if hit(result, prod.rectangle(u, v)) != want:
                    raise LawViolation("costrength rectangle law fails")
    return result


def product_closed(prod: Product, c: ClosedSet, d: ClosedSet) -> ClosedSet:
    """The monoidal structure map of H: (C, D) -> C x D."""
    if c.space != prod.left or d.space != prod.right:
        raise ShapeMismatch("closed sets do not match the product factors")
    result = ClosedSet(prod.space, prod.rectangle(c.members, d.members))
    for u in prod.left.opens:
        for v in prod.right.opens:
            if hit(result, prod.rectangle(u, v)) != (hit(c, u) and hit(d, v)):
                raise LawViolation("product of closed sets hit law fails")
    return result


def product_closed_composites(
    prod: Product, c: ClosedSet, d: ClosedSet
) -> tuple[ClosedSet, ClosedSet]:
    """Both diagonal composites of the commutativity square, computed by
    unfolding the diagram on the inclusion orders (no iterated topologies).
    """
    left, right = prod.left, prod.right
    closed_left = left.closed_sets()
    closed_right = right.closed_sets()
    # route U . t_sharp . s :
    #   s(C, D) = closure of {C} x D in HX x Y = {(C', y) : C' <= C, y in D};
    #   t(C', y) = closure of C' x {y}; push and take the closed union.
    union1 = 0
    for cp in closed_left:
        if cp & ~c.members:
            continue
        for y in bits(d.members):
            union1 |= prod.rectangle(cp, right.closure(1 << y))
    route1 = ClosedSet(prod.space, prod.space.closure(union1))
    # route U . s_sharp . t : symmetric
    union2 = 0
    for dp in closed_right:
        if dp & ~d.members:
            continue
        for x in bits(c.members):
            union2 |= prod.rectangle(left.closure(1 << x), dp)
    route2 = ClosedSet(prod.space, prod.space.closure(union2))
    return route1, route2


def marginals(prod: Product, e: ClosedSet) -> tuple[ClosedSet, ClosedSet]:
    """Opmonoidal comultiplication: project a closed set to both factors."""
    if e.space != prod.space:
        raise ShapeMismatch("closed set does not live on the product")
    return push_closed(prod.proj1, e), push_closed(prod.proj2, e)


# --- algebras ---------------------------------------------------------------


@dataclass(frozen=True)
class HAlgebraVerdict:
    unit_ok: bool
    square_ok: bool
    map_continuous: bool
    equals_join: bool
    is_join_semilattice: bool
    binary_join_continuous: bool
    closed_join_continuous: bool

    @property
    def is_algebra(self) -> bool:
        return self.unit_ok and self.square_ok and self.map_continuous

    @property
    def characterization(self) -> bool:
        return self.equals_join and self.is_join_semilattice


def join_of_closed(space: FiniteSpace, mask: int) -> int | None:
    """Least upper bound of a closed subset in specialization, if it exists.

    The join of the empty set is the bottom element.
    """
    uppers = [
        z
        for z in range(space.n)
        if all(space.leq(x, z) for x in bits(mask))
    ]
    least = [
        z for z in uppers if all(space.leq(z, w) for w in uppers)
    ]
    if len(least) != 1:
        return None
    return least[0]


def join_algebra_map(space: FiniteSpace) -> list[int] | None:
    """The join-of-closed-sets table on HX points, or None if a join is missing."""
    hx = build_hyperspace(space, validate=False)
    table = []
    for m in hx.members:
        j = join_of_closed(space, m)
        if j is None:
            return None
        table.append(j)
    return table


def check_H_algebra(a_space: FiniteSpace, a_map: Sequence[int]) -> HAlgebraVerdict:
    """Verify the two algebra diagrams for the table a_map : HA -> A and
    compare against the join-semilattice characterization."""
    hx = build_hyperspace(a_space, validate=False)
    if len(a_map) != len(hx.members):
        raise ShapeMismatch("a_map is not a table on the points of HA")
    a_map = tuple(a_map)

    try:
        ContinuousMap(hx.space, a_space, a_map)
        map_continuous = True
    except Exception:
        map_continuous = False

    unit_ok = all(
        a_map[hx.point_of(a_space.closure(1 << x))] == x
        for x in range(a_space.n)
    )

    square_ok = True
    for fam in inclusion_downsets(hx.members):
        union = 0
        for i in bits(fam):
            union |= hx.members[i]
        via_mult = a_map[hx.point_of(a_space.closure(union))]
        image = 0
        for i in bits(fam):
            image |= 1 << a_map[i]
        via_push = a_map[hx.point_of(a_space.closure(image))]
        if via_mult != via_push:
            square_ok = False
            break

    joins = [join_of_closed(a_space, m) for m in hx.members]
    equals_join = all(j is not None for j in joins) and all(
        a_map[i] == joins[i] for i in range(len(joins))
    )

    sep = check_separation(a_space)
    complete = all(j is not None for j in joins)
    binary_join_continuous = False
    closed_join_continuous = False
    if complete:
        try:
            ContinuousMap(hx.space, a_space, tuple(joins))
            closed_join_continuous = True
        except Exception:
            closed_join_continuous = False
        prod = product(a_space, a_space)
        pair_join = []
        ok_pairs = True
        for x in range(a_space.n):
            for y in range(a_space.n):
                j = join_of_closed(
                    a_space, a_space.closure(1 << x | 1 << y)
                )
                if j is None:
                    ok_pairs = False
                    break
                pair_join.append(j)
            if not ok_pairs:
                break
        if ok_pairs:
            try:
                ContinuousMap(prod.space, a_space, tuple(pair_join))
                binary_join_continuous = True
            except Exception:
                binary_join_continuous = False
        if sep.is_sober and binary_join_continuous != closed_join_continuous:
            raise LawViolation(
                "binary-join and closed-join continuity disagree on a sober space"
            )
    is_tcjs = (
        sep.is_T0
        and sep.is_sober
        and complete
        and binary_join_continuous
        and closed_join_continuous
    )
    return HAlgebraVerdict(
        unit_ok,
        square_ok,
        map_continuous,
        equals_join,
        is_tcjs,
        binary_join_continuous,
        closed_join_continuous,
    )
