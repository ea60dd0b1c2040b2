"""Finite topological spaces as bit-set open families / finite preorders.

A finite space is stored as an ordered tuple of point names plus the family
of open sets, each a bit-mask over point indices.  Finite topologies are
exactly the Alexandrov topologies: opens coincide with the up-sets of the
specialization preorder, which is what makes the whole order-theoretic
toolbox below exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import (
    LawViolation,
    NotAPreorder,
    NotATopology,
    NotOpen,
    ShapeMismatch,
)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def bits(mask: int):
    """Indices of set bits, ascending."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def upsets_of_up_masks(n: int, up_masks: Sequence[int]) -> list[int]:
    """All up-sets of the preorder with up(i) = up_masks[i], as bit-masks.

    Walks the lattice of up-sets instead of filtering the power set, so the
    cost is proportional to the number of up-sets.
    """
    # Equivalent points share their up-mask; work on equivalence classes.
    class_of_mask: dict[int, int] = {}
    class_masks: list[int] = []
    class_ups: list[int] = []
    for i in range(n):
        key = up_masks[i]
        if key not in class_of_mask:
            class_of_mask[key] = len(class_masks)
            class_masks.append(0)
            class_ups.append(key)
        class_masks[class_of_mask[key]] |= 1 << i

    k = len(class_masks)
    # strictly-above classes of class c, as a bit-mask over class ids
    above = [0] * k
    for c in range(k):
        for d in range(k):
            if d != c and class_ups[d] & ~class_ups[c] == 0:
                # up(d) subseteq up(c) means c <= d
                above[c] |= 1 << d

    results: list[int] = []
    seen = {0}
    queue = [0]
    while queue:
        cur = queue.pop()
        point_mask = 0
        for c in bits(cur):
            point_mask |= class_masks[c]
        results.append(point_mask)
        for c in range(k):
            if not cur >> c & 1 and above[c] & ~cur == 0:
                nxt = cur | 1 << c
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return sorted(results)


@dataclass(frozen=True)
class FiniteSpace:
    """A finite topological space; immutable after validated construction."""

    points: tuple[str, ...]
    opens: tuple[int, ...]
    min_nbhd: tuple[int, ...] = field(compare=False)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def full(self) -> int:
        return (1 << len(self.points)) - 1

    def index(self, point: str) -> int:
        return self.points.index(point)

    def is_open(self, mask: int) -> bool:
        return mask in self._open_set()

    def require_open(self, mask: int) -> None:
        if not self.is_open(mask):
            raise NotOpen(f"{self.mask_names(mask)} is not open")

    def _open_set(self) -> frozenset:
        # cached via object dict workaround (frozen dataclass)
        cached = getattr(self, "_opens_cache", None)
        if cached is None:
            cached = frozenset(self.opens)
            object.__setattr__(self, "_opens_cache", cached)
        return cached

    def mask_of(self, names: Iterable[str]) -> int:
        mask = 0
        for name in names:
            mask |= 1 << self.index(name)
        return mask

    def mask_names(self, mask: int) -> list[str]:
        return [self.points[i] for i in bits(mask)]

    # --- order-theoretic structure -------------------------------------

    def leq(self, x: int, y: int) -> bool:
        """Specialization: x <= y iff x lies in the closure of {y}."""
        return bool(self.min_nbhd[x] >> y & 1)

    def specialization(self) -> set[tuple[str, str]]:
        return {
            (self.points[x], self.points[y])
            for x in range(self.n)
            for y in range(self.n)
            if self.leq(x, y)
        }

    def up_mask(self, x: int) -> int:
        """Points above x; equals the smallest open neighborhood of x."""
        return self.min_nbhd[x]

    def down_mask(self, x: int) -> int:
        return self.closure(1 << x)

    def closure(self, subset: int) -> int:
        """Smallest closed superset: the specialization down-set of subset."""
        if subset & ~self.full:
            raise ShapeMismatch("subset has bits outside the point set")
        return sum(
            1 << x for x in range(self.n) if self.min_nbhd[x] & subset
        )

    def closed_sets(self) -> list[int]:
        return sorted(self.full & ~u for u in self.opens)

    def is_closed(self, mask: int) -> bool:
        return self.is_open(self.full & ~mask)


def _min_nbhds(n: int, opens: Sequence[int]) -> tuple[int, ...]:
    full = (1 << n) - 1
    result = []
    for x in range(n):
        acc = full
        for u in opens:
            if u >> x & 1:
                acc &= u
        result.append(acc)
    return tuple(result)


def from_opens(points: Sequence[str], opens: Iterable[int]) -> FiniteSpace:
    """Build a space from an explicit open family, validating the axioms."""
    points = tuple(points)
    if len(set(points)) != len(points):
        raise NotATopology("duplicate point names")
    n = len(points)
    full = (1 << n) - 1
    family = sorted(set(opens))
    for u in family:
        if u & ~full:
            raise NotATopology(f"open {u:b} has bits outside the point set")
    fam = set(family)
    if 0 not in fam:
        raise NotATopology("empty set missing from opens")
    if full not in fam:
        raise NotATopology("full point set missing from opens")
    for u in family:
        for v in family:
            if u | v not in fam:
                raise NotATopology(
                    f"not union-closed: {sorted(bits(u))} | {sorted(bits(v))}"
                )
            if u & v not in fam:
                raise NotATopology(
                    f"not intersection-closed: {sorted(bits(u))} & {sorted(bits(v))}"
                )
    min_nbhd = _min_nbhds(n, family)
    space = FiniteSpace(points, tuple(family), min_nbhd)
    # Alexandrov identity: finite topologies are exactly the up-set families
    # of their specialization preorder.  Any mismatch is a bug, not bad input.
    if sorted(upsets_of_up_masks(n, min_nbhd)) != family:
        raise LawViolation("opens do not equal the up-sets of specialization")
    return space


def from_preorder(
    points: Sequence[str], relation: Iterable[tuple[str, str]]
) -> FiniteSpace:
    """Build the Alexandrov space whose opens are the up-sets of a preorder.

    The relation is validated; missing reflexive or transitive pairs are
    rejected with a witness, never silently closed over.
    """
    points = tuple(points)
    n = len(points)
    idx = {p: i for i, p in enumerate(points)}
    if len(idx) != n:
        raise NotAPreorder("duplicate point names", None)
    rel = set()
    for a, b in relation:
        if a not in idx or b not in idx:
            raise NotAPreorder("pair mentions unknown point", (a, b))
        rel.add((idx[a], idx[b]))
    for i in range(n):
        if (i, i) not in rel:
            raise NotAPreorder("not reflexive", (points[i], points[i]))
    for a, b in rel:
        for c, d in rel:
            if b == c and (a, d) not in rel:
                raise NotAPreorder("not transitive", (points[a], points[d]))
    up_masks = [0] * n
    for a, b in rel:
        up_masks[a] |= 1 << b
    family = upsets_of_up_masks(n, up_masks)
    space = FiniteSpace(points, tuple(family), _min_nbhds(n, family))
    if space.specialization() != {(points[a], points[b]) for a, b in rel}:
        raise LawViolation("specialization does not reproduce the input preorder")
    return space


# --- continuous maps ----------------------------------------------------


@dataclass(frozen=True)
class ContinuousMap:
    source: FiniteSpace
    target: FiniteSpace
    assignment: tuple[int, ...]  # per-source-point target index

    def __post_init__(self):
        if len(self.assignment) != self.source.n:
            raise ShapeMismatch("assignment length differs from source size")
        for u in self.target.opens:
            if self.preimage(u) not in self.source._open_set():
                raise NotATopology(
                    f"not continuous: preimage of {self.target.mask_names(u)}"
                    " is not open"
                )

    def __call__(self, x: int) -> int:
        return self.assignment[x]

    def apply_name(self, name: str) -> str:
        return self.target.points[self.assignment[self.source.index(name)]]

    def preimage(self, mask: int) -> int:
        return sum(
            1 << x for x in range(self.source.n) if mask >> self.assignment[x] & 1
        )

    def image(self, mask: int) -> int:
        out = 0
        for x in bits(mask):
            out |= 1 << self.assignment[x]
        return out


def identity_map(space: FiniteSpace) -> ContinuousMap:
    return ContinuousMap(space, space, tuple(range(space.n)))


def compose(g: ContinuousMap, f: ContinuousMap) -> ContinuousMap:
    if f.target != g.source:
        raise ShapeMismatch("maps are not composable")
    return ContinuousMap(
        f.source, g.target, tuple(g.assignment[f.assignment[x]] for x in range(f.source.n))
    )


def constant_map(source: FiniteSpace, target: FiniteSpace, y: int) -> ContinuousMap:
    return ContinuousMap(source, target, (y,) * source.n)


# --- products -----------------------------------------------------------


@dataclass(frozen=True)
class Product:
    space: FiniteSpace
    left: FiniteSpace
    right: FiniteSpace
    proj1: ContinuousMap
    proj2: ContinuousMap

    def pair(self, i: int, j: int) -> int:
        return i * self.right.n + j

    def split(self, p: int) -> tuple[int, int]:
        return divmod(p, self.right.n)

    def rectangle(self, u: int, v: int) -> int:
        """The mask of U x V in the product space."""
        mask = 0
        for i in bits(u):
            for j in bits(v):
                mask |= 1 << self.pair(i, j)
        return mask

    def slice_at_left(self, w: int, i: int) -> int:
        """W_x: the open slice {y : (x, y) in W} of the right factor."""
        return sum(1 << j for j in range(self.right.n) if w >> self.pair(i, j) & 1)

    def slice_at_right(self, w: int, j: int) -> int:
        return sum(1 << i for i in range(self.left.n) if w >> self.pair(i, j) & 1)


def product(a: FiniteSpace, b: FiniteSpace) -> Product:
    """Product space with the rectangle-generated (= product preorder) topology."""
    names = tuple(f"({p},{q})" for p in a.points for q in b.points)
    n = a.n * b.n
    up_masks = [0] * n
    for i in range(a.n):
        for j in range(b.n):
            p = i * b.n + j
            for k in bits(a.min_nbhd[i]):
                for m in bits(b.min_nbhd[j]):
                    up_masks[p] |= 1 << (k * b.n + m)
    family = upsets_of_up_masks(n, up_masks)
    space = FiniteSpace(names, tuple(family), _min_nbhds(n, family))
    proj1 = ContinuousMap(space, a, tuple(i for i in range(a.n) for _ in range(b.n)))
    proj2 = ContinuousMap(space, b, tuple(j for _ in range(a.n) for j in range(b.n)))
    return Product(space, a, b, proj1, proj2)


def rectangle_topology(prod: Product) -> set[int]:
    """Topology generated from rectangles U x V, by closing under union.

    Rectangles are intersection-closed, so finite unions of rectangles are
    already the generated topology.  Used to cross-check `product`.
    """
    base = {
        prod.rectangle(u, v) for u in prod.left.opens for v in prod.right.opens
    }
    family = set(base)
    frontier = set(base)
    while frontier:
        new = set()
        for w in frontier:
            for r in base:
                cand = w | r
                if cand not in family:
                    new.add(cand)
        family |= new
        frontier = new
    return family


# --- separation, quotient, 2-cells, equivalence -------------------------


@dataclass(frozen=True)
class SeparationReport:
    is_T0: bool
    is_T1: bool
    is_sober: bool


def _is_irreducible(space: FiniteSpace, c: int, closed: list[int]) -> bool:
    if c == 0:
        return False
    for a in closed:
        if a & ~c:
            continue
        for b in closed:
            if b & ~c:
                continue
            if a | b == c and a != c and b != c:
                return False
    return True


def check_separation(space: FiniteSpace) -> SeparationReport:
    t0 = all(
        not (space.leq(x, y) and space.leq(y, x))
        for x in range(space.n)
        for y in range(space.n)
        if x != y
    )
    t1 = all(
        not space.leq(x, y) for x in range(space.n) for y in range(space.n) if x != y
    )
    closed = space.closed_sets()
    point_closures = {space.closure(1 << x) for x in range(space.n)}
    sober = all(
        c in point_closures
        for c in closed
        if _is_irreducible(space, c, closed)
    )
    return SeparationReport(t0, t1, sober)


def kolmogorov_quotient(space: FiniteSpace) -> tuple[FiniteSpace, ContinuousMap]:
    """Identify specialization-equivalent points; result is T0."""
    class_of: list[int] = []
    reps: list[int] = []
    key_to_class: dict[int, int] = {}
    for x in range(space.n):
        key = space.min_nbhd[x]
        if key not in key_to_class:
            key_to_class[key] = len(reps)
            reps.append(x)
        class_of.append(key_to_class[key])
    names = []
    for c, rep in enumerate(reps):
        members = [space.points[x] for x in range(space.n) if class_of[x] == c]
        names.append("|".join(members))
    rel = {
        (names[class_of[x]], names[class_of[y]])
        for x in range(space.n)
        for y in range(space.n)
        if space.leq(x, y)
    }
    quotient = from_preorder(names, rel)
    qmap = ContinuousMap(space, quotient, tuple(class_of))
    return quotient, qmap


def le_2cell(f: ContinuousMap, g: ContinuousMap) -> bool:
    """2-cell order: f <= g pointwise in the target's specialization.

    Cross-validated against the preimage-inclusion criterion.
    """
    if f.source != g.source or f.target != g.target:
        raise ShapeMismatch("2-cell comparison needs shared source and target")
    pointwise = all(
        f.target.leq(f.assignment[x], g.assignment[x]) for x in range(f.source.n)
    )
    preimages = all(
        f.preimage(u) & ~g.preimage(u) == 0 for u in f.target.opens
    )
    if pointwise != preimages:
        raise LawViolation("2-cell criteria disagree")
    return pointwise


def is_equivalence(f: ContinuousMap) -> tuple[bool, ContinuousMap | None]:
    """2-categorical equivalence test with an explicit quasi-inverse witness."""
    preimages = [f.preimage(u) for u in f.target.opens]
    lattice_bijective = (
        len(set(preimages)) == len(f.target.opens)
        and len(f.target.opens) == len(f.source.opens)
    )
    if not lattice_bijective:
        return False, None
    image_points = set(f.assignment)
    for y in range(f.target.n):
        if not any(
            f.target.leq(y, fy) and f.target.leq(fy, y) for fy in image_points
        ):
            return False, None
    # quasi-inverse: pick any x with f(x) ~ y
    back = []
    for y in range(f.target.n):
        for x in range(f.source.n):
            fy = f.assignment[x]
            if f.target.leq(y, fy) and f.target.leq(fy, y):
                back.append(x)
                break
    g = ContinuousMap(f.target, f.source, tuple(back))
    for x in range(f.source.n):
        gx = g.assignment[f.assignment[x]]
        if not (f.source.leq(x, gx) and f.source.leq(gx, x)):
            raise LawViolation("quasi-inverse fails g(f(x)) ~ x")
    for y in range(f.target.n):
        fy = f.assignment[g.assignment[y]]
        if not (f.target.leq(y, fy) and f.target.leq(fy, y)):
            raise LawViolation("quasi-inverse fails f(g(y)) ~ y")
    return True, g


def way_below(space: FiniteSpace, v: int, u: int) -> bool:
    """Relative compactness: every open cover of u has a finite subcover of v.

    On a finite space every subfamily of opens is finite, so the condition
    collapses to v being a subset of u; for small open lattices we check the
    cover quantifier literally and compare.
    """
    space.require_open(v)
    space.require_open(u)
    shortcut = v & ~u == 0
    if len(space.opens) <= 8:
        from itertools import combinations

        literal = True
        opens = space.opens
        for r in range(len(opens) + 1):
            for family in combinations(opens, r):
                union = 0
                for w in family:
                    union |= w
                if u & ~union == 0 and v & ~union != 0:
                    literal = False
                    break
            if not literal:
                break
        if literal != shortcut:
            raise LawViolation("way-below cover check disagrees with inclusion")
    return shortcut


def subspace(space: FiniteSpace, mask: int) -> tuple[FiniteSpace, ContinuousMap]:
    """Induced subspace on the points of mask, with its inclusion map."""
    kept = list(bits(mask))
    names = tuple(space.points[x] for x in kept)
    pos = {x: i for i, x in enumerate(kept)}
    family = set()
    for u in space.opens:
        family.add(sum(1 << pos[x] for x in kept if u >> x & 1))
    sub = from_opens(names, family)
    incl = ContinuousMap(sub, space, tuple(kept))
    return sub, incl


# --- canned corpus -------------------------------------------------------


def empty_space() -> FiniteSpace:
    return from_opens((), [0])


def one_point(name: str = "*") -> FiniteSpace:
    return from_opens((name,), [0, 1])


def sierpinski() -> FiniteSpace:
    """Points 0, 1 with opens {}, {1}, {0,1}; 0 <= 1 in specialization."""
    return from_preorder(("0", "1"), [("0", "0"), ("1", "1"), ("0", "1")])


def discrete(n: int) -> FiniteSpace:
    names = tuple(f"d{i}" for i in range(n))
    return from_preorder(names, [(p, p) for p in names])


def indiscrete(n: int) -> FiniteSpace:
    names = tuple(f"i{i}" for i in range(n))
    return from_preorder(names, [(p, q) for p in names for q in names])


def chain(n: int) -> FiniteSpace:
    names = tuple(f"c{i}" for i in range(n))
    rel = [(names[i], names[j]) for i in range(n) for j in range(i, n)]
    return from_preorder(names, rel)


def w_lattice() -> FiniteSpace:
    """The four-point diamond: bottom 0, incomparable x and y, top t."""
    names = ("0", "x", "y", "t")
    rel = {(p, p) for p in names}
    rel |= {("0", "x"), ("0", "y"), ("0", "t"), ("x", "t"), ("y", "t")}
    return from_preorder(names, rel)
