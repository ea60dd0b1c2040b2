"""Continuous valuations with exact extended-rational values.

A valuation assigns a value in [0, oo] to every open set, strictly,
monotonely, and modularly; on a finite open lattice every directed family
contains its supremum, so these three conditions already give Scott
continuity (that implication is a theorem, not a runtime check).  The
module provides lower integration by layer-cake decomposition, the monad
structure (Dirac unit, molecular multiplication, Kleisli composition),
strength, product valuations with a Fubini cross-check, the weak topology
subbasis with Portmanteau certificates, and order comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    LawViolation,
    NotAKernel,
    NotAPreorder,
    NotLowerSemicontinuous,
    NotModular,
    NotMonotone,
    NotStrict,
    OrderNotClosed,
    PreconditionFailed,
    ShapeMismatch,
)
from .extrat import ExtRat, INF, ONE, ZERO, ext, sgn, signed_sum
from .spaces import ContinuousMap, FiniteSpace, Product, bits, product


@dataclass(frozen=True)
class Valuation:
    """A strict, monotone, modular function on the open lattice.

    `weights` is an optional witness that the valuation is a weighted sum
    of Diracs; operations that can exploit it do, but the table is always
    the source of truth.
    """

    space: FiniteSpace
    table: tuple[ExtRat, ...]  # aligned with space.opens
    weights: tuple[ExtRat, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.table) != len(self.space.opens):
            raise ShapeMismatch("table size differs from number of opens")
        if self.table[0] != ZERO:
            raise NotStrict(f"value on the empty set is {self.table[0]}")

    def value(self, u: int) -> ExtRat:
        self.space.require_open(u)
        return self.table[self._open_index()[u]]

    def _open_index(self) -> dict:
        cached = getattr(self, "_index_cache", None)
        if cached is None:
            cached = {u: i for i, u in enumerate(self.space.opens)}
            object.__setattr__(self, "_index_cache", cached)
        return cached

    @property
    def mass(self) -> ExtRat:
        return self.table[-1] if self.space.n else ZERO

    def is_zero(self) -> bool:
        return all(v == ZERO for v in self.table)


def valuation_from_weights(space: FiniteSpace, weights) -> Valuation:
    """The valuation U -> sum of weights over the points of U."""
    if isinstance(weights, dict):
        weights = tuple(weights.get(p, ZERO) for p in space.points)
    weights = tuple(ext(w) for w in weights)
    if len(weights) != space.n:
        raise ShapeMismatch("one weight per point required")
    table = []
    for u in space.opens:
        acc = ZERO
        for x in bits(u):
            acc = acc + weights[x]
        table.append(acc)
    return Valuation(space, tuple(table), weights)


def validate_valuation(space: FiniteSpace, table) -> Valuation:
    """Check strictness, monotonicity, and modularity, with witnesses."""
    if isinstance(table, dict):
        table = tuple(table[u] for u in space.opens)
    table = tuple(ext(v) for v in table)
    nu = Valuation(space, table)  # raises NotStrict
    for u in space.opens:
        for v in space.opens:
            if u & ~v == 0 and nu.value(u) > nu.value(v):
                raise NotMonotone((space.mask_names(u), space.mask_names(v)))
    for u in space.opens:
        for v in space.opens:
            if nu.value(u | v) + nu.value(u & v) != nu.value(u) + nu.value(v):
                raise NotModular((space.mask_names(u), space.mask_names(v)))
    return nu


def zero_valuation(space: FiniteSpace) -> Valuation:
    return valuation_from_weights(space, (ZERO,) * space.n)


def unit_delta(space: FiniteSpace, x: int) -> Valuation:
    """The Dirac valuation: mass 1 on every open containing x."""
    return valuation_from_weights(
        space, tuple(ONE if y == x else ZERO for y in range(space.n))
    )


# --- lower semicontinuous functions ---------------------------------------


@dataclass(frozen=True)
class LowerSemiFn:
    """A [0, oo]-valued function whose strict upper level sets are open."""

    space: FiniteSpace
    values: tuple[ExtRat, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "values", tuple(ext(v) for v in self.values)
        )
        if len(self.values) != self.space.n:
            raise ShapeMismatch("one value per point required")
        monotone = all(
            self.values[x] <= self.values[y]
            for x in range(self.space.n)
            for y in range(self.space.n)
            if self.space.leq(x, y)
        )
        levels_open = all(
            self.space.is_open(self.upper_level(v))
            for v in set(self.values)
        ) and self.space.is_open(self.upper_level(ZERO))
        if monotone != levels_open:
            raise LawViolation(
                "monotonicity and open-level-set criteria disagree"
            )
        if not monotone:
            raise NotLowerSemicontinuous(
                "values are not monotone for specialization"
            )

    def __call__(self, x: int) -> ExtRat:
        return self.values[x]

    def upper_level(self, r: ExtRat) -> int:
        """The strict upper level set {x : value > r} as a bit-mask."""
        r = ext(r)
        return sum(1 << x for x in range(self.space.n) if self.values[x] > r)

    def weak_level(self, r: ExtRat) -> int:
        """{x : value >= r}; open whenever r is a value (it equals a strict
        level at the next value down)."""
        r = ext(r)
        return sum(1 << x for x in range(self.space.n) if self.values[x] >= r)


def indicator(space: FiniteSpace, u: int, coefficient=ONE) -> LowerSemiFn:
    space.require_open(u)
    c = ext(coefficient)
    return LowerSemiFn(
        space, tuple(c if u >> x & 1 else ZERO for x in range(space.n))
    )


def compose_lsc(g: LowerSemiFn, f: ContinuousMap) -> LowerSemiFn:
    if g.space != f.target:
        raise ShapeMismatch("function does not live on the map's target")
    return LowerSemiFn(f.source, tuple(g.values[f(x)] for x in range(f.source.n)))


def canonical_lsc_family(space: FiniteSpace, max_value: int | None = None):
    """All monotone functions into {0, 1, ..., max_value} (default |X|)."""
    if max_value is None:
        max_value = space.n
    values = [ExtRat(k) for k in range(max_value + 1)]

    def extend(partial):
        x = len(partial)
        if x == space.n:
            yield LowerSemiFn(space, tuple(partial))
            return
        for v in values:
            ok = all(
                (not space.leq(y, x) or partial[y] <= v)
                and (not space.leq(x, y) or v <= partial[y])
                for y in range(x)
            )
            if ok:
                yield from extend(partial + [v])

    yield from extend([])


# --- integration -----------------------------------------------------------


def integrate(nu: Valuation, g: LowerSemiFn) -> ExtRat:
    """The pairing <nu, g> via layer-cake over g's finitely many values.

    Sorting the distinct finite values 0 = v0 < v1 < ..., the integral is
    sum_i (v_i - v_{i-1}) * nu({g >= v_i}) + oo * nu({g = oo}); each weak
    level {g >= v_i} equals the open strict level {g > v_{i-1}}.
    """
    if nu.space != g.space:
        raise ShapeMismatch("valuation and function live on different spaces")
    finite_values = sorted({v.frac for v in g.values if v.is_finite})
    total = ZERO
    prev = Fraction(0)
    for v in finite_values:
        if v == 0:
            continue
        total = total + ExtRat(v - prev) * nu.value(g.weak_level(ExtRat(v)))
        prev = v
    total = total + INF * nu.value(g.weak_level(INF))
    return total


def integrate_simple(nu: Valuation, terms: Iterable[tuple[ExtRat, int]]) -> ExtRat:
    """Pairing with a simple function given as (coefficient, open) terms."""
    total = ZERO
    for c, u in terms:
        total = total + ext(c) * nu.value(u)
    return total


# --- functor and monad ------------------------------------------------------


def pushforward(f: ContinuousMap, nu: Valuation) -> Valuation:
    """f_* nu, the valuation U -> nu(f^{-1} U).

    The integral identity <f_* nu, 1_U> = <nu, 1_U o f> is re-derived per
    open as a cross-check of the two integration routes.
    """
    if nu.space != f.source:
        raise ShapeMismatch("valuation does not live on the map's source")
    table = tuple(nu.value(f.preimage(u)) for u in f.target.opens)
    weights = None
    if nu.weights is not None:
        acc = [ZERO] * f.target.n
        for x, w in enumerate(nu.weights):
            acc[f(x)] = acc[f(x)] + w
        weights = tuple(acc)
    result = Valuation(f.target, table, weights)
    if len(f.target.opens) <= 64:
        for u in f.target.opens:
            lhs = integrate(result, indicator(f.target, u))
            rhs = integrate(nu, compose_lsc(indicator(f.target, u), f))
            if lhs != rhs:
                raise LawViolation("pushforward integral identity fails")
    return result


@dataclass(frozen=True)
class SimpleSecondOrder:
    """A molecular second-order valuation: a finite positive combination of
    Dirac valuations on VX."""

    space: FiniteSpace
    atoms: tuple[tuple[ExtRat, Valuation], ...]

    def __post_init__(self):
        object.__setattr__(
            self,
            "atoms",
            tuple((ext(c), nu) for c, nu in self.atoms),
        )
        for c, nu in self.atoms:
            if not sgn(c):
                raise PreconditionFailed("atom weights must be positive")
            if nu.space != self.space:
                raise ShapeMismatch("atom valuation on a different space")


def mult_E(xi: SimpleSecondOrder) -> Valuation:
    """The multiplication of V on molecular input: sum of c_j * nu_j."""
    table = []
    for i, u in enumerate(xi.space.opens):
        acc = ZERO
        for c, nu in xi.atoms:
            acc = acc + c * nu.table[i]
        table.append(acc)
    weights = None
    if all(nu.weights is not None for _, nu in xi.atoms):
        weights = tuple(
            sum((c * nu.weights[x] for c, nu in xi.atoms), ZERO)
            for x in range(xi.space.n)
        )
    return Valuation(xi.space, tuple(table), weights)


def pairing_with_evaluation(xi: SimpleSecondOrder, g: LowerSemiFn) -> ExtRat:
    """<xi, nu -> <nu, g>>, the other side of the multiplication identity."""
    total = ZERO
    for c, nu in xi.atoms:
        total = total + c * integrate(nu, g)
    return total


@dataclass(frozen=True)
class Kernel:
    """A Kleisli morphism X -> VY: a continuous family of valuations."""

    source: FiniteSpace
    target: FiniteSpace
    table: tuple[Valuation, ...]  # per source point

    def __post_init__(self):
        if len(self.table) != self.source.n:
            raise ShapeMismatch("one valuation per source point required")
        for nu in self.table:
            if nu.space != self.target:
                raise ShapeMismatch("kernel valuation on a different space")
        for u in self.target.opens:
            try:
                LowerSemiFn(
                    self.source, tuple(nu.value(u) for nu in self.table)
                )
            except NotLowerSemicontinuous as exc:
                raise NotAKernel(
                    f"x -> k(x)({self.target.mask_names(u)}) is not"
                    " lower semicontinuous"
                ) from exc

    def __call__(self, x: int) -> Valuation:
        return self.table[x]


def delta_kernel(space: FiniteSpace) -> Kernel:
    return Kernel(space, space, tuple(unit_delta(space, x) for x in range(space.n)))


def kernel_from_map(f: ContinuousMap) -> Kernel:
    return Kernel(
        f.source, f.target, tuple(unit_delta(f.target, f(x)) for x in range(f.source.n))
    )


def kleisli_compose(k: Kernel, h: Kernel) -> Kernel:
    """(k .! h)(x)(U) = <h(x), y -> k(y)(U)>, avoiding second-order values."""
    if h.target != k.source:
        raise ShapeMismatch("kernels are not composable")
    table = []
    for x in range(h.source.n):
        vals = tuple(
            integrate(
                h.table[x],
                LowerSemiFn(k.source, tuple(k.table[y].value(u) for y in range(k.source.n))),
            )
            for u in k.target.opens
        )
        table.append(Valuation(k.target, vals))
    return Kernel(h.source, k.target, tuple(table))


# --- strength and products ---------------------------------------------------


def strength_V(prod: Product, x: int, nu: Valuation) -> Valuation:
    """s(x, nu): the pushforward of nu along y -> (x, y); W -> nu(W_x)."""
    if nu.space != prod.right:
        raise ShapeMismatch("valuation must live on the right factor")
    table = tuple(
        nu.value(prod.slice_at_left(w, x)) for w in prod.space.opens
    )
    weights = None
    if nu.weights is not None:
        weights = tuple(
            nu.weights[j] if i == x else ZERO
            for i in range(prod.left.n)
            for j in range(prod.right.n)
        )
    return Valuation(prod.space, table, weights)


def costrength_V(prod: Product, nu: Valuation, y: int) -> Valuation:
    if nu.space != prod.left:
        raise ShapeMismatch("valuation must live on the left factor")
    table = tuple(
        nu.value(prod.slice_at_right(w, y)) for w in prod.space.opens
    )
    weights = None
    if nu.weights is not None:
        weights = tuple(
            nu.weights[i] if j == y else ZERO
            for i in range(prod.left.n)
            for j in range(prod.right.n)
        )
    return Valuation(prod.space, table, weights)


def _rectangle_cover(prod: Product, w: int) -> list[tuple[int, int]]:
    """Minimal-neighborhood rectangles covering the open w."""
    rects = set()
    for p in bits(w):
        i, j = prod.split(p)
        rects.add((prod.left.min_nbhd[i], prod.right.min_nbhd[j]))
    return sorted(rects)


def product_valuation(nu: Valuation, rho: Valuation, prod: Product | None = None) -> Valuation:
    """The product valuation, determined by (U x V) -> nu(U) * rho(V).

    Every open of the product is a finite union of rectangles; the value
    on such a union is fixed by the n-ary modularity law, i.e. signed
    inclusion-exclusion over nonempty subfamilies.  When both factors carry
    weights the weight-product route is computed too and must agree.
    """
    if prod is None:
        prod = product(nu.space, rho.space)
    if nu.space != prod.left or rho.space != prod.right:
        raise ShapeMismatch("valuations do not match the product factors")
    table = []
    for w in prod.space.opens:
        rects = _rectangle_cover(prod, w)
        m = len(rects)
        terms = []
        for subset in range(1, 1 << m):
            cap_u = nu.space.full
            cap_v = rho.space.full
            for i in bits(subset):
                cap_u &= rects[i][0]
                cap_v &= rects[i][1]
            sign = 1 if bin(subset).count("1") % 2 else -1
            terms.append((sign, nu.value(cap_u) * rho.value(cap_v)))
        table.append(signed_sum(terms))
    weights = None
    if nu.weights is not None and rho.weights is not None:
        weights = tuple(
            nu.weights[i] * rho.weights[j]
            for i in range(prod.left.n)
            for j in range(prod.right.n)
        )
        oracle = valuation_from_weights(prod.space, weights)
        if oracle.table != tuple(table):
            raise LawViolation(
                "inclusion-exclusion disagrees with the weight-product route"
            )
    return Valuation(prod.space, tuple(table), weights)


def product_valuation_composites(
    nu: Valuation, rho: Valuation, prod: Product | None = None
) -> tuple[Valuation, Valuation]:
    """Both diagonal composites of the Fubini square, computed molecularly.

    With rho = sum_y w_y delta_y the first route multiplies out to the
    mixture sum_y w_y * costrength(nu, y); symmetrically for the second.
    Each mixture is cross-checked against the iterated-integral formula
    W -> <nu, x -> rho(W_x)> (resp. its mirror).
    """
    if prod is None:
        prod = product(nu.space, rho.space)
    if nu.weights is None or rho.weights is None:
        raise PreconditionFailed(
            "molecular composites need weight witnesses on both factors"
        )
    atoms1 = tuple(
        (rho.weights[y], costrength_V(prod, nu, y))
        for y in range(rho.space.n)
        if sgn(rho.weights[y])
    )
    route1 = (
        mult_E(SimpleSecondOrder(prod.space, atoms1))
        if atoms1
        else zero_valuation(prod.space)
    )
    atoms2 = tuple(
        (nu.weights[x], strength_V(prod, x, rho))
        for x in range(nu.space.n)
        if sgn(nu.weights[x])
    )
    route2 = (
        mult_E(SimpleSecondOrder(prod.space, atoms2))
        if atoms2
        else zero_valuation(prod.space)
    )
    for w in prod.space.opens:
        iter1 = integrate(
            rho,
            LowerSemiFn(
                rho.space,
                tuple(nu.value(prod.slice_at_right(w, y)) for y in range(rho.space.n)),
            ),
        )
        iter2 = integrate(
            nu,
            LowerSemiFn(
                nu.space,
                tuple(rho.value(prod.slice_at_left(w, x)) for x in range(nu.space.n)),
            ),
        )
        if iter1 != route1.value(w) or iter2 != route2.value(w):
            raise LawViolation(
                "molecular composite disagrees with the iterated integral"
            )
    return route1, route2


# --- the weak topology and Portmanteau certificates -------------------------


def theta_membership(nu: Valuation, u: int, r) -> bool:
    """Membership in the subbasic open theta(U, r) = {nu : nu(U) > r}."""
    r = ext(r)
    if r.is_infinite:
        raise PreconditionFailed("threshold must be finite")
    return nu.value(u) > r


def big_theta_membership(nu: Valuation, f: LowerSemiFn, r) -> bool:
    """Membership in Theta(f, r) = {nu : <nu, f> > r}."""
    r = ext(r)
    if r.is_infinite:
        raise PreconditionFailed("threshold must be finite")
    if nu.space != f.space:
        raise ShapeMismatch("valuation and function live on different spaces")
    return integrate(nu, f) > r


def portmanteau_witness(
    nu: Valuation, f: LowerSemiFn, r
) -> list[tuple[ExtRat, int, ExtRat]]:
    """A certificate (c_i, U_i, r_i) that nu lies in Theta(f, r).

    The pairs satisfy nu(U_i) > r_i >= 0 and sum c_i r_i > r with
    sum c_i 1_{U_i} <= f, so the intersection of the theta(U_i, r_i) is
    contained in Theta(f, r) for every valuation, not just nu.
    """
    r = ext(r)
    if r.is_infinite:
        raise PreconditionFailed("threshold must be finite")
    if not big_theta_membership(nu, f, r):
        raise PreconditionFailed("<nu, f> does not exceed the threshold")
    layers = []  # (c_i, U_i) with nu(U_i) > 0
    finite_values = sorted({v.frac for v in f.values if v.is_finite})
    prev = Fraction(0)
    for v in finite_values:
        if v == 0:
            continue
        u = f.weak_level(ExtRat(v))
        if sgn(nu.value(u)):
            layers.append((ExtRat(v - prev), u))
        prev = v
    inf_level = f.weak_level(INF)
    if sgn(nu.value(inf_level)):
        layers.append((INF, inf_level))
    # an infinite term certifies alone with any sufficient finite r_i
    for c, u in layers:
        if (c * nu.value(u)).is_infinite:
            if c.is_infinite:
                ri = ONE if nu.value(u).is_infinite else nu.value(u) / ExtRat(2)
            else:
                ri = (r + ONE) / c
            return [(c, u, ri)]
    total = ZERO
    for c, u in layers:
        total = total + c * nu.value(u)
    slack = total - r
    coeff_sum = ZERO
    for c, u in layers:
        coeff_sum = coeff_sum + c
    eps = slack / (ExtRat(2) * coeff_sum)
    cert = []
    for c, u in layers:
        drop = min(eps, nu.value(u) / ExtRat(2))
        cert.append((c, u, nu.value(u) - drop))
    return cert


def check_certificate(
    f: LowerSemiFn, r, cert: Sequence[tuple[ExtRat, int, ExtRat]], nu: Valuation | None = None
) -> bool:
    """Independent soundness check of a Portmanteau certificate."""
    r = ext(r)
    space = f.space
    for x in range(space.n):
        g_x = ZERO
        for c, u, _ in cert:
            space.require_open(u)
            if u >> x & 1:
                g_x = g_x + ext(c)
        if g_x > f(x):
            raise LawViolation("certificate's simple function exceeds f")
    weighted = ZERO
    for c, u, ri in cert:
        ri = ext(ri)
        if ri < ZERO or ri.is_infinite:
            raise LawViolation("certificate threshold out of range")
        if nu is not None and not nu.value(u) > ri:
            raise LawViolation("certificate threshold not met by the valuation")
        weighted = weighted + ext(c) * ri
    if not weighted > r:
        raise LawViolation("certificate does not clear the target threshold")
    return True


# --- order comparisons --------------------------------------------------------


@dataclass(frozen=True)
class OrderReport:
    opens_le: bool
    integrals_le: bool
    stochastic_le: bool | None


def _validate_closed_preorder(space: FiniteSpace, relation: set[tuple[int, int]]):
    for x in range(space.n):
        if (x, x) not in relation:
            raise NotAPreorder("not reflexive", (space.points[x],) * 2)
    for a, b in relation:
        for c, d in relation:
            if b == c and (a, d) not in relation:
                raise NotAPreorder(
                    "not transitive", (space.points[a], space.points[d])
                )
    prod = product(space, space)
    graph = 0
    for a, b in relation:
        graph |= 1 << prod.pair(a, b)
    if not prod.space.is_closed(graph):
        raise OrderNotClosed(
            "preorder graph is not closed in the product topology"
        )
    return prod


def order_checks(
    nu: Valuation,
    rho: Valuation,
    aux_preorder: Iterable[tuple[int, int]] | None = None,
    max_value: int | None = None,
) -> OrderReport:
    """Compare nu <= rho on opens, on canonical integrals, and (optionally)
    in the stochastic order of a closed-graph auxiliary preorder.

    The opens order and the integral order coincide; the integral side is
    checked on all indicators plus the finite family of monotone functions
    valued in {0, ..., |X|}, which determines the order by linearity.
    """
    if nu.space != rho.space:
        raise ShapeMismatch("valuations live on different spaces")
    space = nu.space
    opens_le = all(a <= b for a, b in zip(nu.table, rho.table))
    integrals_le = all(
        integrate(nu, indicator(space, u)) <= integrate(rho, indicator(space, u))
        for u in space.opens
    )
    if integrals_le and space.n <= 4:
        integrals_le = all(
            integrate(nu, g) <= integrate(rho, g)
            for g in canonical_lsc_family(space, max_value)
        )
    if opens_le != integrals_le:
        raise LawViolation("opens order disagrees with the integral order")
    stochastic = None
    if aux_preorder is not None:
        relation = {(a, b) for a, b in aux_preorder}
        _validate_closed_preorder(space, relation)
        up_masks = [0] * space.n
        for a, b in relation:
            up_masks[a] |= 1 << b
        stochastic = True
        for u in space.opens:
            is_upper = all(up_masks[x] & ~u == 0 for x in bits(u))
            if is_upper and not nu.value(u) <= rho.value(u):
                stochastic = False
                break
    return OrderReport(opens_le, integrals_le, stochastic)
