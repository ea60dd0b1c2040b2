"""Normalized valuations and their extension to measures on the power set.

On a finite T0 space the point closures separate points, so the Borel
sigma-algebra is the full power set and a measure is just a table of
nonnegative point weights.  Extension from a finite-mass valuation is
Moebius inversion over the specialization poset; a negative weight would
falsify the extension theorem for finite sober spaces and is reported as
a build-stopping anomaly instead of being clamped.  Non-T0 spaces route
through the Kolmogorov quotient (valuations cannot see more), and the
result carries the quotient map as an explicit marker.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    InfiniteMass,
    LawViolation,
    NegativeWeight,
    NotNormalized,
    ShapeMismatch,
)
from .extrat import ExtRat, ONE, ZERO, ext
from .spaces import (
    ContinuousMap,
    FiniteSpace,
    Product,
    bits,
    check_separation,
    kolmogorov_quotient,
    popcount,
    product,
)
from .valuations import (
    LowerSemiFn,
    SimpleSecondOrder,
    Valuation,
    integrate,
    mult_E,
    product_valuation,
    pushforward,
    theta_membership,
    valuation_from_weights,
)


@dataclass(frozen=True)
class ProbValuation:
    """A valuation of total mass one (all values finite, in [0, 1])."""

    underlying: Valuation

    def __post_init__(self):
        nu = self.underlying
        if nu.mass != ONE:
            raise NotNormalized(f"total mass is {nu.mass}, not 1")
        for v in nu.table:
            if v.is_infinite or v > ONE:
                raise NotNormalized(f"open has mass {v} outside [0, 1]")

    @property
    def space(self) -> FiniteSpace:
        return self.underlying.space


@dataclass(frozen=True)
class FiniteMeasure:
    """Point weights, i.e. a measure on the full power set of a T0 space.

    `quotient_map` is set when the measure was produced from a valuation
    on a non-T0 space: the weights then live on the Kolmogorov quotient.
    """

    space: FiniteSpace
    point_weights: tuple[ExtRat, ...]
    quotient_map: ContinuousMap | None = None

    def __post_init__(self):
        object.__setattr__(
            self, "point_weights", tuple(ext(w) for w in self.point_weights)
        )
        if len(self.point_weights) != self.space.n:
            raise ShapeMismatch("one weight per point required")
        for w in self.point_weights:
            if w.is_infinite:
                raise InfiniteMass("point weights must be finite")

    def measure_of(self, subset: int) -> ExtRat:
        """Measure of an arbitrary subset (every subset is Borel here)."""
        if subset & ~self.space.full:
            raise ShapeMismatch("subset has bits outside the point set")
        acc = ZERO
        for x in bits(subset):
            acc = acc + self.point_weights[x]
        return acc

    @property
    def total(self) -> ExtRat:
        return self.measure_of(self.space.full)

    def restriction(self) -> Valuation:
        """The measure restricted to the opens, as a valuation."""
        return valuation_from_weights(self.space, self.point_weights)


def extend_to_measure(nu: Valuation) -> FiniteMeasure:
    """Extend a finite-mass valuation to a measure by Moebius inversion.

    w_x = nu(min_nbhd(x)) - sum of w_y over y strictly above x, solved
    from the maximal points downward; the result is verified to reproduce
    nu on every open.
    """
    if nu.mass.is_infinite:
        raise InfiniteMass("only finite-mass valuations extend to measures")
    space = nu.space
    if not check_separation(space).is_T0:
        quotient, qmap = kolmogorov_quotient(space)
        pushed = pushforward(qmap, nu)
        inner = extend_to_measure(pushed)
        return FiniteMeasure(quotient, inner.point_weights, qmap)
    weights: list[Fraction | None] = [None] * space.n
    for x in sorted(range(space.n), key=lambda x: popcount(space.min_nbhd[x])):
        up = space.min_nbhd[x]
        w = nu.value(up).frac
        for y in bits(up):
            if y != x:
                w -= weights[y]
        if w < 0:
            raise NegativeWeight(
                f"Moebius inversion gives weight {w} at {space.points[x]}"
            )
        weights[x] = w
    measure = FiniteMeasure(space, tuple(ExtRat(w) for w in weights))
    for u in space.opens:
        if measure.measure_of(u) != nu.value(u):
            raise LawViolation("extension does not reproduce the valuation")
    return measure


def integrate_measure(m: FiniteMeasure, g: LowerSemiFn) -> ExtRat:
    """Integral against the measure; equals the valuation integral."""
    if m.space != g.space:
        raise ShapeMismatch("measure and function live on different spaces")
    total = ZERO
    for x in range(m.space.n):
        total = total + m.point_weights[x] * g(x)
    if total != integrate(m.restriction(), g):
        raise LawViolation("measure and valuation integrals disagree")
    return total


def mult_E_measure(xi: SimpleSecondOrder) -> ProbValuation:
    """Measure-level multiplication on molecular probability input.

    Equals the valuation-level multiplication after inclusion, and the
    pointwise mixture of extended measures on every Borel set; both routes
    are computed and compared.
    """
    atoms = [(c, ProbValuation(nu)) for c, nu in xi.atoms]
    total = ZERO
    for c, _ in atoms:
        total = total + c
    if total != ONE:
        raise NotNormalized(f"atom weights sum to {total}, not 1")
    valuation_route = ProbValuation(mult_E(xi))
    extended = [(c, extend_to_measure(p.underlying)) for c, p in atoms]
    mix_space = extended[0][1].space
    measure_route = extend_to_measure(valuation_route.underlying)
    if measure_route.space != mix_space:
        raise LawViolation("mixture and multiplication landed on different spaces")
    for subset in range(1 << mix_space.n):
        mixture = ZERO
        for c, m in extended:
            mixture = mixture + c * m.measure_of(subset)
        if mixture != measure_route.measure_of(subset):
            raise LawViolation(
                "measure-level mixture disagrees with valuation multiplication"
            )
    return valuation_route


def product_measure(
    p: ProbValuation, q: ProbValuation, prod: Product | None = None
) -> ProbValuation:
    """Product of probability valuations; marginals recover the factors."""
    if prod is None:
        prod = product(p.space, q.space)
    result = ProbValuation(product_valuation(p.underlying, q.underlying, prod))
    if pushforward(prod.proj1, result.underlying) != p.underlying:
        raise LawViolation("first marginal does not recover the factor")
    if pushforward(prod.proj2, result.underlying) != q.underlying:
        raise LawViolation("second marginal does not recover the factor")
    return result


def a_topology_membership(p: ProbValuation, u: int, r) -> bool:
    """Membership in the subbasic open O(U, r) of the probability space;
    the subspace topology makes this the restriction of theta(U, r)."""
    return theta_membership(p.underlying, u, r)
