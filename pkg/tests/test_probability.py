"""Probability valuations, measure extension, and their interplay."""

import random

import pytest

from topmonads import probability as pb
from topmonads import spaces as sp
from topmonads import valuations as va
from topmonads.errors import (
    InfiniteMass,
    LawViolation,
    NotNormalized,
)
from topmonads.extrat import INF, ONE, ZERO, ExtRat, ext
from topmonads.lawcheck import GenConfig, rand_prob, rand_valuation


def test_prob_valuation_normalization():
    s = sp.sierpinski()
    pb.ProbValuation(va.valuation_from_weights(s, (ext("1/2"), ext("1/2"))))
    with pytest.raises(NotNormalized):
        pb.ProbValuation(va.valuation_from_weights(s, (ONE, ONE)))
    with pytest.raises(NotNormalized):
        pb.ProbValuation(va.zero_valuation(s))


def test_extend_sierpinski_example():
    s = sp.sierpinski()
    nu = va.valuation_from_weights(s, (ext("2/3"), ext("1/3")))
    m = pb.extend_to_measure(nu)
    assert m.point_weights == (ext("2/3"), ext("1/3"))
    assert m.quotient_map is None
    for u in s.opens:
        assert m.measure_of(u) == nu.value(u)


def test_extend_round_trip_randomized():
    rng = random.Random(11)
    cfg = GenConfig(seed=11)
    for space in (sp.sierpinski(), sp.w_lattice(), sp.chain(4), sp.discrete(3)):
        for _ in range(20):
            nu = rand_valuation(rng, cfg, space)
            m = pb.extend_to_measure(nu)
            for u in space.opens:
                assert m.measure_of(u) == nu.value(u)
            assert all(not w.is_infinite for w in m.point_weights)


def test_extend_rejects_infinite_mass():
    s = sp.sierpinski()
    nu = va.valuation_from_weights(s, (INF, ZERO))
    with pytest.raises(InfiniteMass):
        pb.extend_to_measure(nu)


def test_extend_non_t0_routes_through_quotient():
    i2 = sp.indiscrete(2)
    nu = va.valuation_from_weights(i2, (ext("1/2"), ext("1/2")))
    m = pb.extend_to_measure(nu)
    assert m.quotient_map is not None
    assert m.space.n == 1
    assert m.total == ONE


def test_integrate_measure_matches_valuation():
    w = sp.w_lattice()
    nu = va.valuation_from_weights(
        w, (ext("1/4"), ext("1/4"), ext("1/4"), ext("1/4"))
    )
    m = pb.extend_to_measure(nu)
    g = va.LowerSemiFn(w, (ZERO, ONE, ONE, ExtRat(2)))
    assert pb.integrate_measure(m, g) == va.integrate(nu, g)


def test_mult_E_measure():
    s = sp.sierpinski()
    p1 = va.valuation_from_weights(s, (ONE, ZERO))
    p2 = va.valuation_from_weights(s, (ZERO, ONE))
    xi = va.SimpleSecondOrder(s, ((ext("1/2"), p1), (ext("1/2"), p2)))
    result = pb.mult_E_measure(xi)
    assert result.underlying == va.valuation_from_weights(
        s, (ext("1/2"), ext("1/2"))
    )
    bad = va.SimpleSecondOrder(s, ((ext("1/3"), p1),))
    with pytest.raises(NotNormalized):
        pb.mult_E_measure(bad)


def test_mult_E_measure_randomized_agreement():
    rng = random.Random(13)
    cfg = GenConfig(seed=13)
    for space in (sp.sierpinski(), sp.chain(3), sp.w_lattice()):
        for _ in range(10):
            atoms = []
            raw = [rng.randint(1, 3) for _ in range(rng.randint(1, 3))]
            total = sum(raw)
            from fractions import Fraction

            for c in raw:
                atoms.append(
                    (
                        ExtRat(Fraction(c, total)),
                        rand_prob(rng, cfg, space).underlying,
                    )
                )
            xi = va.SimpleSecondOrder(space, tuple(atoms))
            result = pb.mult_E_measure(xi)  # raises LawViolation on mismatch
            assert result.underlying.mass == ONE


def test_product_measure_marginals():
    s = sp.sierpinski()
    p = pb.ProbValuation(va.valuation_from_weights(s, (ext("1/4"), ext("3/4"))))
    q = pb.ProbValuation(va.valuation_from_weights(s, (ext("2/5"), ext("3/5"))))
    prod = sp.product(s, s)
    pm = pb.product_measure(p, q, prod)
    assert va.pushforward(prod.proj1, pm.underlying) == p.underlying
    assert va.pushforward(prod.proj2, pm.underlying) == q.underlying
    # the extension's weights are pointwise products
    weights = pb.extend_to_measure(pm.underlying).point_weights
    wp = pb.extend_to_measure(p.underlying).point_weights
    wq = pb.extend_to_measure(q.underlying).point_weights
    assert weights == tuple(a * b for a in wp for b in wq)


def test_a_topology_membership():
    s = sp.sierpinski()
    p = pb.ProbValuation(va.valuation_from_weights(s, (ext("1/2"), ext("1/2"))))
    one = s.mask_of(["1"])
    assert pb.a_topology_membership(p, one, ext("1/4"))
    assert not pb.a_topology_membership(p, one, ext("3/4"))


def test_finite_measure_basics():
    s = sp.sierpinski()
    m = pb.FiniteMeasure(s, (ext("1/3"), ext("2/3")))
    assert m.total == ONE
    assert m.measure_of(1) == ext("1/3")
    assert m.restriction().value(s.mask_of(["1"])) == ext("2/3")
    with pytest.raises(InfiniteMass):
        pb.FiniteMeasure(s, (INF, ZERO))
