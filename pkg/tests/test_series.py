import math

import numpy as np
import pytest

from bohrkit.errors import BoundExceeded, IndexOverflow
from bohrkit.kernel import MultiIndex, enumerate_lambda, index_to_integer
from bohrkit.series import (
    CoeffSeries,
    TrigPolynomial,
    bohr_lift,
    bohr_transform,
    dirichlet_product,
    dirichlet_value,
    homogeneous_part,
    lift_variables,
    multiplier_weighted_l1,
    power_product,
)


def test_transform_example():
    d = CoeffSeries.dirichlet({1: 3, 2: 1j, 6: -1})
    p = bohr_transform(d)
    assert p == CoeffSeries.power({MultiIndex(): 3, MultiIndex([(1, 1)]): 1j,
                                   MultiIndex([(1, 1), (2, 1)]): -1})
    assert bohr_transform(CoeffSeries.dirichlet()) == CoeffSeries.power()


def test_transform_involution_random(rng):
    keys = rng.choice(np.arange(1, 10**5), size=50, replace=False)
    d = CoeffSeries.dirichlet({int(k): complex(*rng.normal(size=2)) for k in keys})
    assert bohr_transform(bohr_transform(d)) == d


def test_transform_overflow_propagates():
    with pytest.raises(IndexOverflow):
        bohr_transform(CoeffSeries.power({MultiIndex([(1, 70)]): 1}))


def test_homogeneity_validated():
    with pytest.raises(ValueError):
        CoeffSeries.dirichlet({4: 1, 2: 1}, homogeneity=2)
    assert CoeffSeries.dirichlet({4: 1, 6: 1}, homogeneity=2).homogeneity == 2


def test_zero_coefficients_pruned():
    assert len(CoeffSeries.dirichlet({1: 0, 2: 1})) == 1


def test_lift_examples():
    P = bohr_lift(CoeffSeries.dirichlet({1: 2, 2: 5}), 1)
    assert dict(P.coeffs) == {MultiIndex(): 2, MultiIndex.unit(1): 5}
    assert dict(bohr_lift(CoeffSeries.dirichlet({4: 1}), 1).coeffs) == {MultiIndex([(1, 2)]): 1}
    d = CoeffSeries.dirichlet({n: 1 for n in range(1, 9)})
    keys = set(bohr_lift(d, 4).coeffs)
    expected = {MultiIndex(), MultiIndex([(1, 1)]), MultiIndex([(2, 1)]), MultiIndex([(1, 2)]),
                MultiIndex([(3, 1)]), MultiIndex([(1, 1), (2, 1)]), MultiIndex([(4, 1)]),
                MultiIndex([(1, 3)])}
    assert keys == expected
    assert lift_variables(d) == 4
    with pytest.raises(BoundExceeded):
        bohr_lift(d, 3)


def test_lift_agrees_with_vertical_line(rng):
    # w_j = p_j**(-it) turns the lift into the Dirichlet polynomial at s = it
    d = CoeffSeries.dirichlet({int(n): complex(*rng.normal(size=2)) for n in range(1, 60)})
    k = lift_variables(d)
    P = bohr_lift(d, k)
    primes = np.array([2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59])[:k]
    for t in rng.uniform(-50, 50, size=5):
        angles = -t * np.log(primes)
        assert abs(P(angles) - dirichlet_value(d, t)) < 1e-10


def test_homogeneous_part():
    s = CoeffSeries.dirichlet({1: 1, 2: 1, 4: 1})
    assert homogeneous_part(s, 2) == CoeffSeries.dirichlet({4: 1})
    assert len(homogeneous_part(s, 5)) == 0
    sq = CoeffSeries.power({a: c for a, c in zip(enumerate_lambda(2, 2), (1, 2, 1))})
    assert homogeneous_part(sq, 2) == sq


def test_weighted_l1_examples():
    s = CoeffSeries.dirichlet({n: 1 for n in range(1, 5)})
    got = multiplier_weighted_l1(s, lambda n: n ** -0.5)
    assert got == pytest.approx(1 + 2 ** -0.5 + 3 ** -0.5 + 0.5, abs=1e-15)
    assert multiplier_weighted_l1(s, lambda n: 0.0) == 0
    assert multiplier_weighted_l1(s, lambda n: 1.0) == s.l1()


def test_products_agree_under_transform(rng):
    a = CoeffSeries.dirichlet({n: complex(*rng.normal(size=2)) for n in range(1, 13)})
    b = CoeffSeries.dirichlet({n: complex(*rng.normal(size=2)) for n in range(1, 13)})
    bound = 144
    lhs = bohr_transform(dirichlet_product(a, b, bound))
    rhs = power_product(bohr_transform(a), bohr_transform(b),
                        keep=lambda k: index_to_integer(k) <= bound)
    assert set(lhs.terms) == set(rhs.terms)
    for k in lhs.terms:
        assert abs(lhs[k] - rhs[k]) < 1e-12


def test_json_round_trip(rng):
    d = CoeffSeries.dirichlet({int(n): complex(*rng.normal(size=2)) for n in range(1, 30)})
    assert CoeffSeries.from_json(d.to_json()) == d
    p = bohr_transform(d)
    assert CoeffSeries.from_json(p.to_json()) == p
    with pytest.raises(ValueError):
        CoeffSeries.from_json({"form": "dirichlet", "terms": [[2, [1, 0]], [2, [1, 0]]]})


def test_trig_polynomial_eval_and_arrays():
    P = TrigPolynomial(2, {MultiIndex([(1, 1), (2, 1)]): 1})
    assert P(np.zeros(2)) == 1
    Q = TrigPolynomial(1, {MultiIndex([(1, 2)]): 1})
    assert abs(Q(np.array([math.pi / 2])) + 1) < 1e-15
    R = TrigPolynomial.from_arrays([[1, 0], [0, 1], [1, 0]], [1, 2, 3])
    assert dict(R.coeffs) == {MultiIndex.unit(1): 4, MultiIndex.unit(2): 2}
    with pytest.raises(ValueError):
        TrigPolynomial(1, {MultiIndex.unit(2): 1})
