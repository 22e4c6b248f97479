import math

import numpy as np
import pytest

from bohrkit.torusnum.sidon import exponent_matrix, sidon_constant, sidon_rhs, sidon_sweep


def test_exponent_matrix():
    E = exponent_matrix(8)
    assert E.shape == (8, 4)
    assert E[3].tolist() == [2, 0, 0, 0] and E[5].tolist() == [1, 1, 0, 0]
    assert E[0].tolist() == [0, 0, 0, 0]


def test_n1_is_exactly_one():
    r = sidon_constant(1, seed=0)
    assert r.estimate == 1.0 and r.rhs is None


def test_independent_characters_give_one():
    for N in (2, 3):
        r = sidon_constant(N, restarts=8, seed=1)
        assert abs(r.estimate - 1) <= 1e-3


def test_n4_matches_quadratic_oracle():
    # a = (1, 2, -1) at z**0, z, z**2 gives |p| <= sqrt(8) on the circle, ratio sqrt(2);
    # a dense grid search over quadratics finds nothing larger
    r = sidon_constant(4, restarts=16, seed=0)
    assert r.estimate > 1 + 1e-3
    assert abs(r.estimate - math.sqrt(2)) <= 1e-3


def test_result_is_certified_and_normalized():
    r = sidon_constant(5, restarts=8, seed=3)
    a = np.array(r.coefficients)
    assert abs(np.linalg.norm(a) - 1) < 1e-12
    assert a[0].real >= 0 and abs(a[0].imag) < 1e-12
    E = exponent_matrix(5)
    value = abs(np.exp(1j * (np.array(r.best_point) @ E.T)) @ a)
    assert value == pytest.approx(r.sup, rel=1e-12)
    assert r.estimate <= math.sqrt(5)


def test_rhs():
    N = 100
    assert sidon_rhs(N) == pytest.approx(
        math.sqrt(N) / math.exp(math.sqrt(math.log(N) * math.log(math.log(N))) / math.sqrt(2)))
    assert sidon_rhs(2) is None


def test_sweep_is_monotone():
    vals = [r.estimate for r in sidon_sweep(5, restarts=8, seed=2)]
    assert all(b >= a - 1e-3 for a, b in zip(vals, vals[1:]))
