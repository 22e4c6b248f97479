import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from bohrkit.errors import DegenerateDegree, PreconditionViolation
from bohrkit.kernel import MultiIndex, enumerate_j, enumerate_lambda, multinomial, tuple_to_index
from bohrkit.series import CoeffSeries, TrigPolynomial
from bohrkit.torusnum.checks import (
    bcq_weighted_sum,
    bh_ratio,
    fred1_check,
    fred2_lhs,
    fred2_ratio,
    h2_sharp_constant,
    khinchine_ratio,
    ksz_search,
    random_fred1_instance,
    random_homogeneous,
)


# -- KSZ ----------------------------------------------------------------------

def test_ksz_rejects_degree_one():
    with pytest.raises(DegenerateDegree):
        ksz_search(1, 3)


def test_ksz_lambda22_against_exhaustive_oracle():
    res = ksz_search(2, 2, trials=64, seed=0)
    assert res.ratio <= 4
    alphas = list(enumerate_lambda(2, 2))
    a = np.array([multinomial(al) for al in alphas], dtype=float)
    g = np.linspace(0, 2 * math.pi, 721)
    T1, T2 = np.meshgrid(g, g)
    mon = [np.exp(1j * (e[0] * T1 + e[1] * T2)) for e in (al.dense(2) for al in alphas)]
    scale = math.sqrt(2 * math.log(2) * np.sum(a ** 2))
    best = min(np.abs(sum(s * c * m for s, c, m in zip(signs, a, mon))).max()
               for signs in itertools.product((-1, 1), repeat=3)) / scale
    # 64 trials over 8 patterns hit the best one; the grid sup is a lower bound
    assert res.ratio == pytest.approx(best, rel=1e-4)
    assert res.ratio >= best - 1e-12


def test_ksz_single_coefficient():
    a = MultiIndex([(1, 3)])
    res = ksz_search(3, 1, coeffs={a: 2.5}, trials=4, seed=0)
    assert res.ratio == pytest.approx(2.5 / math.sqrt(math.log(3) * 2.5 ** 2), rel=1e-12)


def test_ksz_running_minimum():
    res = ksz_search(2, 3, trials=32, seed=5)
    assert all(b <= a for a, b in zip(res.running_min, res.running_min[1:]))
    assert res.running_min[-1] == res.ratio


# -- Khinchine-Steinhaus --------------------------------------------------------

def test_khinchine_trivial_cases(rng):
    P = TrigPolynomial(1, {MultiIndex([(1, 3)]): 1})
    rep = khinchine_ratio(P, 1, 4, samples=2000, seed=0)
    assert rep.ratio == pytest.approx(1, abs=1e-12) and not rep.violation
    Q = random_homogeneous(2, 3, rng)
    assert khinchine_ratio(Q, 2, 2, samples=2000, seed=0).ratio == pytest.approx(1, abs=1e-12)
    with pytest.raises(ValueError):
        khinchine_ratio(Q, 2, 1)


def test_khinchine_small_batch(rng):
    for t in range(20):
        P = random_homogeneous(int(rng.integers(1, 5)), int(rng.integers(1, 5)), rng)
        for r, s in ((1, 2), (2, 4)):
            rep = khinchine_ratio(P, r, s, samples=20_000, seed=t)
            assert not rep.violation
            assert rep.ratio >= 1 - 1e-12


# -- Bohnenblust-Hille ------------------------------------------------------------

def test_bh_trivial_cases():
    assert bh_ratio(TrigPolynomial(2, {MultiIndex([(1, 1), (2, 2)]): 3j})).ratio == pytest.approx(1)
    P = TrigPolynomial(2, {MultiIndex.unit(1): 2, MultiIndex.unit(2): 3})
    assert bh_ratio(P).ratio == pytest.approx(1, abs=1e-9)


def test_bh_random_batch_finite(rng):
    ratios = [bh_ratio(random_homogeneous(2, 3, rng), seed=t).ratio for t in range(4)]
    assert all(0 < r < 10 for r in ratios)


# -- weighted Cauchy-Schwarz split -------------------------------------------------

def _fred1_oracle(c, r, rho, p, m_max):
    """Both sides evaluated term by term with nested loops."""
    n = len(r)
    lhs = math.fsum(v * math.prod(r[i - 1] for i in k) for k, v in c.items())
    f1, f2 = [], []
    for j in itertools.product(range(1, n + 1), repeat=p):
        if list(j) != sorted(j):
            continue
        w = math.prod(1 / (1 - (r[l - 1] / rho) ** 2) for l in range(1, j[0] + 1))
        f1.append((math.prod(r[v - 1] for v in j) * math.sqrt(w)) ** (2 * p / (p - 1)))
        inner = []
        for m in range(p, m_max + 1):
            for i in itertools.product(range(1, n + 1), repeat=m - p):
                if list(i) != sorted(i) or (i and i[-1] > j[0]):
                    continue
                inner.append(rho ** (2 * (m - p)) * c.get(i + j, 0.0) ** 2)
        f2.append(math.fsum(inner) ** (p / (p + 1)))
    rhs = math.fsum(f1) ** ((p - 1) / (2 * p)) * math.fsum(f2) ** ((p + 1) / (2 * p))
    return lhs, rhs


def test_fred1_matches_literal_oracle(rng):
    for t in range(30):
        p = 2 + t % 2
        n = int(rng.integers(1, 4))
        rho = (0.7, 0.9)[t % 2]
        c, r = random_fred1_instance(rng, p, n, 4, rho)
        got = fred1_check(c, r, rho, p)
        lhs, rhs = _fred1_oracle(c, r, rho, p, 4)
        assert got.lhs == pytest.approx(lhs, rel=1e-12, abs=1e-300)
        assert got.rhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)
        assert got.holds


def test_fred1_trivial_cases():
    res = fred1_check({}, [0.3, 0.2], 0.9, 2)
    assert (res.lhs, res.rhs) == (0, 0)
    res = fred1_check({(1, 2): 1.5}, [0.3, 0.5], 0.9, 2)
    assert res.lhs <= res.rhs * (1 + 1e-12)


def test_fred1_preconditions():
    with pytest.raises(PreconditionViolation):
        fred1_check({(1, 1): 1.0}, [0.9], 0.9, 2)
    with pytest.raises(PreconditionViolation):
        fred1_check({(1, 1): 1.0}, [0.1], 0.9, 1)
    with pytest.raises(PreconditionViolation):
        fred1_check({(1, 1): -1.0}, [0.1], 0.9, 2)


# -- mixed-norm refinement ---------------------------------------------------------

def test_fred2_reduces_to_bh_norm_when_p_equals_m(rng):
    P = random_homogeneous(3, 3, rng)
    q = 2 * 3 / 4
    bh = float(np.sum(np.abs(P.values) ** q) ** (1 / q))
    assert fred2_lhs(P, 3) == pytest.approx(bh, rel=1e-12)


def test_fred2_hand_split_m2_p1():
    # coefficients on (1,1), (1,2), (2,2): groups by last entry {1: (1,1)} and {2: (1,2), (2,2)}
    P = TrigPolynomial(2, {tuple_to_index((1, 1)): 1, tuple_to_index((1, 2)): 2,
                           tuple_to_index((2, 2)): 2})
    expected = (1 ** 1 + math.sqrt(8) ** 1) ** 1
    assert fred2_lhs(P, 1) == pytest.approx(expected, rel=1e-14)
    single = TrigPolynomial(2, {tuple_to_index((1, 2)): 1})
    rep = fred2_ratio(single, 1)
    assert rep.numerator == pytest.approx(1) and rep.ratio <= 1 + 1e-9
    assert rep.params["reference"] == pytest.approx((1.01 * 2) ** 2)


def test_fred2_against_exhaustive_split_oracle(rng):
    for m in (2, 3):
        P = random_homogeneous(m, 3, rng)
        for p in range(1, m + 1):
            groups = {}
            for j in enumerate_j(m, 3):
                c = P.coeffs.get(tuple_to_index(j), 0)
                groups.setdefault(j[m - p:], []).append(abs(c) ** 2)
            oracle = sum(sum(v) ** (p / (p + 1)) for v in groups.values()) ** ((p + 1) / (2 * p))
            assert fred2_lhs(P, p) == pytest.approx(oracle, rel=1e-12)


# -- sharp H2 constant ----------------------------------------------------------------

def test_h2_examples():
    assert h2_sharp_constant([0.5])[1] == pytest.approx(math.sqrt(4 / 3), rel=1e-15)
    assert h2_sharp_constant([0.0], 5) == (1.0, 1.0)
    ratio, const = h2_sharp_constant([Fraction(1, 2), Fraction(1, 3)], 30)
    assert const == pytest.approx(math.sqrt(4 / 3 * 9 / 8), rel=1e-15)
    assert abs(ratio - const) / const <= 0.01
    with pytest.raises(PreconditionViolation):
        h2_sharp_constant([1.0])
    with pytest.raises(PreconditionViolation):
        h2_sharp_constant([0.6 + 0.8j])


def test_h2_matches_explicit_extremal_function():
    z = np.array([0.5, 1 / 3 + 0.2j])
    N = 4
    alphas = list(itertools.product(range(N + 1), repeat=2))
    coef = np.array([np.prod(z ** np.array(a)) for a in alphas])
    # f^(alpha) = z^alpha: sum |f^(alpha) z^alpha| / ||f||_2
    ratio = np.sum(np.abs(coef * coef)) / np.sqrt(np.sum(np.abs(coef) ** 2))
    assert h2_sharp_constant(z, N)[0] == pytest.approx(ratio, rel=1e-13)


def test_h2_ratio_increases_to_constant():
    vals = [h2_sharp_constant([0.9, 0.5], N)[0] for N in (1, 5, 20, 80)]
    const = h2_sharp_constant([0.9, 0.5])[1]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    assert vals[-1] <= const and const - vals[-1] < 1e-4


# -- homogeneous weighted Sidon ratio ------------------------------------------------

def test_bcq_trivial_cases():
    rep = bcq_weighted_sum(CoeffSeries.dirichlet({12: 2 - 1j}, homogeneity=3))
    assert rep.ratio == pytest.approx(math.log(12) / 12 ** (1 / 3), rel=1e-9)
    d = CoeffSeries.dirichlet({2: 1, 3: 1, 5: 1}, homogeneity=1)
    assert bcq_weighted_sum(d).ratio == pytest.approx(1, abs=1e-9)
