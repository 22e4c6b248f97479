"""Desk-scale checks of polynomial inequalities on the polytorus.

Constant-free inequalities (Khinchine-Steinhaus, the weighted Cauchy-Schwarz
bound behind ``fred1_check``, Parseval) are decided. Inequalities whose
constant is unknown (Kahane-Salem-Zygmund, Bohnenblust-Hille, the mixed-norm
bound of ``fred2_ratio``, the homogeneous weighted Sidon bound) only report
ratios.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..errors import DegenerateDegree, PreconditionViolation
from ..kernel import (
    MultiIndex,
    enumerate_j,
    enumerate_lambda,
    index_to_tuple,
    multinomial,
    tuple_to_index,
)
from ..series import CoeffSeries, TrigPolynomial, bohr_lift, lift_variables
from .norms import abs_values, batch_sup, haar_samples, jackknife_power_mean, sup_norm


def random_homogeneous(m: int, n: int, rng: np.random.Generator) -> TrigPolynomial:
    """m-homogeneous polynomial in ``n`` variables with complex Gaussian coefficients."""
    coeffs = {a: complex(rng.normal(), rng.normal()) for a in enumerate_lambda(m, n)}
    return TrigPolynomial(n, coeffs, homogeneity=m)


def _homogeneity(P: TrigPolynomial) -> int:
    if P.homogeneity is not None:
        return P.homogeneity
    degrees = {a.degree() for a in P.coeffs}
    if len(degrees) != 1:
        raise ValueError("polynomial is not homogeneous")
    return degrees.pop()


@dataclass
class RatioReport:
    name: str
    ratio: float
    numerator: float
    denominator: float
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "ratio": self.ratio, "numerator": self.numerator,
                "denominator": self.denominator, **self.params}


# ---------------------------------------------------------------------------
# Kahane-Salem-Zygmund

@dataclass
class KSZResult:
    m: int
    n: int
    signs: list
    ratio: float
    sup: float
    scale: float
    running_min: list
    trials: int
    seed: int

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n, "ratio": self.ratio, "sup": self.sup,
                "scale": self.scale, "signs": self.signs, "trials": self.trials,
                "seed": self.seed, "running_min_final": self.running_min[-1]}


def ksz_search(m: int, n: int, coeffs: dict | None = None, trials: int = 256,
               seed: int = 0, restarts: int = 8) -> KSZResult:
    """Best of ``trials`` random sign patterns for ``sum eps_a a_a z**a`` over ``Lambda(m, n)``.

    ``ratio = sup / sqrt(n log m sum |a|**2)``; default coefficients are
    ``m!/alpha!``.
    """
    if m < 2:
        raise DegenerateDegree("the bound carries log m, which vanishes for m < 2")
    if n < 1 or trials < 1:
        raise ValueError("need n >= 1 and trials >= 1")
    alphas = list(enumerate_lambda(m, n))
    if coeffs is None:
        coeffs = {a: multinomial(a) for a in alphas}
    a = np.array([complex(coeffs.get(al, 0)) for al in alphas])
    E = np.array([al.dense(n) for al in alphas], dtype=np.int64)
    scale = math.sqrt(n * math.log(m) * float(np.sum(np.abs(a) ** 2)))
    rng = np.random.default_rng(seed)
    signs = rng.choice(np.array([-1, 1]), size=(trials, len(alphas)))
    sups, _ = batch_sup(E, signs * a, restarts, rng)
    ratios = sups / scale
    running = np.minimum.accumulate(ratios)
    best = int(np.argmin(ratios))
    return KSZResult(m, n, signs[best].tolist(), float(ratios[best]), float(sups[best]),
                     scale, running.tolist(), trials, seed)


# ---------------------------------------------------------------------------
# Khinchine-Steinhaus

@dataclass
class KhinchineReport:
    r: float
    s: float
    m: int
    ratio: float
    stderr: float
    bound: float
    violation: bool
    samples: int
    seed: int

    def to_json(self) -> dict:
        return dict(self.__dict__)


def khinchine_ratio(P: TrigPolynomial, r: float, s: float, samples: int = 100_000,
                    seed: int = 0, x: np.ndarray | None = None) -> KhinchineReport:
    """``||P||_s / ||P||_r`` from one Haar sample, checked against ``sqrt(s/r)**m``.

    A violation is flagged only when the ratio exceeds the bound by more than
    three jackknife standard errors of the ratio. Pass ``x = |P|`` on a
    sample to reuse it across exponent pairs.
    """
    if not 1 <= r <= s < math.inf:
        raise ValueError("need 1 <= r <= s < inf")
    m = _homogeneity(P)
    if x is None:
        x = abs_values(P, haar_samples(np.random.default_rng(seed), samples, P.nvars))
    nsamp = len(x)
    xs, xr = x ** s, x ** r
    ts, tr = math.fsum(xs), math.fsum(xr)
    ratio = (ts / nsamp) ** (1 / s) / (tr / nsamp) ** (1 / r)
    loo = ((ts - xs) / (nsamp - 1)) ** (1 / s) / ((tr - xr) / (nsamp - 1)) ** (1 / r)
    se = math.sqrt((nsamp - 1) / nsamp * float(np.sum((loo - loo.mean()) ** 2)))
    bound = math.sqrt(s / r) ** m
    return KhinchineReport(r, s, m, ratio, se, bound, ratio > bound + 3 * se, nsamp, seed)


# ---------------------------------------------------------------------------
# Bohnenblust-Hille and the mixed-norm refinement

def bh_ratio(P: TrigPolynomial, restarts: int = 16, seed: int = 0) -> RatioReport:
    """``l_{2m/(m+1)}`` coefficient norm over the sup-norm."""
    m = _homogeneity(P)
    q = 2 * m / (m + 1)
    num = float(np.sum(np.abs(P.values) ** q) ** (1 / q))
    sup = sup_norm(P, restarts, seed)
    return RatioReport("bh", num / sup.value, num, sup.value,
                       {"m": m, "n": P.nvars, "best_point": sup.best_point})


def fred2_lhs(P: TrigPolynomial, p: int) -> float:
    """Mixed norm: group coefficients by the last ``p`` entries of their sorted tuple,
    take l2 inside each group and ``l_{2p/(p+1)}`` across groups."""
    m = _homogeneity(P)
    if not 1 <= p <= m:
        raise ValueError("need 1 <= p <= m")
    groups: dict = {}
    for alpha, c in P.coeffs.items():
        j = index_to_tuple(alpha)
        key = j[m - p:]
        groups[key] = groups.get(key, 0.0) + abs(c) ** 2
    expo = p / (p + 1)
    total = math.fsum(v ** expo for v in groups.values())
    return total ** ((p + 1) / (2 * p))


def fred2_ratio(P: TrigPolynomial, p: int, restarts: int = 16, seed: int = 0,
                kappa: float = 1.01) -> RatioReport:
    m = _homogeneity(P)
    lhs = fred2_lhs(P, p)
    sup = sup_norm(P, restarts, seed)
    return RatioReport("fred2", lhs / sup.value, lhs, sup.value,
                       {"m": m, "n": P.nvars, "p": p,
                        "reference": (kappa * (1 + 1 / p)) ** m})


# ---------------------------------------------------------------------------
# weighted Cauchy-Schwarz / Holder split (constant-free)

@dataclass
class Fred1Result:
    lhs: float
    rhs: float
    first_factor: float
    second_factor: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs * (1 + 1e-12)

    def to_json(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "first_factor": self.first_factor,
                "second_factor": self.second_factor, "holds": self.holds}


def fred1_check(c: dict, r, rho: float, p: int) -> Fred1Result:
    """Both sides of the split bound for nonnegative ``c`` on sorted tuples of length >= p.

    ``c`` maps sorted tuples (entries in ``1..len(r)``) to nonnegative reals;
    each tuple ``k`` is split as ``(i, j)`` with ``j`` its last ``p`` entries.
    """
    r = [float(v) for v in r]
    n = len(r)
    if not (isinstance(p, int) and p > 1):
        raise PreconditionViolation("p must be an integer > 1")
    if rho <= 0:
        raise PreconditionViolation("rho must be positive")
    if any(v < 0 or v >= rho for v in r):
        raise PreconditionViolation("every r_i must satisfy 0 <= r_i < rho")
    lhs_terms = []
    inner: dict = {}
    for k, ck in c.items():
        k = tuple(k)
        if ck < 0:
            raise PreconditionViolation("coefficients must be nonnegative")
        if len(k) < p or any(a > b for a, b in zip(k, k[1:])) or not all(1 <= v <= n for v in k):
            raise ValueError(f"bad index tuple {k}")
        lhs_terms.append(ck * math.prod(r[v - 1] for v in k))
        j = k[len(k) - p:]
        inner.setdefault(j, []).append(rho ** (2 * (len(k) - p)) * ck * ck)
    lhs = math.fsum(lhs_terms)
    # prefix[l] = prod_{i <= l} 1 / (1 - (r_i/rho)**2)
    prefix = np.cumprod([1.0 / (1.0 - (v / rho) ** 2) for v in r])
    q1 = 2 * p / (p - 1)
    first = math.fsum(
        (math.prod(r[v - 1] for v in j) * math.sqrt(prefix[j[0] - 1])) ** q1
        for j in enumerate_j(p, n)
    ) ** (1 / q1)
    q2 = 2 * p / (p + 1)
    second = math.fsum(math.fsum(v) ** (q2 / 2) for v in inner.values()) ** (1 / q2)
    return Fred1Result(lhs, first * second, first, second)


def random_fred1_instance(rng: np.random.Generator, p: int, n: int, m_max: int,
                          rho: float, density: float = 0.7) -> tuple:
    """Random nonnegative ``c`` on sorted tuples of length ``p..m_max`` and ``r`` in ``[0, rho)``."""
    c = {}
    for m in range(p, m_max + 1):
        for k in enumerate_j(m, n):
            if rng.random() < density:
                c[k] = float(rng.exponential())
    r = rng.uniform(0.0, rho, size=n).tolist()
    return c, r


# ---------------------------------------------------------------------------
# sharp H2 constant

def _exact(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def h2_sharp_constant(z, N: int | None = None) -> tuple:
    """``(empirical_ratio, exact_constant)`` for the extremal ``f = sum z**a w**a``.

    Truncating exponents at ``N`` per variable, ``sum |f^(a) z**a| / ||f||_2``
    equals ``sqrt(prod_j sum_{e<=N} |z_j|**(2e))``; all sums are exact rationals
    and only the final square roots are rounded. ``N=None`` gives the
    untruncated value.
    """
    sq = []
    for v in z:
        v = complex(v) if isinstance(v, complex) else v
        if isinstance(v, complex):
            s = _exact(v.real) ** 2 + _exact(v.imag) ** 2
        else:
            s = _exact(v) ** 2
        if s >= 1:
            raise PreconditionViolation("every |z_j| must be < 1")
        sq.append(s)
    exact = math.prod((1 / (1 - s) for s in sq), start=Fraction(1))
    if N is None:
        truncated = exact
    else:
        truncated = math.prod(((1 - s ** (N + 1)) / (1 - s) for s in sq), start=Fraction(1))
    return math.sqrt(truncated), math.sqrt(exact)


# ---------------------------------------------------------------------------
# homogeneous weighted Sidon ratio

def bcq_weighted_sum(d: CoeffSeries, restarts: int = 16, seed: int = 0) -> RatioReport:
    """``sum |a_n| (log n)**((m-1)/2) / n**((m-1)/(2m))`` over the sup of the Bohr lift."""
    m = d.homogeneity
    if m is None:
        degrees = {d.degree_of(n) for n in d.terms}
        if len(degrees) != 1:
            raise ValueError("series is not homogeneous")
        m = degrees.pop()
    if m < 1:
        raise ValueError("homogeneity must be >= 1")
    num = math.fsum(abs(a) * math.log(n) ** ((m - 1) / 2) / n ** ((m - 1) / (2 * m))
                    for n, a in d.terms.items())
    P = bohr_lift(d, lift_variables(d))
    sup = sup_norm(P, restarts, seed)
    return RatioReport("bcq", num / sup.value, num, sup.value, {"m": m, "terms": len(d)})


__all__ = [
    "KSZResult", "KhinchineReport", "Fred1Result", "RatioReport",
    "random_homogeneous", "ksz_search", "khinchine_ratio", "bh_ratio",
    "fred2_lhs", "fred2_ratio", "fred1_check", "random_fred1_instance",
    "h2_sharp_constant", "bcq_weighted_sum", "MultiIndex", "tuple_to_index",
]
