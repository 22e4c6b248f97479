"""Norms of trigonometric polynomials on the finite polytorus.

Haar measure on ``T**k`` is sampled with independent uniform angles. The
sup-norm is a multistart coordinate ascent: each coordinate sub-problem is
a one-variable trigonometric polynomial, solved globally on a grid and then
refined by golden-section search. The reported value is attained at the
returned witness, so it is a certified lower bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionMismatch
from ..series import TrigPolynomial

TWO_PI = 2.0 * math.pi
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_CHUNK = 1 << 15


@dataclass(frozen=True)
class TorusPoint:
    angles: tuple

    def __post_init__(self):
        object.__setattr__(self, "angles", tuple(float(a) % TWO_PI for a in self.angles))

    @property
    def w(self) -> np.ndarray:
        return np.exp(1j * np.array(self.angles))

    def __len__(self):
        return len(self.angles)


@dataclass
class NormReport:
    kind: str
    value: float
    seed: int | None = None
    p: float | None = None
    samples: int | None = None
    stderr: float | None = None
    restarts: int | None = None
    best_point: list | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {k: v for k, v in self.__dict__.items() if v is not None and k != "extra"}
        out.update(self.extra)
        return out


def eval_poly(P: TrigPolynomial, w: TorusPoint) -> complex:
    if len(w) != P.nvars:
        raise DimensionMismatch(f"polynomial has {P.nvars} variables, point has {len(w)}")
    return P(np.array(w.angles))


def l2_norm(P: TrigPolynomial) -> NormReport:
    """Exact L2 norm (Parseval)."""
    return NormReport("l2exact", P.coefficient_l2())


def haar_samples(rng: np.random.Generator, samples: int, k: int) -> np.ndarray:
    return rng.uniform(0.0, TWO_PI, size=(samples, k))


def abs_values(P: TrigPolynomial, theta: np.ndarray) -> np.ndarray:
    out = np.empty(len(theta))
    for lo in range(0, len(theta), _CHUNK):
        out[lo:lo + _CHUNK] = np.abs(P(theta[lo:lo + _CHUNK]))
    return out


def jackknife_power_mean(x: np.ndarray, p: float) -> tuple:
    """``(mean x**p)**(1/p)`` and its delete-one jackknife standard error."""
    n = len(x)
    xp = x ** p
    total = math.fsum(xp)
    est = (total / n) ** (1.0 / p)
    loo = ((total - xp) / (n - 1)) ** (1.0 / p)
    se = math.sqrt((n - 1) / n * float(np.sum((loo - loo.mean()) ** 2)))
    return est, se


def lp_norm_mc(P: TrigPolynomial, p: float, samples: int = 100_000, seed: int = 0) -> NormReport:
    if p < 1:
        raise ValueError("p must be >= 1")
    if samples < 1000:
        raise ValueError("need at least 1000 samples")
    rng = np.random.default_rng(seed)
    x = abs_values(P, haar_samples(rng, samples, P.nvars))
    est, se = jackknife_power_mean(x, p)
    return NormReport("lp_mc", est, seed=seed, p=p, samples=samples, stderr=se)


# ---------------------------------------------------------------------------
# sup-norm

def _coordinate_setup(E: np.ndarray):
    setup = []
    for j in range(E.shape[1]):
        col = E[:, j]
        D = int(col.max()) + 1 if len(col) else 1
        if D <= 1:
            setup.append(None)
            continue
        onehot = np.zeros((len(col), D))
        onehot[np.arange(len(col)), col] = 1.0
        G = max(64, 32 * D)
        phi = np.arange(G) * (TWO_PI / G)
        e = np.arange(D)
        grid = np.exp(1j * np.outer(e, phi))
        setup.append((col, onehot, e, phi, grid, TWO_PI / G))
    return setup


def _golden_max(A: np.ndarray, e: np.ndarray, lo: np.ndarray, hi: np.ndarray, iters: int):
    def f(x):
        return np.abs(np.sum(A * np.exp(1j * np.outer(x, e)), axis=1))

    a, b = lo.copy(), hi.copy()
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        left = fc > fd
        # keep [a, d] where c wins, else [c, b]
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = b - _GOLDEN * (b - a)
        new_d = a + _GOLDEN * (b - a)
        c_next = np.where(left, new_c, d)
        d_next = np.where(left, c, new_d)
        probe = np.where(left, new_c, new_d)
        fp = f(probe)
        fc_next = np.where(left, fp, fd)
        fd_next = np.where(left, fc, fp)
        c, d, fc, fd = c_next, d_next, fc_next, fd_next
    x = np.where(fc > fd, c, d)
    return x, np.maximum(fc, fd)


def batch_ascent(E: np.ndarray, C: np.ndarray, theta: np.ndarray, sweeps: int = 60,
                 tol: float = 1e-13, golden_iters: int = 32) -> tuple:
    """Coordinate ascent of ``|sum_t C[b, t] exp(i E[t] . theta[b])|`` for every row ``b``.

    Returns ``(theta, values)``; values never decrease along the ascent.
    """
    E = np.asarray(E, dtype=np.int64)
    theta = np.array(theta, dtype=float)
    setup = _coordinate_setup(E)
    Ef = E.astype(float)

    def values(th):
        return np.abs(np.sum(C * np.exp(1j * (th @ Ef.T)), axis=1))

    current = values(theta)
    for _ in range(sweeps):
        before = current
        for j, st in enumerate(setup):
            if st is None:
                continue
            col, onehot, e, phi, grid, h = st
            rest = theta @ Ef.T - np.outer(theta[:, j], col)
            A = (C * np.exp(1j * rest)) @ onehot
            g = np.argmax(np.abs(A @ grid), axis=1)
            x, fx = _golden_max(A, e, phi[g] - h, phi[g] + h, golden_iters)
            here = np.abs(np.sum(A * np.exp(1j * np.outer(theta[:, j], e)), axis=1))
            better = fx > here
            theta[:, j] = np.where(better, x % TWO_PI, theta[:, j])
        current = values(theta)
        gain = np.max((current - before) / np.maximum(before, 1e-300))
        if gain <= tol:
            break
    return theta, current


def batch_sup(E: np.ndarray, C: np.ndarray, restarts: int, rng: np.random.Generator,
              starts: np.ndarray | None = None) -> tuple:
    """Sup-norm of many polynomials sharing the exponent matrix ``E``.

    ``C`` has one coefficient row per polynomial. Returns ``(values, points)``
    where ``points[b]`` attains ``values[b]``; the first-found witness wins ties.
    """
    C = np.atleast_2d(np.asarray(C, dtype=complex))
    B, k = C.shape[0], E.shape[1]
    theta = rng.uniform(0.0, TWO_PI, size=(B * restarts, k))
    if starts is not None:
        theta[: len(starts)] = starts
    rows = np.repeat(C, restarts, axis=0)
    theta, vals = batch_ascent(E, rows, theta)
    vals = vals.reshape(B, restarts)
    best = np.argmax(vals, axis=1)
    pts = theta.reshape(B, restarts, k)[np.arange(B), best]
    return vals[np.arange(B), best], pts


def sup_norm(P: TrigPolynomial, restarts: int = 16, seed: int = 0,
             starts: np.ndarray | None = None) -> NormReport:
    if restarts < 8:
        raise ValueError("restarts must be >= 8")
    if len(P) == 0:
        return NormReport("sup", 0.0, seed=seed, restarts=restarts, best_point=[0.0] * P.nvars)
    rng = np.random.default_rng(seed)
    vals, pts = batch_sup(P.exponents, P.values[None, :], restarts, rng, starts)
    point = pts[0]
    # report the value recomputed at the witness so it is attained exactly
    value = abs(P(point))
    return NormReport("sup", float(value), seed=seed, restarts=restarts,
                      best_point=[float(t) for t in point])
