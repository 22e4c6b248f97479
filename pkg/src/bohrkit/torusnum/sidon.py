"""Lower-bound search for the Sidon constant of Dirichlet polynomials of length N.

``S(N) = sup ||a||_1 / ||sum_{n<=N} a_n n^-s||_inf``; the sup-norm equals the
sup of the Bohr lift over the polytorus. The outer search maximizes a smooth
surrogate (an l_p mean over a point pool replacing the sup) with L-BFGS, then
alternates with the sup-norm engine: every sup witness joins the pool as a
cutting plane and the coefficients are re-optimized.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from ..kernel import PrimeTable, default_table, factor_to_index
from .norms import TWO_PI, batch_sup

POOL_SIZE = 4096
P_SCHEDULE = (8, 32, 128, 512, 2048, 8192)
_EPS = 1e-14


def sidon_rhs(N: int) -> float | None:
    """``sqrt(N) / exp((1/sqrt 2) sqrt(log N log log N))``; needs ``log log N > 0``."""
    if N < 3:
        return None
    return math.sqrt(N) / math.exp(math.sqrt(math.log(N) * math.log(math.log(N)) / 2))


def exponent_matrix(N: int, table: PrimeTable | None = None) -> np.ndarray:
    """Row ``n-1`` holds the exponent vector of ``n`` over the first ``pi(N)`` primes."""
    table = table or default_table()
    idx = [factor_to_index(n, table) for n in range(1, N + 1)]
    k = max(1, max(a.max_position() for a in idx))
    return np.array([a.dense(k) for a in idx], dtype=np.int64)


@dataclass
class SidonResult:
    N: int
    estimate: float
    coefficients: list
    sup: float
    l1: float
    best_point: list
    seed: int
    restarts: int
    rhs: float | None
    trivial_upper: float
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "N": self.N, "estimate": self.estimate, "sup": self.sup, "l1": self.l1,
            "coefficients": [[c.real, c.imag] for c in self.coefficients],
            "best_point": self.best_point, "seed": self.seed, "restarts": self.restarts,
            "rhs": self.rhs, "trivial_upper": self.trivial_upper, **self.extra,
        }


def _surrogate(v: np.ndarray, phi: np.ndarray, p: float):
    """``-log ||a||_1 + log ||Phi a||_p`` and its gradient in ``(Re a, Im a)``."""
    N = phi.shape[1]
    a = v[:N] + 1j * v[N:]
    mod = np.sqrt(np.abs(a) ** 2 + _EPS)
    l1 = mod.sum()
    y = phi @ a
    ay = np.abs(y)
    top = ay.max()
    if top == 0:
        return math.inf, np.zeros_like(v)
    w = ay / top
    s = np.sum(w ** p)
    f = -math.log(l1) + math.log(top) + math.log(s / len(y)) / p
    g = phi.conj().T @ (w ** (p - 2) * y) / (top * top * s)
    grad = np.concatenate([g.real - a.real / (mod * l1), g.imag - a.imag / (mod * l1)])
    return f, grad


def _ascend(v: np.ndarray, phi: np.ndarray, schedule) -> np.ndarray:
    v = v / np.linalg.norm(v)
    for p in schedule:
        res = minimize(_surrogate, v, args=(phi, p), jac=True, method="L-BFGS-B",
                       options={"maxiter": 400, "gtol": 1e-10})
        v = res.x / np.linalg.norm(res.x)
    return v


def _normalize(a: np.ndarray) -> np.ndarray:
    """Unit l2 norm, first nonzero coefficient real and positive."""
    nz = np.flatnonzero(np.abs(a) > 0)
    if len(nz):
        a = a * np.exp(-1j * np.angle(a[nz[0]]))
    return a / np.linalg.norm(a)


def _certify(a, E, rng, restarts):
    vals, pts = batch_sup(E, a[None, :], restarts, rng)
    return float(vals[0]), pts[0]


def sidon_constant(N: int, restarts: int = 32, seed: int = 0, init=None,
                   rounds: int = 6, table: PrimeTable | None = None) -> SidonResult:
    """Best certified ratio ``||a||_1 / sup`` found from ``restarts`` random starts.

    ``init`` (complex coefficients, length <= N) is added as a warm start and
    zero-padded. The reported sup is attained at ``best_point``.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if N == 1:
        return SidonResult(1, 1.0, [1 + 0j], 1.0, 1.0, [0.0], seed, restarts, None, 1.0)
    E = exponent_matrix(N, table)
    k = E.shape[1]
    rng = np.random.default_rng([seed, N])
    pool = np.vstack([np.zeros((1, k)), rng.uniform(0, TWO_PI, size=(POOL_SIZE, k))])
    phi = np.exp(1j * (pool @ E.T.astype(float)))

    starts = []
    if init is not None:
        a0 = np.zeros(N, dtype=complex)
        a0[: len(init)] = np.asarray(init, dtype=complex)[:N]
        starts.append(a0)
    starts.append(np.ones(N, dtype=complex))
    while len(starts) < restarts + (init is not None):
        starts.append(rng.normal(size=N) + 1j * rng.normal(size=N))

    def pool_ratio(a):
        return np.abs(a).sum() / np.abs(phi @ a).max()

    cands = []
    for i, a0 in enumerate(starts):
        v0 = np.concatenate([a0.real, a0.imag])
        # a warm start is already near an optimum: refine it at high p only
        schedule = () if (i == 0 and init is not None) else P_SCHEDULE[:-2]
        v = _ascend(v0 / np.linalg.norm(v0), phi, schedule)
        cands.append(v[:N] + 1j * v[N:])
    order = sorted(range(len(cands)), key=lambda i: pool_ratio(cands[i]), reverse=True)[:4]
    if init is not None and 0 not in order:
        order.append(0)
    for i in order:
        v = _ascend(np.concatenate([cands[i].real, cands[i].imag]), phi, P_SCHEDULE[-2:])
        cands[i] = v[:N] + 1j * v[N:]
    if init is not None:
        # the previous optimum, untouched, keeps the sweep nondecreasing
        order = [-1] + order
        cands.append(starts[0])

    best = None
    sup_restarts = max(8, restarts // 2)
    for i in order:
        a = cands[i]
        ph = phi
        for _ in range(rounds if i >= 0 else 0):
            sup, pt = _certify(a, E, rng, sup_restarts)
            pool_max = float(np.abs(ph @ a).max())
            if sup <= pool_max * (1 + 1e-9):
                break
            ph = np.vstack([ph, np.exp(1j * (pt @ E.T.astype(float)))[None, :]])
            v = _ascend(np.concatenate([a.real, a.imag]), ph, P_SCHEDULE[-1:])
            a = v[:N] + 1j * v[N:]
        a = _normalize(a)
        sup, pt = _certify(a, E, rng, sup_restarts)
        l1 = float(np.abs(a).sum())
        ratio = l1 / sup
        if best is None or ratio > best[0]:
            best = (ratio, a, sup, l1, pt)

    # the trivial start a = e_1 certifies S(N) >= 1
    ratio, a, sup, l1, pt = best
    if ratio < 1.0:
        a = np.zeros(N, dtype=complex)
        a[0] = 1
        ratio, sup, l1, pt = 1.0, 1.0, 1.0, np.zeros(k)
    return SidonResult(N, ratio, a.tolist(), sup, l1, [float(t) for t in pt], seed, restarts,
                       sidon_rhs(N), math.sqrt(N))


def sidon_sweep(N_max: int, restarts: int = 32, seed: int = 0) -> list:
    """``sidon_constant`` for ``N = 1..N_max``, warm-starting each from the previous optimum.

    The warm start makes the estimates nondecreasing up to sup-norm noise.
    """
    out = []
    prev = None
    for N in range(1, N_max + 1):
        res = sidon_constant(N, restarts, seed, init=prev)
        out.append(res)
        prev = res.coefficients
    return out
