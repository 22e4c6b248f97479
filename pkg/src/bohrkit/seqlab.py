"""Positive sequences: rearrangements, the b-functional and space membership.

Named families carry their asymptotic classification in closed form; raw
samples only ever produce finite-horizon evidence. Nothing here tries to
decide a limit from data.

Families (``z_n`` for ``n >= 1``):

``powerlog(c, a, b)``
    ``c * n**-a * log(n + 1)**b``
``primepower(c, a)``
    ``c * p_n**-a`` with ``p_n`` the n-th prime
``counterexample25(a)``
    block sequence ``r`` built on ``n_k = a**(k**2 (k+1))``; lies outside
    the weak-l2 space yet has b-functional below one
``conversegap``
    nonincreasing ``r`` with ``r_1**2 + ... + r_n**2 = log n * exp(log log n / log n)``
    for ``n >= 4``
``finite(values)``
    the given values followed by exact zeros
``sampled(values)``
    observed values with an unknown tail
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import BadBase, HorizonTooSmall
from .kernel import first_primes

IN, OUT, UNDECIDED = "IN", "OUT", "UNDECIDED"
ANALYTIC, NUMERIC = "analytic", "numeric"
NAMED_FAMILIES = ("powerlog", "primepower", "counterexample25", "conversegap", "finite")
FAMILIES = NAMED_FAMILIES + ("sampled",)
#: Families are monotone from this index on.
BURN_IN = 3
#: Block sums of the converse-gap sequence start here; earlier terms are flat.
_CONVERSE_START = 4


def _rational(x) -> Fraction:
    """Exact rational for ``x``; floats that round-trip a small fraction snap to it."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, int):
        return Fraction(x)
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"parameter must be finite, got {x}")
    snapped = Fraction(x).limit_denominator(10**6)
    return snapped if float(snapped) == x else Fraction(x)


def _fmt(q: Fraction):
    # JSON-friendly: ints stay ints, dyadic/short fractions become floats
    return int(q) if q.denominator == 1 else float(q)


def decreasing_rearrangement(z: Sequence[float]) -> np.ndarray:
    """Nonincreasing reordering of ``|z|``."""
    return -np.sort(-np.abs(np.asarray(z, dtype=float)))


def _converse_partial(n: np.ndarray) -> np.ndarray:
    L = np.log(n)
    return L * np.exp(np.log(L) / L)


class SequenceSpec:
    """A nonnegative sequence given by a named family or by samples."""

    def __init__(self, family: str, params: dict | None = None,
                 values: Sequence[float] | None = None, asymptotic_tag: str | None = None):
        if family not in FAMILIES:
            raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
        self.family = family
        self.params = {k: _rational(v) for k, v in (params or {}).items()}
        self.asymptotic_tag = asymptotic_tag
        self._values = None
        if family in ("finite", "sampled"):
            if values is None:
                raise ValueError(f"{family} sequences need values")
            arr = np.asarray(values, dtype=float)
            if arr.ndim != 1 or np.any(~np.isfinite(arr)):
                raise ValueError("values must be a finite 1-d sequence")
            self._values = arr
            self._values.setflags(write=False)
        self._validate()

    # -- constructors --------------------------------------------------------
    @classmethod
    def powerlog(cls, c=1, a=Fraction(1, 2), b=0) -> "SequenceSpec":
        return cls("powerlog", {"c": c, "a": a, "b": b})

    @classmethod
    def prime_power(cls, c=1, a=Fraction(1, 2)) -> "SequenceSpec":
        return cls("primepower", {"c": c, "a": a})

    @classmethod
    def counterexample25(cls, a=2) -> "SequenceSpec":
        return cls("counterexample25", {"a": a})

    @classmethod
    def converse_gap(cls) -> "SequenceSpec":
        return cls("conversegap")

    @classmethod
    def finite(cls, values) -> "SequenceSpec":
        return cls("finite", values=values)

    @classmethod
    def sampled(cls, values) -> "SequenceSpec":
        return cls("sampled", values=values)

    def _validate(self):
        p = self.params
        need = {"powerlog": ("c", "a", "b"), "primepower": ("c", "a"),
                "counterexample25": ("a",)}.get(self.family, ())
        missing = [k for k in need if k not in p]
        if missing:
            raise ValueError(f"{self.family} needs parameters {missing}")
        if "c" in p and p["c"] < 0:
            raise ValueError("c must be nonnegative")
        if self.family == "powerlog" and (p["a"] < 0 or (p["a"] == 0 and p["b"] > 0)):
            raise ValueError("powerlog needs a > 0, or a = 0 with b <= 0, to stay bounded")
        if self.family == "primepower" and p["a"] < 0:
            raise ValueError("primepower needs a >= 0")
        if self.family == "counterexample25":
            a = p["a"]
            if a.denominator != 1 or a < 2:
                raise BadBase(f"counterexample base must be an integer >= 2, got {a}")

    @property
    def named(self) -> bool:
        return self.family != "sampled"

    def __repr__(self):
        if self._values is not None:
            return f"SequenceSpec({self.family!r}, len={len(self._values)})"
        args = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"SequenceSpec({self.family!r}, {args})"

    def __eq__(self, other):
        if not isinstance(other, SequenceSpec):
            return NotImplemented
        return self.to_json() == other.to_json()

    # -- evaluation ------------------------------------------------------------
    def available(self) -> float:
        """Number of terms that can be evaluated (``inf`` for named families)."""
        return len(self._values) if self.family == "sampled" else math.inf

    def values(self, n: int) -> np.ndarray:
        """First ``n`` terms ``z_1..z_n`` as float64."""
        if n < 0:
            raise ValueError("n must be nonnegative")
        if n > self.available():
            raise ValueError(f"only {self.available()} sampled values, asked for {n}")
        j = np.arange(1, n + 1, dtype=float)
        p = self.params
        if self.family == "powerlog":
            c, a, b = float(p["c"]), float(p["a"]), float(p["b"])
            return c * j ** (-a) * np.log1p(j) ** b
        if self.family == "primepower":
            return float(p["c"]) * first_primes(n).astype(float) ** (-float(p["a"]))
        if self.family == "counterexample25":
            return np.sqrt(self._counterexample_squares(n))
        if self.family == "conversegap":
            return np.sqrt(self._converse_squares(n))
        out = np.zeros(n)
        m = min(n, len(self._values))
        out[:m] = self._values[:m]
        return out

    def __call__(self, j: int) -> float:
        return float(self.values(j)[-1])

    def boundaries(self, upto: float) -> list:
        """Block boundaries ``n_k`` (k = 1, 2, ...) of the counterexample, up to and
        including the first one at or beyond ``upto``."""
        a = int(self.params["a"])
        out, k = [], 1
        while True:
            out.append(a ** (k * k * (k + 1)))
            if out[-1] >= upto:
                return out
            k += 1

    def square_exact(self, j: int) -> Fraction:
        """Exact ``r_j**2`` for the counterexample family."""
        nk = self.boundaries(j)
        if j <= nk[0]:
            return Fraction(1, nk[0])
        k = next(i for i, b in enumerate(nk, start=1) if j <= b) - 1
        return Fraction(k + 1, nk[k])

    def _counterexample_squares(self, n):
        nk = self.boundaries(n)
        sq = np.empty(n)
        lo = 0
        for k, hi in enumerate(nk):
            hi_c = min(hi, n)
            # block k (0-based) covers (n_k, n_{k+1}]; block 0 is [1, n_1]
            sq[lo:hi_c] = (k + 1) / hi
            lo = hi_c
            if lo >= n:
                break
        return sq

    def _converse_squares(self, n):
        if n == 0:
            return np.empty(0)
        j0 = _CONVERSE_START
        sq = np.empty(n)
        head = _converse_partial(np.array([float(j0)]))[0] / j0
        sq[: min(n, j0)] = head
        if n > j0:
            j = np.arange(j0 + 1, n + 1, dtype=float)
            sq[j0:] = _converse_partial(j) - _converse_partial(j - 1)
        return sq

    def sup(self) -> float:
        """``sup_j |z_j|`` over the whole sequence (observed part for samples)."""
        p = self.params
        if self.family == "powerlog":
            c, a, b = float(p["c"]), float(p["a"]), float(p["b"])
            if c == 0:
                return 0.0
            if b <= 0:
                return c * math.log(2) ** b
            # unimodal: x**-a log(x+1)**b peaks before exp(b/a) + 1
            top = int(min(max(10.0, 4 * math.exp(min(b / a, 40.0)) + 10), 10**7))
            return float(np.max(self.values(top)))
        if self.family == "primepower":
            return float(p["c"]) * 2.0 ** (-float(p["a"]))
        if self.family == "counterexample25":
            return 1.0 / float(p["a"])
        if self.family == "conversegap":
            return float(np.sqrt(self._converse_squares(1)[0]))
        return float(np.max(np.abs(self._values))) if len(self._values) else 0.0

    def scaled(self, factor) -> "SequenceSpec":
        """Pointwise multiple for families that are closed under scaling."""
        factor = _rational(factor)
        if self.family in ("powerlog", "primepower"):
            params = dict(self.params)
            params["c"] = params["c"] * factor
            return SequenceSpec(self.family, params)
        if self.family in ("finite", "sampled"):
            return SequenceSpec(self.family, values=self._values * float(factor))
        raise ValueError(f"{self.family} is not closed under scaling")

    # -- serialization -----------------------------------------------------------
    def to_json(self) -> dict:
        out = {"family": self.family}
        out.update({k: _fmt(v) for k, v in self.params.items()})
        if self._values is not None:
            out["values"] = self._values.tolist()
        if self.asymptotic_tag:
            out["tag"] = self.asymptotic_tag
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SequenceSpec":
        data = dict(data)
        family = data.pop("family")
        values = data.pop("values", None)
        tag = data.pop("tag", None)
        return cls(family, data, values=values, asymptotic_tag=tag)


# ---------------------------------------------------------------------------
# closed-form asymptotics per family

def analytic_limsup(z: SequenceSpec) -> float | None:
    """Exact ``limsup (1/log n) sum_{j<=n} z*_j**2``, or None for samples."""
    p = z.params
    fam = z.family
    if fam == "sampled":
        return None
    if fam in ("finite", "counterexample25"):
        # counterexample: partial sums grow like k**2 while log n_k ~ k**3 log a
        return 0.0
    if fam == "conversegap":
        return 1.0
    if p["c"] == 0:
        return 0.0
    half = Fraction(1, 2)
    if fam == "primepower":
        # sum 1/p_j ~ log log p_n, negligible against log n
        return 0.0 if p["a"] >= half else math.inf
    a, b = p["a"], p["b"]
    if a > half:
        return 0.0
    if a < half:
        return math.inf
    # a = 1/2: sum log(j+1)**(2b) / j ~ (log n)**(2b+1) / (2b+1)
    if b < 0:
        return 0.0
    if b == 0:
        return float(p["c"] ** 2)
    return math.inf


@dataclass
class Space:
    """Sequence space: ``lp`` (exponent ``p``), ``lweak`` (Marcinkiewicz,
    exponent ``q``), ``l20`` or ``l2log``. Exponents may be ``inf``."""

    kind: str
    exponent: Fraction | float | None = None

    def __post_init__(self):
        if self.kind not in ("lp", "lweak", "l20", "l2log"):
            raise ValueError(f"unknown space {self.kind!r}")
        if self.kind in ("lp", "lweak"):
            if self.exponent is None:
                raise ValueError(f"{self.kind} needs an exponent")
            if self.exponent != math.inf:
                self.exponent = _rational(self.exponent)
                if self.exponent <= 0:
                    raise ValueError("exponent must be positive")
        else:
            self.exponent = None

    @classmethod
    def parse(cls, text: str) -> "Space":
        """``l2``, ``lp:3``, ``lweak:4/3``, ``lweak:inf``, ``l20``, ``l2log``."""
        text = text.strip().lower()
        if text in ("l20", "l2log"):
            return cls(text)
        if text == "l2":
            return cls("lp", Fraction(2))
        kind, _, exp = text.partition(":")
        if kind not in ("lp", "lweak") or not exp:
            raise ValueError(f"cannot parse space {text!r}")
        return cls(kind, math.inf if exp == "inf" else Fraction(exp))

    def __str__(self):
        if self.kind in ("l20", "l2log"):
            return self.kind
        e = "inf" if self.exponent == math.inf else str(self.exponent)
        return f"{self.kind}:{e}"

    @property
    def inverse_exponent(self) -> Fraction:
        return Fraction(0) if self.exponent == math.inf else 1 / self.exponent


def weak_space_for_degree(m: int) -> Space:
    """Marcinkiewicz space with exponent ``2m/(m-1)`` (``inf`` when ``m = 1``)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return Space("lweak", math.inf if m == 1 else Fraction(2 * m, m - 1))


def _analytic_member(z: SequenceSpec, space: Space) -> tuple:
    """(bool, reason) for named families."""
    p = z.params
    fam = z.family
    half = Fraction(1, 2)
    kind = space.kind
    if fam == "finite" or (fam in ("powerlog", "primepower") and p["c"] == 0):
        return True, "finitely supported"
    if kind == "lp" and space.exponent == math.inf or kind == "lweak" and space.exponent == math.inf:
        return True, "bounded family"
    inv = space.inverse_exponent if kind in ("lp", "lweak") else None
    if fam == "powerlog":
        a, b = p["a"], p["b"]
        if kind == "lp":
            q = space.exponent
            ok = a * q > 1 or (a * q == 1 and b * q < -1)
            return ok, f"sum n^(-{a * q}) log^{b * q}"
        if kind == "lweak":
            ok = a > inv or (a == inv and b <= 0)
            return ok, f"z_n n^{inv} ~ n^({inv - a}) log^{b}"
        if kind == "l20":
            ok = a > half or (a == half and b < 0)
            return ok, f"z_n sqrt(n) ~ n^({half - a}) log^{b}"
        ok = a > half or (a == half and b <= half)
        return ok, f"z_n / sqrt(log n / n) ~ n^({half - a}) log^({b - half})"
    if fam == "primepower":
        a = p["a"]
        if kind == "lp":
            return a * space.exponent > 1, f"sum p_n^(-{a * space.exponent}) (sum 1/p diverges)"
        if kind == "lweak":
            return a >= inv, f"p_n ~ n log n, z_n n^{inv} ~ n^({inv - a}) (log n)^(-{a})"
        if kind == "l20":
            return a >= half, "prime number theorem: p_n ~ n log n"
        return a >= half, "prime number theorem: p_n ~ n log n"
    # counterexample25 and conversegap both sit at the l2 / weak-l2 border
    if kind == "lp":
        return space.exponent > 2, "block sums of r_j^2 diverge" if fam == "counterexample25" else "r_n^2 ~ 1/n"
    if kind == "lweak":
        if fam == "counterexample25":
            return space.exponent > 2, "n_k r_{n_k}^2 = k is unbounded"
        return space.exponent >= 2, "n r_n^2 -> 1"
    if kind == "l20":
        return False, "n_k r_{n_k}^2 = k" if fam == "counterexample25" else "n r_n^2 -> 1"
    return True, "r_n^2 <= C log n / n"


def _numeric_witness(z: SequenceSpec, space: Space, horizon: int) -> dict:
    h = int(min(horizon, z.available()))
    if h < 2:
        return {"horizon": h}
    zs = decreasing_rearrangement(z.values(h))
    n = np.arange(1, h + 1, dtype=float)
    if space.kind == "lp":
        if space.exponent == math.inf:
            return {"horizon": h, "sup": float(zs[0]), "argmax": 1}
        return {"horizon": h, "partial_sum": float(np.sum(zs ** float(space.exponent)))}
    if space.kind == "lweak":
        w = zs * n ** float(space.inverse_exponent)
    elif space.kind == "l20":
        w = zs * np.sqrt(n)
        return {"horizon": h, "tail_value": float(w[-1]), "sup": float(w.max()),
                "argmax": int(w.argmax()) + 1}
    else:
        w = np.zeros(h)
        w[1:] = zs[1:] / np.sqrt(np.log(n[1:]) / n[1:])
    i = int(np.argmax(w))
    return {"horizon": h, "sup": float(w[i]), "argmax": i + 1}


@dataclass
class Membership:
    result: str
    space: str
    basis: str
    witness: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"result": self.result, "space": self.space, "basis": self.basis,
                "witness": self.witness}


def space_membership(z: SequenceSpec, space: Space | str, horizon: int = 100_000) -> Membership:
    """Decide ``z`` in ``space``; samples give UNDECIDED with finite evidence."""
    if isinstance(space, str):
        space = Space.parse(space)
    witness = _numeric_witness(z, space, horizon)
    if not z.named:
        return Membership(UNDECIDED, str(space), NUMERIC, witness)
    ok, reason = _analytic_member(z, space)
    witness["reason"] = reason
    if z.family == "counterexample25" and space.kind in ("lweak", "l20"):
        witness["block_identities"] = [[str(nk), int(v)] for nk, v in block_identities(z, 6)]
    return Membership(IN if ok else OUT, str(space), ANALYTIC, witness)


def block_identities(z: SequenceSpec, k_max: int) -> list:
    """``(n_k, n_k * r_{n_k}**2)`` for ``k <= k_max``, computed exactly."""
    if z.family != "counterexample25":
        raise ValueError("block identities exist only for counterexample25")
    a = int(z.params["a"])
    out = []
    for k in range(1, k_max + 1):
        n = a ** (k * k * (k + 1))
        prod = n * z.square_exact(n)
        out.append((n, int(prod) if prod.denominator == 1 else prod))
    return out


# ---------------------------------------------------------------------------
# b-functional

@dataclass
class BEstimate:
    """Checkpoint table of ``(1/log n) sum_{j<=n} z*_j**2``."""

    family: str
    horizon: int
    checkpoints: list
    values: list
    running_sup: list
    analytic_limit: float | None
    basis: str

    @property
    def numeric_limsup(self) -> float:
        """Largest checkpoint value over the second half of the table."""
        return max(self.values[len(self.values) // 2:])

    @property
    def limsup(self) -> float:
        return self.analytic_limit if self.analytic_limit is not None else self.numeric_limsup

    @property
    def b(self) -> float:
        return math.sqrt(self.limsup)

    def value_at(self, n: int) -> float:
        return self.values[self.checkpoints.index(n)]

    def rows(self) -> list:
        return [{"n": n, "value": v, "running_sup": s}
                for n, v, s in zip(self.checkpoints, self.values, self.running_sup)]

    def to_json(self) -> dict:
        lim = self.analytic_limit
        return {"family": self.family, "horizon": self.horizon, "basis": self.basis,
                "analytic_limit": ("inf" if lim == math.inf else lim),
                "b": ("inf" if self.b == math.inf else self.b),
                "checkpoints": self.rows()}


def checkpoint_grid(n_max: int) -> list:
    """Powers of two below ``n_max``, then ``n_max`` itself."""
    out, n = [], 2
    while n < n_max:
        out.append(n)
        n *= 2
    out.append(n_max)
    return out


def b_functional(z: SequenceSpec, n_max: int) -> BEstimate:
    grid = checkpoint_grid(n_max)
    if len(grid) < 10:
        raise HorizonTooSmall(f"n_max={n_max} gives {len(grid)} checkpoints, need 10")
    if n_max > z.available():
        raise HorizonTooSmall(f"only {z.available()} sampled values for horizon {n_max}")
    zs = decreasing_rearrangement(z.values(n_max))
    partial = np.cumsum(zs * zs)
    idx = np.array(grid) - 1
    vals = (partial[idx] / np.log(np.array(grid, dtype=float))).tolist()
    tail = np.maximum.accumulate(np.array(vals)[::-1])[::-1].tolist()
    lim = analytic_limsup(z)
    return BEstimate(z.family, n_max, grid, vals, tail, lim,
                     ANALYTIC if lim is not None else NUMERIC)


# ---------------------------------------------------------------------------
# the l_{2,infinity} counterexample

@dataclass
class Certificate:
    base: int
    k_max: int
    boundaries: list
    block_identities: list
    series_sum: float
    tail_bound: float
    chain_bounds: list
    asymptotic_bound: float
    chain_below_one_from: int | None
    accepted: bool

    def to_json(self) -> dict:
        return {
            "base": self.base, "k_max": self.k_max,
            "boundaries": [str(n) for n in self.boundaries],
            "block_identities": [[str(n), str(v)] for n, v in self.block_identities],
            "series_sum": self.series_sum, "tail_bound": self.tail_bound,
            "chain_bounds": self.chain_bounds, "asymptotic_bound": self.asymptotic_bound,
            "chain_below_one_from": self.chain_below_one_from, "accepted": self.accepted,
        }


def counterexample25(a: int = 2, k_max: int = 6) -> tuple:
    """Build the block counterexample and its certificate.

    The summability condition ``sum_k (k+1)/n_k < 1`` is checked exactly on
    ``k <= k_max`` plus a geometric tail bound. The certificate lists the
    per-block bound ``sum_h (h+1)/n_h + (k+1)/log n_k``; its limit (the
    first sum) is what keeps the b-functional below one.
    """
    if int(a) != a or a < 2:
        raise BadBase(f"base must be an integer >= 2, got {a}")
    a = int(a)
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    nk = [a ** (k * k * (k + 1)) for k in range(1, k_max + 2)]
    terms = [Fraction(k + 1, n) for k, n in enumerate(nk, start=1)]
    if any(t2 >= t1 for t1, t2 in zip(terms, terms[1:])):
        raise BadBase("(k+1)/n_k is not strictly decreasing")
    ratios = [t2 / t1 for t1, t2 in zip(terms, terms[1:])]
    if max(ratios) > Fraction(1, 2):
        raise BadBase("terms do not decay geometrically; tail bound unavailable")
    head = sum(terms[:k_max], Fraction(0))
    # tail after k_max is dominated by a geometric series with ratio 1/2
    tail = 2 * terms[k_max]
    if head + tail >= 1:
        raise BadBase(f"sum (k+1)/n_k is not below 1 for base {a}")
    spec = SequenceSpec.counterexample25(a)
    ids = block_identities(spec, k_max)
    total = float(head + tail)
    chain = [total + (k + 1) / (k * k * (k + 1) * math.log(a)) for k in range(1, k_max + 1)]
    below = next((k for k in range(1, k_max + 1) if all(c < 1 for c in chain[k - 1:])), None)
    cert = Certificate(a, k_max, nk[:k_max], ids, float(head), float(tail), chain, total,
                       below, all(v == k for k, (_, v) in enumerate(ids, start=1)) and total < 1)
    return spec, cert
