"""Dirichlet and power-series coefficient containers and the Bohr transform.

Every series here is a finite truncation. Dirichlet keys are positive
integers ``n``; power keys are :class:`~bohrkit.kernel.MultiIndex` values.
The Bohr transform matches ``a_{p**alpha}`` with ``c_alpha``.
"""
from __future__ import annotations

import math
from types import MappingProxyType
from typing import Callable, Mapping

import numpy as np

from .errors import BoundExceeded
from .kernel import (
    MultiIndex,
    PrimeTable,
    default_table,
    factor_to_index,
    index_to_integer,
)

DIRICHLET = "dirichlet"
POWER = "power"


class CoeffSeries:
    """Immutable, finitely supported coefficient map.

    Zero coefficients are dropped on construction. When ``homogeneity`` is
    given every key must have that degree (``Omega(n)`` for Dirichlet keys,
    ``|alpha|`` for power keys).
    """

    __slots__ = ("form", "_terms", "homogeneity", "table")

    def __init__(self, form: str, terms: Mapping | None = None,
                 homogeneity: int | None = None, table: PrimeTable | None = None):
        if form not in (DIRICHLET, POWER):
            raise ValueError(f"unknown series form {form!r}")
        self.form = form
        self.table = table or default_table()
        clean = {}
        for key, value in (terms or {}).items():
            if form == DIRICHLET:
                if isinstance(key, bool) or int(key) != key or key < 1:
                    raise ValueError(f"Dirichlet keys must be positive integers, got {key!r}")
                key = int(key)
            elif not isinstance(key, MultiIndex):
                raise TypeError(f"power-series keys must be MultiIndex, got {type(key).__name__}")
            value = complex(value)
            if value != 0:
                clean[key] = value
        self._terms = MappingProxyType(clean)
        self.homogeneity = homogeneity
        if homogeneity is not None:
            for key in clean:
                if self.degree_of(key) != homogeneity:
                    raise ValueError(f"key {key!r} has degree {self.degree_of(key)}, "
                                     f"series declared {homogeneity}-homogeneous")

    @classmethod
    def dirichlet(cls, terms=None, **kw) -> "CoeffSeries":
        return cls(DIRICHLET, terms, **kw)

    @classmethod
    def power(cls, terms=None, **kw) -> "CoeffSeries":
        return cls(POWER, terms, **kw)

    @property
    def terms(self) -> Mapping:
        return self._terms

    def degree_of(self, key) -> int:
        if self.form == DIRICHLET:
            return factor_to_index(key, self.table).degree()
        return key.degree()

    def max_degree(self) -> int:
        return max((self.degree_of(k) for k in self._terms), default=0)

    def keys(self) -> list:
        """Support in canonical order (ascending n, or MultiIndex sort key)."""
        return sorted(self._terms, key=(None if self.form == DIRICHLET else MultiIndex.sort_key))

    def items(self) -> list:
        return [(k, self._terms[k]) for k in self.keys()]

    def __getitem__(self, key):
        return self._terms.get(key, 0j)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if not isinstance(other, CoeffSeries):
            return NotImplemented
        return self.form == other.form and dict(self._terms) == dict(other._terms)

    def __repr__(self):
        return f"CoeffSeries({self.form!r}, {dict(self.items())!r})"

    def l1(self) -> float:
        return math.fsum(abs(v) for v in self._terms.values())

    def to_json(self) -> dict:
        terms = []
        for key, value in self.items():
            jkey = key if self.form == DIRICHLET else key.to_json()
            terms.append([jkey, [value.real, value.imag]])
        out = {"form": self.form, "terms": terms}
        if self.homogeneity is not None:
            out["homogeneity"] = self.homogeneity
        return out

    @classmethod
    def from_json(cls, data: dict, table: PrimeTable | None = None) -> "CoeffSeries":
        """Inverse of :meth:`to_json`. Light validation; see ``bohrkit.io`` for
        diagnostics with locations."""
        form = data["form"]
        terms = {}
        for jkey, (re, im) in data["terms"]:
            key = int(jkey) if form == DIRICHLET else MultiIndex.from_json(jkey)
            if key in terms:
                raise ValueError(f"duplicate key {jkey!r}")
            terms[key] = complex(re, im)
        return cls(form, terms, homogeneity=data.get("homogeneity"), table=table)


class TrigPolynomial:
    """``P(w) = sum c_alpha w**alpha`` on the ``nvars``-dimensional torus."""

    def __init__(self, nvars: int, coeffs: Mapping, homogeneity: int | None = None):
        if nvars < 1:
            raise ValueError("nvars must be >= 1")
        clean = {}
        for alpha, c in coeffs.items():
            if alpha.max_position() > nvars:
                raise ValueError(f"{alpha} uses a variable beyond {nvars}")
            if homogeneity is not None and alpha.degree() != homogeneity:
                raise ValueError(f"{alpha} is not of degree {homogeneity}")
            c = complex(c)
            if c != 0:
                clean[alpha] = c
        self.nvars = nvars
        self.homogeneity = homogeneity
        self.coeffs = MappingProxyType(clean)
        keys = sorted(clean, key=MultiIndex.sort_key)
        self.exponents = np.array([a.dense(nvars) for a in keys], dtype=np.int64).reshape(len(keys), nvars)
        self.values = np.array([clean[a] for a in keys], dtype=complex)
        self.exponents.setflags(write=False)
        self.values.setflags(write=False)

    @classmethod
    def from_arrays(cls, exponents, values, homogeneity=None) -> "TrigPolynomial":
        exponents = np.asarray(exponents)
        coeffs: dict = {}
        for row, v in zip(exponents, values):
            alpha = MultiIndex.from_dense(row.tolist())
            coeffs[alpha] = coeffs.get(alpha, 0) + v
        return cls(exponents.shape[1], coeffs, homogeneity)

    def __len__(self):
        return len(self.coeffs)

    def __call__(self, angles) -> complex | np.ndarray:
        """Evaluate at angle vectors; ``angles`` has shape ``(k,)`` or ``(S, k)``."""
        theta = np.asarray(angles, dtype=float)
        single = theta.ndim == 1
        theta = np.atleast_2d(theta)
        if theta.shape[1] != self.nvars:
            raise ValueError(f"expected {self.nvars} angles, got {theta.shape[1]}")
        out = np.exp(1j * (theta @ self.exponents.T)) @ self.values
        return complex(out[0]) if single else out

    def degree(self) -> int:
        return int(self.exponents.sum(axis=1).max()) if len(self) else 0

    def coefficient_l2(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2)))

    def __repr__(self):
        return f"TrigPolynomial({self.nvars}, {dict(self.coeffs)!r})"


def bohr_transform(s: CoeffSeries) -> CoeffSeries:
    """Flip between Dirichlet and power form via ``n = p**alpha``."""
    if s.form == DIRICHLET:
        terms = {factor_to_index(n, s.table): c for n, c in s.terms.items()}
        return CoeffSeries(POWER, terms, s.homogeneity, s.table)
    terms = {index_to_integer(a, s.table): c for a, c in s.terms.items()}
    return CoeffSeries(DIRICHLET, terms, s.homogeneity, s.table)


def bohr_lift(d: CoeffSeries, k: int) -> TrigPolynomial:
    """Trigonometric polynomial ``sum a_n w**alpha(n)`` on ``T**k``.

    Raises BoundExceeded when some ``n`` needs a prime beyond the ``k``-th.
    """
    if d.form != DIRICHLET:
        raise ValueError("bohr_lift expects a Dirichlet series")
    coeffs = {}
    for n, c in d.terms.items():
        alpha = factor_to_index(n, d.table)
        if alpha.max_position() > k:
            raise BoundExceeded(f"{n} needs prime #{alpha.max_position()} but k={k}")
        coeffs[alpha] = c
    return TrigPolynomial(k, coeffs, d.homogeneity)


def lift_variables(d: CoeffSeries) -> int:
    """Smallest ``k`` such that every ``n`` in the support factors over the first k primes."""
    return max((factor_to_index(n, d.table).max_position() for n in d.terms), default=0) or 1


def homogeneous_part(s: CoeffSeries, m: int) -> CoeffSeries:
    terms = {key: c for key, c in s.terms.items() if s.degree_of(key) == m}
    return CoeffSeries(s.form, terms, m, s.table)


def dirichlet_value(d: CoeffSeries, t) -> complex | np.ndarray:
    """``sum a_n n**(-i t)`` on the vertical line; ``t`` scalar or array."""
    t = np.asarray(t, dtype=float)
    keys = np.array(d.keys(), dtype=float)
    vals = np.array([d.terms[n] for n in d.keys()], dtype=complex)
    out = np.exp(-1j * np.multiply.outer(t, np.log(keys))) @ vals
    return complex(out) if out.ndim == 0 else out


def dirichlet_product(s: CoeffSeries, t: CoeffSeries, bound: int) -> CoeffSeries:
    """Dirichlet convolution truncated to ``n <= bound``."""
    acc: dict = {}
    for n, a in s.terms.items():
        for m, b in t.terms.items():
            if n * m <= bound:
                acc[n * m] = acc.get(n * m, 0) + a * b
    return CoeffSeries(DIRICHLET, acc, table=s.table)


def power_product(s: CoeffSeries, t: CoeffSeries,
                  keep: Callable[[MultiIndex], bool] | None = None) -> CoeffSeries:
    """Cauchy product of power series; ``keep`` filters the result support."""
    acc: dict = {}
    for a, x in s.terms.items():
        for b, y in t.terms.items():
            key = a + b
            if keep is None or keep(key):
                acc[key] = acc.get(key, 0) + x * y
    return CoeffSeries(POWER, acc, table=s.table)


def multiplier_weighted_l1(s: CoeffSeries, b: Callable[[int], complex]) -> float:
    """``sum |a_n b_n|`` over the support of a Dirichlet series."""
    if s.form != DIRICHLET:
        raise ValueError("expected a Dirichlet series")
    return math.fsum(abs(a * b(n)) for n, a in s.terms.items())
