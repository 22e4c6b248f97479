"""Multi-indices, prime tables and the integer side of the Bohr correspondence.

A :class:`MultiIndex` is stored sparsely as ascending ``(position, exponent)``
pairs with 1-based positions; position ``j`` stands for the ``j``-th prime
when the index is read as an integer ``n = p**alpha``.
"""
from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import BoundExceeded, IndexOverflow, UnsortedInput

#: Largest integer produced by :func:`index_to_integer` unless overridden.
INT_LIMIT = 2**63 - 1
#: Largest degree accepted by :func:`multinomial`.
FACTORIAL_BOUND = 1000


class MultiIndex:
    """Finitely supported exponent vector in canonical sparse form."""

    __slots__ = ("_entries", "_degree")

    def __init__(self, entries: Iterable[Sequence[int]] = ()):
        pairs = []
        for item in entries:
            pos, exp = (int(v) for v in item)
            if pos < 1:
                raise ValueError(f"position must be >= 1, got {pos}")
            if exp < 0:
                raise ValueError(f"exponent must be >= 0, got {exp}")
            if exp:
                pairs.append((pos, exp))
        pairs.sort()
        for (p, _), (q, _) in zip(pairs, pairs[1:]):
            if p == q:
                raise ValueError(f"duplicate position {p}")
        self._entries = tuple(pairs)
        self._degree = sum(e for _, e in pairs)

    @classmethod
    def from_dense(cls, exponents: Sequence[int]) -> "MultiIndex":
        return cls((j, e) for j, e in enumerate(exponents, start=1) if e)

    @classmethod
    def unit(cls, position: int) -> "MultiIndex":
        return cls([(position, 1)])

    @property
    def entries(self) -> tuple:
        return self._entries

    def degree(self) -> int:
        return self._degree

    def max_position(self) -> int:
        return self._entries[-1][0] if self._entries else 0

    def dense(self, k: int | None = None) -> tuple:
        """Dense exponent tuple of length ``k`` (default: highest position)."""
        if k is None:
            k = self.max_position()
        if self.max_position() > k:
            raise ValueError(f"index {self} does not fit in {k} variables")
        out = [0] * k
        for pos, exp in self._entries:
            out[pos - 1] = exp
        return tuple(out)

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        acc = dict(self._entries)
        for pos, exp in other._entries:
            acc[pos] = acc.get(pos, 0) + exp
        return MultiIndex(acc.items())

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def __eq__(self, other):
        if not isinstance(other, MultiIndex):
            return NotImplemented
        return self._entries == other._entries

    def __lt__(self, other: "MultiIndex"):
        return self.sort_key() < other.sort_key()

    def __hash__(self):
        return hash(self._entries)

    def sort_key(self) -> tuple:
        # canonical order for serialization: by degree, then entry list
        return (self._degree, self._entries)

    def __repr__(self):
        return f"MultiIndex({list(self._entries)})"

    def to_json(self) -> list:
        return [[p, e] for p, e in self._entries]

    @classmethod
    def from_json(cls, data) -> "MultiIndex":
        pairs = [tuple(item) for item in data]
        if any(len(p) != 2 for p in pairs):
            raise ValueError("MultiIndex entries must be [position, exponent] pairs")
        if [p for p, _ in pairs] != sorted({p for p, _ in pairs}):
            raise ValueError("MultiIndex positions must be strictly ascending")
        if any(e <= 0 for _, e in pairs):
            raise ValueError("MultiIndex exponents must be positive")
        return cls(pairs)


def _prime_count_bound(count: int) -> int:
    # Rosser: p_k < k (ln k + ln ln k) for k >= 6
    if count < 6:
        return 15
    return int(count * (math.log(count) + math.log(math.log(count)))) + 1


def _sieve(limit: int) -> np.ndarray:
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return is_prime


def _sieve_spf(limit: int) -> np.ndarray:
    """Smallest-prime-factor table for 0..limit (0 and 1 map to themselves)."""
    root = math.isqrt(limit)
    spf = np.arange(limit + 1, dtype=np.int64)
    # descending so the smallest prime is written last
    for p in np.flatnonzero(_sieve(root))[::-1].tolist():
        spf[p * p :: p] = p
    return spf


@lru_cache(maxsize=8)
def _first_primes_pow2(count: int) -> np.ndarray:
    primes = np.flatnonzero(_sieve(_prime_count_bound(count)))[:count].astype(np.int64)
    primes.setflags(write=False)
    return primes


def first_primes(count: int) -> np.ndarray:
    """Read-only array of the first ``count`` primes."""
    if count < 1:
        return np.empty(0, dtype=np.int64)
    size = 1 << max(count - 1, 1).bit_length()
    return _first_primes_pow2(size)[:count]


class PrimeTable:
    """The first ``count`` primes plus a factor cache up to ``factor_bound``.

    Immutable after construction; safe to share.
    """

    def __init__(self, count: int = 10_000, factor_bound: int = 100_000):
        if count < 1:
            raise ValueError("count must be >= 1")
        primes = first_primes(count)
        if factor_bound < 1:
            raise ValueError("factor_bound must be >= 1")
        spf = _sieve_spf(factor_bound)
        self._primes = primes
        self._plist = primes.tolist()
        self._spf = spf
        self._spf.setflags(write=False)
        self.factor_bound = factor_bound

    @property
    def primes(self) -> np.ndarray:
        return self._primes

    def __len__(self):
        return len(self._primes)

    @property
    def largest(self) -> int:
        return int(self._primes[-1])

    def prime(self, j: int) -> int:
        """The ``j``-th prime (1-based)."""
        if not 1 <= j <= len(self._primes):
            raise BoundExceeded(f"prime #{j} is outside a table of {len(self)} primes")
        return int(self._primes[j - 1])

    def position(self, p: int) -> int:
        """1-based position of the prime ``p`` in the table."""
        i = int(np.searchsorted(self._primes, p))
        if i < len(self._primes) and self._primes[i] == p:
            return i + 1
        if p > self.largest:
            raise BoundExceeded(f"prime {p} exceeds the table bound {self.largest}")
        raise ValueError(f"{p} is not prime")

    def factor(self, n: int) -> dict:
        """Prime factorization ``{p: e}`` restricted to primes in the table."""
        n = int(n)
        if n < 1:
            raise ValueError(f"n must be positive, got {n}")
        out: dict = {}
        if n <= self.factor_bound:
            while n > 1:
                p = int(self._spf[n])
                out[p] = out.get(p, 0) + 1
                n //= p
            if out and max(out) > self.largest:
                raise BoundExceeded(f"prime factor {max(out)} exceeds table bound {self.largest}")
            return out
        rem = n
        for p in self._plist:
            if p * p > rem:
                break
            while rem % p == 0:
                out[p] = out.get(p, 0) + 1
                rem //= p
        else:
            if rem > 1:
                raise BoundExceeded(f"{n} has a prime factor beyond {self.largest}")
        if rem > 1:
            if rem > self.largest:
                raise BoundExceeded(f"prime factor {rem} exceeds table bound {self.largest}")
            out[rem] = out.get(rem, 0) + 1
        return out


@lru_cache(maxsize=None)
def default_table() -> PrimeTable:
    return PrimeTable()


def factor_to_index(n: int, table: PrimeTable | None = None) -> MultiIndex:
    """Exponent vector ``alpha`` with ``n = p**alpha``."""
    table = table or default_table()
    return MultiIndex((table.position(p), e) for p, e in table.factor(n).items())


def index_to_integer(alpha: MultiIndex, table: PrimeTable | None = None,
                     limit: int = INT_LIMIT) -> int:
    table = table or default_table()
    n = 1
    for pos, exp in alpha:
        p = table.prime(pos)
        for _ in range(exp):
            n *= p
            if n > limit:
                raise IndexOverflow(f"p**alpha for {alpha} exceeds {limit}")
    return n


def big_omega(n: int, table: PrimeTable | None = None) -> int:
    """Number of prime factors of ``n`` counted with multiplicity."""
    return factor_to_index(n, table).degree()


def enumerate_lambda(m: int, k: int) -> Iterator[MultiIndex]:
    """All indices of degree ``m`` in ``k`` variables.

    Order is descending lexicographic on the dense exponent vector, so
    ``(2, 2)`` yields ``(2,0), (1,1), (0,2)``. This matches ascending
    lexicographic order of the sorted tuples in :func:`enumerate_j`.
    """
    if m < 0 or k < 1:
        raise ValueError("need m >= 0 and k >= 1")
    for dense in _compositions(m, k):
        yield MultiIndex.from_dense(dense)


def _compositions(m: int, k: int):
    if k == 1:
        yield (m,)
        return
    for first in range(m, -1, -1):
        for rest in _compositions(m - first, k - 1):
            yield (first,) + rest


def lambda_size(m: int, k: int) -> int:
    return math.comb(m + k - 1, m)


def enumerate_j(m: int, k: int) -> Iterator[tuple]:
    """Nondecreasing tuples in ``{1..k}**m`` in lexicographic order."""
    return itertools.combinations_with_replacement(range(1, k + 1), m)


def multinomial(alpha: MultiIndex, bound: int = FACTORIAL_BOUND) -> int:
    """``|alpha|! / alpha!`` in exact integer arithmetic."""
    m = alpha.degree()
    if m > bound:
        raise IndexOverflow(f"degree {m} exceeds factorial bound {bound}")
    out, used = 1, 0
    for _, e in alpha:
        used += e
        out *= math.comb(used, e)
    return out


def is_sorted_tuple(j: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(j, j[1:]))


def tuple_to_index(j: Sequence[int], strict: bool = True) -> MultiIndex:
    """``alpha_r = #{q : j_q = r}``; with ``strict`` the tuple must be sorted."""
    if strict and not is_sorted_tuple(j):
        raise UnsortedInput(f"tuple {tuple(j)} is not nondecreasing")
    if any(v < 1 for v in j):
        raise ValueError("tuple entries must be positive")
    counts: dict = {}
    for v in j:
        counts[v] = counts.get(v, 0) + 1
    return MultiIndex(counts.items())


def index_to_tuple(alpha: MultiIndex) -> tuple:
    """The sorted tuple ``j_alpha = (1,..,1, 2,..,2, ...)``."""
    return tuple(pos for pos, exp in alpha for _ in range(exp))


def class_size(j: Sequence[int]) -> int:
    """Number of tuples in ``{1..k}**m`` that are permutations of ``j``."""
    return multinomial(tuple_to_index(j, strict=False))
