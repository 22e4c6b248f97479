"""Classification of multiplicative l1-multipliers of Hardy spaces of Dirichlet series.

A completely multiplicative ``b`` is fixed by its values at the primes.
Whether ``sum |a_n b_n| < inf`` for every ``sum a_n n^-s`` in a given space
reduces to a condition on the prime subsequence ``(b_{p_j})``:

=============  ===========================================================
space          criterion on ``z = (|b_{p_j}|)``
=============  ===========================================================
``H_p^m``      ``z`` in l2                                   (iff)
``H_inf^m``    ``z`` in weak-l_{2m/(m-1)}                    (iff)
``H_p``        ``sup z < 1`` and ``z`` in l2                 (iff)
``H_inf``      ``sup z < 1`` and ``b(z) < 1`` sufficient;
               ``sup z < 1`` and ``b(z) <= 1`` necessary
=============  ===========================================================

The last row leaves ``b(z) = 1`` open, so :func:`classify` answers
``UNDECIDED`` there.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .kernel import PrimeTable, default_table, factor_to_index
from .series import CoeffSeries, multiplier_weighted_l1
from .seqlab import (
    IN,
    OUT,
    SequenceSpec,
    Space,
    analytic_limsup,
    b_functional,
    space_membership,
    weak_space_for_degree,
)

YES, NO, UNDECIDED = "YES", "NO", "UNDECIDED"


class MultiplicativeSeq:
    """Completely multiplicative ``b_n`` given by its values at the primes.

    Only moduli enter the classification, so prime values are nonnegative.
    """

    def __init__(self, prime_values: SequenceSpec, table: PrimeTable | None = None):
        self.prime_values = prime_values
        self.table = table or default_table()
        self._cache: list = []

    @classmethod
    def power(cls, sigma) -> "MultiplicativeSeq":
        """``b_n = n**-sigma``."""
        return cls(SequenceSpec.prime_power(1, sigma))

    def at_prime(self, j: int) -> float:
        if j > len(self._cache):
            size = max(j, 2 * len(self._cache), 64)
            size = int(min(size, self.prime_values.available()))
            self._cache = self.prime_values.values(size).tolist()
        return self._cache[j - 1]

    def __call__(self, n: int) -> float:
        out = 1.0
        for pos, exp in factor_to_index(n, self.table):
            out *= self.at_prime(pos) ** exp
        return out

    def to_json(self) -> dict:
        return {"prime_values": self.prime_values.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "MultiplicativeSeq":
        """Accepts ``{"sigma": s}``, ``{"prime_values": {...}}`` or a bare sequence spec."""
        if "sigma" in data:
            return cls.power(data["sigma"])
        if "prime_values" in data:
            return cls(SequenceSpec.from_json(data["prime_values"]))
        return cls(SequenceSpec.from_json(data))

    def __repr__(self):
        return f"MultiplicativeSeq({self.prime_values!r})"


@dataclass(frozen=True)
class HardySpace:
    """``p`` in ``[1, inf]``; ``m`` set for the m-homogeneous subspace."""

    p: float
    m: int | None = None

    def __post_init__(self):
        if not (self.p == math.inf or self.p >= 1):
            raise ValueError("p must be >= 1 or inf")
        if self.m is not None and self.m < 1:
            raise ValueError("m must be >= 1")

    @classmethod
    def parse(cls, text: str) -> "HardySpace":
        """``hinf``, ``hp:<p>``, ``hinfm:<m>``, ``hpm:<p>:<m>``."""
        parts = text.strip().lower().split(":")
        try:
            if parts[0] == "hinf" and len(parts) == 1:
                return cls(math.inf)
            if parts[0] == "hp" and len(parts) == 2:
                return cls(float(parts[1]))
            if parts[0] == "hinfm" and len(parts) == 2:
                return cls(math.inf, int(parts[1]))
            if parts[0] == "hpm" and len(parts) == 3:
                return cls(float(parts[1]), int(parts[2]))
        except ValueError as exc:
            raise ValueError(f"bad space {text!r}: {exc}") from None
        raise ValueError(f"cannot parse space {text!r}")

    def __str__(self):
        p = "inf" if self.p == math.inf else f"{self.p:g}"
        if self.m is None:
            return "hinf" if self.p == math.inf else f"hp:{p}"
        return f"hinfm:{self.m}" if self.p == math.inf else f"hpm:{p}:{self.m}"


@dataclass
class MultiplierVerdict:
    verdict: str
    space: str
    clause: str
    evidence: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "space": self.space, "clause": self.clause,
                "evidence": self.evidence}


def _finite(x):
    return "inf" if x == math.inf else x


def classify(b: MultiplicativeSeq, space: HardySpace | str,
             horizon: int = 100_000) -> MultiplierVerdict:
    """Decide whether ``b`` is an l1-multiplier for ``space``.

    Named prime-value families are decided analytically. Raw samples can
    still produce a definite NO when an observed ``|b_{p_j}| >= 1`` and the
    space requires ``sup < 1``; otherwise they stay UNDECIDED.
    """
    if isinstance(space, str):
        space = HardySpace.parse(space)
    z = b.prime_values
    name = str(space)
    top = z.sup()
    evidence: dict = {"sequence": z.to_json(), "sup_prime_value": top}

    if space.m is not None:
        target = Space("lp", Fraction(2)) if space.p != math.inf else weak_space_for_degree(space.m)
        mem = space_membership(z, target, horizon)
        evidence["membership"] = mem.to_json()
        clause = "1a" if space.p != math.inf else "1b"
        verdict = {IN: YES, OUT: NO}.get(mem.result, UNDECIDED)
        return MultiplierVerdict(verdict, name, clause, evidence)

    # the max is attained for every supported family, so sup >= 1 means some |b_p| >= 1
    if top >= 1:
        evidence["violated"] = "|b_p| < 1 for all primes"
        return MultiplierVerdict(NO, name, "2a" if space.p != math.inf else "2b", evidence)

    if space.p != math.inf:
        mem = space_membership(z, Space("lp", Fraction(2)), horizon)
        evidence["membership"] = mem.to_json()
        verdict = {IN: YES, OUT: NO}.get(mem.result, UNDECIDED)
        if verdict == NO:
            evidence["violated"] = "prime values in l2"
        return MultiplierVerdict(verdict, name, "2a", evidence)

    lim = analytic_limsup(z)
    if lim is None:
        try:
            est = b_functional(z, int(min(horizon, z.available())))
            evidence["b_estimate"] = {"basis": est.basis, "horizon": est.horizon,
                                      "numeric_limsup": est.numeric_limsup}
        except ValueError as exc:
            evidence["b_estimate"] = {"error": str(exc)}
        return MultiplierVerdict(UNDECIDED, name, "2b", evidence)
    bval = math.sqrt(lim)
    evidence["b"] = _finite(bval)
    if bval < 1:
        return MultiplierVerdict(YES, name, "2b", evidence)
    if bval > 1:
        evidence["violated"] = "b(prime values) <= 1"
        return MultiplierVerdict(NO, name, "2b", evidence)
    evidence["note"] = "b = 1 lies in the gap between the sufficient and necessary conditions"
    return MultiplierVerdict(UNDECIDED, name, "2b", evidence)


def verdict_table(seqs, spaces, horizon: int = 100_000) -> list:
    """Rows ``{"sequence", "space", "verdict", "clause", "evidence"}``.

    ``seqs`` is a list of ``(label, MultiplicativeSeq)``; row order follows the
    input order, sequence-major.
    """
    rows = []
    for label, b in seqs:
        for sp in spaces:
            v = classify(b, sp, horizon)
            rows.append({"sequence": label, "space": v.space, "verdict": v.verdict,
                         "clause": v.clause, "evidence": v.evidence})
    return rows


def table_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["sequence", "space", "verdict", "clause"])
    for r in rows:
        w.writerow([r["sequence"], r["space"], r["verdict"], r["clause"]])
    return buf.getvalue()


def canonical_suite() -> list:
    """Labelled sequences mirroring the classical Bohr-strip examples."""
    return [
        ("n^-0.4", MultiplicativeSeq.power(Fraction(2, 5))),
        ("n^-0.5", MultiplicativeSeq.power(Fraction(1, 2))),
        ("n^-0.6", MultiplicativeSeq.power(Fraction(3, 5))),
        ("n^-1", MultiplicativeSeq.power(1)),
        ("0.9/sqrt(j) at p_j", MultiplicativeSeq(SequenceSpec.powerlog(Fraction(9, 10), Fraction(1, 2), 0))),
        ("counterexample25(2) at p_j", MultiplicativeSeq(SequenceSpec.counterexample25(2))),
        ("conversegap at p_j", MultiplicativeSeq(SequenceSpec.converse_gap())),
        ("finite support", MultiplicativeSeq(SequenceSpec.finite([0.5, 0.9, 0.3]))),
    ]


CANONICAL_SPACES = ("hp:2", "hinf", "hinfm:2")

#: Expected verdicts for :func:`canonical_suite` x ``CANONICAL_SPACES``.
CANONICAL_EXPECTED = {
    "n^-0.4": (NO, NO, YES),
    "n^-0.5": (NO, YES, YES),
    "n^-0.6": (YES, YES, YES),
    "n^-1": (YES, YES, YES),
    "0.9/sqrt(j) at p_j": (NO, YES, YES),
    "counterexample25(2) at p_j": (NO, YES, YES),
    "conversegap at p_j": (NO, UNDECIDED, YES),
    "finite support": (YES, YES, YES),
}


def sanity_partial_sums(b: MultiplicativeSeq, d: CoeffSeries) -> float:
    """``sum |a_n b_n|`` over the support of ``d``."""
    return multiplier_weighted_l1(d, b)
