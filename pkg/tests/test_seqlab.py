import math
from fractions import Fraction

import numpy as np
import pytest
import sympy

from bohrkit.errors import BadBase, HorizonTooSmall
from bohrkit.seqlab import (
    IN,
    OUT,
    UNDECIDED,
    SequenceSpec,
    Space,
    analytic_limsup,
    b_functional,
    block_identities,
    checkpoint_grid,
    counterexample25,
    decreasing_rearrangement,
    space_membership,
    weak_space_for_degree,
)


def test_decreasing_rearrangement(rng):
    assert decreasing_rearrangement([0.1, 0.5, 0.3]).tolist() == [0.5, 0.3, 0.1]
    assert decreasing_rearrangement([3.0, 2.0, 1.0]).tolist() == [3.0, 2.0, 1.0]
    x = rng.random(10_000)
    y = decreasing_rearrangement(x)
    assert np.all(np.diff(y) <= 0)
    assert sorted(y.tolist()) == sorted(x.tolist())


def test_family_values():
    z = SequenceSpec.powerlog(1, Fraction(1, 2), 0)
    assert z.values(4).tolist() == pytest.approx([1, 2 ** -0.5, 3 ** -0.5, 0.5])
    pp = SequenceSpec.prime_power(1, Fraction(1, 2))
    assert pp.values(5).tolist() == pytest.approx([p ** -0.5 for p in (2, 3, 5, 7, 11)])
    assert SequenceSpec.finite([0.5, 0.2]).values(4).tolist() == [0.5, 0.2, 0.0, 0.0]


def test_counterexample_blocks():
    z = SequenceSpec.counterexample25(2)
    assert z.boundaries(4096) == [4, 4096]
    assert z.boundaries(5000) == [4, 4096, 2**36]
    assert z.values(4).tolist() == [0.5] * 4
    assert z.square_exact(5) == Fraction(2, 4096)
    assert z.square_exact(4096) == Fraction(2, 4096)
    assert z.square_exact(4097) == Fraction(3, 2**36)
    # nonincreasing
    v = z.values(20_000)
    assert np.all(np.diff(v) <= 0)


def test_block_identities_exact():
    ids = block_identities(SequenceSpec.counterexample25(2), 6)
    assert [v for _, v in ids] == [1, 2, 3, 4, 5, 6]
    assert ids[0][0] == 4 and ids[2][0] == 2**36


def test_converse_gap_is_nonincreasing_with_log_partial_sums():
    z = SequenceSpec.converse_gap()
    sq = z.values(200_000) ** 2
    assert np.all(np.diff(sq) <= 1e-18)
    n = np.array([10, 1000, 200_000])
    S = np.log(n) * np.exp(np.log(np.log(n)) / np.log(n))
    assert np.cumsum(sq)[n - 1] == pytest.approx(S, rel=1e-12)


def test_sequence_json_round_trip():
    for z in (SequenceSpec.powerlog(Fraction(9, 10), Fraction(1, 2), 0),
              SequenceSpec.prime_power(1, 0.6), SequenceSpec.counterexample25(3),
              SequenceSpec.converse_gap(), SequenceSpec.finite([0.1, 0.2]),
              SequenceSpec.sampled([0.3, 0.1])):
        assert SequenceSpec.from_json(z.to_json()) == z
    assert SequenceSpec.powerlog(1, 0.5, 0).to_json() == {"family": "powerlog", "c": 1, "a": 0.5, "b": 0}


def test_bad_specs():
    with pytest.raises(BadBase):
        SequenceSpec.counterexample25(1)
    with pytest.raises(ValueError):
        SequenceSpec("nope")
    with pytest.raises(ValueError):
        SequenceSpec.powerlog(-1, 1, 0)


def test_space_parse():
    assert Space.parse("l2") == Space("lp", Fraction(2))
    assert Space.parse("lweak:4/3").exponent == Fraction(4, 3)
    assert Space.parse("lweak:inf").exponent == math.inf
    assert str(Space.parse("l2log")) == "l2log"
    assert weak_space_for_degree(2) == Space("lweak", Fraction(4))
    assert weak_space_for_degree(1).exponent == math.inf
    with pytest.raises(ValueError):
        Space.parse("lq:2")


def test_membership_examples():
    pp = SequenceSpec.prime_power(1, Fraction(1, 2))
    assert space_membership(pp, "l2").result == OUT
    assert space_membership(pp, "l20").result == IN
    ce = SequenceSpec.counterexample25(2)
    m = space_membership(ce, "lweak:2")
    assert m.result == OUT
    assert [v for _, v in m.witness["block_identities"]] == [1, 2, 3, 4, 5, 6]
    assert space_membership(ce, "l2log").result == IN
    assert space_membership(ce, "lweak:4").result == IN


@pytest.mark.parametrize("a,b,space,expected", [
    (Fraction(1, 2), 0, "l2", OUT),
    (Fraction(3, 5), 0, "l2", IN),
    (Fraction(1, 2), -1, "l2", IN),
    (Fraction(1, 2), Fraction(-1, 2), "l2", OUT),
    (Fraction(1, 2), 0, "lweak:2", IN),
    (Fraction(1, 2), Fraction(1, 10), "lweak:2", OUT),
    (Fraction(1, 4), 0, "lweak:4", IN),
    (Fraction(1, 5), 0, "lweak:4", OUT),
    (Fraction(1, 2), 0, "l20", OUT),
    (Fraction(1, 2), -1, "l20", IN),
    (Fraction(1, 2), Fraction(1, 2), "l2log", IN),
    (Fraction(1, 2), 1, "l2log", OUT),
])
def test_powerlog_membership_table(a, b, space, expected):
    assert space_membership(SequenceSpec.powerlog(1, a, b), space, horizon=1000).result == expected


def test_sampled_is_undecided():
    m = space_membership(SequenceSpec.sampled(1 / np.arange(1, 1000)), "l2")
    assert m.result == UNDECIDED and m.basis == "numeric"
    assert analytic_limsup(SequenceSpec.sampled([0.1])) is None


def test_analytic_limsup_values():
    assert analytic_limsup(SequenceSpec.powerlog(1, Fraction(1, 2), 0)) == 1
    assert analytic_limsup(SequenceSpec.powerlog(1, Fraction(1, 2), Fraction(1, 2))) == math.inf
    assert analytic_limsup(SequenceSpec.prime_power(1, Fraction(1, 2))) == 0
    assert analytic_limsup(SequenceSpec.counterexample25(2)) == 0
    assert analytic_limsup(SequenceSpec.converse_gap()) == 1


def test_checkpoint_grid_and_horizon():
    g = checkpoint_grid(1000)
    assert g[0] == 2 and g[-1] == 1000 and len(g) == 10
    with pytest.raises(HorizonTooSmall):
        b_functional(SequenceSpec.powerlog(), 300)
    with pytest.raises(HorizonTooSmall):
        b_functional(SequenceSpec.sampled(np.ones(600)), 1000)


def test_b_functional_against_harmonic_oracle():
    est = b_functional(SequenceSpec.powerlog(1, Fraction(1, 2), 0), 10**5)
    H = [math.fsum(1 / j for j in range(1, n + 1)) / math.log(n) for n in est.checkpoints]
    assert est.values == pytest.approx(H, rel=1e-12)
    assert est.b == 1


def test_b_functional_log_growth_exceeds_log3():
    est = b_functional(SequenceSpec.powerlog(1, Fraction(1, 2), Fraction(1, 2)), 10**5)
    assert est.values[-1] > math.log(3)
    assert est.limsup == math.inf


def test_b_functional_prime_oracle():
    n = 10_000
    est = b_functional(SequenceSpec.prime_power(1, Fraction(1, 2)), n)
    oracle = math.fsum(1 / p for p in sympy.primerange(2, sympy.prime(n) + 1)) / math.log(n)
    assert est.value_at(n) == pytest.approx(oracle, rel=1e-12)
    # decreasing along the grid once past the start
    assert all(b < a for a, b in zip(est.values[5:], est.values[6:]))


def test_counterexample_certificate():
    spec, cert = counterexample25(2, 6)
    assert cert.accepted
    exact = sum(Fraction(k + 1, 2 ** (k * k * (k + 1))) for k in range(1, 7))
    assert cert.series_sum == pytest.approx(float(exact), rel=1e-15)
    assert cert.series_sum == pytest.approx(0.5008, abs=1e-3)
    assert cert.asymptotic_bound < 1
    assert cert.chain_below_one_from == 2
    with pytest.raises(BadBase):
        counterexample25(1)
