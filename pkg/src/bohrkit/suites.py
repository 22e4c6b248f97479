"""Single experiments and the canonical suites built from them.

Every experiment returns a :class:`~bohrkit.ledger.RunRecord`; ``passed`` is
False only when a hard (constant-free or acceptance) assertion fails.
Report-only ratios for unknown constants always pass.
"""
from __future__ import annotations

import json
import math

import numpy as np

from .kernel import big_omega
from .ledger import RunRecord
from .multiplier import (
    CANONICAL_EXPECTED,
    CANONICAL_SPACES,
    MultiplicativeSeq,
    canonical_suite,
    classify,
)
from .seqlab import SequenceSpec, b_functional, block_identities, counterexample25
from .series import CoeffSeries
from .torusnum.checks import (
    bcq_weighted_sum,
    bh_ratio,
    fred1_check,
    fred2_ratio,
    h2_sharp_constant,
    khinchine_ratio,
    ksz_search,
    random_fred1_instance,
    random_homogeneous,
)
from .torusnum.norms import abs_values, haar_samples, jackknife_power_mean, l2_norm
from .torusnum.sidon import sidon_constant

PUBLISHED_SEED = 20130
KSZ_DESK_BOUND = 10.0
KHINCHINE_PAIRS = ((1, 2), (2, 4), (1, 4))
SIDON_SLACK = 1e-3
CHECKS = ("ksz", "khinchine", "bh", "fred1", "fred2", "h2")
SUITES = ("canonical-multipliers", "inequality-batch", "sidon-sweep", "counterexamples")


def _rng(seed: int, task: int) -> np.random.Generator:
    return np.random.default_rng([seed, task])


def _random_shape(rng, m_max=4, n_max=4, m_min=1):
    return int(rng.integers(m_min, m_max + 1)), int(rng.integers(1, n_max + 1))


# ---------------------------------------------------------------------------
# single experiments

def run_classify(seq: dict, space: str, horizon: int = 100_000) -> RunRecord:
    v = classify(MultiplicativeSeq.from_json(seq), space, horizon)
    return RunRecord("classify", {"seq": seq, "space": space, "horizon": horizon}, None, v.to_json())


def run_bfunc(seq: dict, n_max: int) -> RunRecord:
    est = b_functional(SequenceSpec.from_json(seq), n_max)
    return RunRecord("bfunc", {"seq": seq, "n_max": n_max}, None, est.to_json())


def run_parseval(count: int, seed: int, samples: int = 100_000) -> RunRecord:
    """MC L2 against the exact Parseval value on ``count`` random polynomials."""
    hits, rows = 0, []
    for t in range(count):
        rng = _rng(seed, t)
        m, n = _random_shape(rng)
        P = random_homogeneous(m, n, rng)
        exact = l2_norm(P).value
        est, se = jackknife_power_mean(abs_values(P, haar_samples(rng, samples, n)), 2)
        # constant |P| gives se = 0; allow rounding on top of the statistical band
        ok = abs(est - exact) <= 3 * se + 1e-12 * exact
        hits += ok
        rows.append([m, n, exact, est, se])
    need = math.ceil(0.97 * count)
    return RunRecord("verify parseval", {"count": count, "samples": samples}, seed,
                     {"within_3se": hits, "required": need, "rows": rows}, hits >= need)


def run_ksz(m: int, n: int, trials: int, seed: int) -> RunRecord:
    res = ksz_search(m, n, trials=trials, seed=seed)
    return RunRecord("verify ksz", {"m": m, "n": n, "trials": trials}, seed,
                     {**res.to_json(), "desk_bound": KSZ_DESK_BOUND}, res.ratio <= KSZ_DESK_BOUND)


def run_khinchine(m: int, n: int, trials: int, seed: int, samples: int = 100_000) -> RunRecord:
    """``trials`` random polynomials with degree <= m and at most n variables."""
    violations, rows = [], []
    for t in range(trials):
        rng = _rng(seed, t)
        mm, nn = _random_shape(rng, m, n)
        P = random_homogeneous(mm, nn, rng)
        x = abs_values(P, haar_samples(rng, samples, nn))
        for r, s in KHINCHINE_PAIRS:
            rep = khinchine_ratio(P, r, s, x=x, seed=seed)
            rows.append([t, mm, nn, r, s, rep.ratio, rep.stderr, rep.bound])
            if rep.violation:
                violations.append([t, r, s])
    return RunRecord("verify khinchine", {"m": m, "n": n, "trials": trials, "samples": samples},
                     seed, {"violations": violations, "rows": rows}, not violations)


def run_bh(m: int, n: int, trials: int, seed: int) -> RunRecord:
    ratios = []
    for t in range(trials):
        P = random_homogeneous(m, n, _rng(seed, t))
        ratios.append(bh_ratio(P, seed=seed + t).ratio)
    return RunRecord("verify bh", {"m": m, "n": n, "trials": trials}, seed,
                     {"max_ratio": max(ratios), "ratios": ratios})


def run_fred2(m: int, n: int, trials: int, seed: int, p: int = 1) -> RunRecord:
    ratios, ref = [], None
    for t in range(trials):
        P = random_homogeneous(m, n, _rng(seed, t))
        rep = fred2_ratio(P, p, seed=seed + t)
        ratios.append(rep.ratio)
        ref = rep.params["reference"]
    return RunRecord("verify fred2", {"m": m, "n": n, "trials": trials, "p": p}, seed,
                     {"max_ratio": max(ratios), "ratios": ratios, "reference": ref})


def run_fred1(m: int, n: int, trials: int, seed: int, ps=(2, 3), rhos=(0.7, 0.9)) -> RunRecord:
    """Random instances with ``p`` and ``rho`` cycling; ``m`` is the truncation degree."""
    failures, worst = [], 0.0
    for t in range(trials):
        rng = _rng(seed, t)
        p = ps[t % len(ps)]
        rho = rhos[(t // len(ps)) % len(rhos)]
        nn = int(rng.integers(1, n + 1))
        c, r = random_fred1_instance(rng, p, nn, max(m, p), rho)
        res = fred1_check(c, r, rho, p)
        if res.rhs > 0:
            worst = max(worst, res.lhs / res.rhs)
        if not res.holds:
            failures.append([t, res.lhs, res.rhs])
    return RunRecord("verify fred1", {"m": m, "n": n, "trials": trials, "p": list(ps),
                                      "rho": list(rhos)}, seed,
                     {"failures": failures, "max_lhs_over_rhs": worst}, not failures)


def run_h2(z=(0.5, 1 / 3), N: int = 30) -> RunRecord:
    ratio, const = h2_sharp_constant(z, N)
    return RunRecord("verify h2", {"z": list(z), "N": N}, None,
                     {"ratio": ratio, "constant": const, "rel_gap": (const - ratio) / const},
                     ratio <= const * (1 + 1e-12))


def run_bcq(m: int, count: int, seed: int, support: int = 100) -> RunRecord:
    """Random m-homogeneous Dirichlet polynomials supported below ``support``."""
    pool = [k for k in range(2, support + 1) if big_omega(k) == m]
    ratios = []
    for t in range(count):
        rng = _rng(seed, t)
        size = int(rng.integers(1, min(len(pool), 8) + 1))
        keys = rng.choice(pool, size=size, replace=False)
        d = CoeffSeries.dirichlet({int(k): complex(rng.normal(), rng.normal()) for k in keys},
                                  homogeneity=m)
        ratios.append(bcq_weighted_sum(d, seed=seed + t).ratio)
    return RunRecord("verify bcq", {"m": m, "count": count, "support": support}, seed,
                     {"max_ratio": max(ratios), "ratios": ratios})


def run_verify(check: str, m: int, n: int, trials: int, seed: int, **kw) -> RunRecord:
    if check == "ksz":
        return run_ksz(m, n, trials, seed)
    if check == "khinchine":
        return run_khinchine(m, n, trials, seed, **kw)
    if check == "bh":
        return run_bh(m, n, trials, seed)
    if check == "fred1":
        return run_fred1(m, n, trials, seed, **kw)
    if check == "fred2":
        return run_fred2(m, n, trials, seed, **kw)
    if check == "h2":
        return run_h2(**kw)
    raise ValueError(f"unknown check {check!r}")


def run_sidon(N: int, restarts: int, seed: int, init=None) -> RunRecord:
    res = sidon_constant(N, restarts, seed, init=init)
    ok = res.estimate <= res.trivial_upper * (1 + 1e-12)
    return RunRecord("sidon", {"N": N, "restarts": restarts}, seed, res.to_json(), ok)


# ---------------------------------------------------------------------------
# suites

def suite_canonical_multipliers() -> list:
    out = []
    for label, b in canonical_suite():
        for space, expected in zip(CANONICAL_SPACES, CANONICAL_EXPECTED[label]):
            v = classify(b, space)
            out.append(RunRecord("classify", {"label": label, "seq": b.to_json(), "space": space},
                                 None, {**v.to_json(), "expected": expected},
                                 v.verdict == expected))
    return out


def suite_inequality_batch(seed: int = PUBLISHED_SEED) -> list:
    out = [run_parseval(100, seed)]
    out.append(run_khinchine(4, 4, 200, seed + 1))
    out.append(run_fred1(4, 3, 500, seed + 2))
    out.append(run_h2())
    for m in (2, 3, 4):
        for n in (1, 2, 3, 4):
            out.append(run_ksz(m, n, 256, seed + 3))
    for m in (2, 3):
        out.append(run_bh(m, 3, 8, seed + 4))
        for p in range(1, m + 1):
            out.append(run_fred2(m, 3, 8, seed + 5, p=p))
    for m in (1, 2):
        out.append(run_bcq(m, 8, seed + 6))
    return out


def suite_sidon_sweep(seed: int = PUBLISHED_SEED, N_max: int = 8, restarts: int = 32) -> list:
    out, prev, values = [], None, []
    for N in range(1, N_max + 1):
        rec = run_sidon(N, restarts, seed, init=prev)
        prev = [complex(re, im) for re, im in rec.result["coefficients"]]
        values.append(rec.result["estimate"])
        out.append(rec)
    checks = {
        "S1_exact": values[0] == 1.0,
        "S2_S3_near_one": all(abs(v - 1) <= SIDON_SLACK for v in values[1:3]),
        "S4_above_one": N_max < 4 or values[3] > 1 + SIDON_SLACK,
        "nondecreasing": all(b >= a - SIDON_SLACK for a, b in zip(values, values[1:])),
        "below_sqrt_N": all(v <= math.sqrt(N) * (1 + 1e-12) for N, v in enumerate(values, 1)),
    }
    out.append(RunRecord("sidon-sweep summary", {"N_max": N_max, "restarts": restarts}, seed,
                         {"estimates": values, "checks": checks}, all(checks.values())))
    return out


def suite_counterexamples(horizon: int = 1_000_000) -> list:
    spec, cert = counterexample25(2, 6)
    ids_ok = all(v == k for k, (_, v) in enumerate(block_identities(spec, 6), start=1))
    out = [RunRecord("counterexample certificate", {"a": 2, "k_max": 6}, None, cert.to_json(),
                     cert.accepted and ids_ok)]
    est = b_functional(spec, horizon)
    out.append(RunRecord("bfunc", {"seq": spec.to_json(), "n_max": horizon}, None,
                         {**est.to_json(), "max_checkpoint": max(est.values)},
                         max(est.values) < 1))
    gap = SequenceSpec.converse_gap()
    out.append(RunRecord("bfunc", {"seq": gap.to_json(), "n_max": horizon}, None,
                         b_functional(gap, horizon).to_json()))
    for label, b in canonical_suite()[5:7]:
        v = classify(b, "hinf")
        expected = CANONICAL_EXPECTED[label][CANONICAL_SPACES.index("hinf")]
        out.append(RunRecord("classify", {"label": label, "seq": b.to_json(), "space": "hinf"},
                             None, {**v.to_json(), "expected": expected}, v.verdict == expected))
    return out


def run_suite(name: str, seed: int = PUBLISHED_SEED) -> list:
    if name == "canonical-multipliers":
        return suite_canonical_multipliers()
    if name == "inequality-batch":
        return suite_inequality_batch(seed)
    if name == "sidon-sweep":
        return suite_sidon_sweep(seed)
    if name == "counterexamples":
        return suite_counterexamples()
    raise ValueError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")


def run_custom(steps: list, seed: int) -> list:
    """Run a list of ``{"op": ..., **params}`` steps; an empty list yields no records."""
    out = []
    for i, step in enumerate(steps):
        step = dict(step)
        op = step.pop("op")
        if op == "classify":
            out.append(run_classify(step["seq"], step["space"], step.get("horizon", 100_000)))
        elif op == "bfunc":
            out.append(run_bfunc(step["seq"], step["n_max"]))
        elif op == "verify":
            check = step.pop("check")
            s = step.pop("seed", seed + i)
            out.append(run_verify(check, step.pop("m", 2), step.pop("n", 2),
                                  step.pop("trials", 16), s, **step))
        elif op == "sidon":
            out.append(run_sidon(step["N"], step.get("restarts", 32), step.get("seed", seed + i)))
        elif op == "suite":
            out.extend(run_suite(step["name"], step.get("seed", seed)))
        else:
            raise ValueError(f"step {i}: unknown op {op!r}")
    return out


def load_custom(path) -> list:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    steps = data.get("steps", []) if isinstance(data, dict) else data
    if not isinstance(steps, list):
        raise ValueError("custom suite must be a list of steps or {\"steps\": [...]}")
    return steps
