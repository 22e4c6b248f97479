"""Command-line front end: ``bohrkit <verb> ...``.

Exit codes: 0 when every hard assertion passes, 1 when one fails, 2 on
usage or input errors. Experiment verbs append one JSON line per record to
the run ledger (``--out``, else ``$BOHR_LEDGER``, else ./bohr_ledger.jsonl).
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import json
import sys
from pathlib import Path

from . import __version__, ledger
from .errors import BohrError, ParseError
from .io import canonical_series, import_series
from .multiplier import CANONICAL_SPACES, canonical_suite, table_csv, verdict_table
from .series import bohr_transform
from .suites import (
    CHECKS,
    PUBLISHED_SEED,
    SUITES,
    load_custom,
    run_bfunc,
    run_classify,
    run_custom,
    run_sidon,
    run_suite,
    run_verify,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
U64_MAX = 2**64 - 1


class UsageError(Exception):
    pass


def _u64(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v <= U64_MAX:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _json_arg(text: str):
    """Inline JSON object or a path to a JSON file."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            return json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, f"argument, column {exc.colno}") from None
    try:
        with open(text, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {text}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{text}: line {exc.lineno}, column {exc.colno}") from None


def _floats(text: str) -> list:
    return [float(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="run ledger path (default $BOHR_LEDGER or ./bohr_ledger.jsonl)")
    common.add_argument("--format", choices=("json", "csv"), default="json", help="stdout format")

    p = argparse.ArgumentParser(
        prog="bohrkit",
        description="Dirichlet series, l1-multipliers and polytorus inequality checks.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--version", action="version", version=f"bohrkit {__version__}")
    sub = p.add_subparsers(dest="verb", metavar="VERB", required=True)

    s = sub.add_parser("classify", parents=[common], help="multiplier verdict for one sequence")
    s.add_argument("--seq", required=True, help="sequence spec: inline JSON or file")
    s.add_argument("--space", required=True, help="hinf | hp:<p> | hinfm:<m> | hpm:<p>:<m>")
    s.add_argument("--horizon", type=_positive, default=100_000, help="finite evidence horizon")

    s = sub.add_parser("verdict-table", parents=[common], help="verdict table for a named suite")
    s.add_argument("--suite", choices=("canonical",), default="canonical")

    s = sub.add_parser("verify", parents=[common], help="inequality check on random instances")
    s.add_argument("check", choices=CHECKS)
    s.add_argument("--m", type=_positive, default=2, help="degree (truncation degree for fred1)")
    s.add_argument("--n", type=_positive, default=2, help="number of variables")
    s.add_argument("--trials", type=_positive, default=16, help="instances or sign patterns")
    s.add_argument("--seed", type=_u64, help="required except for h2")
    s.add_argument("--p", type=int, help="fred1/fred2 split length")
    s.add_argument("--rho", type=float, help="fred1 radius")
    s.add_argument("--samples", type=_positive, help="khinchine Monte Carlo samples")
    s.add_argument("--z", type=_floats, help="h2 point, comma separated")
    s.add_argument("--N", type=_positive, help="h2 truncation per variable")

    s = sub.add_parser("sidon", parents=[common], help="Sidon constant lower bound")
    s.add_argument("--N", type=_positive, required=True, help="polynomial length")
    s.add_argument("--restarts", type=_positive, default=32)
    s.add_argument("--seed", type=_u64, required=True)

    s = sub.add_parser("suite", parents=[common], help="run a canonical suite or a custom suite file")
    s.add_argument("name", nargs="?", choices=SUITES, help="canonical suite name")
    s.add_argument("--file", help="custom suite JSON: list of steps")
    s.add_argument("--seed", type=_u64, help=f"default {PUBLISHED_SEED} (the published seed)")

    s = sub.add_parser("bfunc", parents=[common], help="b-functional checkpoint table")
    s.add_argument("--seq", required=True, help="sequence spec: inline JSON or file")
    s.add_argument("--n-max", type=_positive, default=1_000_000, help="horizon")

    s = sub.add_parser("transform", parents=[common], help="Bohr transform of a series file")
    s.add_argument("path")

    s = sub.add_parser("import", parents=[common], help="validate a series file, print canonical JSON")
    s.add_argument("path")

    p.epilog = _verb_summary(sub)
    return p


def _verb_summary(sub) -> str:
    lines = ["verbs and flags:"]
    for name, sp in sub.choices.items():
        flags = []
        for act in sp._actions:
            if isinstance(act, argparse._HelpAction):
                continue
            if act.option_strings:
                flags.append("/".join(act.option_strings))
            else:
                flags.append(act.metavar or act.dest.upper())
        lines.append(f"  {name:14s} {' '.join(flags)}")
    lines.append("\nexit codes: 0 pass, 1 assertion failure, 2 usage error")
    return "\n".join(lines)


def _emit(records, fmt: str, out) -> None:
    if fmt == "csv":
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["command", "seed", "passed", "params", "result"])
        for r in records:
            w.writerow([r.command, r.seed, r.passed, ledger.canonical(r.params),
                        ledger.canonical(r.result)])
        out.write(buf.getvalue())
    else:
        for r in records:
            out.write(r.line() + "\n")


def _finish(records, args) -> int:
    ledger.append(records, args.out)
    failed = [r for r in records if not r.passed]
    if failed:
        report = {"failures": [{"command": r.command, "params": r.params, "seed": r.seed}
                               for r in failed]}
        sys.stderr.write(ledger.canonical(report) + "\n")
        return EXIT_FAIL
    return EXIT_OK


def _require_seed(args):
    if args.seed is None:
        raise UsageError(f"{args.verb} is randomized: --seed is required")


def dispatch(args, out) -> int:
    verb = args.verb
    if verb == "classify":
        rec = run_classify(_json_arg(args.seq), args.space, args.horizon)
        _emit([rec], args.format, out)
        return _finish([rec], args)
    if verb == "verdict-table":
        rows = verdict_table(canonical_suite(), CANONICAL_SPACES)
        if args.format == "csv":
            out.write(table_csv(rows))
        else:
            for r in rows:
                out.write(ledger.canonical(r) + "\n")
        return EXIT_OK
    if verb == "verify":
        kw = {}
        if args.check == "h2":
            if args.z is not None:
                kw["z"] = tuple(args.z)
            if args.N is not None:
                kw["N"] = args.N
        else:
            _require_seed(args)
            if args.check == "fred1":
                if args.p is not None:
                    kw["ps"] = (args.p,)
                if args.rho is not None:
                    kw["rhos"] = (args.rho,)
            if args.check == "fred2" and args.p is not None:
                kw["p"] = args.p
            if args.check == "khinchine" and args.samples is not None:
                kw["samples"] = args.samples
        rec = run_verify(args.check, args.m, args.n, args.trials,
                         args.seed if args.seed is not None else 0, **kw)
        if args.check == "h2":
            rec.seed = None
        _emit([rec], args.format, out)
        return _finish([rec], args)
    if verb == "sidon":
        rec = run_sidon(args.N, args.restarts, args.seed)
        _emit([rec], args.format, out)
        return _finish([rec], args)
    if verb == "suite":
        seed = PUBLISHED_SEED if args.seed is None else args.seed
        if (args.name is None) == (args.file is None):
            raise UsageError("give exactly one of a suite name or --file")
        if args.file is not None:
            try:
                steps = load_custom(args.file)
            except OSError as exc:
                raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
            records = run_custom(steps, seed)
        else:
            records = run_suite(args.name, seed)
        _emit(records, args.format, out)
        return _finish(records, args)
    if verb == "bfunc":
        rec = run_bfunc(_json_arg(args.seq), args.n_max)
        if args.format == "csv":
            buf = _io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["n", "value", "running_sup"])
            for row in rec.result["checkpoints"]:
                w.writerow([row["n"], repr(row["value"]), repr(row["running_sup"])])
            out.write(buf.getvalue())
        else:
            _emit([rec], "json", out)
        return _finish([rec], args)
    if verb in ("transform", "import"):
        s = import_series(args.path)
        out.write(canonical_series(bohr_transform(s) if verb == "transform" else s) + "\n")
        return EXIT_OK
    raise UsageError(f"unknown verb {verb}")


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return dispatch(args, out)
    except (UsageError, BohrError, ValueError, KeyError, TypeError) as exc:
        msg = str(exc) if not isinstance(exc, KeyError) else f"missing field {exc}"
        sys.stderr.write(f"bohrkit {args.verb}: {msg}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
