"""Series import/export with located diagnostics, and report export."""
from __future__ import annotations

import json
import math
import os
import re

from .errors import ParseError
from .kernel import MultiIndex, PrimeTable
from .ledger import RunRecord, canonical
from .series import DIRICHLET, POWER, CoeffSeries

_TERMS_KEY = re.compile(r'"terms"\s*:\s*\[')
_WS = " \t\r\n,"


def _term_lines(text: str) -> list:
    """Line number of each element of the top-level ``terms`` array (best effort)."""
    m = _TERMS_KEY.search(text)
    if not m:
        return []
    dec = json.JSONDecoder()
    pos, lines = m.end(), []
    while True:
        while pos < len(text) and text[pos] in _WS:
            pos += 1
        if pos >= len(text) or text[pos] == "]":
            return lines
        lines.append(text.count("\n", 0, pos) + 1)
        try:
            _, pos = dec.raw_decode(text, pos)
        except json.JSONDecodeError:
            return lines


def _where(field: str, lines: list, i: int | None = None) -> str:
    if i is not None and i < len(lines):
        return f"line {lines[i]}, field {field}"
    return f"field {field}"


def _number(x, loc):
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
        raise ParseError(f"expected a finite number, got {x!r}", loc)
    return float(x)


def parse_series(text: str, table: PrimeTable | None = None) -> CoeffSeries:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", "line 1")
    lines = _term_lines(text)
    form = data.get("form")
    if form not in (DIRICHLET, POWER):
        raise ParseError(f"form must be {DIRICHLET!r} or {POWER!r}, got {form!r}", "field form")
    unknown = set(data) - {"form", "terms", "homogeneity"}
    if unknown:
        raise ParseError(f"unknown keys {sorted(unknown)}", "top level")
    hom = data.get("homogeneity")
    if hom is not None and (isinstance(hom, bool) or not isinstance(hom, int) or hom < 0):
        raise ParseError("homogeneity must be a nonnegative integer", "field homogeneity")
    raw = data.get("terms")
    if not isinstance(raw, list):
        raise ParseError("terms must be an array", "field terms")
    terms, first_seen = {}, {}
    for i, item in enumerate(raw):
        loc = _where(f"terms[{i}]", lines, i)
        if not (isinstance(item, list) and len(item) == 2):
            raise ParseError("each term must be [key, [re, im]]", loc)
        jkey, val = item
        if form == DIRICHLET:
            if isinstance(jkey, bool) or not isinstance(jkey, int) or jkey < 1:
                raise ParseError(f"key must be a positive integer, got {jkey!r}", loc)
            key = jkey
        else:
            try:
                key = MultiIndex.from_json(jkey)
            except (TypeError, ValueError) as exc:
                raise ParseError(f"bad multi-index: {exc}", loc) from None
        if not (isinstance(val, list) and len(val) == 2):
            raise ParseError("coefficient must be [re, im]", loc)
        re_, im_ = (_number(v, loc) for v in val)
        if key in terms:
            raise ParseError(f"duplicate key {jkey!r} (first at terms[{first_seen[key]}])", loc)
        first_seen[key] = i
        terms[key] = complex(re_, im_)
    try:
        return CoeffSeries(form, terms, homogeneity=hom, table=table)
    except ValueError as exc:
        raise ParseError(str(exc), "field terms") from None


def import_series(path: str | os.PathLike, table: PrimeTable | None = None) -> CoeffSeries:
    """Read a series file; malformed input raises :class:`ParseError` with its location."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return parse_series(text, table)
    except ParseError as exc:
        raise ParseError(str(exc), os.fspath(path)) from None


def canonical_series(s: CoeffSeries) -> str:
    return canonical(s.to_json())


def export_series(s: CoeffSeries, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_series(s) + "\n")


def export_report(record: RunRecord | dict, path: str | os.PathLike) -> None:
    """Write one record as canonical JSON."""
    data = record.to_json() if isinstance(record, RunRecord) else record
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical(data) + "\n")
