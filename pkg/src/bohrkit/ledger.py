"""Append-only JSON-lines run ledger.

Each line is one :class:`RunRecord` serialized with sorted keys and no
insignificant whitespace, so equal records give equal bytes. The timestamp
comes from ``SOURCE_DATE_EPOCH`` when set, which makes replays byte-identical.
"""
from __future__ import annotations

import datetime as _dt
import fcntl
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__

LEDGER_ENV = "BOHR_LEDGER"
DEFAULT_LEDGER = "bohr_ledger.jsonl"


def ledger_path(out: str | os.PathLike | None = None) -> Path:
    """``--out`` beats ``$BOHR_LEDGER`` beats the default in the working directory."""
    return Path(out or os.environ.get(LEDGER_ENV) or DEFAULT_LEDGER)


def timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        now = _dt.datetime.fromtimestamp(int(epoch), _dt.timezone.utc)
    else:
        now = _dt.datetime.now(_dt.timezone.utc)
    return now.replace(microsecond=0).isoformat()


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


@dataclass
class RunRecord:
    command: str
    params: dict
    seed: int | None
    result: dict
    passed: bool = True
    version: str = __version__
    timestamp: str = field(default_factory=timestamp)

    def to_json(self) -> dict:
        return {"command": self.command, "params": self.params, "seed": self.seed,
                "result": self.result, "passed": self.passed, "version": self.version,
                "timestamp": self.timestamp}

    def line(self) -> str:
        return canonical(self.to_json())

    @classmethod
    def from_json(cls, data: dict) -> "RunRecord":
        return cls(data["command"], data["params"], data["seed"], data["result"],
                   data.get("passed", True), data.get("version", __version__),
                   data["timestamp"])


def append(records, path: str | os.PathLike | None = None) -> Path:
    """Append records under an exclusive lock; returns the ledger path."""
    path = ledger_path(path)
    records = list(records)
    if not records:
        return path
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "a", encoding="utf-8") as fh:
        fcntl.flock(fh, fcntl.LOCK_EX)
        try:
            for rec in records:
                fh.write(rec.line() + "\n")
        finally:
            fcntl.flock(fh, fcntl.LOCK_UN)
    return path


def read(path: str | os.PathLike) -> list:
    with open(path, encoding="utf-8") as fh:
        return [RunRecord.from_json(json.loads(line)) for line in fh if line.strip()]
