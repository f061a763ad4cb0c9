"""Verification reports, their JSON/CSV/text renderings, and the result cache."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable

from . import __version__

PROVENANCE = ("paper", "derived", "trivial")
STATUSES = ("pass", "fail", "discrepancy-documented", "informational")


def _jsonable(v: Any) -> Any:
    # Integers become decimal strings: JSON numbers lose precision past 2**53.
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        return [str(v.numerator), str(v.denominator)]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


@dataclass
class VerificationReport:
    task: str
    params: dict[str, Any]
    computed: dict[str, Any]
    expected: dict[str, Any]
    provenance: dict[str, str]
    derived: dict[str, Any] = field(default_factory=dict)
    status: str = "fail"
    notes: list[str] = field(default_factory=list)
    details: list[dict[str, Any]] = field(default_factory=list)
    elapsed_ms: float = 0.0
    threads: int = 1
    version: str = __version__

    def finalize(self) -> "VerificationReport":
        """Set status by comparing computed values with expectations.

        ``derived`` holds recomputed values for keys where the printed
        statement is believed wrong; matching those instead of ``expected``
        gives "discrepancy-documented".
        """
        bad = [k for k, v in self.expected.items() if self.computed.get(k) != v]
        if not bad:
            self.status = "pass"
        elif all(k in self.derived and self.computed.get(k) == self.derived[k] for k in bad):
            self.status = "discrepancy-documented"
        else:
            self.status = "fail"
        return self

    @property
    def ok(self) -> bool:
        return self.status in ("pass", "discrepancy-documented", "informational")

    def to_dict(self, *, timing: bool = True) -> dict[str, Any]:
        expected = _jsonable(self.expected)
        expected["provenance"] = dict(self.provenance)
        if self.derived:
            expected["derived"] = _jsonable(self.derived)
        d = {
            "task": self.task,
            "params": _jsonable(self.params),
            "computed": _jsonable(self.computed),
            "expected": expected,
            "status": self.status,
            "notes": list(self.notes),
            "threads": self.threads,
            "version": self.version,
        }
        if self.details:
            d["details"] = _jsonable(self.details)
        if timing:
            d["elapsed_ms"] = round(self.elapsed_ms, 3)
        return d

    def csv_rows(self) -> list[dict[str, str]]:
        """One row per checked identity (computed key)."""
        rows = []
        params = ";".join(f"{k}={_flat(v)}" for k, v in sorted(self.params.items()))
        for key in sorted(self.computed):
            rows.append(
                {
                    "task": self.task,
                    "params": params,
                    "quantity": key,
                    "computed": _flat(self.computed[key]),
                    "expected": _flat(self.expected.get(key, "")),
                    "provenance": self.provenance.get(key, ""),
                    "derived": _flat(self.derived.get(key, "")),
                    "status": self.status,
                }
            )
        return rows

    def text(self) -> str:
        head = f"[{self.status.upper()}] {self.task} " + " ".join(
            f"{k}={_flat(v)}" for k, v in sorted(self.params.items())
        )
        lines = [head]
        for key in sorted(self.computed):
            exp = self.expected.get(key)
            tag = self.provenance.get(key, "")
            line = f"    {key} = {_flat(self.computed[key])}"
            if exp is not None:
                line += f" (expected {_flat(exp)}, {tag}"
                if key in self.derived:
                    line += f"; derived {_flat(self.derived[key])}"
                line += ")"
            lines.append(line)
        lines += [f"    note: {n}" for n in self.notes]
        return "\n".join(lines)


def _flat(v: Any) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, (list, tuple)):
        return "[" + ",".join(_flat(x) for x in v) + "]"
    return str(v)


CSV_FIELDS = ["task", "params", "quantity", "computed", "expected", "provenance", "derived", "status"]


def render(reports: Iterable[VerificationReport], fmt: str, *, timing: bool = True) -> str:
    reports = list(reports)
    if fmt == "json":
        payload: Any = [r.to_dict(timing=timing) for r in reports]
        if len(payload) == 1:
            payload = payload[0]
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
        w.writeheader()
        for r in reports:
            w.writerows(r.csv_rows())
        return buf.getvalue()
    if fmt == "text":
        return "\n".join(r.text() for r in reports) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


class ResultCache:
    """Append-only JSON-lines cache keyed by (task, params, version)."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._entries: dict[str, dict] = {}
        if self.path.exists():
            for line in self.path.read_text().splitlines():
                if line.strip():
                    rec = json.loads(line)
                    self._entries[rec["key"]] = rec["value"]

    @staticmethod
    def key(task: str, params: dict[str, Any]) -> str:
        return json.dumps([task, _jsonable(params), __version__], sort_keys=True)

    def get(self, task: str, params: dict[str, Any]) -> dict | None:
        return self._entries.get(self.key(task, params))

    def put(self, task: str, params: dict[str, Any], value: dict) -> None:
        k = self.key(task, params)
        if k in self._entries:
            return
        self._entries[k] = value
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a") as fh:
            fh.write(json.dumps({"key": k, "value": value}, sort_keys=True) + "\n")
