"""Record types and machine-readable outputs (JSON / CSV / TSV).

Floats serialize with 17 significant digits for round-trip fidelity; files are
written atomically (temp file + rename).  Reruns with the same inputs produce
byte-identical payloads; the timestamp lives in an isolated header field.
"""

from __future__ import annotations

import csv
import json
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .errors import PreconditionError

CSV_COLUMNS = ("name", "params", "lhs", "rhs", "ratio", "notes")


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class BoundRecord:
    """One measured-vs-theoretical comparison row."""

    name: str
    params: dict = field(default_factory=dict)
    lhs: float = 0.0
    rhs: float = 0.0
    ratio: float = 0.0
    notes: str = ""

    @staticmethod
    def make(name: str, params: dict, lhs: float, rhs: float, notes: str = "") -> "BoundRecord":
        ratio = lhs / rhs if rhs > 0 else 0.0
        return BoundRecord(name=name, params=dict(params), lhs=float(lhs), rhs=float(rhs),
                           ratio=float(ratio), notes=notes)

    def check(self) -> None:
        if self.rhs > 0 and abs(self.ratio - self.lhs / self.rhs) > 1e-12 * max(1.0, abs(self.ratio)):
            raise AssertionError(f"ratio of record {self.name!r} does not recompute")

    def params_key(self) -> str:
        return ";".join(f"{k}={_param_str(v)}" for k, v in sorted(self.params.items()))

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "params": {k: self.params[k] for k in sorted(self.params)},
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "notes": self.notes,
        }


def _param_str(v) -> str:
    if isinstance(v, float):
        return fmt_float(v)
    return str(v)


def _atomic_write(path: str, data: str) -> None:
    d = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _encode_json(obj) -> str:
    def scrub(o):
        if isinstance(o, float):
            return json.loads(fmt_float(o))
        if isinstance(o, dict):
            return {k: scrub(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [scrub(v) for v in o]
        return o

    return json.dumps(scrub(obj), indent=2, sort_keys=True) + "\n"


def write_report_json(path: str, command: str, params: dict, records: list[BoundRecord],
                      tool_version: str, timestamp: str | None = None) -> None:
    for r in records:
        r.check()
    header = {
        "tool_version": tool_version,
        "command": command,
        "params": {k: params[k] for k in sorted(params)},
        "generated_at": timestamp or datetime.now(timezone.utc).isoformat(),
    }
    payload = {"header": header, "records": [r.to_json() for r in sorted(records, key=lambda r: (r.name, r.params_key()))]}
    _atomic_write(path, _encode_json(payload))


def write_report_csv(path: str, records: list[BoundRecord]) -> None:
    for r in records:
        r.check()
    rows = sorted(records, key=lambda r: (r.name, r.params_key()))
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([r.name, r.params_key(), fmt_float(r.lhs), fmt_float(r.rhs),
                    fmt_float(r.ratio), r.notes])
    _atomic_write(path, buf.getvalue())


def write_comparison_tsv(path: str, records: list[BoundRecord], x_param: str) -> None:
    """Plot-ready two-column table: x = a chosen parameter, y = ratio."""
    rows = []
    for r in sorted(records, key=lambda r: (r.name, r.params_key())):
        if x_param not in r.params:
            raise PreconditionError(f"record {r.name!r} lacks parameter {x_param!r}")
        rows.append((r.params[x_param], r.ratio))
    lines = ["\t".join((x_param, "ratio"))]
    lines += ["\t".join((_param_str(x), fmt_float(y))) for x, y in rows]
    _atomic_write(path, "\n".join(lines) + "\n")


def load_report_json(path: str) -> dict:
    with open(path) as fh:
        payload = json.load(fh)
    for rec in payload.get("records", []):
        r = BoundRecord(name=rec["name"], params=rec["params"], lhs=rec["lhs"],
                        rhs=rec["rhs"], ratio=rec["ratio"], notes=rec.get("notes", ""))
        r.check()
    return payload
