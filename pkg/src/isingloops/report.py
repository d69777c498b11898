"""Machine-readable series reports shared by every pipeline.

A report is a plain JSON object: ``config`` (exactly what produced it),
``rows`` (per-order values with their source and flags), ``checks``
(named booleans) and ``diagnostics``.  Serialization is deterministic:
keys sorted, rationals rendered as "p/q" strings, no timestamps.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction


def render_value(v):
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return repr(v)
    return v


@dataclass
class Row:
    r: int
    value: Fraction | float | int
    source: str
    flags: dict = field(default_factory=dict)

    def to_obj(self):
        return {
            "r": self.r,
            "value": render_value(self.value),
            "source": self.source,
            "flags": {k: render_value(v) for k, v in sorted(self.flags.items())},
        }


@dataclass
class SeriesReport:
    config: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    def add_rows(self, rows):
        self.rows.extend(rows)

    @property
    def mismatch(self) -> bool:
        return any(r.flags.get("agree") is False for r in self.rows) or \
            any(v is False for v in self.checks.values())

    def to_obj(self):
        return {
            "config": _jsonable(self.config),
            "rows": [r.to_obj() for r in self.rows],
            "checks": _jsonable(self.checks),
            "diagnostics": _jsonable(self.diagnostics),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_obj(), indent=2, sort_keys=True) + "\n"

    def rows_to_csv(self) -> str:
        buf = io.StringIO()
        flag_keys = sorted({k for r in self.rows for k in r.flags})
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["r", "value", "source"] + flag_keys)
        for r in self.rows:
            writer.writerow([r.r, render_value(r.value), r.source]
                            + [render_value(r.flags.get(k, "")) for k in flag_keys])
        return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return render_value(obj)
    if hasattr(obj, "item") and callable(obj.item):  # numpy scalars
        return obj.item()
    return obj


def compare_rows(rows, oracle_values: dict, oracle_source: str):
    """Attach agreement flags against an oracle column; mismatches are
    flagged, never dropped."""
    out = []
    for row in rows:
        if row.r in oracle_values:
            expected = oracle_values[row.r]
            row.flags["oracle"] = Fraction(expected)
            row.flags["oracle_source"] = oracle_source
            row.flags["agree"] = Fraction(row.value) == Fraction(expected)
        out.append(row)
    return out
