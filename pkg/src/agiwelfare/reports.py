"""Machine-format records and aligned text tables for command output."""

from __future__ import annotations

import enum
import json
from fractions import Fraction

FORMAT_VERSION = 1

__all__ = ["FORMAT_VERSION", "record", "dumps", "table"]


def _plain(obj):
    if isinstance(obj, Fraction):
        return obj.numerator if obj.denominator == 1 else float(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if isinstance(obj, tuple):
        return list(obj)
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def record(command: str, exit_code: int, verdict: str, payload: dict, source: str | None = None) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "command": command,
        "source": source,
        "verdict": verdict,
        "exit_code": exit_code,
        "result": payload,
    }


def dumps(rec: dict) -> str:
    """Byte-stable JSON: sorted keys, fixed indent, trailing newline."""
    return json.dumps(rec, sort_keys=True, indent=2, default=_plain) + "\n"


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(_cell(x) for x in v) + ")"
    return str(v)


def table(headers, rows) -> str:
    cells = [[_cell(c) for c in r] for r in rows]
    widths = [len(h) for h in headers]
    for r in cells:
        for k, c in enumerate(r):
            widths[k] = max(widths[k], len(c))
    line = "  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()
    rule = "  ".join("-" * w for w in widths)
    body = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    return "\n".join([line, rule, *body])
