"""Value formatting shared by the CLI and the verification report."""

from __future__ import annotations

import json
from fractions import Fraction
from numbers import Integral, Rational

SIG_DIGITS = 12


def fmt(x):
    """Exact rationals as fraction strings, floats to 12 significant digits."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, Integral):
        return str(int(x))
    if isinstance(x, Rational):
        return str(Fraction(x))
    if isinstance(x, (list, tuple)):
        return [fmt(v) for v in x]
    if isinstance(x, dict):
        return {k: fmt(v) for k, v in x.items()}
    return f"{float(x):.{SIG_DIGITS}g}"


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def table(rows, headers) -> str:
    cells = [[str(h) for h in headers]] + [[_cell(c) for c in r] for r in rows]
    widths = [max(len(row[k]) for row in cells) for k in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def show(x) -> str:
    """Compact single-line rendering for table cells and messages."""
    v = fmt(x)
    if isinstance(v, list):
        return "(" + ", ".join(show(e) for e in v) + ")"
    return str(v)


def _cell(c):
    return show(c)
