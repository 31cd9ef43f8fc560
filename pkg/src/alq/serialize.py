"""CSV/JSON rendering of flat result rows, and the class number cache file.

Rationals are written as ``p/q`` strings unless a decimal precision is
requested.  CSV and JSON carry the same field names in the same order.
"""

from __future__ import annotations

import json
import re
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path

from .errors import InvalidInput
from .quadratic import is_discriminant

_CACHE_LINE = re.compile(r"^(-\d+),(\d+)$")


def render_decimal(x: Fraction, digits: int) -> str:
    with localcontext() as ctx:
        ctx.prec = len(str(abs(x.numerator))) + len(str(x.denominator)) + digits + 10
        q = Decimal(x.numerator) / Decimal(x.denominator)
        return str(q.quantize(Decimal(1).scaleb(-digits)))


def _cell(value, digits: int | None):
    """JSON-ready value: bool and int pass through, rationals become strings."""
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return str(value) if digits is None else render_decimal(value, digits)
    return str(value)


def normalize(rows, fields, digits: int | None = None) -> list[dict]:
    return [{f: _cell(row[f], digits) for f in fields} for row in rows]


def _csv_text(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def to_csv(rows, fields, digits: int | None = None) -> str:
    lines = [",".join(fields)]
    for row in normalize(rows, fields, digits):
        lines.append(",".join(_csv_text(row[f]) for f in fields))
    return "\n".join(lines) + "\n"


def to_json(rows, fields, digits: int | None = None) -> str:
    return dumps_json(normalize(rows, fields, digits))


def dumps_json(objs: list[dict]) -> str:
    return json.dumps(objs, indent=2, ensure_ascii=False) + "\n"


def render(rows, fields, fmt: str = "csv", digits: int | None = None) -> str:
    if fmt == "csv":
        return to_csv(rows, fields, digits)
    if fmt == "json":
        return to_json(rows, fields, digits)
    raise InvalidInput(f"unknown format {fmt!r}")


def load_cache(path: str | Path) -> dict[int, int]:
    """Read ``discriminant,class_number`` lines; any malformed line is an error."""
    table: dict[int, int] = {}
    text = Path(path).read_text()
    for lineno, line in enumerate(text.splitlines(), 1):
        m = _CACHE_LINE.match(line)
        if not m:
            raise InvalidInput(f"{path}:{lineno}: unrecognized cache line {line!r}")
        D, h = int(m.group(1)), int(m.group(2))
        if not is_discriminant(D) or h < 1:
            raise InvalidInput(f"{path}:{lineno}: invalid entry {line!r}")
        if table.get(D, h) != h:
            raise InvalidInput(f"{path}:{lineno}: conflicting class number for {D}")
        table[D] = h
    return table


def save_cache(path: str | Path, table: dict[int, int]) -> None:
    lines = [f"{D},{table[D]}\n" for D in sorted(table, key=abs)]
    p = Path(path)
    tmp = p.with_name(p.name + ".tmp")
    tmp.write_text("".join(lines))
    tmp.replace(p)
