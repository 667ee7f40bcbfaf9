"""JSON encoding of scalars, vectors, matrices, words and parameter tuples.

Scalars travel as strings ``"p/q"`` or ``"p"``; JSON integers are accepted on
input as well. Floats are always rejected because they are not exact.

>>> parse_scalar("-3/6")
Fraction(-1, 2)
>>> format_scalar(parse_scalar("4/2"))
'2'
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from .linalg import RatMatrix
from .so3q import B2Params
from .totpos import PositiveParams

__all__ = [
    "ParseError",
    "b2params_from_json",
    "b2params_to_json",
    "format_scalar",
    "load_json",
    "matrix_from_json",
    "matrix_to_json",
    "params_from_json",
    "params_to_json",
    "parse_scalar",
    "vector_from_json",
    "vector_to_json",
    "word_from_json",
    "word_to_json",
]

_SCALAR = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")


class ParseError(ValueError):
    """Malformed input; ``field`` names the offending location."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


def load_json(text: str, field: str = "input") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(field, f"invalid JSON ({exc.msg} at char {exc.pos})") from None


def format_scalar(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_scalar(obj: Any, field: str = "scalar") -> Fraction:
    if isinstance(obj, bool) or isinstance(obj, float):
        raise ParseError(field, f"expected an exact scalar string, got {obj!r}")
    if isinstance(obj, int):
        return Fraction(obj)
    if not isinstance(obj, str):
        raise ParseError(field, f"expected a scalar string 'p/q' or 'p', got {type(obj).__name__}")
    m = _SCALAR.match(obj.strip())
    if not m:
        raise ParseError(field, f"malformed scalar {obj!r} (sign belongs on the numerator)")
    num, den = int(m.group(1)), m.group(2)
    if den is None:
        return Fraction(num)
    if int(den) == 0:
        raise ParseError(field, "denominator is zero")
    return Fraction(num, int(den))


def vector_to_json(v) -> list[str]:
    return [format_scalar(a) for a in v]


def vector_from_json(obj: Any, field: str = "vector") -> tuple[Fraction, ...]:
    if not isinstance(obj, list):
        raise ParseError(field, "expected an array of scalars")
    return tuple(parse_scalar(a, f"{field}[{i}]") for i, a in enumerate(obj))


def matrix_to_json(m: RatMatrix) -> dict:
    return {
        "rows": m.rows,
        "cols": m.cols,
        "entries": [[format_scalar(a) for a in row] for row in m.tolist()],
    }


def matrix_from_json(obj: Any, field: str = "matrix") -> RatMatrix:
    """Read ``{"rows", "cols", "entries"}``; a bare array of rows is also accepted."""
    if isinstance(obj, list):
        entries = obj
        rows = len(entries)
        if not rows or not isinstance(entries[0], list) or not entries[0]:
            raise ParseError(field, "expected a nonempty array of nonempty rows")
        cols = len(entries[0])
    elif isinstance(obj, dict):
        for key in ("rows", "cols", "entries"):
            if key not in obj:
                raise ParseError(f"{field}.{key}", "missing")
        rows, cols, entries = obj["rows"], obj["cols"], obj["entries"]
        for key, val in (("rows", rows), ("cols", cols)):
            if not isinstance(val, int) or isinstance(val, bool) or val < 1:
                raise ParseError(f"{field}.{key}", "must be a positive integer")
        field = f"{field}.entries"
    else:
        raise ParseError(field, "expected a matrix object or an array of rows")
    if not isinstance(entries, list) or len(entries) != rows or rows == 0:
        raise ParseError(field, f"expected {rows} rows")
    out = []
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != cols:
            raise ParseError(f"{field}[{i}]", f"expected a row of {cols} entries")
        out.append([parse_scalar(a, f"{field}[{i}][{j}]") for j, a in enumerate(row)])
    return RatMatrix(out)


def word_to_json(word) -> list[int]:
    return list(word)


def word_from_json(obj: Any, field: str = "word") -> tuple[int, ...]:
    """An array of 1-based generator indices, or a digit string like ``"121"``."""
    if isinstance(obj, str):
        if not re.fullmatch(r"\d*", obj):
            raise ParseError(field, f"malformed word {obj!r}")
        return tuple(int(c) for c in obj)
    if not isinstance(obj, list):
        raise ParseError(field, "expected an array of generator indices")
    for i, a in enumerate(obj):
        if not isinstance(a, int) or isinstance(a, bool) or a < 1:
            raise ParseError(f"{field}[{i}]", "generator indices are positive integers")
    return tuple(obj)


def params_to_json(p: PositiveParams) -> dict:
    return {"word": word_to_json(p.word), "values": vector_to_json(p.values)}


def params_from_json(obj: Any, field: str = "params") -> PositiveParams:
    if not isinstance(obj, dict):
        raise ParseError(field, "expected {'word': [...], 'values': [...]}")
    for key in ("word", "values"):
        if key not in obj:
            raise ParseError(f"{field}.{key}", "missing")
    word = word_from_json(obj["word"], f"{field}.word")
    values = vector_from_json(obj["values"], f"{field}.values")
    if len(word) != len(values):
        raise ParseError(f"{field}.values", f"expected {len(word)} values")
    return PositiveParams(word, values)


def b2params_to_json(p: B2Params) -> dict:
    slots = [
        {"scalar": format_scalar(s)} if letter == 1 else {"vector": vector_to_json(s)}
        for letter, s in zip(p.word, p.slots)
    ]
    return {"word": word_to_json(p.word), "slots": slots}


def b2params_from_json(obj: Any, field: str = "params") -> B2Params:
    if not isinstance(obj, dict):
        raise ParseError(field, "expected {'word': [...], 'slots': [...]}")
    for key in ("word", "slots"):
        if key not in obj:
            raise ParseError(f"{field}.{key}", "missing")
    word = word_from_json(obj["word"], f"{field}.word")
    slots_obj = obj["slots"]
    if not isinstance(slots_obj, list) or len(slots_obj) != len(word):
        raise ParseError(f"{field}.slots", f"expected {len(word)} slots")
    slots = []
    for i, (letter, s) in enumerate(zip(word, slots_obj)):
        where = f"{field}.slots[{i}]"
        want = {1: "scalar", 2: "vector"}.get(letter)
        if want is None:
            raise ParseError(f"{field}.word[{i}]", "B2 generators are 1 and 2")
        if not isinstance(s, dict) or set(s) != {want}:
            raise ParseError(where, f"letter {letter} takes a {{'{want}': ...}} slot")
        slots.append(parse_scalar(s[want], f"{where}.{want}") if letter == 1 else vector_from_json(s[want], f"{where}.{want}"))
    return B2Params(word, tuple(slots))
