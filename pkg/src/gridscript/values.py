"""The value universe shared by the grid and the script runtime.

Values are plain Python objects: Empty is None, Boolean is bool, Integer is
int, Number is float, Text is str, Date is datetime.date, ListValue is list,
MappingValue is dict. Errors are first-class ErrorValue instances so they can
sit in cells and flow through expressions.
"""

from __future__ import annotations

import datetime
import enum
import math
import re
from dataclasses import dataclass, field


class ErrorKind(enum.Enum):
    DIV0 = "DIV0"
    NAME = "NAME"
    VALUE = "VALUE"
    CYCLE = "CYCLE"
    REF = "REF"
    TYPE = "TYPE"


_ERROR_DISPLAY = {
    ErrorKind.DIV0: "#DIV/0!",
    ErrorKind.NAME: "#NAME?",
    ErrorKind.VALUE: "#VALUE!",
    ErrorKind.CYCLE: "#CYCLE!",
    ErrorKind.REF: "#REF!",
    ErrorKind.TYPE: "#TYPE!",
}


@dataclass(frozen=True)
class ErrorValue:
    kind: ErrorKind
    message: str = field(default="", compare=False)

    @classmethod
    def of(cls, kind_text: str, message: str = "") -> "ErrorValue":
        return cls(ErrorKind(kind_text), message)

    def __str__(self) -> str:
        return _ERROR_DISPLAY[self.kind]


class EnforcedType(enum.Enum):
    TEXT = "TEXT"
    NUMBER = "NUMBER"
    INTEGER = "INTEGER"
    DATE = "DATE"


class TypeConformanceError(ValueError):
    """A value cannot be coerced to a cell's enforced type."""


_NUMBER_RE = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")
_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")


def parse_iso_date(text: str) -> datetime.date | None:
    if not _DATE_RE.match(text):
        return None
    try:
        return datetime.date.fromisoformat(text)
    except ValueError:
        return None


def infer_literal(raw: str):
    """Infer a constant value from raw text: number, boolean, date, else text."""
    stripped = raw.strip()
    if _NUMBER_RE.match(stripped):
        number = float(stripped)
        # "1e999" overflows to inf, which has no literal form; keep it as text
        if math.isfinite(number):
            return number
        return raw
    if stripped.upper() in ("TRUE", "FALSE"):
        return stripped.upper() == "TRUE"
    date = parse_iso_date(stripped)
    if date is not None:
        return date
    return raw


def is_number(value) -> bool:
    """Integer or Number; bool is its own type despite Python's subclassing."""
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def type_name(value) -> str:
    if value is None:
        return "Empty"
    if isinstance(value, ErrorValue):
        return "Error"
    if isinstance(value, bool):
        return "Boolean"
    if isinstance(value, int):
        return "Integer"
    if isinstance(value, float):
        return "Number"
    if isinstance(value, str):
        return "Text"
    if isinstance(value, datetime.date):
        return "Date"
    if isinstance(value, list):
        return "List"
    if isinstance(value, dict):
        return "Mapping"
    return type(value).__name__


def coerce_to_type(value, enforced: EnforcedType):
    """Coerce a scalar to an enforced type or raise TypeConformanceError."""
    if value is None or isinstance(value, ErrorValue):
        return value
    if enforced is EnforcedType.TEXT:
        if isinstance(value, (list, dict)):
            raise TypeConformanceError(f"cannot store {type_name(value)} as TEXT")
        return render_value(value)
    if enforced is EnforcedType.NUMBER:
        if is_number(value):
            return float(value) if not isinstance(value, float) else value
        if isinstance(value, bool):
            return 1.0 if value else 0.0
        if isinstance(value, str):
            if _NUMBER_RE.match(value.strip()):
                number = float(value.strip())
                if math.isfinite(number):
                    return number
            raise TypeConformanceError(f"text {value!r} is not numeric")
        raise TypeConformanceError(f"cannot coerce {type_name(value)} to NUMBER")
    if enforced is EnforcedType.INTEGER:
        as_number = coerce_to_type(value, EnforcedType.NUMBER)
        if as_number != int(as_number):
            raise TypeConformanceError(f"{as_number!r} is not integral")
        return int(as_number)
    if enforced is EnforcedType.DATE:
        if isinstance(value, datetime.date):
            return value
        if isinstance(value, str):
            date = parse_iso_date(value.strip())
            if date is not None:
                return date
            raise TypeConformanceError(f"text {value!r} is not an ISO date")
        raise TypeConformanceError(f"cannot coerce {type_name(value)} to DATE")
    raise TypeConformanceError(f"unknown enforced type {enforced!r}")


def render_value(value) -> str:
    """Display form used by the grid, print and CONCAT."""
    if value is None:
        return ""
    if isinstance(value, ErrorValue):
        return str(value)
    if isinstance(value, bool):
        return "TRUE" if value else "FALSE"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return render_number(value)
    if isinstance(value, str):
        return value
    if isinstance(value, datetime.date):
        return value.isoformat()
    if isinstance(value, list):
        return "[" + ", ".join(_render_item(v) for v in value) + "]"
    if isinstance(value, dict):
        inner = ", ".join(f"{_render_item(k)}: {_render_item(v)}" for k, v in value.items())
        return "{" + inner + "}"
    return str(value)


def _render_item(value) -> str:
    # Texts inside containers keep their quotes so items stay distinguishable.
    if isinstance(value, str):
        return quote_text(value)
    return render_value(value)


def render_number(value: float) -> str:
    """Integral floats drop the decimal point; others use the shortest repr."""
    if value != value or value in (float("inf"), float("-inf")):
        return repr(value)
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def quote_text(text: str) -> str:
    """Render text as a script string literal."""
    out = ['"']
    for ch in text:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def literal_source(value) -> str:
    """Render a stored constant as the script expression that recreates it.

    Floats always keep a decimal point or exponent so the loader can tell
    Number 2.0 apart from Integer 2.
    """
    if isinstance(value, bool):
        return "True" if value else "False"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        text = repr(value)
        if "." not in text and "e" not in text and "E" not in text and text not in ("inf", "-inf", "nan"):
            text += ".0"
        return text
    if isinstance(value, str):
        return quote_text(value)
    if isinstance(value, datetime.date):
        return f'Date("{value.isoformat()}")'
    raise ValueError(f"no literal form for {type_name(value)}")
