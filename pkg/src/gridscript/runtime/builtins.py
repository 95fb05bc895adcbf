"""Builtin functions available to scripts.

Lookup is case-insensitive; user definitions shadow builtins. Aggregates
flatten list arguments, skip Empty and non-numeric scalars, and propagate the
first error they meet.
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal, InvalidOperation

from ..values import (
    ErrorKind,
    ErrorValue,
    is_number,
    parse_iso_date,
    render_value,
    type_name,
)
from .errors import ScriptError
from .objects import RuntimeSheet, RuntimeWorkbook


@dataclass(frozen=True)
class BuiltinFunction:
    name: str
    func: object
    min_args: int
    max_args: int | None  # None = variadic

    def call(self, ctx, args: list, kwargs: dict):
        if kwargs and self.name not in ("load_csv",):
            raise ScriptError("VALUE", f"{self.name}() takes no keyword arguments")
        if len(args) < self.min_args or (self.max_args is not None and len(args) > self.max_args):
            raise ScriptError("VALUE", f"{self.name}() called with {len(args)} argument(s)")
        return self.func(ctx, args)


def _first_error(values) -> ErrorValue | None:
    for v in values:
        if isinstance(v, ErrorValue):
            return v
    return None


def _flatten(args) -> list:
    """Depth-first flattening of list arguments; mappings are not ranges."""
    out: list = []
    stack = list(reversed(args))
    while stack:
        item = stack.pop()
        if isinstance(item, list):
            stack.extend(reversed(item))
        else:
            out.append(item)
    return out


def _numeric_scan(args):
    """(numbers, error) over flattened args: skip Empty/Text/Boolean/Date."""
    flat = _flatten(args)
    err = _first_error(flat)
    if err is not None:
        return [], err
    return [v for v in flat if is_number(v)], None


def _sum(ctx, args):
    nums, err = _numeric_scan(args)
    if err:
        return err
    total = 0
    for n in nums:
        total += n
    return total


def _average(ctx, args):
    nums, err = _numeric_scan(args)
    if err:
        return err
    if not nums:
        return ErrorValue(ErrorKind.DIV0, "AVERAGE of no numbers")
    return sum(nums) / len(nums)


def _min(ctx, args):
    nums, err = _numeric_scan(args)
    if err:
        return err
    return min(nums) if nums else 0


def _max(ctx, args):
    nums, err = _numeric_scan(args)
    if err:
        return err
    return max(nums) if nums else 0


def _count(ctx, args):
    nums, err = _numeric_scan(args)
    if err:
        return err
    return len(nums)


def _parse_criterion(criterion):
    if isinstance(criterion, str):
        op = "="
        rest = criterion
        for prefix in (">=", "<=", "<>", ">", "<", "="):
            if criterion.startswith(prefix):
                op = prefix
                rest = criterion[len(prefix):]
                break
        return op, _criterion_value(rest)
    return "=", criterion


def _criterion_value(text: str):
    from ..values import _NUMBER_RE  # shared numeric shape

    stripped = text.strip()
    if _NUMBER_RE.match(stripped):
        return float(stripped)
    if stripped.upper() in ("TRUE", "FALSE"):
        return stripped.upper() == "TRUE"
    date = parse_iso_date(stripped)
    if date is not None:
        return date
    return text


def _same_class(a, b) -> bool:
    if is_number(a) and is_number(b):
        return True
    if isinstance(a, bool) and isinstance(b, bool):
        return True
    if isinstance(a, str) and isinstance(b, str):
        return True
    if isinstance(a, datetime.date) and isinstance(b, datetime.date):
        return True
    return False


def _countif(ctx, args):
    cells, criterion = args
    if not isinstance(cells, list):
        raise ScriptError("TYPE", "COUNTIF expects a range or list first")
    flat = _flatten([cells])
    err = _first_error(flat)
    if err is not None:
        return err
    if isinstance(criterion, ErrorValue):
        return criterion
    op, wanted = _parse_criterion(criterion)
    count = 0
    for value in flat:
        if value is None:
            continue
        if op == "=":
            count += _same_class(value, wanted) and value == wanted
        elif op == "<>":
            count += not (_same_class(value, wanted) and value == wanted)
        else:
            if not _same_class(value, wanted) or isinstance(wanted, bool):
                continue
            if op == ">":
                count += value > wanted
            elif op == ">=":
                count += value >= wanted
            elif op == "<":
                count += value < wanted
            elif op == "<=":
                count += value <= wanted
    return count


def _if(ctx, args):
    err = _first_error(args)
    if err is not None:
        return err
    cond, when_true, when_false = args
    if not isinstance(cond, bool):
        raise ScriptError("TYPE", f"IF condition must be Boolean, not {type_name(cond)}")
    return when_true if cond else when_false


def _abs(ctx, args):
    (value,) = args
    if isinstance(value, ErrorValue):
        return value
    if value is None:
        return 0
    if not is_number(value):
        raise ScriptError("TYPE", f"ABS expects a number, not {type_name(value)}")
    return abs(value)


def _round(ctx, args):
    value = args[0]
    digits = args[1] if len(args) > 1 else 0
    err = _first_error(args)
    if err is not None:
        return err
    if value is None:
        value = 0
    if not is_number(value):
        raise ScriptError("TYPE", f"ROUND expects a number, not {type_name(value)}")
    if isinstance(digits, bool) or not isinstance(digits, int):
        if isinstance(digits, float) and digits == int(digits):
            digits = int(digits)
        else:
            raise ScriptError("TYPE", "ROUND digit count must be an integer")
    if isinstance(value, int) and digits >= 0:
        return value
    try:
        quant = Decimal(1).scaleb(-digits)
        result = float(Decimal(repr(float(value))).quantize(quant, rounding=ROUND_HALF_UP))
    except (InvalidOperation, OverflowError, ValueError):
        return ErrorValue(ErrorKind.VALUE, "ROUND out of range")
    if isinstance(value, int):
        return int(result)
    return result


def _len(ctx, args):
    (value,) = args
    if isinstance(value, ErrorValue):
        return value
    if isinstance(value, (str, list, dict)):
        return len(value)
    raise ScriptError("TYPE", f"LEN expects text or a list, not {type_name(value)}")


def _concat(ctx, args):
    err = _first_error(args)
    if err is not None:
        return err
    parts = []
    for value in args:
        if isinstance(value, (list, dict)):
            raise ScriptError("TYPE", "CONCAT expects scalar values")
        parts.append(render_value(value))
    return "".join(parts)


def _error(ctx, args):
    (kind_text,) = args
    if not isinstance(kind_text, str) or kind_text not in ErrorKind.__members__:
        raise ScriptError("VALUE", f"unknown error kind {kind_text!r}")
    return ErrorValue(ErrorKind(kind_text))


def _date(ctx, args):
    (text,) = args
    if isinstance(text, ErrorValue):
        return text
    if isinstance(text, datetime.date):
        return text
    if not isinstance(text, str):
        raise ScriptError("TYPE", "Date expects ISO text")
    date = parse_iso_date(text.strip())
    if date is None:
        raise ScriptError("VALUE", f"not an ISO date: {text!r}")
    return date


def _print(ctx, args):
    ctx.write_output(" ".join(render_value(a) for a in args) + "\n")
    return None


def _workbook(ctx, args):
    name = "Workbook"
    if args:
        if not isinstance(args[0], str):
            raise ScriptError("VALUE", "Workbook() name must be text")
        name = args[0]
    wb = RuntimeWorkbook(ctx, name)
    ctx.register_workbook(wb)
    return wb


def _sheet_names(ctx, args):
    (wb,) = args
    if not isinstance(wb, RuntimeWorkbook):
        raise ScriptError("TYPE", "sheet_names expects a workbook")
    return wb.sheet_names()


def _bounds_union(ctx, args):
    """Row-major cell addresses over the union of the sheets' bounds."""
    rect = None
    for sheet in args:
        if not isinstance(sheet, RuntimeSheet):
            raise ScriptError("TYPE", "bounds_union expects worksheets")
        b = sheet.bounds()
        rect = b if rect is None else rect.union(b)
    if rect is None or rect.empty:
        return []
    size = (rect.max.row - rect.min.row + 1) * (rect.max.col - rect.min.col + 1)
    ctx.charge(size)
    return [str(addr) for addr in rect.cells()]


BUILTIN_CONSTANTS = {"EMPTY": None}

BUILTINS = {
    fn.name.upper(): fn
    for fn in (
        BuiltinFunction("SUM", _sum, 1, None),
        BuiltinFunction("AVERAGE", _average, 1, None),
        BuiltinFunction("MIN", _min, 1, None),
        BuiltinFunction("MAX", _max, 1, None),
        BuiltinFunction("COUNT", _count, 1, None),
        BuiltinFunction("COUNTIF", _countif, 2, 2),
        BuiltinFunction("IF", _if, 3, 3),
        BuiltinFunction("ABS", _abs, 1, 1),
        BuiltinFunction("ROUND", _round, 1, 2),
        BuiltinFunction("LEN", _len, 1, 1),
        BuiltinFunction("CONCAT", _concat, 1, None),
        BuiltinFunction("Error", _error, 1, 1),
        BuiltinFunction("Date", _date, 1, 1),
        BuiltinFunction("print", _print, 0, None),
        BuiltinFunction("Workbook", _workbook, 0, 1),
        BuiltinFunction("sheet_names", _sheet_names, 1, 1),
        BuiltinFunction("bounds_union", _bounds_union, 0, None),
    )
}
