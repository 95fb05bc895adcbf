"""Tree-walking script interpreter with step and clock budgets."""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

from ..values import ErrorKind, ErrorValue, is_number, type_name
from . import parser as ast
from .builtins import BUILTIN_CONSTANTS, BUILTINS, BuiltinFunction
from .errors import BudgetExceeded, Frame, ScriptError
from .objects import BoundMethod, CellHandle, RuntimeSheet, RuntimeWorkbook

_CLOCK_CHECK_EVERY = 2048
_MAX_CALL_DEPTH = 64
_MAX_INT_EXPONENT = 1_000_000


@dataclass(frozen=True)
class ExecutionLimits:
    step_budget: int = 10_000_000
    clock_budget: float = 10.0


class Scope:
    __slots__ = ("vars", "parent")

    def __init__(self, parent: "Scope | None" = None):
        self.vars: dict[str, object] = {}
        self.parent = parent

    def lookup(self, name: str):
        scope: Scope | None = self
        while scope is not None:
            if name in scope.vars:
                return scope.vars[name]
            scope = scope.parent
        raise KeyError(name)

    def assign(self, name: str, value) -> None:
        self.vars[name] = value


@dataclass
class FunctionValue:
    name: str
    params: tuple[str, ...]
    body: tuple[ast.Stmt, ...]
    scope: Scope
    section: str
    line: int


class _ReturnSignal(Exception):
    def __init__(self, value):
        self.value = value


class Interpreter:
    """Executes statements against one shared global namespace."""

    def __init__(self, limits: ExecutionLimits | None = None, data_root: str | None = None):
        self.limits = limits or ExecutionLimits()
        self.data_root = os.path.realpath(data_root) if data_root else None
        self.globals = Scope()
        self.workbook: RuntimeWorkbook | None = None
        self.output: list[str] = []
        self.current_section = ""
        self.frames: list[Frame] = [Frame("", 0, "<top>")]
        self.steps = 0
        self._started = time.monotonic()
        self._next_clock_check = _CLOCK_CHECK_EVERY
        self._call_depth = 0

    # engine-facing helpers

    def set_section(self, section: str) -> None:
        self.current_section = section
        self.frames = [Frame(section, 0, "<top>")]

    def stack_snapshot(self) -> tuple[Frame, ...]:
        return tuple(frame.snapshot() for frame in self.frames)

    def write_output(self, text: str) -> None:
        self.output.append(text)

    def register_workbook(self, wb: RuntimeWorkbook) -> None:
        if self.workbook is None:
            self.workbook = wb

    def charge(self, amount: int = 1) -> None:
        self.steps += amount
        if self.steps > self.limits.step_budget:
            raise BudgetExceeded(f"step budget of {self.limits.step_budget} exceeded")
        if self.steps >= self._next_clock_check:
            self._next_clock_check = self.steps + _CLOCK_CHECK_EVERY
            if time.monotonic() - self._started > self.limits.clock_budget:
                raise BudgetExceeded(f"clock budget of {self.limits.clock_budget}s exceeded")

    def resolve_data_path(self, path: str) -> str:
        if self.data_root is None:
            raise ScriptError("REF", "no data root is configured")
        if os.path.isabs(path):
            raise ScriptError("REF", "absolute paths are not allowed")
        target = os.path.realpath(os.path.join(self.data_root, path))
        if target != self.data_root and not target.startswith(self.data_root + os.sep):
            raise ScriptError("REF", f"{path!r} escapes the data root")
        return target

    # statements

    def exec_statements(self, stmts, scope: Scope | None = None) -> None:
        scope = scope or self.globals
        for stmt in stmts:
            self.exec_stmt(stmt, scope)

    def exec_stmt(self, stmt: ast.Stmt, scope: Scope) -> None:
        self.charge()
        self.frames[-1].line = stmt.line
        if isinstance(stmt, ast.Assign):
            value = self.eval(stmt.value, scope)
            self.assign_target(stmt.target, value, scope)
        elif isinstance(stmt, ast.ExprStmt):
            self.eval(stmt.value, scope)
        elif isinstance(stmt, ast.Pass):
            pass
        elif isinstance(stmt, ast.FuncDef):
            fn = FunctionValue(
                name=stmt.name,
                params=stmt.params,
                body=stmt.body,
                scope=scope,
                section=self.current_section,
                line=stmt.line,
            )
            scope.assign(stmt.name, fn)
        elif isinstance(stmt, ast.Return):
            value = None if stmt.value is None else self.eval(stmt.value, scope)
            raise _ReturnSignal(value)
        elif isinstance(stmt, ast.If):
            for cond, body in stmt.branches:
                if cond is None or self.condition(cond, scope):
                    self.exec_statements(body, scope)
                    break
        elif isinstance(stmt, ast.While):
            while self.condition(stmt.cond, scope):
                self.charge()
                self.frames[-1].line = stmt.line
                self.exec_statements(stmt.body, scope)
        elif isinstance(stmt, ast.For):
            iterable = self.eval(stmt.iterable, scope)
            if not isinstance(iterable, list):
                raise ScriptError("TYPE", f"cannot iterate over {type_name(iterable)}")
            for item in list(iterable):
                self.charge()
                scope.assign(stmt.var, item)
                self.exec_statements(stmt.body, scope)
        else:
            raise ScriptError("VALUE", f"unknown statement {type(stmt).__name__}")

    def assign_target(self, target: ast.Expr, value, scope: Scope) -> None:
        if isinstance(target, ast.Name):
            scope.assign(target.ident, value)
            return
        if isinstance(target, ast.Attr):
            base = self.eval(target.base, scope)
            if isinstance(base, CellHandle):
                base.set_attr(target.name, value)
                return
            raise ScriptError("TYPE", f"cannot set attribute on {type_name(base)}")
        if isinstance(target, ast.Index):
            base = self.eval(target.base, scope)
            key = self.eval(target.key, scope)
            if isinstance(base, list):
                index = self._list_index(base, key)
                base[index] = value
                return
            if isinstance(base, dict):
                self._check_map_key(key)
                base[key] = value
                return
            raise ScriptError("TYPE", f"cannot assign into {type_name(base)}")
        raise ScriptError("VALUE", "invalid assignment target")

    def condition(self, expr: ast.Expr, scope: Scope) -> bool:
        value = self.eval(expr, scope)
        if isinstance(value, ErrorValue):
            raise ScriptError(value.kind.value, value.message or "condition is an error value")
        if not isinstance(value, bool):
            raise ScriptError("TYPE", f"condition must be Boolean, not {type_name(value)}")
        return value

    # expressions

    def eval(self, node: ast.Expr, scope: Scope):
        self.charge()
        if isinstance(node, ast.Num):
            return node.value
        if isinstance(node, ast.Str):
            return node.value
        if isinstance(node, ast.Bool):
            return node.value
        if isinstance(node, ast.Name):
            return self.lookup(node.ident, scope)
        if isinstance(node, ast.ListExpr):
            return [self.eval(item, scope) for item in node.items]
        if isinstance(node, ast.MapExpr):
            out = {}
            for key_node, value_node in node.entries:
                key = self.eval(key_node, scope)
                self._check_map_key(key)
                out[key] = self.eval(value_node, scope)
            return out
        if isinstance(node, ast.Attr):
            base = self.eval(node.base, scope)
            if isinstance(base, (RuntimeWorkbook, RuntimeSheet, CellHandle)):
                return base.get_attr(node.name)
            raise ScriptError("TYPE", f"{type_name(base)} has no attributes")
        if isinstance(node, ast.Index):
            return self.index_get(node, scope)
        if isinstance(node, ast.Call):
            return self.call(node, scope)
        if isinstance(node, ast.BinOp):
            left = self.eval(node.left, scope)
            right = self.eval(node.right, scope)
            return self.arith(node.op, left, right)
        if isinstance(node, ast.Compare):
            left = self.eval(node.left, scope)
            right = self.eval(node.right, scope)
            return self.compare(node.op, left, right)
        if isinstance(node, ast.UnaryOp):
            operand = self.eval(node.operand, scope)
            return self.unary(node.op, operand)
        if isinstance(node, ast.BoolOp):
            left = self.eval(node.left, scope)
            if isinstance(left, ErrorValue):
                return left
            if not isinstance(left, bool):
                raise ScriptError("TYPE", f"{node.op} needs Boolean operands, not {type_name(left)}")
            if node.op == "and" and not left:
                return False
            if node.op == "or" and left:
                return True
            right = self.eval(node.right, scope)
            if isinstance(right, ErrorValue):
                return right
            if not isinstance(right, bool):
                raise ScriptError("TYPE", f"{node.op} needs Boolean operands, not {type_name(right)}")
            return right
        if isinstance(node, ast.NotOp):
            value = self.eval(node.operand, scope)
            if isinstance(value, ErrorValue):
                return value
            if not isinstance(value, bool):
                raise ScriptError("TYPE", f"not needs a Boolean operand, not {type_name(value)}")
            return not value
        raise ScriptError("VALUE", f"unknown expression {type(node).__name__}")

    def lookup(self, name: str, scope: Scope):
        try:
            return scope.lookup(name)
        except KeyError:
            pass
        upper = name.upper()
        if upper in BUILTIN_CONSTANTS:
            return BUILTIN_CONSTANTS[upper]
        builtin = BUILTINS.get(upper)
        if builtin is not None:
            return builtin
        raise ScriptError("NAME", f"name {name!r} is not defined")

    def index_get(self, node: ast.Index, scope: Scope):
        base = self.eval(node.base, scope)
        key = self.eval(node.key, scope)
        if isinstance(base, RuntimeWorkbook):
            if not isinstance(key, str):
                raise ScriptError("TYPE", "workbook subscripts take a sheet name")
            return base.get_sheet(key)
        if isinstance(base, RuntimeSheet):
            return base.get_item(key)
        if isinstance(base, list):
            return base[self._list_index(base, key)]
        if isinstance(base, dict):
            self._check_map_key(key)
            if key not in base:
                raise ScriptError("REF", f"no entry for key {key!r}")
            return base[key]
        raise ScriptError("TYPE", f"{type_name(base)} cannot be subscripted")

    def _list_index(self, base: list, key) -> int:
        if isinstance(key, bool) or not isinstance(key, int):
            raise ScriptError("TYPE", "list index must be an integer")
        if key < -len(base) or key >= len(base):
            raise ScriptError("REF", f"list index {key} out of range")
        return key

    @staticmethod
    def _check_map_key(key) -> None:
        if isinstance(key, (list, dict)):
            raise ScriptError("TYPE", "mapping keys must be scalar")

    def call(self, node: ast.Call, scope: Scope):
        callee = self.eval(node.func, scope)
        args = [self.eval(a, scope) for a in node.args]
        kwargs = {name: self.eval(v, scope) for name, v in node.kwargs}
        if isinstance(callee, BuiltinFunction):
            if kwargs:
                raise ScriptError("VALUE", f"{callee.name}() takes no keyword arguments")
            return callee.call(self, args, kwargs)
        if isinstance(callee, BoundMethod):
            return callee.call(self, args, kwargs)
        if isinstance(callee, FunctionValue):
            return self.call_function(callee, args, kwargs)
        raise ScriptError("TYPE", f"{type_name(callee)} is not callable")

    def call_function(self, fn: FunctionValue, args: list, kwargs: dict):
        if self._call_depth >= _MAX_CALL_DEPTH:
            raise ScriptError("VALUE", "maximum call depth exceeded")
        bound: dict[str, object] = {}
        if len(args) > len(fn.params):
            raise ScriptError("VALUE", f"{fn.name}() takes {len(fn.params)} argument(s), got {len(args)}")
        for param, value in zip(fn.params, args):
            bound[param] = value
        for name, value in kwargs.items():
            if name not in fn.params:
                raise ScriptError("VALUE", f"{fn.name}() got an unexpected keyword {name!r}")
            if name in bound:
                raise ScriptError("VALUE", f"{fn.name}() got multiple values for {name!r}")
            bound[name] = value
        missing = [p for p in fn.params if p not in bound]
        if missing:
            raise ScriptError("VALUE", f"{fn.name}() missing argument {missing[0]!r}")
        local = Scope(parent=fn.scope)
        local.vars.update(bound)
        self.frames.append(Frame(fn.section, fn.line, fn.name))
        self._call_depth += 1
        try:
            self.exec_statements(fn.body, local)
            return None
        except _ReturnSignal as signal:
            return signal.value
        except ScriptError as err:
            if err.stack is None:
                err.stack = self.stack_snapshot()
            raise
        finally:
            self._call_depth -= 1
            self.frames.pop()

    # operator semantics

    def arith(self, op: str, a, b):
        if isinstance(a, ErrorValue):
            return a
        if isinstance(b, ErrorValue):
            return b
        if op == "+" and isinstance(a, list) and isinstance(b, list):
            return a + b
        left = 0 if a is None else a
        right = 0 if b is None else b
        if not is_number(left) or not is_number(right):
            return ErrorValue(
                ErrorKind.TYPE, f"cannot apply {op} to {type_name(a)} and {type_name(b)}"
            )
        try:
            if op == "+":
                return left + right
            if op == "-":
                return left - right
            if op == "*":
                return left * right
            if op == "/":
                return left / right
            if op == "%":
                return left % right
            if op == "**":
                if (
                    isinstance(left, int)
                    and isinstance(right, int)
                    and abs(left) > 1
                    and abs(right) > _MAX_INT_EXPONENT
                ):
                    return ErrorValue(ErrorKind.VALUE, "exponent too large")
                result = left**right
                if isinstance(result, complex):
                    return ErrorValue(ErrorKind.VALUE, "result is not a real number")
                return result
        except ZeroDivisionError:
            return ErrorValue(ErrorKind.DIV0, "division by zero")
        except OverflowError:
            return ErrorValue(ErrorKind.VALUE, "numeric overflow")
        raise ScriptError("VALUE", f"unknown operator {op!r}")

    def compare(self, op: str, a, b):
        if isinstance(a, ErrorValue):
            return a
        if isinstance(b, ErrorValue):
            return b
        if op in ("==", "!="):
            equal = self._equality(a, b)
            if equal is None:
                return ErrorValue(
                    ErrorKind.TYPE, f"cannot compare {type_name(a)} with {type_name(b)}"
                )
            return equal if op == "==" else not equal
        ok = (
            (is_number(a) and is_number(b))
            or (isinstance(a, str) and isinstance(b, str))
            or (self._is_date(a) and self._is_date(b))
        )
        if not ok:
            return ErrorValue(ErrorKind.TYPE, f"cannot order {type_name(a)} and {type_name(b)}")
        if op == "<":
            return a < b
        if op == "<=":
            return a <= b
        if op == ">":
            return a > b
        if op == ">=":
            return a >= b
        raise ScriptError("VALUE", f"unknown comparison {op!r}")

    @staticmethod
    def _is_date(v) -> bool:
        import datetime

        return isinstance(v, datetime.date)

    def _equality(self, a, b):
        if a is None and b is None:
            return True
        if a is None or b is None:
            return None
        if is_number(a) and is_number(b):
            return a == b
        for klass in (bool, str, list, dict):
            if isinstance(a, klass) and isinstance(b, klass):
                return a == b
        if self._is_date(a) and self._is_date(b):
            return a == b
        return None

    def unary(self, op: str, value):
        if isinstance(value, ErrorValue):
            return value
        operand = 0 if value is None else value
        if not is_number(operand):
            return ErrorValue(ErrorKind.TYPE, f"cannot apply unary {op} to {type_name(value)}")
        return -operand if op == "-" else +operand


def execute_program_text(source: str, interp: Interpreter) -> None:
    """Parse and run free-standing script text (used by the CLI run command)."""
    from .parser import parse_script

    stmts = parse_script(source)
    interp.set_section("SCRIPT")
    interp.exec_statements(stmts, interp.globals)
