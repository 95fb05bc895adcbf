"""Runtime error types: raised faults and the records that report them."""

from __future__ import annotations

from dataclasses import dataclass, field


class ScriptError(Exception):
    """A fault raised while executing script code.

    kind is an ErrorKind name (DIV0, NAME, VALUE, CYCLE, REF, TYPE) for
    faults that can land in a cell, or SYNTAX for unparseable code.
    """

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind
        self.message = message
        self.stack: tuple[Frame, ...] | None = None


class ScriptSyntaxError(ScriptError):
    def __init__(self, message: str, line: int):
        super().__init__("SYNTAX", message)
        self.line = line


class BudgetExceeded(Exception):
    """Execution hit the step or clock budget; results are partial."""

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


@dataclass
class Frame:
    section: str
    line: int
    function: str

    def snapshot(self) -> "Frame":
        return Frame(self.section, self.line, self.function)


@dataclass(frozen=True)
class ErrorRecord:
    kind: str
    message: str
    section: str | None = None
    line: int | None = None
    cell: str | None = None
    stack: tuple[Frame, ...] = field(default_factory=tuple)
