from .errors import BudgetExceeded, ErrorRecord, Frame, ScriptError, ScriptSyntaxError
from .interp import ExecutionLimits, FunctionValue, Interpreter, Scope, execute_program_text
from .objects import BoundMethod, CellHandle, RuntimeSheet, RuntimeWorkbook
from .parser import parse_script, parse_statement

__all__ = [
    "BoundMethod",
    "BudgetExceeded",
    "CellHandle",
    "ErrorRecord",
    "ExecutionLimits",
    "Frame",
    "FunctionValue",
    "Interpreter",
    "RuntimeSheet",
    "RuntimeWorkbook",
    "Scope",
    "ScriptError",
    "ScriptSyntaxError",
    "execute_program_text",
    "parse_script",
    "parse_statement",
]
