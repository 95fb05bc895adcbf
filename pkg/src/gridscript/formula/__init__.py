"""Formula language: lexer, parser, and translation to script statements."""

from . import ast
from .lexer import BUILTIN_FUNCTIONS, ParseError, Token, tokenize
from .parser import parse_formula, parse_worksheet_formula
from .translate import (
    CellDep,
    ColumnDep,
    RangeDep,
    SheetDep,
    TranslationUnit,
    formula_dependencies,
    render_expression,
    translate_formula,
)

__all__ = [
    "ast",
    "BUILTIN_FUNCTIONS",
    "ParseError",
    "Token",
    "tokenize",
    "parse_formula",
    "parse_worksheet_formula",
    "CellDep",
    "ColumnDep",
    "RangeDep",
    "SheetDep",
    "TranslationUnit",
    "formula_dependencies",
    "render_expression",
    "translate_formula",
]
