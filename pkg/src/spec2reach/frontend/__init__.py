"""C-subset front end: lexing, parsing with type resolution, and emission."""

from pathlib import Path

from .emit import RUNTIME_PRELUDE, emit, emit_expr, emit_with_lines
from .errors import CSyntaxError, FrontendError, Span, UnsupportedFeature
from .nodes import (
    INT_MAX, INT_MIN, UINT_MAX, Assert, AssertLive, Assign, Binary, Block,
    Break, Call, Continue, CType, Decl, Expr, ExprStmt, FunctionDef, Goto, If,
    IntLit, Label, Name, Program, Return, Stmt, Unary, While, walk_stmts,
)
from .parser import parse, parse_expression, parse_statements


class SourceProgram:
    """A C source file with newline-normalized text."""

    def __init__(self, path: str, text: str):
        self.path = path
        self.text = text.replace("\r\n", "\n").replace("\r", "\n")

    @classmethod
    def load(cls, path) -> "SourceProgram":
        return cls(str(path), Path(path).read_text(encoding="utf-8"))

    def save(self, path) -> None:
        Path(path).write_text(self.text, encoding="utf-8", newline="\n")

    def parse(self, **kw) -> Program:
        return parse(self.text, self.path, **kw)


__all__ = [
    "RUNTIME_PRELUDE", "SourceProgram", "emit", "emit_expr", "emit_with_lines",
    "parse", "parse_expression", "parse_statements",
    "CSyntaxError", "FrontendError", "Span", "UnsupportedFeature",
    "INT_MAX", "INT_MIN", "UINT_MAX", "CType", "Program", "FunctionDef",
    "Stmt", "Expr", "Assert", "AssertLive", "Assign", "Binary", "Block",
    "Break", "Call", "Continue", "Decl", "ExprStmt", "Goto", "If", "IntLit",
    "Label", "Name", "Return", "Unary", "While", "walk_stmts",
]
