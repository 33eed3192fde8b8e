from __future__ import annotations

from typing import Optional

from .nodes import (
    Assert, AssertLive, Assign, Binary, Block, Break, Call, Continue, Decl,
    Expr, ExprStmt, FunctionDef, Goto, If, IntLit, Label, Name, Program,
    Return, Stmt, Unary, While,
)

# Prototypes a consumer needs to compile emitted programs; the parser skips them.
RUNTIME_PRELUDE = """\
extern void reach_error(void);
extern int nondet(void);
extern void __assert_live(int);
extern void *malloc(unsigned long);
extern void *calloc(unsigned long, unsigned long);
extern void *realloc(void *, unsigned long);
extern void free(void *);
"""

_PREC = {"||": 1, "&&": 2, "==": 3, "!=": 3, "<": 4, "<=": 4, ">": 4, ">=": 4,
         "+": 5, "-": 5, "*": 6, "/": 6, "%": 6}
_UNARY_PREC = 7
_ATOM_PREC = 8


def _prec(e: Expr) -> int:
    if isinstance(e, Binary):
        return _PREC[e.op]
    if isinstance(e, Unary) or (isinstance(e, IntLit) and e.value < 0):
        return _UNARY_PREC
    return _ATOM_PREC


def emit_expr(e: Expr) -> str:
    if isinstance(e, IntLit):
        return f"{e.value}u" if e.ctype.name == "UINT" else str(e.value)
    if isinstance(e, Name):
        return e.id
    if isinstance(e, Call):
        return f"{e.func}({', '.join(emit_expr(a) for a in e.args)})"
    if isinstance(e, Unary):
        inner = emit_expr(e.operand)
        if _prec(e.operand) <= _UNARY_PREC:
            inner = f"({inner})"
        return f"{e.op}{inner}"
    if isinstance(e, Binary):
        p = _PREC[e.op]
        left = emit_expr(e.left)
        if _prec(e.left) < p:
            left = f"({left})"
        right = emit_expr(e.right)
        if _prec(e.right) <= p:
            right = f"({right})"
        return f"{left} {e.op} {right}"
    raise TypeError(f"not an expression: {e!r}")


def _decl_text(d: Decl) -> str:
    spelling = d.ctype.spelling
    head = f"{spelling}{d.name}" if spelling.endswith("*") else f"{spelling} {d.name}"
    if d.init is None:
        return head + ";"
    return f"{head} = {emit_expr(d.init)};"


class Emitter:
    """Pretty-printer that remembers the output line of every statement."""

    def __init__(self, indent: str = "    "):
        self.indent = indent
        self.out: list[str] = []
        self.lines: dict[int, int] = {}

    def line(self, depth: int, text: str, stmt: Optional[Stmt] = None):
        if stmt is not None:
            self.lines[stmt.uid] = len(self.out) + 1
        self.out.append(self.indent * depth + text)

    def block_body(self, block: Block, depth: int):
        for s in block.stmts:
            self.stmt(s, depth)

    def stmt(self, s: Stmt, depth: int):
        if isinstance(s, Decl):
            self.line(depth, _decl_text(s), s)
        elif isinstance(s, Assign):
            self.line(depth, f"{s.target} = {emit_expr(s.value)};", s)
        elif isinstance(s, ExprStmt):
            self.line(depth, emit_expr(s.call) + ";", s)
        elif isinstance(s, Assert):
            self.line(depth, f"if (!({emit_expr(s.cond)})) reach_error();", s)
        elif isinstance(s, AssertLive):
            self.line(depth, f"__assert_live({emit_expr(s.cond)});", s)
        elif isinstance(s, Block):
            self.line(depth, "{", s)
            self.block_body(s, depth + 1)
            self.line(depth, "}")
        elif isinstance(s, If):
            self.line(depth, f"if ({emit_expr(s.cond)}) {{", s)
            self.block_body(s.then, depth + 1)
            if s.orelse is not None and s.orelse.stmts:
                self.line(depth, "} else {")
                self.block_body(s.orelse, depth + 1)
            self.line(depth, "}")
        elif isinstance(s, While):
            self.line(depth, f"while ({emit_expr(s.cond)}) {{", s)
            self.block_body(s.body, depth + 1)
            self.line(depth, "}")
        elif isinstance(s, Goto):
            self.line(depth, f"goto {s.label};", s)
        elif isinstance(s, Label):
            self.line(max(depth - 1, 0), f"{s.name}:;", s)
        elif isinstance(s, Break):
            self.line(depth, "break;", s)
        elif isinstance(s, Continue):
            self.line(depth, "continue;", s)
        elif isinstance(s, Return):
            text = "return;" if s.value is None else f"return {emit_expr(s.value)};"
            self.line(depth, text, s)
        else:
            raise TypeError(f"not a statement: {s!r}")

    def function(self, fn: FunctionDef):
        ret = "void" if fn.ret is None else fn.ret.spelling
        params = ", ".join(_decl_text(p)[:-1] for p in fn.params) or "void"
        if fn.name == "main":
            params = ""
        self.line(0, f"{ret} {fn.name}({params}) {{")
        self.block_body(fn.body, 1)
        self.line(0, "}")

    def program(self, prog: Program, prelude: bool = False):
        if prelude:
            for ln in RUNTIME_PRELUDE.splitlines():
                self.line(0, ln)
            self.line(0, "")
        for g in prog.globals:
            self.line(0, _decl_text(g), g)
        if prog.globals and prog.main is not None:
            self.line(0, "")
        if prog.main is not None:
            self.function(prog.main)

    def text(self) -> str:
        return "\n".join(self.out) + ("\n" if self.out else "")


def emit(node, prelude: bool = False) -> str:
    """Render a program, function, statement or expression as C text."""
    if isinstance(node, Expr):
        return emit_expr(node)
    em = Emitter()
    if isinstance(node, Program):
        em.program(node, prelude=prelude)
    elif isinstance(node, FunctionDef):
        em.function(node)
    elif isinstance(node, Stmt):
        em.stmt(node, 0)
    else:
        raise TypeError(f"cannot emit {type(node).__name__}")
    return em.text()


def emit_with_lines(prog: Program, prelude: bool = False) -> tuple[str, dict[int, int]]:
    em = Emitter()
    em.program(prog, prelude=prelude)
    return em.text(), em.lines
