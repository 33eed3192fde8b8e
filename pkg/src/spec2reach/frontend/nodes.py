"""Typed AST for the supported C subset.

Structural equality (``==``) compares node kinds, names, operators, values and
resolved types; spans, unique ids and provenance tags are ignored.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .errors import Span

INT_MIN = -(2**31)
INT_MAX = 2**31 - 1
UINT_MAX = 2**32 - 1

_uids = itertools.count(1)


def fresh_uid() -> int:
    return next(_uids)


class CType(enum.Enum):
    INT = "int"
    UINT = "unsigned int"
    PTR = "void *"
    # result of comparisons and logical operators; an int in C
    BOOL = "bool"

    @property
    def is_signed_int(self) -> bool:
        return self in (CType.INT, CType.BOOL)

    @property
    def is_integer(self) -> bool:
        return self is not CType.PTR

    @property
    def spelling(self) -> str:
        return "int" if self is CType.BOOL else self.value

    def in_range(self, value: int) -> bool:
        if self is CType.UINT:
            return 0 <= value <= UINT_MAX
        if self is CType.PTR:
            return value >= 0
        return INT_MIN <= value <= INT_MAX


ARITH_OPS = ("+", "-", "*", "/", "%")
REL_OPS = ("<", "<=", ">", ">=", "==", "!=")
LOGIC_OPS = ("&&", "||")

ALLOC_FUNCS = ("malloc", "calloc", "realloc")
BUILTIN_FUNCS = ("nondet", "malloc", "calloc", "realloc", "free", "assert",
                 "__assert_live", "reach_error")


# ---------------------------------------------------------------- expressions


@dataclass(eq=True)
class Expr:
    ctype: CType = field(default=CType.INT, kw_only=True)
    span: Optional[Span] = field(default=None, compare=False, kw_only=True, repr=False)

    def children(self) -> tuple["Expr", ...]:
        return ()

    def walk(self) -> Iterator["Expr"]:
        yield self
        for c in self.children():
            yield from c.walk()


@dataclass(eq=True)
class IntLit(Expr):
    value: int


@dataclass(eq=True)
class Name(Expr):
    id: str


@dataclass(eq=True)
class Unary(Expr):
    op: str  # "-" or "!"
    operand: Expr

    def children(self):
        return (self.operand,)


@dataclass(eq=True)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr

    def children(self):
        return (self.left, self.right)


@dataclass(eq=True)
class Call(Expr):
    func: str
    args: list[Expr] = field(default_factory=list)

    def children(self):
        return tuple(self.args)


def is_atom(e: Expr) -> bool:
    return isinstance(e, (IntLit, Name))


def names_in(e: Expr) -> set[str]:
    return {n.id for n in e.walk() if isinstance(n, Name)}


# ----------------------------------------------------------------- statements


@dataclass(eq=True)
class Stmt:
    span: Optional[Span] = field(default=None, compare=False, kw_only=True, repr=False)
    uid: int = field(default_factory=fresh_uid, compare=False, kw_only=True, repr=False)
    # set on statements inserted by instrumentation
    provenance: Optional[dict] = field(default=None, compare=False, kw_only=True, repr=False)

    def child_blocks(self) -> tuple["Block", ...]:
        return ()

    def exprs(self) -> tuple[Expr, ...]:
        return ()


@dataclass(eq=True)
class Block(Stmt):
    stmts: list[Stmt] = field(default_factory=list)

    def child_blocks(self):
        return (self,)


@dataclass(eq=True)
class Decl(Stmt):
    ctype: CType
    name: str
    init: Optional[Expr] = None

    def exprs(self):
        return (self.init,) if self.init is not None else ()


@dataclass(eq=True)
class Assign(Stmt):
    target: str
    value: Expr

    def exprs(self):
        return (self.value,)


@dataclass(eq=True)
class ExprStmt(Stmt):
    """A call evaluated for its effect: ``free(p);``, ``nondet();``."""

    call: Call

    def exprs(self):
        return (self.call,)


@dataclass(eq=True)
class If(Stmt):
    cond: Expr
    then: Block
    orelse: Optional[Block] = None

    def child_blocks(self):
        return (self.then,) if self.orelse is None else (self.then, self.orelse)

    def exprs(self):
        return (self.cond,)


@dataclass(eq=True)
class While(Stmt):
    cond: Expr
    body: Block

    def child_blocks(self):
        return (self.body,)

    def exprs(self):
        return (self.cond,)


@dataclass(eq=True)
class Goto(Stmt):
    label: str


@dataclass(eq=True)
class Label(Stmt):
    name: str


@dataclass(eq=True)
class Break(Stmt):
    pass


@dataclass(eq=True)
class Continue(Stmt):
    pass


@dataclass(eq=True)
class Return(Stmt):
    value: Optional[Expr] = None

    def exprs(self):
        return (self.value,) if self.value is not None else ()


@dataclass(eq=True)
class Assert(Stmt):
    cond: Expr

    def exprs(self):
        return (self.cond,)


@dataclass(eq=True)
class AssertLive(Stmt):
    index: int
    cond: Expr

    def exprs(self):
        return (self.cond,)


@dataclass(eq=True)
class FunctionDef:
    name: str
    ret: Optional[CType]  # None for void
    params: list[Decl]
    body: Block
    span: Optional[Span] = field(default=None, compare=False, repr=False)


@dataclass(eq=True)
class Program:
    globals: list[Decl] = field(default_factory=list)
    main: Optional[FunctionDef] = None

    def statements(self) -> Iterator[Stmt]:
        """Pre-order walk over every statement of ``main``."""
        if self.main is not None:
            yield from walk_stmts(self.main.body)

    def variables(self) -> dict[str, CType]:
        out = {d.name: d.ctype for d in self.globals}
        for s in self.statements():
            if isinstance(s, Decl):
                out[s.name] = s.ctype
        return out


StmtLike = Union[Stmt, Block]


def walk_stmts(s: Stmt) -> Iterator[Stmt]:
    yield s
    if isinstance(s, Block):
        for c in s.stmts:
            yield from walk_stmts(c)
    else:
        for b in s.child_blocks():
            yield from walk_stmts(b)
