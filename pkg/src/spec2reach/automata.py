"""Instrumentation automata: patterns over CFA operations, operation templates
and state annotations."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .cfa import LocationFacts, OpKind, Operation, OpToken
from .frontend import emit_expr, parse_statements
from .frontend.nodes import (
    Assert, AssertLive, Assign, Call, CType, Decl, Expr, ExprStmt, IntLit, Name,
    Stmt, is_atom, walk_stmts,
)


class Placement(str, enum.Enum):
    A = "A"  # after the matched operation
    B = "B"  # before the matched operation


class Annotation(str, enum.Enum):
    TRUE = "true"
    LOOP_HEAD = "loop_head"
    INIT = "init"
    END = "end"


class UnboundWildcard(KeyError):
    def __init__(self, index: int):
        super().__init__(index)
        self.index = index

    def __str__(self):
        return f"wildcard $x{self.index} has no binding"


class TemplateError(ValueError):
    """A template writes a variable that is not a ghost variable."""


@dataclass(frozen=True)
class MatchResult:
    matched: bool
    bindings: Mapping[int, Expr] = field(default_factory=dict)

    def __bool__(self):
        return self.matched


NO_MATCH = MatchResult(False)


# ------------------------------------------------------------------ patterns


class Pattern:
    def match(self, op: Operation) -> MatchResult:
        raise NotImplementedError

    def wildcards(self) -> set[int]:
        return set()

    def describe(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.describe()


_PAT_TOKEN = re.compile(
    r"\s*(?:(?P<gap>\.\*)|\$x(?P<wild>\d+)|(?P<num>\d+u?)|(?P<id>[A-Za-z_]\w*)"
    r"|(?P<op>&&|\|\||<=|>=|==|!=|[-+*/%<>=!(),;\[\]]))")

_BINOPS = {"+", "-", "*", "/", "%", "<", "<=", ">", ">=", "==", "!=", "&&", "||"}


@dataclass(frozen=True)
class _Elem:
    kind: str  # gap | wild | lit
    text: str = ""
    index: int = -1
    opkind: str = ""  # binop | unop for operator literals


class TokenPattern(Pattern):
    """A token sequence with ``$x<k>`` wildcards and ``.*`` gaps.

    The pattern must cover the whole token stream of the operation. Each
    wildcard binds exactly one identifier or literal token; gaps absorb any
    run of tokens and are matched shortest-first, which makes the leftmost
    occurrence win. With ``signed_only`` an operator literal matches only an
    operator whose result is a signed ``int``.
    """

    def __init__(self, text: str, *, signed_only: bool = False):
        self.text = text
        self.signed_only = signed_only
        self.elems = self._compile(text)
        idx = [e.index for e in self.elems if e.kind == "wild"]
        if len(idx) != len(set(idx)):
            raise ValueError(f"duplicate wildcard in pattern {text!r}")

    @staticmethod
    def _compile(text: str) -> list[_Elem]:
        out: list[_Elem] = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _PAT_TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                raise ValueError(f"bad pattern {text!r} at {pos}")
            pos = m.end()
            if m.group("gap"):
                out.append(_Elem("gap"))
            elif m.group("wild"):
                out.append(_Elem("wild", index=int(m.group("wild"))))
            elif m.group("op"):
                tok = m.group("op")
                prev = out[-1] if out else None
                unary_pos = prev is None or prev.kind == "gap" or (
                    prev.kind == "lit" and (prev.opkind or prev.text in ("=", "(", ",", "[")))
                if tok in ("-", "!") and unary_pos:
                    out.append(_Elem("lit", tok, opkind="unop"))
                elif tok in _BINOPS:
                    out.append(_Elem("lit", tok, opkind="binop"))
                else:
                    out.append(_Elem("lit", tok))
            else:
                out.append(_Elem("lit", m.group("num") or m.group("id")))
        return out

    def wildcards(self) -> set[int]:
        return {e.index for e in self.elems if e.kind == "wild"}

    def describe(self) -> str:
        return self.text

    def _lit_ok(self, el: _Elem, tok: OpToken) -> bool:
        if el.text != tok.text:
            return False
        if el.opkind:
            if tok.kind != el.opkind:
                return False
            if self.signed_only and tok.ctype is not CType.INT:
                return False
        return True

    def match_tokens(self, toks: Sequence[OpToken]) -> MatchResult:
        elems = self.elems
        # iterative backtracking; gap extents are tried shortest first
        def go(i: int, j: int, bind: dict[int, Expr]) -> Optional[dict[int, Expr]]:
            while i < len(elems):
                el = elems[i]
                if el.kind == "gap":
                    for k in range(j, len(toks) + 1):
                        res = go(i + 1, k, dict(bind))
                        if res is not None:
                            return res
                    return None
                if j >= len(toks):
                    return None
                tok = toks[j]
                if el.kind == "wild":
                    if tok.kind not in ("id", "num") or tok.expr is None:
                        return None
                    bind[el.index] = tok.expr
                elif not self._lit_ok(el, tok):
                    return None
                i += 1
                j += 1
            return bind if j == len(toks) else None

        res = go(0, 0, {})
        return NO_MATCH if res is None else MatchResult(True, res)

    def match(self, op: Operation) -> MatchResult:
        if op.kind is OpKind.SKIP:
            return NO_MATCH
        return self.match_tokens(op.tokens())


class CondPattern(Pattern):
    """``cond`` (positive=True) or ``!cond``: one side of a branch."""

    def __init__(self, positive: bool = True):
        self.positive = positive

    def match(self, op: Operation) -> MatchResult:
        if op.kind is OpKind.ASSUME and op.positive == self.positive:
            return MatchResult(True, {})
        return NO_MATCH

    def describe(self) -> str:
        return "cond" if self.positive else "!cond"


Cond = CondPattern(True)
NotCond = CondPattern(False)


class TruePattern(Pattern):
    def match(self, op: Operation) -> MatchResult:
        return MatchResult(True, {})

    def describe(self) -> str:
        return "true"


TRUE = TruePattern()


def _call_of(op: Operation) -> tuple[Optional[str], list[Expr], Optional[Expr]]:
    """(function, arguments, result target) of a call-shaped operation."""
    s = op.stmt
    types = op.types or {}
    if isinstance(s, ExprStmt):
        return s.call.func, list(s.call.args), None
    if isinstance(s, Decl) and isinstance(s.init, Call):
        return s.init.func, list(s.init.args), Name(s.name, ctype=s.ctype)
    if isinstance(s, Assign) and isinstance(s.value, Call):
        return s.value.func, list(s.value.args), Name(s.target, ctype=types.get(s.target, CType.INT))
    if isinstance(s, Assert):
        return "assert", [s.cond], None
    if isinstance(s, AssertLive):
        return "__assert_live", [s.cond], None
    return None, [], None


class CallPattern(Pattern):
    """A call to the named built-in; argument slots bind whole expressions.

    ``result`` binds the assigned variable of ``v = f(...)``; when set, only
    assignments or initializations match. ``index`` restricts
    ``__assert_live`` patterns to one occurrence.
    """

    def __init__(self, func: str, args: Sequence[int], result: Optional[int] = None,
                 index: Optional[int] = None):
        self.func = func
        self.args = tuple(args)
        self.result = result
        self.index = index

    def match(self, op: Operation) -> MatchResult:
        func, args, target = _call_of(op)
        if func != self.func or len(args) != len(self.args):
            return NO_MATCH
        if self.result is not None and target is None:
            return NO_MATCH
        if self.index is not None and not (
                isinstance(op.stmt, AssertLive) and op.stmt.index == self.index):
            return NO_MATCH
        bind = dict(zip(self.args, args))
        if self.result is not None:
            bind[self.result] = target
        return MatchResult(True, bind)

    def wildcards(self) -> set[int]:
        out = set(self.args)
        if self.result is not None:
            out.add(self.result)
        return out

    def describe(self) -> str:
        name = self.func if self.index is None else f"{self.func}_{self.index}"
        call = f"{name}({', '.join(f'$x{i}' for i in self.args)})"
        return f"$x{self.result} = {call};" if self.result is not None else f"{call};"


class AnyOf(Pattern):
    """Disjunction; the first matching alternative supplies the bindings."""

    def __init__(self, *alts: Pattern):
        self.alts = alts

    def match(self, op: Operation) -> MatchResult:
        for a in self.alts:
            r = a.match(op)
            if r:
                return r
        return NO_MATCH

    def wildcards(self) -> set[int]:
        # only wildcards bound by every alternative are safe to use
        sets = [a.wildcards() for a in self.alts]
        return set.intersection(*sets) if sets else set()

    def describe(self) -> str:
        return " | ".join(a.describe() for a in self.alts)


class AllOf(Pattern):
    """Conjunction; bindings of all parts must agree."""

    def __init__(self, *parts: Pattern):
        self.parts = parts

    def match(self, op: Operation) -> MatchResult:
        bind: dict[int, Expr] = {}
        for p in self.parts:
            r = p.match(op)
            if not r:
                return NO_MATCH
            for k, v in r.bindings.items():
                if k in bind and bind[k] != v:
                    return NO_MATCH
                bind[k] = v
        return MatchResult(True, bind)

    def wildcards(self) -> set[int]:
        return set().union(*(p.wildcards() for p in self.parts))

    def describe(self) -> str:
        return " & ".join(f"({p.describe()})" for p in self.parts)


def match(op: Operation, pattern: Pattern) -> MatchResult:
    return pattern.match(op)


# ----------------------------------------------------------------- templates

_SLOT = re.compile(r"\$x(\d+)")


@dataclass(frozen=True)
class OpTemplate:
    """C statement text with ``$x<k>`` slots."""

    text: str

    def wildcards(self) -> set[int]:
        return {int(m) for m in _SLOT.findall(self.text)}

    def substitute(self, bindings: Mapping[int, Expr]) -> str:
        def repl(m: re.Match) -> str:
            k = int(m.group(1))
            if k not in bindings:
                raise UnboundWildcard(k)
            e = bindings[k]
            text = emit_expr(e)
            return text if is_atom(e) and not (isinstance(e, IntLit) and e.value < 0) else f"({text})"
        return _SLOT.sub(repl, self.text)

    def instantiate(self, bindings: Mapping[int, Expr],
                    scope: Optional[dict[str, CType]] = None) -> list[Stmt]:
        return parse_statements(self.substitute(bindings), scope, permissive=scope is None)


def instantiate(tmpl: OpTemplate, bindings: MatchResult | Mapping[int, Expr],
                scope: Optional[dict[str, CType]] = None) -> list[Stmt]:
    if isinstance(bindings, MatchResult):
        bindings = bindings.bindings
    return tmpl.instantiate(bindings, scope)


def written_names(stmts: Sequence[Stmt]) -> set[str]:
    out: set[str] = set()
    for s in stmts:
        for t in walk_stmts(s):
            if isinstance(t, Assign):
                out.add(t.target)
            elif isinstance(t, Decl):
                out.add(t.name)
    return out


# ----------------------------------------------------------------- automaton


@dataclass(frozen=True)
class GhostVar:
    name: str
    ctype: CType
    init: str = "0"


@dataclass
class Transition:
    src: str
    pattern: Pattern
    template: OpTemplate
    placement: Placement
    dst: str
    # extra location guard; the source state's annotation applies as well
    at: Optional[Annotation] = None

    def describe(self) -> str:
        guard = f" @{self.at.value}" if self.at else ""
        return (f"{self.src} -> {self.dst} : {self.pattern.describe()}{guard} | "
                f"{self.template.text} | {self.placement.value}")


@dataclass
class InstrumentationAutomaton:
    """(Q, q0, Var, delta, alpha) plus an optional anchor location."""

    name: str
    states: list[str]
    q0: str
    ghosts: list[GhostVar]
    transitions: list[Transition]
    alpha: dict[str, Annotation]
    anchor: Optional[str] = None

    def __post_init__(self):
        if self.q0 not in self.states:
            raise ValueError(f"initial state {self.q0} not in Q")
        for t in self.transitions:
            if t.src not in self.states or t.dst not in self.states:
                raise ValueError(f"transition {t.describe()} leaves Q")
            missing = t.template.wildcards() - t.pattern.wildcards()
            if missing:
                raise UnboundWildcard(min(missing))
        for q in self.states:
            self.alpha.setdefault(q, Annotation.TRUE)

    @property
    def ghost_names(self) -> set[str]:
        return {g.name for g in self.ghosts}

    def outgoing(self, state: str) -> list[tuple[int, Transition]]:
        return [(i, t) for i, t in enumerate(self.transitions) if t.src == state]

    def check_writes(self, stmts: Sequence[Stmt]) -> None:
        bad = written_names(stmts) - self.ghost_names
        if bad:
            raise TemplateError(
                f"automaton {self.name} writes non-ghost variable(s): {', '.join(sorted(bad))}")

    def with_anchor(self, anchor: Optional[str]) -> "InstrumentationAutomaton":
        return InstrumentationAutomaton(self.name, list(self.states), self.q0, list(self.ghosts),
                                        list(self.transitions), dict(self.alpha), anchor)


def annotation_holds(value: Annotation, loc: str, facts: LocationFacts,
                     anchor: Optional[str] = None) -> bool:
    if value is Annotation.TRUE:
        return True
    if value is Annotation.INIT:
        return facts.is_init(loc)
    if value is Annotation.END:
        return facts.is_end(loc)
    if value is Annotation.LOOP_HEAD:
        return facts.is_loop_head(loc) and (anchor is None or loc == anchor)
    raise ValueError(value)


def dump_ia(ia: InstrumentationAutomaton) -> str:
    lines = [f"automaton {ia.name}" + (f" (anchor {ia.anchor})" if ia.anchor else "")]
    lines.append("  states: " + ", ".join(
        f"{q}{' (initial)' if q == ia.q0 else ''} [{ia.alpha[q].value}]" for q in ia.states))
    if ia.ghosts:
        lines.append("  vars: " + ", ".join(
            f"{g.ctype.spelling} {g.name} = {g.init}" for g in ia.ghosts))
    for t in ia.transitions:
        lines.append("  " + t.describe())
    return "\n".join(lines) + "\n"
