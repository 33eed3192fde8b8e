"""Control-flow automata: lowering from the AST, expression decomposition and
structural analyses (loop heads, loop variables, init and end locations)."""

from __future__ import annotations

import copy
import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

import networkx as nx

from .frontend import emit
from .frontend.emit import emit_expr
from .frontend.errors import UnsupportedFeature
from .frontend.nodes import (
    ALLOC_FUNCS, ARITH_OPS, Assert, AssertLive, Assign, Binary, Block, Break,
    Call, Continue, CType, Decl, Expr, ExprStmt, Goto, If, IntLit, Label, Name,
    Program, Return, Stmt, Unary, While, names_in,
)


class OpKind(enum.Enum):
    DECL = "decl"
    ASSIGN = "assign"
    ASSUME = "assume"
    CALL = "call"
    ASSERT = "assert"
    ASSERT_LIVE = "assert_live"
    MALLOC = "malloc"
    CALLOC = "calloc"
    REALLOC = "realloc"
    FREE = "free"
    RETURN = "return"
    SKIP = "skip"
    # compound ghost statement created by instrumentation
    GHOST = "ghost"


@dataclass(frozen=True)
class OpToken:
    text: str
    kind: str  # id | num | binop | unop | kw | punct
    ctype: Optional[CType] = None
    expr: Optional[Expr] = field(default=None, compare=False)


@dataclass(eq=False)
class Operation:
    kind: OpKind
    stmt: Optional[Stmt] = None
    cond: Optional[Expr] = None
    positive: bool = True
    tag: str = ""  # "entry" / "fallthrough" for SKIP edges
    # variable types, used to type assignment targets in token streams
    types: Optional[dict] = field(default=None, repr=False)

    def text(self) -> str:
        if self.kind is OpKind.ASSUME:
            c = emit_expr(self.cond)
            return f"[{c}]" if self.positive else f"[!({c})]"
        if self.kind is OpKind.SKIP:
            return f"skip ({self.tag})" if self.tag else "skip"
        s = self.stmt
        if isinstance(s, Assert):
            return f"assert({emit_expr(s.cond)});"
        return " ".join(ln.strip() for ln in emit(s).splitlines())

    def tokens(self) -> list[OpToken]:
        if self.kind is OpKind.ASSUME:
            inner = expr_tokens(self.cond)
            if not self.positive:
                inner = [OpToken("!", "unop", CType.BOOL), OpToken("(", "punct"),
                         *inner, OpToken(")", "punct")]
            return [OpToken("[", "punct"), *inner, OpToken("]", "punct")]
        if self.kind is OpKind.SKIP:
            return []
        return stmt_tokens(self.stmt, self.types)

    def variables(self) -> tuple[set[str], set[str]]:
        """Names read and written by this operation."""
        if self.kind is OpKind.ASSUME:
            return names_in(self.cond), set()
        s = self.stmt
        reads: set[str] = set()
        writes: set[str] = set()
        if s is None:
            return reads, writes
        for e in s.exprs():
            reads |= names_in(e)
        if isinstance(s, Decl):
            writes.add(s.name)
        elif isinstance(s, Assign):
            writes.add(s.target)
        return reads, writes


def _type_tokens(ctype: CType) -> list[OpToken]:
    if ctype is CType.PTR:
        return [OpToken("void", "kw"), OpToken("*", "punct")]
    if ctype is CType.UINT:
        return [OpToken("unsigned", "kw"), OpToken("int", "kw")]
    return [OpToken("int", "kw")]


_PREC = {"||": 1, "&&": 2, "==": 3, "!=": 3, "<": 4, "<=": 4, ">": 4, ">=": 4,
         "+": 5, "-": 5, "*": 6, "/": 6, "%": 6}


def _prec(e: Expr) -> int:
    if isinstance(e, Binary):
        return _PREC[e.op]
    if isinstance(e, Unary) or (isinstance(e, IntLit) and e.value < 0):
        return 7
    return 8


def _paren(toks: list[OpToken]) -> list[OpToken]:
    return [OpToken("(", "punct"), *toks, OpToken(")", "punct")]


def expr_tokens(e: Expr) -> list[OpToken]:
    """Token stream of an expression, parenthesized exactly like the emitter."""
    if isinstance(e, IntLit):
        text = f"{e.value}u" if e.ctype is CType.UINT else str(e.value)
        return [OpToken(text, "num", e.ctype, e)]
    if isinstance(e, Name):
        return [OpToken(e.id, "id", e.ctype, e)]
    if isinstance(e, Call):
        out = [OpToken(e.func, "id", e.ctype, None), OpToken("(", "punct")]
        for i, a in enumerate(e.args):
            if i:
                out.append(OpToken(",", "punct"))
            out.extend(expr_tokens(a))
        return out + [OpToken(")", "punct")]
    if isinstance(e, Unary):
        inner = expr_tokens(e.operand)
        if _prec(e.operand) <= 7:
            inner = _paren(inner)
        return [OpToken(e.op, "unop", e.ctype, e), *inner]
    if isinstance(e, Binary):
        p = _PREC[e.op]
        left = expr_tokens(e.left)
        if _prec(e.left) < p:
            left = _paren(left)
        right = expr_tokens(e.right)
        if _prec(e.right) <= p:
            right = _paren(right)
        return [*left, OpToken(e.op, "binop", e.ctype, e), *right]
    raise TypeError(e)


def stmt_tokens(s: Stmt, types: Optional[dict] = None) -> list[OpToken]:
    semi = OpToken(";", "punct")
    if isinstance(s, Decl):
        out = [*_type_tokens(s.ctype), OpToken(s.name, "id", s.ctype, Name(s.name, ctype=s.ctype))]
        if s.init is not None:
            out += [OpToken("=", "punct"), *expr_tokens(s.init)]
        return out + [semi]
    if isinstance(s, Assign):
        ctype = (types or {}).get(s.target)
        return [OpToken(s.target, "id", ctype, Name(s.target, ctype=ctype or CType.INT)),
                OpToken("=", "punct"),
                *expr_tokens(s.value), semi]
    if isinstance(s, ExprStmt):
        return [*expr_tokens(s.call), semi]
    if isinstance(s, Assert):
        return [OpToken("assert", "kw"), *_paren(expr_tokens(s.cond)), semi]
    if isinstance(s, AssertLive):
        return [OpToken("__assert_live", "kw"), *_paren(expr_tokens(s.cond)), semi]
    if isinstance(s, Return):
        val = expr_tokens(s.value) if s.value is not None else []
        return [OpToken("return", "kw"), *val, semi]
    # compound synthetic statements are not matched token-wise
    return [OpToken(t, "punct") for t in emit(s).split()]


@dataclass(eq=False)
class Edge:
    eid: int
    src: str
    op: Operation
    dst: str
    origin: Optional[Stmt] = None
    # set on edges created by sequentialization
    provenance: Optional["Provenance"] = None

    @property
    def synthetic(self) -> bool:
        return self.provenance is not None

    def key(self) -> tuple[str, str, str]:
        return (self.src, self.op.text(), self.dst)


@dataclass(frozen=True)
class Provenance:
    edge: int  # eid of the original edge this synthetic edge instruments
    automaton: int
    transition: int
    placement: str  # "A" | "B"
    index: int = 0  # statement index inside the instantiated template


@dataclass(eq=False)
class Cfa:
    """Control-flow automaton (L, l0, G) of ``main``."""

    locations: list[str]
    l0: str
    exit: str
    edges: list[Edge]
    program: Program
    scopes: dict[str, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        self._index()

    def _index(self):
        self._out: dict[str, list[Edge]] = {l: [] for l in self.locations}
        self._in: dict[str, list[Edge]] = {l: [] for l in self.locations}
        for e in self.edges:
            self._out.setdefault(e.src, []).append(e)
            self._in.setdefault(e.dst, []).append(e)

    def out_edges(self, loc: str) -> list[Edge]:
        return self._out.get(loc, [])

    def in_edges(self, loc: str) -> list[Edge]:
        return self._in.get(loc, [])

    def edge(self, eid: int) -> Edge:
        for e in self.edges:
            if e.eid == eid:
                return e
        raise KeyError(eid)

    @property
    def variables(self) -> dict[str, CType]:
        return self.program.variables()

    def graph(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        g.add_nodes_from(self.locations)
        for e in self.edges:
            g.add_edge(e.src, e.dst, key=e.eid)
        return g

    def edge_keys(self) -> list[tuple[str, str, str]]:
        return sorted(e.key() for e in self.edges)

    def dump(self, name: str = "cfa") -> str:
        lines = [f"digraph {name} {{", f"  // init: {self.l0}  exit: {self.exit}"]
        for e in self.edges:
            label = e.op.text().replace("\\", "\\\\").replace('"', '\\"')
            extra = ", synthetic=true" if e.synthetic else ""
            lines.append(f'  {e.src} -> {e.dst} [label="{label}"{extra}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def op_for_stmt(s: Stmt, types: Optional[dict] = None) -> Operation:
    """The single-edge operation for a simple statement; compound statements
    (only produced by instrumentation) become one GHOST operation."""
    if isinstance(s, Decl):
        kind = OpKind.DECL
        if isinstance(s.init, Call) and s.init.func in ALLOC_FUNCS:
            kind = OpKind(s.init.func)
    elif isinstance(s, Assign):
        kind = OpKind.ASSIGN
        if isinstance(s.value, Call) and s.value.func in ALLOC_FUNCS:
            kind = OpKind(s.value.func)
    elif isinstance(s, ExprStmt):
        kind = OpKind.FREE if s.call.func == "free" else OpKind.CALL
    elif isinstance(s, Assert):
        kind = OpKind.ASSERT
    elif isinstance(s, AssertLive):
        kind = OpKind.ASSERT_LIVE
    elif isinstance(s, Return):
        kind = OpKind.RETURN
    else:
        kind = OpKind.GHOST
    return Operation(kind, stmt=s, types=types)


# ------------------------------------------------------------------ lowering


class _Builder:
    def __init__(self, program: Program):
        self.program = program
        self.parent: dict[int, int] = {}
        self.count = 0
        self.edges: list[tuple[int, Operation, int, Optional[Stmt]]] = []
        self.scope_notes: dict[int, list[frozenset]] = {}
        self.globals = [g.name for g in program.globals]
        self.scope_stack: list[list[str]] = []
        self.loops: list[tuple[int, int]] = []  # (head, exit)
        self.labels: dict[str, int] = {}
        self.types = program.variables()

    def fresh(self) -> int:
        n = self.count
        self.count += 1
        self.parent[n] = n
        return n

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> int:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            lo, hi = min(ra, rb), max(ra, rb)
            self.parent[hi] = lo
        return self.find(a)

    def visible(self) -> frozenset:
        names = list(self.globals)
        for frame in self.scope_stack:
            names.extend(frame)
        return frozenset(names)

    def note(self, loc: int):
        self.scope_notes.setdefault(loc, []).append(self.visible())

    def edge(self, src: int, op: Operation, dst: int, origin: Optional[Stmt]):
        op.types = self.types
        self.edges.append((src, op, dst, origin))

    def label(self, name: str) -> int:
        if name not in self.labels:
            self.labels[name] = self.fresh()
        return self.labels[name]

    def block(self, b: Block, cur: int) -> int:
        self.scope_stack.append([])
        for s in b.stmts:
            cur = self.stmt(s, cur)
        self.note(cur)
        self.scope_stack.pop()
        return cur

    def simple(self, s: Stmt, cur: int) -> int:
        nxt = self.fresh()
        self.edge(cur, op_for_stmt(s), nxt, s)
        return nxt

    def stmt(self, s: Stmt, cur: int) -> int:
        self.note(cur)
        if isinstance(s, Decl):
            nxt = self.simple(s, cur)
            self.scope_stack[-1].append(s.name)
            return nxt
        if isinstance(s, (Assign, ExprStmt, Assert, AssertLive)):
            return self.simple(s, cur)
        if isinstance(s, Return):
            self.edge(cur, Operation(OpKind.RETURN, stmt=s), self.exit, s)
            return self.fresh()
        if isinstance(s, Block):
            return self.block(s, cur)
        if isinstance(s, If):
            t0, f0 = self.fresh(), self.fresh()
            self.edge(cur, Operation(OpKind.ASSUME, cond=s.cond, positive=True), t0, s)
            self.edge(cur, Operation(OpKind.ASSUME, cond=s.cond, positive=False), f0, s)
            tend = self.block(s.then, t0)
            fend = self.block(s.orelse, f0) if s.orelse is not None else f0
            join = self.fresh()
            self.union(tend, join)
            self.union(fend, join)
            return join
        if isinstance(s, While):
            head = cur
            body0, out = self.fresh(), self.fresh()
            self.edge(head, Operation(OpKind.ASSUME, cond=s.cond, positive=True), body0, s)
            self.edge(head, Operation(OpKind.ASSUME, cond=s.cond, positive=False), out, s)
            self.loops.append((head, out))
            bend = self.block(s.body, body0)
            self.loops.pop()
            self.union(bend, head)
            return out
        if isinstance(s, Break):
            self.union(cur, self.loops[-1][1])
            return self.fresh()
        if isinstance(s, Continue):
            self.union(cur, self.loops[-1][0])
            return self.fresh()
        if isinstance(s, Goto):
            self.union(cur, self.label(s.label))
            return self.fresh()
        if isinstance(s, Label):
            return self.union(cur, self.label(s.name))
        raise TypeError(f"cannot lower {type(s).__name__}")

    def build(self) -> Cfa:
        entry = self.fresh()
        self.exit = self.fresh()
        main = self.program.main
        cur = entry
        if main is not None:
            self.scope_stack.append([p.name for p in main.params])
            cur = self.block(main.body, entry)
        has_in = {self.find(d) for _, _, d, _ in self.edges}
        if self.find(cur) == self.find(entry) or self.find(cur) in has_in:
            self.edge(cur, Operation(OpKind.SKIP, tag="fallthrough"), self.exit, None)
        e_rep = self.find(entry)
        n_out = sum(1 for s, _, _, _ in self.edges if self.find(s) == e_rep)
        if n_out != 1 or e_rep in {self.find(d) for _, _, d, _ in self.edges}:
            # l0 gets a single outgoing edge and no incoming ones
            new_entry = self.fresh()
            self.edge(new_entry, Operation(OpKind.SKIP, tag="entry"), entry, None)
            self.scope_notes.setdefault(new_entry, []).append(frozenset(self.globals))
            entry = new_entry
        return self.finish(entry)

    def finish(self, entry: int) -> Cfa:
        reps: set[int] = {self.find(entry), self.find(self.exit)}
        for s, _, d, _ in self.edges:
            reps.add(self.find(s))
            reps.add(self.find(d))
        e_rep, x_rep = self.find(entry), self.find(self.exit)
        middle = sorted(r for r in reps if r not in (e_rep, x_rep))
        order = [e_rep, *middle, x_rep]
        names = {r: f"l{i}" for i, r in enumerate(order)}
        edges = [
            Edge(i, names[self.find(s)], op, names[self.find(d)], origin)
            for i, (s, op, d, origin) in enumerate(self.edges)
        ]
        scopes: dict[str, frozenset] = {}
        for loc, notes in self.scope_notes.items():
            r = self.find(loc)
            if r not in names:
                continue
            acc = scopes.get(names[r])
            for n in notes:
                acc = n if acc is None else acc & n
            scopes[names[r]] = acc
        for name in names.values():
            scopes.setdefault(name, frozenset(self.globals))
        return Cfa([names[r] for r in order], names[e_rep], names[x_rep], edges,
                   self.program, scopes)


def build_cfa(program: Program) -> Cfa:
    """Lower ``main`` to a CFA with at most one operation per edge."""
    return _Builder(program).build()


# ------------------------------------------------------------- decomposition

TEMP_RE = re.compile(r"__t\d+$")


def is_signed_arith(e: Expr) -> bool:
    if isinstance(e, Binary):
        return e.op in ARITH_OPS and e.ctype is CType.INT
    if isinstance(e, Unary):
        return e.op == "-" and e.ctype is CType.INT
    return False


class _Decomposer:
    def __init__(self):
        self.counter = 0

    def temp(self, e: Expr, pre: list[Stmt], span) -> Name:
        name = f"__t{self.counter}"
        self.counter += 1
        ctype = CType.UINT if e.ctype is CType.UINT else (CType.PTR if e.ctype is CType.PTR else CType.INT)
        pre.append(Decl(ctype, name, e, span=span))
        return Name(name, ctype=ctype, span=e.span)

    def atomize(self, e: Expr, pre: list[Stmt]) -> Expr:
        if isinstance(e, (Name, IntLit)):
            return e
        if is_signed_arith(e):
            return self.temp(self.keep(e, pre), pre, e.span)
        return self.temp(self.clean(e, pre), pre, e.span)

    def keep(self, e: Expr, pre: list[Stmt]) -> Expr:
        """Keep the root operator, reduce its operands to atoms."""
        if isinstance(e, Binary):
            left = self.atomize(e.left, pre)
            right = self.atomize(e.right, pre)
            return Binary(e.op, left, right, ctype=e.ctype, span=e.span)
        return Unary(e.op, self.atomize(e.operand, pre), ctype=e.ctype, span=e.span)

    def clean(self, e: Expr, pre: list[Stmt]) -> Expr:
        """Hoist every signed arithmetic operation out of ``e``."""
        if is_signed_arith(e):
            return self.atomize(e, pre)
        if isinstance(e, (Name, IntLit)):
            return e
        if isinstance(e, Call):
            return Call(e.func, [self.clean(a, pre) for a in e.args], ctype=e.ctype, span=e.span)
        if isinstance(e, Unary):
            return Unary(e.op, self.clean(e.operand, pre), ctype=e.ctype, span=e.span)
        if isinstance(e, Binary):
            left = self.clean(e.left, pre)
            if e.op in ("&&", "||"):
                extra: list[Stmt] = []
                right = self.clean(e.right, extra)
                if extra:
                    raise UnsupportedFeature(
                        e.right.span, "arithmetic in the right operand of a short-circuit operator")
            else:
                right = self.clean(e.right, pre)
            return Binary(e.op, left, right, ctype=e.ctype, span=e.span)
        raise TypeError(e)

    def rhs(self, e: Expr, pre: list[Stmt]) -> Expr:
        if is_signed_arith(e):
            return self.keep(e, pre)
        return self.clean(e, pre)

    def block(self, b: Block) -> Block:
        out: list[Stmt] = []
        for s in b.stmts:
            out.extend(self.stmt(s))
        return Block(out, span=b.span, uid=b.uid)

    def stmt(self, s: Stmt) -> list[Stmt]:
        pre: list[Stmt] = []
        s2 = copy.copy(s)
        if isinstance(s, Decl):
            if s.init is not None:
                s2.init = self.rhs(s.init, pre)
        elif isinstance(s, Assign):
            s2.value = self.rhs(s.value, pre)
        elif isinstance(s, Return):
            if s.value is not None:
                s2.value = self.rhs(s.value, pre)
        elif isinstance(s, ExprStmt):
            s2.call = self.clean(s.call, pre)
        elif isinstance(s, (Assert, AssertLive)):
            s2.cond = self.clean(s.cond, pre)
        elif isinstance(s, Block):
            s2 = self.block(s)
        elif isinstance(s, If):
            s2.cond = self.clean(s.cond, pre)
            s2.then = self.block(s.then)
            s2.orelse = self.block(s.orelse) if s.orelse is not None else None
        elif isinstance(s, While):
            cond = self.clean(s.cond, pre)
            body = self.block(s.body)
            if pre:
                # re-evaluate the hoisted operands on every iteration
                exit_test = If(Unary("!", cond, ctype=CType.BOOL, span=s.cond.span),
                               Block([Break(span=s.span)], span=s.span), None, span=s.span)
                body = Block([*pre, exit_test, *body.stmts], span=s.span)
                return [While(IntLit(1, ctype=CType.INT, span=s.span), body, span=s.span, uid=s.uid)]
            s2.cond = cond
            s2.body = body
        return [*pre, s2]


def lower_expressions(program: Program) -> Program:
    """AST-level decomposition: every statement keeps at most one signed
    arithmetic operator whose operands are atoms; intermediate results live in
    fresh ``__t<N>`` temporaries, evaluated innermost-first, left to right."""
    out = copy.copy(program)
    if program.main is not None:
        d = _Decomposer()
        main = copy.copy(program.main)
        main.body = d.block(program.main.body)
        out.main = main
    return out


def decompose_expressions(cfa: Cfa) -> Cfa:
    """Return a CFA in which every edge carries at most one signed arithmetic
    operator; the result's ``program`` is the decomposed AST it was built from."""
    return build_cfa(lower_expressions(cfa.program))


# ------------------------------------------------------------------ analyses


@dataclass
class Loop:
    id: int
    head: str
    variables: dict[str, CType]
    kind: str  # "while" if the head is a while condition, "goto" otherwise
    body: frozenset


@dataclass
class LocationFacts:
    l0: str
    loop_heads: set[str]
    end_locations: set[str]
    loops: list[Loop]

    def is_loop_head(self, loc: str) -> bool:
        return loc in self.loop_heads

    def is_init(self, loc: str) -> bool:
        return loc == self.l0

    def is_end(self, loc: str) -> bool:
        return loc in self.end_locations

    def loop_at(self, head: str) -> Optional[Loop]:
        for lp in self.loops:
            if lp.head == head:
                return lp
        return None


def back_edge_targets(cfa: Cfa) -> list[str]:
    """Targets of back edges of a depth-first traversal from l0, in DFS order."""
    heads: list[str] = []
    for _, h in back_edges(cfa):
        if h not in heads:
            heads.append(h)
    return heads


def back_edges(cfa: Cfa) -> list[tuple[str, str]]:
    """(source, target) of every DFS back edge from l0, in DFS order."""
    out: list[tuple[str, str]] = []
    color: dict[str, int] = {}
    stack: list[tuple[str, Iterator[Edge]]] = [(cfa.l0, iter(cfa.out_edges(cfa.l0)))]
    color[cfa.l0] = 1
    while stack:
        loc, it = stack[-1]
        e = next(it, None)
        if e is None:
            color[loc] = 2
            stack.pop()
            continue
        c = color.get(e.dst, 0)
        if c == 0:
            color[e.dst] = 1
            stack.append((e.dst, iter(cfa.out_edges(e.dst))))
        elif c == 1 and (loc, e.dst) not in out:
            out.append((loc, e.dst))
    return out


def analyze(cfa: Cfa) -> LocationFacts:
    backs = back_edges(cfa)
    heads = back_edge_targets(cfa)
    g = nx.DiGraph()
    g.add_nodes_from(cfa.locations)
    g.add_edges_from((e.src, e.dst) for e in cfa.edges)
    comp_of: dict[str, frozenset] = {}
    for comp in nx.strongly_connected_components(g):
        fs = frozenset(comp)
        for loc in comp:
            comp_of[loc] = fs
    types = cfa.variables
    loops = []
    for i, h in enumerate(heads):
        # natural loop: everything reaching a latch without passing the head
        without_head = g.subgraph(n for n in g if n != h)
        body = {h}
        for t, hh in backs:
            if hh == h:
                body |= ({t} | nx.ancestors(without_head, t)) if t != h else set()
        scc = frozenset(body & comp_of[h])
        used: set[str] = set()
        for e in cfa.edges:
            if e.src in scc and e.dst in scc:
                r, w = e.op.variables()
                used |= r | w
        in_scope = cfa.scopes.get(h, frozenset())
        names = sorted(n for n in used if n in in_scope and not TEMP_RE.match(n))
        outs = cfa.out_edges(h)
        kind = "while" if outs and all(
            o.op.kind is OpKind.ASSUME and isinstance(o.origin, While) for o in outs) else "goto"
        loops.append(Loop(i, h, {n: types[n] for n in names}, kind, scc))
    ends = {
        loc for loc in cfa.locations
        if cfa.out_edges(loc) and all(
            e.dst == cfa.exit and (e.op.kind is OpKind.RETURN or e.op.tag == "fallthrough")
            for e in cfa.out_edges(loc))
    }
    return LocationFacts(cfa.l0, set(heads), ends, loops)


def has_cycle(cfa: Cfa) -> bool:
    return bool(back_edge_targets(cfa))


def reachable(cfa: Cfa) -> set[str]:
    return set(nx.descendants(cfa.graph(), cfa.l0)) | {cfa.l0}


def iter_ops(cfa: Cfa) -> Iterable[Operation]:
    return (e.op for e in cfa.edges)
