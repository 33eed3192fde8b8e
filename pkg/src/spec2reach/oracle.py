"""Bounded explicit-state executor for subset programs.

The executor compiles ``main`` to a flat instruction list and explores every
state reachable under a finite nondet domain. States are ``(pc, store, heap)``
and are deduplicated, so cyclic executions show up as cycles in the explored
graph. It serves both as a reachability checker for transformed programs and
as an independent checker of the original properties.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import networkx as nx

from .frontend.nodes import (
    INT_MAX, INT_MIN, UINT_MAX, Assert, AssertLive, Assign, Binary, Block, Break,
    Call, Continue, CType, Decl, Expr, ExprStmt, Goto, If, IntLit, Label, Name,
    Program, Return, Stmt, Unary, While,
)
from .properties import PropertyKind

DEFAULT_DOMAIN = (-2, -1, 0, 1, 2, 126, 127, 128, INT_MAX - 1, INT_MAX)


@dataclass(frozen=True)
class ExecConfig:
    domain: tuple[int, ...] = DEFAULT_DOMAIN
    max_steps: int = 10_000  # longest explored path
    max_states: int = 500_000

    def __post_init__(self):
        if not self.domain:
            raise ValueError("nondet domain must not be empty")
        if self.max_steps <= 0 or self.max_states <= 0:
            raise ValueError("bounds must be positive")
        object.__setattr__(self, "domain", tuple(self.domain))


class VerdictKind(str, enum.Enum):
    TRUE = "TRUE"
    FALSE = "FALSE"
    UNKNOWN = "UNKNOWN"


@dataclass
class TraceStep:
    pc: int
    line: int
    store: dict[str, int]

    def render(self) -> str:
        items = ", ".join(f"{k}={v}" for k, v in self.store.items())
        return f"loc={self.pc} (line {self.line}), store={{{items}}}"


@dataclass
class Witness:
    """Nondet choices and the visited states of a violating execution.

    For a lasso, ``loop_start`` is the trace index of the state that the last
    trace entry repeats."""

    choices: list[int]
    trace: list[TraceStep]
    loop_start: Optional[int] = None

    def render(self) -> str:
        lines = [s.render() for s in self.trace]
        if self.loop_start is not None:
            lines.append(f"cycle back to step {self.loop_start}")
        return "\n".join(lines)


@dataclass
class Verdict:
    kind: VerdictKind
    witness: Optional[Witness] = None
    reason: str = ""
    states: int = 0

    def __post_init__(self):
        if self.kind is VerdictKind.FALSE and self.witness is None:
            raise ValueError("FALSE verdicts need a witness")

    @property
    def definite(self) -> bool:
        return self.kind is not VerdictKind.UNKNOWN


# ------------------------------------------------------------------- compile


@dataclass(frozen=True)
class Instr:
    op: str  # decl assign alloc free call branch jump assert live ret drop end
    line: int
    var: int = -1
    ctype: Optional[CType] = None
    expr: Optional[Expr] = None
    args: tuple = ()
    target: int = -1
    extra: object = None


class _Compiler:
    def __init__(self, program: Program):
        self.program = program
        names = [d.name for d in program.globals]
        for s in program.statements():
            if isinstance(s, Decl) and s.name not in names:
                names.append(s.name)
        self.names = names
        self.index = {n: i for i, n in enumerate(names)}
        self.types = program.variables()
        self.code: list[Instr] = []
        self.scopes: list[list[int]] = []
        self.loops: list[tuple[int, int, list[int]]] = []  # (depth, head, break patches)
        self.labels: dict[str, int] = {}
        self.label_depth: dict[str, tuple] = {}
        self.gotos: list[tuple[int, str]] = []
        self.block_path: list[int] = []

    def emit(self, ins: Instr) -> int:
        self.code.append(ins)
        return len(self.code) - 1

    def patch(self, at: int, target: int):
        self.code[at] = Instr(**{**self.code[at].__dict__, "target": target})

    def drops_from(self, depth: int, line: int):
        names = [i for sc in self.scopes[depth:] for i in sc]
        if names:
            self.emit(Instr("drop", line, args=tuple(names)))

    def compile(self) -> list[Instr]:
        self._collect_labels(self.program.main.body if self.program.main else Block([]), ())
        if self.program.main is not None:
            self.block(self.program.main.body)
        self.emit(Instr("end", 0))
        for at, name in self.gotos:
            self.patch(at, self.labels[name])
        return self.code

    def _collect_labels(self, b: Block, path: tuple):
        path = path + (b.uid,)
        for s in b.stmts:
            if isinstance(s, Label):
                self.label_depth[s.name] = path
            for c in s.child_blocks():
                self._collect_labels(c, path)

    def block(self, b: Block):
        self.scopes.append([])
        self.block_path.append(b.uid)
        for s in b.stmts:
            self.stmt(s)
        names = self.scopes.pop()
        self.block_path.pop()
        if names:
            self.emit(Instr("drop", b.span.line if b.span else 0, args=tuple(names)))

    def stmt(self, s: Stmt):
        line = s.span.line if s.span else 0
        if isinstance(s, Decl):
            init = s.init
            if isinstance(init, Call) and init.func in ("malloc", "calloc", "realloc"):
                self.emit(Instr("alloc", line, self.index[s.name], s.ctype, init))
            else:
                self.emit(Instr("decl", line, self.index[s.name], s.ctype, init))
            self.scopes[-1].append(self.index[s.name])
        elif isinstance(s, Assign):
            ctype = self.types[s.target]
            if isinstance(s.value, Call) and s.value.func in ("malloc", "calloc", "realloc"):
                self.emit(Instr("alloc", line, self.index[s.target], ctype, s.value))
            else:
                self.emit(Instr("assign", line, self.index[s.target], ctype, s.value))
        elif isinstance(s, ExprStmt):
            if s.call.func == "free":
                self.emit(Instr("free", line, expr=s.call.args[0]))
            else:
                self.emit(Instr("call", line, expr=s.call))
        elif isinstance(s, Assert):
            self.emit(Instr("assert", line, expr=s.cond))
        elif isinstance(s, AssertLive):
            self.emit(Instr("live", line, expr=s.cond, extra=s.index))
        elif isinstance(s, Return):
            self.emit(Instr("ret", line, expr=s.value))
        elif isinstance(s, Block):
            self.block(s)
        elif isinstance(s, If):
            br = self.emit(Instr("branch", line, expr=s.cond))
            self.block(s.then)
            if s.orelse is not None:
                j = self.emit(Instr("jump", line))
                self.patch(br, len(self.code))
                self.block(s.orelse)
                self.patch(j, len(self.code))
            else:
                self.patch(br, len(self.code))
        elif isinstance(s, While):
            head = len(self.code)
            br = self.emit(Instr("branch", line, expr=s.cond))
            self.loops.append((len(self.scopes), head, []))
            self.block(s.body)
            self.emit(Instr("jump", line, target=head))
            _, _, breaks = self.loops.pop()
            end = len(self.code)
            self.patch(br, end)
            for b in breaks:
                self.patch(b, end)
        elif isinstance(s, Break):
            depth, _, breaks = self.loops[-1]
            self.drops_from(depth, line)
            breaks.append(self.emit(Instr("jump", line)))
        elif isinstance(s, Continue):
            depth, head, _ = self.loops[-1]
            self.drops_from(depth, line)
            self.emit(Instr("jump", line, target=head))
        elif isinstance(s, Goto):
            target_path = self.label_depth.get(s.label, ())
            common = 0
            for a, b in zip(self.block_path, target_path):
                if a != b:
                    break
                common += 1
            self.drops_from(common, line)
            self.gotos.append((self.emit(Instr("jump", line)), s.label))
        elif isinstance(s, Label):
            self.labels[s.name] = len(self.code)
        else:
            raise TypeError(f"cannot execute {type(s).__name__}")


# ---------------------------------------------------------------- evaluation


class Event:
    """Non-value outcome of evaluating an expression or instruction."""

    def __init__(self, kind: str, reason: str):
        self.kind = kind  # violation | abort
        self.reason = reason

    def __repr__(self):
        return f"Event({self.kind}, {self.reason})"


def to_signed(v: int) -> int:
    v &= UINT_MAX
    return v - (1 << 32) if v > INT_MAX else v


def convert(v: int, ctype: CType) -> int:
    if ctype is CType.UINT:
        return v & UINT_MAX
    if ctype is CType.PTR:
        return v
    return to_signed(v)


def c_div(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def c_mod(a: int, b: int) -> int:
    return a - b * c_div(a, b)


Store = tuple  # one slot per program variable; None when out of scope


class Machine:
    """Small-step semantics over compiled instructions."""

    def __init__(self, program: Program, cfg: ExecConfig, check_overflow: bool = False):
        comp = _Compiler(program)
        self.code = comp.compile()
        self.names = comp.names
        self.index = comp.index
        self.types = comp.types
        self.cfg = cfg
        self.check_overflow = check_overflow
        self.program = program

    # evaluation yields (value or Event, choices)
    def ev(self, e: Expr, store: Store) -> Iterator[tuple]:
        if isinstance(e, IntLit):
            yield convert(e.value, e.ctype if e.ctype is not CType.BOOL else CType.INT), ()
            return
        if isinstance(e, Name):
            v = store[self.index[e.id]]
            if v is None:
                yield Event("abort", f"read of '{e.id}' outside its scope"), ()
            else:
                yield v, ()
            return
        if isinstance(e, Call):
            if e.func == "nondet":
                for d in self.cfg.domain:
                    yield to_signed(d), (d,)
                return
            yield Event("abort", f"unsupported call {e.func} in expression"), ()
            return
        if isinstance(e, Unary):
            for v, c in self.ev(e.operand, store):
                if isinstance(v, Event):
                    yield v, c
                elif e.op == "!":
                    yield int(v == 0), c
                else:
                    yield self.arith("neg", -v, e.ctype), c
            return
        if isinstance(e, Binary):
            yield from self.ev_binary(e, store)
            return
        raise TypeError(e)

    def arith(self, op: str, wide: int, ctype: CType):
        if ctype is CType.UINT:
            return wide & UINT_MAX
        if not (INT_MIN <= wide <= INT_MAX):
            if self.check_overflow:
                return Event("violation", f"signed overflow in '{op}' (value {wide})")
            return to_signed(wide)
        return wide

    def ev_binary(self, e: Binary, store: Store) -> Iterator[tuple]:
        for lv, lc in self.ev(e.left, store):
            if isinstance(lv, Event):
                yield lv, lc
                continue
            if e.op == "&&" and lv == 0:
                yield 0, lc
                continue
            if e.op == "||" and lv != 0:
                yield 1, lc
                continue
            for rv, rc in self.ev(e.right, store):
                c = lc + rc
                if isinstance(rv, Event):
                    yield rv, c
                    continue
                yield self.apply(e, lv, rv), c

    def apply(self, e: Binary, a: int, b: int):
        op = e.op
        if op in ("&&", "||"):
            return int(b != 0)
        lt, rt = e.left.ctype, e.right.ctype
        if op in ("<", "<=", ">", ">=", "==", "!="):
            if CType.PTR not in (lt, rt) and CType.UINT in (lt, rt):
                a, b = a & UINT_MAX, b & UINT_MAX
            return int({"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b,
                        "==": a == b, "!=": a != b}[op])
        if e.ctype is CType.UINT:
            a, b = a & UINT_MAX, b & UINT_MAX
        if op == "+":
            wide = a + b
        elif op == "-":
            wide = a - b
        elif op == "*":
            wide = a * b
        else:
            if b == 0:
                return Event("abort", "division by zero")
            wide = c_div(a, b) if op == "/" else c_mod(a, b)
            if op == "%" and e.ctype is not CType.UINT and a == INT_MIN and b == -1:
                # the quotient overflows, which C leaves undefined for % as well
                return self.arith(op, INT_MAX + 1, e.ctype)
        return self.arith(op, wide, e.ctype)

    # ------------------------------------------------------------- stepping

    def initial(self) -> tuple:
        store = [None] * len(self.names)
        for g in self.program.globals:
            v = 0
            if g.init is not None:
                v = next(self.ev(g.init, tuple(store)))[0]
            store[self.index[g.name]] = convert(v, g.ctype)
        return (0, tuple(store), ())

    def step(self, state: tuple) -> list[tuple]:
        """Outcomes ``(choices, kind, payload, label)`` of one instruction.

        kind is ``next`` (payload: state), ``violation``/``abort`` (payload:
        reason) or ``exit`` (payload: state at exit). ``label`` is the
        assert_live index satisfied by this step, or None."""
        pc, store, heap = state
        ins = self.code[pc]
        op = ins.op
        out: list[tuple] = []

        def put(idx: int, value: int, ctype: CType) -> Store:
            s = list(store)
            s[idx] = convert(value, ctype)
            return tuple(s)

        def events(v, c) -> bool:
            if isinstance(v, Event):
                out.append((c, v.kind, v.reason, None))
                return True
            return False

        if op == "decl":
            if ins.expr is None:
                for d in self.cfg.domain:
                    out.append(((d,), "next", (pc + 1, put(ins.var, d, ins.ctype), heap), None))
            else:
                for v, c in self.ev(ins.expr, store):
                    if not events(v, c):
                        out.append((c, "next", (pc + 1, put(ins.var, v, ins.ctype), heap), None))
        elif op == "assign":
            for v, c in self.ev(ins.expr, store):
                if not events(v, c):
                    out.append((c, "next", (pc + 1, put(ins.var, v, ins.ctype), heap), None))
        elif op == "alloc":
            call: Call = ins.expr
            for vals, c in self.ev_args(call.args, store):
                if events(vals, c):
                    continue
                new_heap = heap
                if call.func == "realloc":
                    p = vals[0]
                    if p != 0:
                        st = self.heap_status(heap, p)
                        if st is None:
                            out.append((c, "abort", "realloc of an invalid pointer", None))
                            continue
                        if st == "F":
                            out.append((c, "double-free", "realloc of a freed block", None))
                            continue
                        new_heap = heap[: p - 1] + ("F",) + heap[p:]
                new_heap = new_heap + ("L",)
                out.append((c, "next", (pc + 1, put(ins.var, len(new_heap), CType.PTR), new_heap), None))
        elif op == "free":
            for p, c in self.ev(ins.expr, store):
                if events(p, c):
                    continue
                if p == 0:
                    out.append((c, "next", (pc + 1, store, heap), None))
                    continue
                st = self.heap_status(heap, p)
                if st is None:
                    out.append((c, "abort", "free of an invalid pointer", None))
                elif st == "F":
                    out.append((c, "double-free", "double free", None))
                else:
                    out.append((c, "next", (pc + 1, store, heap[: p - 1] + ("F",) + heap[p:]), None))
        elif op == "call":
            for v, c in self.ev(ins.expr if ins.expr.func == "nondet" else IntLit(0), store):
                if not events(v, c):
                    out.append((c, "next", (pc + 1, store, heap), None))
        elif op == "branch":
            for v, c in self.ev(ins.expr, store):
                if not events(v, c):
                    out.append((c, "next", (pc + 1 if v else ins.target, store, heap), None))
        elif op == "jump":
            out.append(((), "next", (ins.target, store, heap), None))
        elif op == "assert":
            for v, c in self.ev(ins.expr, store):
                if events(v, c):
                    continue
                if v:
                    out.append((c, "next", (pc + 1, store, heap), None))
                else:
                    where = f" at line {ins.line}" if ins.line else ""
                    out.append((c, "violation", f"assertion{where} violated", None))
        elif op == "live":
            for v, c in self.ev(ins.expr, store):
                if not events(v, c):
                    out.append((c, "next", (pc + 1, store, heap), ins.extra if v else None))
        elif op == "drop":
            s = list(store)
            for i in ins.args:
                s[i] = None
            out.append(((), "next", (pc + 1, tuple(s), heap), None))
        elif op == "ret":
            if ins.expr is None:
                out.append(((), "exit", state, None))
            else:
                for v, c in self.ev(ins.expr, store):
                    if not events(v, c):
                        out.append((c, "exit", state, None))
        elif op == "end":
            out.append(((), "exit", state, None))
        else:
            raise ValueError(op)
        return out

    def ev_args(self, args: Sequence[Expr], store: Store) -> Iterator[tuple]:
        if not args:
            yield (), ()
            return
        for v, c in self.ev(args[0], store):
            if isinstance(v, Event):
                yield v, c
                continue
            for rest, rc in self.ev_args(args[1:], store):
                if isinstance(rest, Event):
                    yield rest, c + rc
                else:
                    yield (v, *rest), c + rc

    @staticmethod
    def heap_status(heap: tuple, p: int) -> Optional[str]:
        if 1 <= p <= len(heap):
            return heap[p - 1]
        return None

    def render(self, state: tuple) -> TraceStep:
        pc, store, _ = state
        ins = self.code[pc]
        return TraceStep(pc, ins.line, {n: v for n, v in zip(self.names, store) if v is not None})


# --------------------------------------------------------------- exploration


@dataclass
class _Graph:
    states: list[tuple] = field(default_factory=list)
    ids: dict = field(default_factory=dict)
    parent: list = field(default_factory=list)  # (pred id, choices) or None
    edges: list = field(default_factory=list)  # (src, dst, choices, label)
    violation: Optional[tuple] = None  # (state id, choices, reason)
    incomplete: list = field(default_factory=list)


def _explore(m: Machine, violations: set[str], stop_at_violation: bool = True) -> _Graph:
    g = _Graph()
    init = m.initial()
    g.states.append(init)
    g.ids[init] = 0
    g.parent.append(None)
    depth = [0]
    queue = deque([0])
    while queue:
        sid = queue.popleft()
        state = g.states[sid]
        for choices, kind, payload, label in m.step(state):
            if kind == "next":
                nid = g.ids.get(payload)
                if nid is None:
                    if len(g.states) >= m.cfg.max_states:
                        g.incomplete.append("state bound reached")
                        queue.clear()
                        break
                    if depth[sid] + 1 > m.cfg.max_steps:
                        g.incomplete.append("step bound reached")
                        continue
                    nid = len(g.states)
                    g.states.append(payload)
                    g.ids[payload] = nid
                    g.parent.append((sid, choices))
                    depth.append(depth[sid] + 1)
                    queue.append(nid)
                g.edges.append((sid, nid, choices, label))
            elif kind == "exit":
                if "leak" in violations and "L" in payload[2]:
                    reason = "allocated memory not freed at exit"
                    if g.violation is None:
                        g.violation = (sid, choices, reason)
            elif kind in violations or kind == "violation":
                if g.violation is None:
                    g.violation = (sid, choices, payload)
            else:
                g.incomplete.append(payload)
        if g.violation is not None and stop_at_violation:
            break
    return g


def _path_to(g: _Graph, sid: int) -> tuple[list[int], list[int]]:
    ids, choices = [], []
    cur = sid
    while cur is not None:
        ids.append(cur)
        p = g.parent[cur]
        if p is None:
            break
        cur, c = p
        choices.extend(reversed(c))
    return list(reversed(ids)), list(reversed(choices))


def _witness_for_violation(m: Machine, g: _Graph) -> Witness:
    sid, last, _ = g.violation
    ids, choices = _path_to(g, sid)
    return Witness(choices + list(last), [m.render(g.states[i]) for i in ids])


def _find_lasso(m: Machine, g: _Graph, avoid_label: Optional[int] = None) -> Optional[Witness]:
    dg = nx.DiGraph()
    choice_of: dict[tuple[int, int], tuple] = {}
    for s, d, c, label in g.edges:
        if avoid_label is not None and label == avoid_label:
            continue
        if (s, d) not in choice_of:
            choice_of[(s, d)] = c
            dg.add_edge(s, d)
    best = None
    for comp in nx.strongly_connected_components(dg):
        if len(comp) == 1:
            (n,) = comp
            if not dg.has_edge(n, n):
                continue
        entry = min(comp)  # BFS order: the earliest discovered state
        if best is None or entry < best[0]:
            best = (entry, comp)
    if best is None:
        return None
    entry, comp = best
    # shortest cycle through entry inside the component
    sub = dg.subgraph(comp)
    if sub.has_edge(entry, entry):
        cycle = [entry, entry]
    else:
        back = min((p for p in sub.predecessors(entry)),
                   key=lambda p: nx.shortest_path_length(sub, entry, p))
        cycle = nx.shortest_path(sub, entry, back) + [entry]
    stem_ids, stem_choices = _path_to(g, entry)
    cyc_choices: list[int] = []
    for a, b in zip(cycle, cycle[1:]):
        cyc_choices.extend(choice_of[(a, b)])
    ids = stem_ids + cycle[1:]
    return Witness(stem_choices + cyc_choices, [m.render(g.states[i]) for i in ids],
                   loop_start=len(stem_ids) - 1)


def _has_cycle(g: _Graph) -> bool:
    dg = nx.DiGraph()
    dg.add_nodes_from(range(len(g.states)))
    dg.add_edges_from((s, d) for s, d, _, _ in g.edges)
    return not nx.is_directed_acyclic_graph(dg)


def check_reachability(program: Program, cfg: ExecConfig = ExecConfig(),
                       strict_termination: bool = True) -> Verdict:
    """Is some assertion violation reachable within the bounded domain?

    TRUE requires the finite state space to be exhausted without violations
    or aborted traces. With ``strict_termination`` (the default) a cyclic,
    non-terminating execution also yields UNKNOWN. Without it, exhausting the
    deduplicated state space is accepted as a proof, which is sound for the
    infinite executions too since they only visit explored states."""
    m = Machine(program, cfg)
    g = _explore(m, set())
    if g.violation is not None:
        return Verdict(VerdictKind.FALSE, _witness_for_violation(m, g), g.violation[2],
                       len(g.states))
    if g.incomplete:
        return Verdict(VerdictKind.UNKNOWN, reason=g.incomplete[0], states=len(g.states))
    if strict_termination and _has_cycle(g):
        return Verdict(VerdictKind.UNKNOWN, reason="non-terminating executions", states=len(g.states))
    return Verdict(VerdictKind.TRUE, reason="no reachable assertion violation", states=len(g.states))


def check_original(program: Program, prop: PropertyKind, cfg: ExecConfig = ExecConfig()) -> Verdict:
    """Check ``prop`` directly on an uninstrumented program.

    Assertions already in the program belong to the property being checked, so a
    failing one also yields FALSE."""
    prop = PropertyKind(prop)
    m = Machine(program, cfg, check_overflow=prop is PropertyKind.NO_OVERFLOW)
    violations: set[str] = set()
    if prop is PropertyKind.MEMORY_CLEANUP:
        violations = {"leak", "double-free"}
    lasso_mode = prop in (PropertyKind.TERMINATION, PropertyKind.EXPLICIT_LIVENESS)
    g = _explore(m, violations, stop_at_violation=True)
    n = len(g.states)
    if g.violation is not None:
        return Verdict(VerdictKind.FALSE, _witness_for_violation(m, g), g.violation[2], n)
    if lasso_mode:
        if prop is PropertyKind.TERMINATION:
            w = _find_lasso(m, g)
            if w is not None:
                return Verdict(VerdictKind.FALSE, w, "non-terminating execution (state revisited)", n)
        else:
            sites = sorted({ins.extra for ins in m.code if ins.op == "live"})
            for i in sites:
                w = _find_lasso(m, g, avoid_label=i)
                if w is not None:
                    return Verdict(VerdictKind.FALSE, w,
                                   f"infinite execution that never satisfies assert_live {i}", n)
    if g.incomplete:
        return Verdict(VerdictKind.UNKNOWN, reason=g.incomplete[0], states=n)
    return Verdict(VerdictKind.TRUE, reason="property holds on all bounded executions", states=n)


def replay(program: Program, witness: Witness, cfg: ExecConfig = ExecConfig(),
           prop: Optional[PropertyKind] = None) -> tuple[list[TraceStep], Optional[str]]:
    """Re-execute a witness's nondet choices.

    Returns the visited states and the terminal event: a violation reason, or
    ``"cycle"`` when the last state repeats the one at ``loop_start``."""
    # the witness fixes every nondet value, whatever domain produced it
    if witness.choices:
        cfg = ExecConfig(tuple(dict.fromkeys(witness.choices)), cfg.max_steps, cfg.max_states)
    m = Machine(program, cfg, check_overflow=prop is PropertyKind.NO_OVERFLOW)
    leak = prop is PropertyKind.MEMORY_CLEANUP
    state = m.initial()
    trace = [m.render(state)]
    raw = [state]
    remaining = list(witness.choices)
    for _ in range(len(witness.trace) + 1):
        chosen = None
        for choices, kind, payload, _ in m.step(state):
            if list(choices) == remaining[: len(choices)]:
                chosen = (choices, kind, payload)
                break
        if chosen is None:
            return trace, None
        choices, kind, payload = chosen
        remaining = remaining[len(choices):]
        if kind == "next":
            state = payload
            raw.append(state)
            trace.append(m.render(state))
            if witness.loop_start is not None and len(raw) == len(witness.trace):
                return trace, "cycle" if state == raw[witness.loop_start] else None
            continue
        if kind == "exit":
            if leak and "L" in payload[2]:
                return trace, "allocated memory not freed at exit"
            return trace, None
        if kind == "abort":
            return trace, None
        return trace, payload
    return trace, None
