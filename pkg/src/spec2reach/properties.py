"""The built-in instrumentation automata, specialized per input program."""

from __future__ import annotations

import enum
from typing import Callable, Optional

from .automata import (
    AnyOf, Annotation, CallPattern, Cond, GhostVar, InstrumentationAutomaton,
    OpTemplate, Placement, TokenPattern, Transition, TRUE,
)
from .cfa import Cfa, LocationFacts, Loop, OpKind, analyze, build_cfa
from .frontend import emit, parse
from .frontend.nodes import (
    INT_MAX, INT_MIN, AssertLive, Block, CType, FunctionDef, If, Program, Stmt, Unary, While,
)


class PropertyKind(str, enum.Enum):
    NO_OVERFLOW = "no-overflow"
    TERMINATION = "termination"
    MEMORY_CLEANUP = "memory-cleanup"
    EXPLICIT_LIVENESS = "explicit-liveness"

    @classmethod
    def parse(cls, text: str) -> "PropertyKind":
        norm = text.strip().lower().replace("_", "-")
        aliases = {"overflow": "no-overflow", "memcleanup": "memory-cleanup",
                   "memory": "memory-cleanup", "liveness": "explicit-liveness"}
        return cls(aliases.get(norm, norm))


class UnsupportedLoopVariable(ValueError):
    def __init__(self, loop: Loop, name: str):
        super().__init__(
            f"loop at {loop.head}: variable '{name}' has pointer type; "
            "state comparison on pointers is not supported")
        self.loop = loop
        self.name = name


class NoLivenessAssertions(ValueError):
    def __init__(self):
        super().__init__("explicit liveness requires at least one __assert_live(...) site")


# ---------------------------------------------------------------- no-overflow

MAX, MIN = str(INT_MAX), str(INT_MIN)

# guard templates over $x0 (left operand) and $x1 (right operand)
GUARDS: dict[str, str] = {
    "+": f"!(($x1 > 0 && $x0 > {MAX} - $x1) || ($x1 < 0 && $x0 < {MIN} - $x1))",
    "-": f"!(($x1 < 0 && $x0 > {MAX} + $x1) || ($x1 > 0 && $x0 < {MIN} + $x1))",
    "*": (f"!(($x0 > 0 && $x1 > 0 && $x0 > {MAX} / $x1)"
          f" || ($x0 > 0 && $x1 <= 0 && $x1 < {MIN} / $x0)"
          f" || ($x0 <= 0 && $x1 > 0 && $x0 < {MIN} / $x1)"
          f" || ($x0 < 0 && $x1 <= 0 && $x1 < {MAX} / $x0))"),
    "/": f"!($x1 == -1 && $x0 == {MIN})",
    "%": f"!($x1 == -1 && $x0 == {MIN})",
    "neg": f"$x0 != {MIN}",
}


def _c_div(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def guard_holds(op: str, a: int, b: int = 0) -> bool:
    """Evaluate a guard directly, mirroring its C text with C division."""
    if op == "+":
        return not ((b > 0 and a > INT_MAX - b) or (b < 0 and a < INT_MIN - b))
    if op == "-":
        return not ((b < 0 and a > INT_MAX + b) or (b > 0 and a < INT_MIN + b))
    if op == "*":
        return not ((a > 0 and b > 0 and a > _c_div(INT_MAX, b))
                    or (a > 0 and b <= 0 and b < _c_div(INT_MIN, a))
                    or (a <= 0 and b > 0 and a < _c_div(INT_MIN, b))
                    or (a < 0 and b <= 0 and b < _c_div(INT_MAX, a)))
    if op in ("/", "%"):
        return not (b == -1 and a == INT_MIN)
    if op == "neg":
        return a != INT_MIN
    raise ValueError(op)


def no_overflow_ia(cfa: Cfa) -> list[InstrumentationAutomaton]:
    """One state, one B-placed self-loop per signed arithmetic operator."""
    ts = []
    for op in ("+", "-", "*", "/", "%"):
        ts.append(Transition("q0", TokenPattern(f".* $x0 {op} $x1 .* ;", signed_only=True),
                             OpTemplate(f"assert({GUARDS[op]});"), Placement.B, "q0"))
    ts.append(Transition("q0", TokenPattern(".* - $x0 .* ;", signed_only=True),
                         OpTemplate(f"assert({GUARDS['neg']});"), Placement.B, "q0"))
    return [InstrumentationAutomaton("no-overflow", ["q0"], "q0", [], ts,
                                     {"q0": Annotation.TRUE})]


# ---------------------------------------------------------------- termination


def _shadow_names(k: int, loop: Loop) -> list[tuple[str, str, CType]]:
    out = []
    for name, ctype in loop.variables.items():
        if ctype is CType.PTR:
            raise UnsupportedLoopVariable(loop, name)
        out.append((name, f"__sh_{k}_{name}", ctype))
    return out


def _decls(ghosts: list[GhostVar]) -> str:
    return " ".join(
        f"{g.ctype.spelling}{'' if g.ctype is CType.PTR else ' '}{g.name} = {g.init};"
        for g in ghosts)


def _state_check(k: int, shadows, extra_premise: str = "") -> str:
    diff = " || ".join(f"{sh} != {v}" for v, sh, _ in shadows) or "0"
    premise = f"__saved_{k} == 1" + (f" && ({extra_premise})" if extra_premise else "")
    return f"assert(!({premise}) || ({diff}));"


def _save_op(k: int, shadows, resets: list[str] = ()) -> str:
    body = " ".join([*(f"{sh} = {v};" for v, sh, _ in shadows), f"__saved_{k} = 1;",
                     *(f"{r} = 0;" for r in resets)])
    return f"if (nondet() && __saved_{k} == 0) {{ {body} }}"


def _loop_automaton(name: str, loop: Loop, k: int, extra_premise: str = "",
                    resets: list[str] = ()) -> InstrumentationAutomaton:
    shadows = _shadow_names(k, loop)
    ghosts = [GhostVar(f"__saved_{k}", CType.INT), *(GhostVar(sh, t) for _, sh, t in shadows)]
    check = _state_check(k, shadows, extra_premise)
    save = _save_op(k, shadows, resets)
    if loop.kind == "while":
        watch = Transition("q2", Cond, OpTemplate(f"{check} {save}"), Placement.A, "q2")
    else:
        # goto loops: check the state before the head's operation
        watch = Transition("q2", TRUE, OpTemplate(f"{check} {save}"), Placement.B, "q2")
    init = Transition("q0", TRUE, OpTemplate(_decls(ghosts)), Placement.B, "q2")
    # reset flags are declared by another automaton but written here
    ghosts += [GhostVar(r, CType.INT) for r in resets]
    return InstrumentationAutomaton(
        name, ["q0", "q2"], "q0", ghosts, [init, watch],
        {"q0": Annotation.INIT, "q2": Annotation.LOOP_HEAD}, anchor=loop.head)


def termination_ia(cfa: Cfa, facts: Optional[LocationFacts] = None) -> list[InstrumentationAutomaton]:
    facts = facts or analyze(cfa)
    return [_loop_automaton(f"termination-loop{lp.id}", lp, lp.id) for lp in facts.loops]


# ------------------------------------------------------------ memory cleanup

_TRACK = "__ptr_track"
_FREED = "__ptr_freed"


def _release(p: str) -> str:
    """Check for a second release of the last freed tracked block, then untrack."""
    return (f"assert(!({p} != 0 && {p} == {_FREED})); "
            f"if ({_TRACK} != 0 && {_TRACK} == {p}) {{ {_FREED} = {_TRACK}; {_TRACK} = 0; }}")


_TRACK_NEW = f"if (nondet() && {_TRACK} == 0) {{ {_TRACK} = $x0; }}"


def memory_cleanup_ia(cfa: Cfa) -> list[InstrumentationAutomaton]:
    ghosts = [GhostVar(_TRACK, CType.PTR), GhostVar(_FREED, CType.PTR)]
    alloc = AnyOf(CallPattern("malloc", [1], result=0), CallPattern("calloc", [1, 2], result=0))
    realloc = CallPattern("realloc", [1, 2], result=0)
    ts = [
        Transition("q0", TRUE, OpTemplate(_decls(ghosts)), Placement.B, "q1"),
        Transition("q1", alloc, OpTemplate(_TRACK_NEW), Placement.A, "q1"),
        Transition("q1", realloc, OpTemplate(_release("$x1")), Placement.B, "q1"),
        Transition("q1", realloc, OpTemplate(_TRACK_NEW), Placement.A, "q1"),
        Transition("q1", CallPattern("free", [0]), OpTemplate(_release("$x0")), Placement.B, "q1"),
        Transition("q1", TRUE, OpTemplate(f"assert({_TRACK} == 0);"), Placement.B, "q2",
                   at=Annotation.END),
    ]
    return [InstrumentationAutomaton(
        "memory-cleanup", ["q0", "q1", "q2"], "q0", ghosts, ts,
        {"q0": Annotation.INIT, "q1": Annotation.TRUE, "q2": Annotation.END})]


# --------------------------------------------------------- explicit liveness


def liveness_sites(cfa: Cfa) -> list[int]:
    return sorted({e.op.stmt.index for e in cfa.edges if e.op.kind is OpKind.ASSERT_LIVE})


def explicit_liveness_ia(cfa: Cfa, facts: Optional[LocationFacts] = None) -> list[InstrumentationAutomaton]:
    """A flag automaton plus one state-saving automaton per loop.

    Each loop keeps its own copy of the flags; they are cleared when the loop
    saves a state, so only assert_live hits inside the cycle count.
    """
    facts = facts or analyze(cfa)
    sites = liveness_sites(cfa)
    if not sites:
        raise NoLivenessAssertions()
    flags = {lp.id: [f"__live_{lp.id}_{i}" for i in sites] for lp in facts.loops}
    ghosts = [GhostVar(f, CType.INT) for lp in facts.loops for f in flags[lp.id]]
    automata = []
    if ghosts:
        ts = [Transition("q0", TRUE, OpTemplate(_decls(ghosts)), Placement.B, "q1")]
        for j, i in enumerate(sites):
            sets = " ".join(f"{flags[lp.id][j]} = 1;" for lp in facts.loops)
            ts.append(Transition("q1", CallPattern("__assert_live", [1], index=i),
                                 OpTemplate(f"if ($x1) {{ {sets} }}"), Placement.B, "q1"))
        automata.append(InstrumentationAutomaton(
            "liveness-flags", ["q0", "q1"], "q0", ghosts, ts,
            {"q0": Annotation.INIT, "q1": Annotation.TRUE}))
    for lp in facts.loops:
        premise = " || ".join(f"!{f}" for f in flags[lp.id])
        automata.append(_loop_automaton(f"liveness-loop{lp.id}", lp, lp.id, premise, flags[lp.id]))
    return automata


def termination_as_liveness(program: Program) -> Program:
    """Encode termination as explicit liveness: ``__assert_live(!(c))`` after
    every ``while (c)`` loop. An execution that never leaves some loop never
    satisfies that site, so the two properties agree. Goto loops have no exit
    condition to anchor on and are rejected."""
    cfa = build_cfa(program)
    if any(lp.kind == "goto" for lp in analyze(cfa).loops):
        raise ValueError("termination-as-liveness encoding needs structured loops")

    def block(b: Block) -> Block:
        out: list[Stmt] = []
        for s in b.stmts:
            out.append(rebuild(s))
            if isinstance(s, While):
                out.append(AssertLive(0, Unary("!", s.cond, ctype=CType.BOOL)))
        return Block(out, span=b.span)

    def rebuild(s: Stmt) -> Stmt:
        if isinstance(s, If):
            return If(s.cond, block(s.then), block(s.orelse) if s.orelse else None, span=s.span)
        if isinstance(s, While):
            return While(s.cond, block(s.body), span=s.span)
        if isinstance(s, Block):
            return block(s)
        return s

    main = program.main
    out = Program(list(program.globals),
                  FunctionDef(main.name, main.ret, main.params, block(main.body), main.span))
    # re-parse so assert_live sites get source-order indices
    return parse(emit(out), allow_reserved=True)


BUILDERS: dict[PropertyKind, Callable] = {
    PropertyKind.NO_OVERFLOW: lambda cfa, facts: no_overflow_ia(cfa),
    PropertyKind.TERMINATION: termination_ia,
    PropertyKind.MEMORY_CLEANUP: lambda cfa, facts: memory_cleanup_ia(cfa),
    PropertyKind.EXPLICIT_LIVENESS: explicit_liveness_ia,
}


def build_automata(cfa: Cfa, prop: PropertyKind,
                   facts: Optional[LocationFacts] = None) -> list[InstrumentationAutomaton]:
    return BUILDERS[PropertyKind(prop)](cfa, facts or analyze(cfa))
