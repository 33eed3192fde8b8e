from __future__ import annotations

import pytest

from helpers import RUNNING_EXAMPLE, looped_automaton
from spec2reach.automata import (
    Annotation, AnyOf, CallPattern, Cond, GhostVar, InstrumentationAutomaton, NotCond,
    OpTemplate, Placement, TemplateError, TokenPattern, Transition, TRUE, UnboundWildcard,
    annotation_holds, dump_ia,
)
from spec2reach.cfa import OpKind, analyze, build_cfa, op_for_stmt
from spec2reach.frontend import CType, emit, parse, parse_statements

SCOPE = {"y": CType.INT, "z": CType.INT, "u": CType.UINT, "p": CType.PTR, "q": CType.PTR}


def op(text: str):
    (s,) = parse_statements(text, scope=dict(SCOPE))
    return op_for_stmt(s, SCOPE)


def names(bindings):
    return {k: emit(v) for k, v in bindings.items()}


def test_token_pattern_binds_operands():
    m = TokenPattern(".* $x1 + $x2 .* ;").match(op("y = z + 42;"))
    assert m and names(m.bindings) == {1: "z", 2: "42"}


def test_token_pattern_requires_operator():
    assert not TokenPattern(".* $x1 + $x2 .* ;").match(op("y = 5;"))


def test_signed_only_skips_unsigned_arithmetic():
    pat = TokenPattern(".* $x0 + $x1 .* ;", signed_only=True)
    assert pat.match(op("y = z + 1;"))
    assert not pat.match(op("u = u + 1;"))


def test_unary_minus_is_not_binary():
    binary = TokenPattern(".* $x0 - $x1 .* ;")
    unary = TokenPattern(".* - $x0 .* ;")
    assert not binary.match(op("y = -z;"))
    assert names(unary.match(op("y = -z;")).bindings) == {0: "z"}
    assert names(binary.match(op("y = z - 1;")).bindings) == {0: "z", 1: "1"}


def test_cond_patterns():
    cfa = build_cfa(parse(RUNNING_EXAMPLE))
    pos = next(e.op for e in cfa.edges if e.op.kind is OpKind.ASSUME and e.op.positive)
    neg = next(e.op for e in cfa.edges if e.op.kind is OpKind.ASSUME and not e.op.positive)
    assert pos.text() == "[x < 127]"
    m = Cond.match(pos)
    assert m and m.bindings == {}
    assert not Cond.match(neg) and NotCond.match(neg)
    assert not Cond.match(op("y = 1;"))


def test_call_patterns():
    m = CallPattern("free", [0]).match(op("free(p);"))
    assert m and names(m.bindings) == {0: "p"}
    alloc = AnyOf(CallPattern("malloc", [1], result=0), CallPattern("calloc", [1, 2], result=0))
    assert names(alloc.match(op("p = malloc(4);")).bindings) == {0: "p", 1: "4"}
    assert names(alloc.match(op("q = calloc(2, 8);")).bindings) == {0: "q", 1: "2", 2: "8"}
    m = CallPattern("realloc", [1, 2], result=0).match(op("q = realloc(p, 16);"))
    assert names(m.bindings) == {0: "q", 1: "p", 2: "16"}
    assert not CallPattern("free", [0]).match(op("p = malloc(4);"))


def test_true_matches_everything():
    assert TRUE.match(op("y = 1;")) and TRUE.match(op("free(p);"))


def test_instantiate_examples():
    m = TokenPattern(".* $x1 + $x2 .* ;").match(op("y = z + 42;"))
    (s,) = OpTemplate("assert($x1 > $x2);").instantiate(m.bindings, dict(SCOPE))
    assert emit(s).strip() == "if (!(z > 42)) reach_error();"
    (s,) = OpTemplate("if (q == $x0) q = 0;").instantiate(
        CallPattern("free", [0]).match(op("free(p);")).bindings, dict(SCOPE))
    assert " ".join(emit(s).split()) == "if (q == p) { q = 0; }"


def test_template_without_wildcards_is_verbatim():
    t = OpTemplate("y = 1;")
    assert t.substitute({}) == "y = 1;"
    (s,) = t.instantiate({}, dict(SCOPE))
    assert emit(s).strip() == "y = 1;"


def test_substitution_parenthesizes_compound_operands():
    (s,) = parse_statements("y = z + -3;", scope=dict(SCOPE))
    m = TokenPattern(".* $x0 + $x1 .* ;").match(op_for_stmt(s, SCOPE))
    assert OpTemplate("assert($x0 > $x1);").substitute(m.bindings) == "assert(z > (-3));"


def test_unbound_wildcard_rejected():
    with pytest.raises(UnboundWildcard):
        InstrumentationAutomaton("bad", ["q0"], "q0", [], [
            Transition("q0", TokenPattern(".* $x0 + $x1 .* ;"), OpTemplate("assert($x2 > 0);"),
                       Placement.B, "q0")], {})


def test_transition_states_must_exist():
    with pytest.raises(ValueError):
        InstrumentationAutomaton("bad", ["q0"], "q0", [], [
            Transition("q0", TRUE, OpTemplate("y = 1;"), Placement.B, "q9")], {})


def test_templates_may_only_write_ghosts():
    ia = looped_automaton()
    ia.check_writes(OpTemplate("looped = 1;").instantiate({}, {"looped": CType.INT}))
    with pytest.raises(TemplateError):
        ia.check_writes(OpTemplate("y = 1;").instantiate({}, dict(SCOPE)))


def test_annotations_on_running_example():
    cfa = build_cfa(parse(RUNNING_EXAMPLE))
    facts = analyze(cfa)
    (head,) = facts.loop_heads
    assert annotation_holds(Annotation.TRUE, "l2", facts)
    assert annotation_holds(Annotation.LOOP_HEAD, head, facts)
    assert not annotation_holds(Annotation.LOOP_HEAD, "l2", facts)
    assert annotation_holds(Annotation.INIT, cfa.l0, facts)
    end_loc = next(e.src for e in cfa.edges if e.dst == cfa.exit)
    assert annotation_holds(Annotation.END, end_loc, facts)
    # an anchor restricts loop_head to one loop
    assert not annotation_holds(Annotation.LOOP_HEAD, head, facts, anchor="l1")


def test_dump_ia_lists_transitions():
    text = dump_ia(looped_automaton())
    assert "automaton looped" in text
    assert "q1 -> q2 : cond | looped = 1; | A" in text
    assert "int looped = 0" in text


def test_ghost_defaults():
    g = GhostVar("flag", CType.INT)
    assert g.init == "0"
