from __future__ import annotations

import json

import pytest

from helpers import GOLDEN, RUNNING_EXAMPLE, looped_automaton
from spec2reach.automata import (
    Annotation, Cond, GhostVar, InstrumentationAutomaton, OpTemplate, Placement, TRUE, Transition,
)
from spec2reach.cfa import analyze, build_cfa
from spec2reach.frontend import CType, parse, parse_statements
from spec2reach.frontend.nodes import While
from spec2reach.instrument import (
    AFTER, BEFORE, BODY_START, Edit, EditPlan, UnsupportedPlacement, apply_edits,
    inserted_statements, plan_edits, sidecar_json, source_map, strip_inserted,
)
from spec2reach.pipeline import transform
from spec2reach.sequentialize import sequentialize


def _plan(src, automata):
    prog = parse(src)
    cfa = build_cfa(prog)
    icfa = sequentialize(cfa, automata, analyze(cfa))
    return prog, plan_edits(icfa, prog)


def test_running_example_plan():
    prog, plan = _plan(RUNNING_EXAMPLE, [looped_automaton()])
    loop = next(s for s in prog.main.body.stmts if isinstance(s, While))
    got = sorted((e.position, e.anchor == loop.uid, e.stmt.__class__.__name__) for e in plan.edits)
    assert got == [(AFTER, True, "Assert"), (BEFORE, False, "Decl"), (BODY_START, True, "Assign")]
    (decl,) = [e for e in plan.edits if e.position == BEFORE]
    assert decl.anchor == prog.main.body.stmts[0].uid


def test_running_example_program_matches_golden():
    result = transform(parse(RUNNING_EXAMPLE), "termination", automata=[looped_automaton()])
    assert result.text == (GOLDEN / "running_example.looped.c").read_text()
    body = result.text.split("int main() {")[1]
    lines = [ln.strip() for ln in body.splitlines() if ln.strip()]
    assert lines[0] == "int looped = 0;"
    loop = lines.index("while (x < 127) {")
    assert lines[loop + 1] == "looped = 1;"
    assert "if (!(x <= 136 || looped == 0)) reach_error();" in lines[loop + 5]


@pytest.mark.parametrize("prop", ["no-overflow", "termination", "memory-cleanup"])
def test_property_goldens(prop):
    result = transform(parse(RUNNING_EXAMPLE), prop)
    assert result.text == (GOLDEN / f"running_example.{prop}.c").read_text()


def test_empty_plan_is_identity():
    prog = parse(RUNNING_EXAMPLE)
    assert apply_edits(EditPlan(), prog) == prog


def test_no_synthetic_edges_no_edits():
    _, plan = _plan(RUNNING_EXAMPLE, [])
    assert len(plan) == 0


def test_two_edits_before_same_statement_keep_order():
    prog = parse("int main() { int x = 1; return x; }")
    target = prog.main.body.stmts[1]
    first = parse_statements("x = 2;", scope={"x": prog.variables()["x"]})[0]
    second = parse_statements("x = 3;", scope={"x": prog.variables()["x"]})[0]
    for s in (first, second):
        s.provenance = {"automaton": 0}
    plan = EditPlan([Edit(target.uid, BEFORE, second, {}, (0, 1, 0)),
                     Edit(target.uid, BEFORE, first, {}, (0, 0, 0))])
    out = apply_edits(plan, prog)
    assert [type(s).__name__ for s in out.main.body.stmts] == ["Decl", "Assign", "Assign", "Return"]
    assert out.main.body.stmts[1] is first and out.main.body.stmts[2] is second


def test_strip_inserted_recovers_ast():
    prog = parse(RUNNING_EXAMPLE)
    for prop in ("no-overflow", "termination", "memory-cleanup"):
        result = transform(prog, prop)
        assert strip_inserted(result.program) == result.base


def test_inserted_statements_carry_provenance():
    result = transform(parse(RUNNING_EXAMPLE), "termination")
    ins = inserted_statements(result.program)
    assert ins and all(s.provenance["automaton_name"] == "termination-loop0" for s in ins)


def test_source_map_sidecar():
    result = transform(parse(RUNNING_EXAMPLE), "termination", automata=[looped_automaton()])
    text, entries = source_map(result.program)
    lines = text.splitlines()
    for e in entries:
        assert e["line"] is not None
    by_text = {lines[e["line"] - 1].strip(): e for e in entries}
    assert by_text["looped = 1;"]["placement"] == "A"
    assert lines[by_text["looped = 1;"]["anchor_line"] - 1].strip() == "while (x < 127) {"
    doc = json.loads(sidecar_json(entries, "termination", "running_example.c"))
    assert doc["property"] == "termination" and len(doc["inserted"]) == 3


def _single(pattern, template, placement, annotation=Annotation.TRUE):
    return InstrumentationAutomaton("t", ["q0"], "q0", [GhostVar("z", CType.INT)],
                                    [Transition("q0", pattern, OpTemplate(template), placement, "q0")],
                                    {"q0": annotation})


def test_before_loop_condition_is_rejected():
    with pytest.raises(UnsupportedPlacement):
        _plan(RUNNING_EXAMPLE, [_single(Cond, "int z = 0;", Placement.B, Annotation.LOOP_HEAD)])


def test_after_return_is_rejected():
    from spec2reach.automata import TokenPattern
    with pytest.raises(UnsupportedPlacement):
        _plan("int main() { int x = 1; return x; }",
              [_single(TokenPattern("return .* ;"), "int z = 0;", Placement.A)])


def test_exit_edge_of_loop_with_break_is_rejected():
    from spec2reach.automata import NotCond
    src = "int main() { int i = 0; while (i < 3) { i = i + 1; if (i == 2) { break; } } return 0; }"
    with pytest.raises(UnsupportedPlacement):
        _plan(src, [_single(NotCond, "int z = 0;", Placement.A, Annotation.LOOP_HEAD)])


def test_if_b_placement_collapses_to_one_edit():
    src = "int main() { int x = nondet(); if (x > 0) { x = 1; } return 0; }"
    prog, plan = _plan(src, [_single(TRUE, "int z = 0;", Placement.B)])
    if_stmt = prog.main.body.stmts[1]
    assert len([e for e in plan.edits if e.anchor == if_stmt.uid and e.position == BEFORE]) == 1
