from __future__ import annotations

import itertools

import networkx as nx
import pytest

from helpers import RUNNING_EXAMPLE, corpus_files
from spec2reach.cfa import (
    OpKind, analyze, back_edge_targets, build_cfa, decompose_expressions, has_cycle,
    lower_expressions,
)
from spec2reach.frontend import UnsupportedFeature, parse
from spec2reach.oracle import ExecConfig, Machine

# Reference drawing of the running example CFA: node names and operations
REFERENCE_CFA = [
    ("l0", "unsigned int x = nondet();", "l3"),
    ("l3", "assert(x >= 0);", "l4"),
    ("l4", "int y = 1;", "l6"),
    ("l6", "[x < 127]", "l7"),
    ("l6", "[x >= 127]", "l10"),
    ("l7", "x = x + y;", "l8"),
    ("l8", "y = y + 1;", "l6"),
]


def _norm(label: str) -> str:
    return {"[!(x < 127)]": "[x >= 127]"}.get(label, label)


def test_running_example_isomorphic_to_reference():
    cfa = build_cfa(parse(RUNNING_EXAMPLE))
    assert len(cfa.locations) == 8
    ours = nx.DiGraph()
    for e in cfa.edges:
        if e.op.kind is not OpKind.RETURN:
            ours.add_edge(e.src, e.dst, label=_norm(e.op.text()))
    theirs = nx.DiGraph()
    for a, label, b in REFERENCE_CFA:
        theirs.add_edge(a, b, label=label)
    assert nx.is_isomorphic(ours, theirs, edge_match=lambda x, y: x["label"] == y["label"])
    # the one remaining edge is the return into the exit location
    (ret,) = [e for e in cfa.edges if e.op.kind is OpKind.RETURN]
    assert ret.dst == cfa.exit


def test_branch_location_has_both_assumes():
    cfa = build_cfa(parse(RUNNING_EXAMPLE))
    facts = analyze(cfa)
    (head,) = facts.loop_heads
    outs = sorted(e.op.text() for e in cfa.out_edges(head))
    assert outs == ["[!(x < 127)]", "[x < 127]"]


def test_dump_format():
    cfa = build_cfa(parse(RUNNING_EXAMPLE))
    text = cfa.dump()
    assert text.startswith("digraph cfa {\n  // init: l0  exit: l7\n")
    assert '  l3 -> l4 [label="[x < 127]"];' in text


def test_empty_main_has_single_skip_edge():
    cfa = build_cfa(parse("int main() { }"))
    assert len(cfa.edges) == 1
    (e,) = cfa.edges
    assert e.src == cfa.l0 and e.dst == cfa.exit and e.op.kind is OpKind.SKIP


def test_backward_goto_forms_cycle():
    cfa = build_cfa(parse("int main() { int c = 0; L: c = c + 1; if (c < 3) { goto L; } return 0; }"))
    assert has_cycle(cfa)
    facts = analyze(cfa)
    assert [lp.kind for lp in facts.loops] == ["goto"]
    assert back_edge_targets(cfa) == list(facts.loop_heads)


def test_loop_free_program_has_no_heads():
    facts = analyze(build_cfa(parse("int main() { int x = 1; if (x > 0) { x = 2; } return x; }")))
    assert not facts.loop_heads and not facts.loops


def test_running_example_loop_facts():
    cfa = build_cfa(parse(RUNNING_EXAMPLE))
    facts = analyze(cfa)
    (lp,) = facts.loops
    assert set(lp.variables) == {"x", "y"}
    assert facts.is_loop_head(lp.head) and not facts.is_loop_head(cfa.l0)
    assert facts.is_init(cfa.l0)
    assert facts.is_end("l5") and not facts.is_end(lp.head)


def test_nested_loops():
    src = """int main() {
      int i = 0;
      while (i < 3) {
        int j = 0;
        while (j < i) { j = j + 1; }
        i = i + 1;
      }
      return 0;
    }"""
    facts = analyze(build_cfa(parse(src)))
    assert len(facts.loops) == 2
    outer, inner = sorted(facts.loops, key=lambda lp: len(lp.body), reverse=True)
    assert outer.head != inner.head
    assert inner.body < outer.body
    assert set(inner.variables) <= set(outer.variables) | {"j"}
    assert set(inner.variables) == {"i", "j"}


def _final_store(prog, inputs: dict[str, int]):
    """Run a straight-line program whose inputs are globals; return the globals at exit."""
    m = Machine(prog, ExecConfig(domain=(0,)))
    state = m.initial()
    store = list(state[1])
    for name, v in inputs.items():
        store[m.index[name]] = v
    state = (0, tuple(store), ())
    while True:
        (_, kind, payload, _), = m.step(state)
        if kind != "next":
            break
        state = payload
    return {n: state[1][m.index[n]] for n in ("a", "b", "c", "y")}


@pytest.mark.parametrize("body, expected", [
    ("y = a + b * c;", ["int __t0 = b * c;", "y = a + __t0;"]),
    ("y = (a + b) + c;", ["int __t0 = a + b;", "y = __t0 + c;"]),
    ("y = a;", ["y = a;"]),
])
def test_decomposition_shape_and_semantics(body, expected):
    src = f"int a = 0; int b = 0; int c = 0; int y = 0; int main() {{ {body} return 0; }}"
    prog = parse(src)
    lowered = lower_expressions(prog)
    cfa = decompose_expressions(build_cfa(prog))
    ops = [e.op.text() for e in cfa.edges if e.op.kind in (OpKind.ASSIGN, OpKind.DECL)]
    assert ops == expected
    # oracle: both programs agree on every input in a small range
    for a, b, c in itertools.product(range(-3, 4), repeat=3):
        inputs = {"a": a, "b": b, "c": c}
        assert _final_store(prog, inputs) == _final_store(lowered, inputs)


def test_arithmetic_behind_short_circuit_is_rejected():
    with pytest.raises(UnsupportedFeature):
        lower_expressions(parse("int main() { int a = 1; int b = 0; if (b != 0 && a / b > 1) { a = 0; } return 0; }"))


def test_every_corpus_program_builds():
    for f in corpus_files():
        cfa = build_cfa(parse(f.read_text()))
        assert cfa.l0 in cfa.locations and cfa.exit in cfa.locations
