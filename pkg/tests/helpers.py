"""Shared fixtures: the running example and its test-only automaton."""

from __future__ import annotations

from pathlib import Path

from spec2reach.automata import (
    Annotation, Cond, GhostVar, InstrumentationAutomaton, NotCond, OpTemplate, Placement,
    TRUE, Transition,
)
from spec2reach.frontend import INT_MAX, INT_MIN, parse, parse_expression
from spec2reach.frontend.nodes import CType
from spec2reach.oracle import ExecConfig, Machine, c_div
from spec2reach.properties import GUARDS

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
GOLDEN = Path(__file__).resolve().parent / "golden"

RUNNING_EXAMPLE = """\
int main() {
  unsigned int x = nondet();
  assert(x >= 0);
  int y = 1;
  while (x < 127) {
    x = x + y;
    y = y + 1;
  }
  return 0;
}
"""

# "if the loop runs at least once, x ends at most 136"
PI = "x <= 136 || looped == 0"


def looped_automaton() -> InstrumentationAutomaton:
    return InstrumentationAutomaton(
        "looped", ["q0", "q1", "q2"], "q0", [GhostVar("looped", CType.INT)],
        [Transition("q0", TRUE, OpTemplate("int looped = 0;"), Placement.B, "q1"),
         Transition("q1", Cond, OpTemplate("looped = 1;"), Placement.A, "q2"),
         Transition("q2", NotCond, OpTemplate(f"assert({PI});"), Placement.A, "q2")],
        {"q0": Annotation.INIT, "q1": Annotation.LOOP_HEAD, "q2": Annotation.LOOP_HEAD})


def corpus_files(prop: str | None = None) -> list[Path]:
    dirs = [CORPUS / prop] if prop else sorted(p for p in CORPUS.iterdir() if p.is_dir())
    return [f for d in dirs for f in sorted(d.glob("*.c"))]


def cfa_isomorphic(a, b) -> bool:
    """Isomorphism of two CFAs, matching the multiset of operation texts per location pair."""
    import networkx as nx

    def graph(cfa):
        g = nx.DiGraph()
        g.add_nodes_from(cfa.locations)
        for e in cfa.edges:
            if g.has_edge(e.src, e.dst):
                g[e.src][e.dst]["labels"].append(e.op.text())
            else:
                g.add_edge(e.src, e.dst, labels=[e.op.text()])
        for _, _, d in g.edges(data=True):
            d["labels"] = sorted(d["labels"])
        g.nodes[cfa.l0]["role"] = "init"
        return g

    return nx.is_isomorphic(graph(a), graph(b),
                            node_match=lambda x, y: x.get("role") == y.get("role"),
                            edge_match=lambda x, y: x["labels"] == y["labels"])


BOUNDARY = [INT_MIN, INT_MIN + 1, -1, 0, 1, INT_MAX - 1, INT_MAX]
OPS = ["+", "-", "*", "/", "%", "neg"]


def wide_in_range(op: str, a: int, b: int) -> bool | None:
    """Mathematical result fits in int32; None where C leaves the operation undefined for
    reasons other than overflow (division by zero)."""
    if op in ("/", "%") and b == 0:
        return None
    value = {"+": lambda: a + b, "-": lambda: a - b, "*": lambda: a * b,
             "/": lambda: c_div(a, b), "%": lambda: c_div(a, b), "neg": lambda: -a}[op]()
    return INT_MIN <= value <= INT_MAX


class GuardEvaluator:
    """Evaluates the guard template text itself with the executor's semantics."""

    def __init__(self):
        prog = parse("int a = 0; int b = 0; int main() { return 0; }")
        self.m = Machine(prog, ExecConfig(domain=(0,)), check_overflow=True)
        scope = {"a": CType.INT, "b": CType.INT}
        self.exprs = {op: parse_expression(GUARDS[op].replace("$x0", "a").replace("$x1", "b"), scope)
                      for op in OPS}

    def __call__(self, op: str, a: int, b: int) -> bool:
        store = [None] * len(self.m.names)
        store[self.m.index["a"]], store[self.m.index["b"]] = a, b
        ((v, _),) = list(self.m.ev(self.exprs[op], tuple(store)))
        assert isinstance(v, int), f"guard for {op} itself misbehaves on ({a}, {b}): {v}"
        return bool(v)
