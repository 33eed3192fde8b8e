"""The sequentialization operator: a worklist product of a CFA with a list of
instrumentation automata, yielding a CFA with synthetic edges."""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .automata import (
    InstrumentationAutomaton, MatchResult, Placement, Transition, annotation_holds,
)
from .cfa import Cfa, Edge, LocationFacts, Provenance, analyze, op_for_stmt
from .frontend.nodes import CType, Stmt
from .properties import PropertyKind, build_automata


@dataclass(frozen=True, order=True)
class ProductPair:
    loc: str
    state: str
    automaton: int


@dataclass
class Firing:
    """A transition applied to an original edge, with its instantiated ops."""

    eid: int
    automaton: int
    transition: int
    placement: Placement
    stmts: list[Stmt]


@dataclass
class InstrumentedCfa:
    cfa: Cfa
    source: Cfa
    automata: list[InstrumentationAutomaton]
    firings: list[Firing]
    pairs_visited: int
    bound: int
    synthetic_locations: list[str] = field(default_factory=list)

    @property
    def synthetic_edges(self) -> list[Edge]:
        return [e for e in self.cfa.edges if e.synthetic]

    def erase_synthetic(self) -> Cfa:
        """Drop synthetic edges and contract synthetic locations."""
        synth = set(self.synthetic_locations)
        parent = {l: l for l in self.cfa.locations}

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        for e in self.synthetic_edges:
            a, b = find(e.src), find(e.dst)
            if a == b:
                continue
            if a in synth:
                parent[a] = b
            else:
                parent[b] = a
        edges = [Edge(e.eid, find(e.src), e.op, find(e.dst), e.origin)
                 for e in self.cfa.edges if not e.synthetic]
        locs = [l for l in self.cfa.locations if l not in synth]
        return Cfa(locs, find(self.cfa.l0), find(self.cfa.exit), edges, self.source.program,
                   dict(self.source.scopes))

    def dump(self) -> str:
        return self.cfa.dump("product")


def initialize_automata(cfa: Cfa, prop: PropertyKind,
                        facts: Optional[LocationFacts] = None) -> list[InstrumentationAutomaton]:
    """Property-specific fan-out of automata, each with its anchor location."""
    return build_automata(cfa, prop, facts)


_DECLARED = re.compile(r"(?:\bint|\*)\s*([A-Za-z_]\w*)\s*[=;]")


class Product:
    """Successor relations of the CFA x IA product."""

    def __init__(self, cfa: Cfa, automata: Sequence[InstrumentationAutomaton],
                 facts: Optional[LocationFacts] = None):
        self.cfa = cfa
        self.automata = list(automata)
        self.facts = facts or analyze(cfa)
        self.types: dict[str, CType] = dict(cfa.variables)
        for ia in self.automata:
            for g in ia.ghosts:
                self.types.setdefault(g.name, g.ctype)

    def ia(self, pair: ProductPair) -> InstrumentationAutomaton:
        return self.automata[pair.automaton]

    def enabled(self, pair: ProductPair) -> list[tuple[Edge, int, Transition, MatchResult]]:
        """Matching (edge, transition) combinations at ``pair``, or [] when
        the state annotation fails at the location."""
        ia = self.ia(pair)
        if not annotation_holds(ia.alpha[pair.state], pair.loc, self.facts, ia.anchor):
            return []
        out = []
        for edge in self.cfa.out_edges(pair.loc):
            for ti, t in ia.outgoing(pair.state):
                if t.at is not None and not annotation_holds(t.at, pair.loc, self.facts, ia.anchor):
                    continue
                m = t.pattern.match(edge.op)
                if m:
                    out.append((edge, ti, t, m))
        return out

    def succ_ia(self, pair: ProductPair) -> set[ProductPair]:
        return {ProductPair(pair.loc, t.dst, pair.automaton) for _, _, t, _ in self.enabled(pair)}

    def succ(self, pair: ProductPair) -> set[ProductPair]:
        matches = self.enabled(pair)
        if not matches:
            return {ProductPair(e.dst, pair.state, pair.automaton)
                    for e in self.cfa.out_edges(pair.loc)}
        out = {ProductPair(pair.loc, t.dst, pair.automaton) for _, _, t, _ in matches}
        # the matched edge is taken together with the IA move
        out |= {ProductPair(e.dst, t.dst, pair.automaton) for e, _, t, _ in matches}
        matched = {e.eid for e, _, _, _ in matches}
        out |= {ProductPair(e.dst, pair.state, pair.automaton)
                for e in self.cfa.out_edges(pair.loc) if e.eid not in matched}
        return out

    def instantiate(self, ia: InstrumentationAutomaton, t: Transition, m: MatchResult) -> list[Stmt]:
        text = t.template.substitute(m.bindings)
        declared = set(_DECLARED.findall(text))
        scope = {k: v for k, v in self.types.items() if k not in declared}
        stmts = t.template.instantiate(m.bindings, scope)
        ia.check_writes(stmts)
        return stmts

    def firings(self, pair: ProductPair) -> list[Firing]:
        ia = self.ia(pair)
        return [Firing(e.eid, pair.automaton, ti, t.placement, self.instantiate(ia, t, m))
                for e, ti, t, m in self.enabled(pair)]

    def new_edges(self, pair: ProductPair) -> list[Edge]:
        """Edges contributed by ``pair`` alone: each matched edge split around
        its instrumentation. Unmatched edges are left to other pairs."""
        fired = self.firings(pair)
        if not fired:
            return []
        by_edge: dict[int, list[Firing]] = {}
        for f in fired:
            by_edge.setdefault(f.eid, []).append(f)
        out: list[Edge] = []
        counter = [0]
        next_eid = [max(x.eid for x in self.cfa.edges) + 1]
        for e in self.cfa.out_edges(pair.loc):
            if e.eid in by_edge:
                out.extend(_chain(e, by_edge[e.eid], counter, [], self.types, next_eid))
        return out


def _chain(e: Edge, fs: list[Firing], counter: list[int], new_locs: list[str],
           types: dict, next_eid: list[int]) -> list[Edge]:
    """Split edge ``e`` into B-ops, the original op, then A-ops."""
    fs = sorted(fs, key=lambda f: (f.automaton, f.transition))
    items: list[tuple[Optional[Firing], int, Optional[Stmt]]] = []
    for pl in (Placement.B, None, Placement.A):
        if pl is None:
            items.append((None, 0, None))
            continue
        for f in fs:
            if f.placement is pl:
                items.extend((f, i, s) for i, s in enumerate(f.stmts))
    out: list[Edge] = []
    cur = e.src
    for n, (f, idx, stmt) in enumerate(items):
        if n == len(items) - 1:
            dst = e.dst
        else:
            dst = f"{e.src}_new{counter[0]}"
            counter[0] += 1
            new_locs.append(dst)
        if f is None:
            out.append(Edge(e.eid, cur, e.op, dst, e.origin))
        else:
            prov = Provenance(e.eid, f.automaton, f.transition, f.placement.value, idx)
            out.append(Edge(next_eid[0], cur, op_for_stmt(stmt, types), dst, e.origin, prov))
            next_eid[0] += 1
        cur = dst
    return out


def sequentialize(cfa: Cfa, automata: Sequence[InstrumentationAutomaton],
                  facts: Optional[LocationFacts] = None) -> InstrumentedCfa:
    product = Product(cfa, automata, facts)
    start = [ProductPair(cfa.l0, ia.q0, i) for i, ia in enumerate(product.automata)]
    waitlist = deque(start)
    finished: set[ProductPair] = set(start)
    visited = 0
    recorded: dict[tuple[int, int, int], Firing] = {}
    while waitlist:
        pair = waitlist.popleft()
        visited += 1
        for f in product.firings(pair):
            recorded.setdefault((f.eid, f.automaton, f.transition), f)
        for nxt in sorted(product.succ(pair)):
            if nxt not in finished:
                finished.add(nxt)
                waitlist.append(nxt)
    bound = len(cfa.locations) * sum(len(ia.states) for ia in product.automata)
    assert visited <= bound, f"product visited {visited} pairs, bound {bound}"

    by_edge: dict[int, list[Firing]] = {}
    for f in recorded.values():
        by_edge.setdefault(f.eid, []).append(f)
    counter = [0]
    new_locs: list[str] = []
    next_eid = [max((e.eid for e in cfa.edges), default=-1) + 1]
    edges: list[Edge] = []
    for e in cfa.edges:
        if e.eid in by_edge:
            edges.extend(_chain(e, by_edge[e.eid], counter, new_locs, product.types, next_eid))
        else:
            edges.append(Edge(e.eid, e.src, e.op, e.dst, e.origin))
    out = Cfa([*cfa.locations, *new_locs], cfa.l0, cfa.exit, edges, cfa.program,
              dict(cfa.scopes))
    firings = sorted(recorded.values(), key=lambda f: (f.eid, f.automaton, f.transition))
    return InstrumentedCfa(out, cfa, product.automata, firings, visited, bound, new_locs)


def dump_product(icfa: InstrumentedCfa) -> str:
    return icfa.dump()
