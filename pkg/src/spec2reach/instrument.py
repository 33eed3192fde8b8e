"""The instrumentation operator: map synthetic edges of an instrumented CFA back
into the source AST as inserted statements."""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from typing import Optional

from .cfa import Edge, OpKind
from .frontend import emit_with_lines
from .frontend.nodes import (
    Block, Break, FunctionDef, If,
    Program, Return, Stmt, While, walk_stmts,
)
from .sequentialize import InstrumentedCfa


class OrphanSyntheticEdge(RuntimeError):
    """A synthetic edge whose provenance does not resolve to a statement."""


class UnsupportedPlacement(ValueError):
    """An instrumentation point with no equivalent position in the source."""


# edit positions relative to an anchor statement
BEFORE, AFTER, THEN_START, ELSE_START, BODY_START, MAIN_START, MAIN_END = (
    "before", "after", "then-start", "else-start", "body-start", "main-start", "main-end")


@dataclass
class Edit:
    anchor: Optional[int]  # statement uid; None for main-start / main-end
    position: str
    stmt: Stmt
    provenance: dict
    order: tuple = ()


@dataclass
class EditPlan:
    edits: list[Edit] = field(default_factory=list)

    def __len__(self):
        return len(self.edits)

    def at(self, anchor: Optional[int], position: str) -> list[Stmt]:
        hits = [e for e in self.edits if e.anchor == anchor and e.position == position]
        hits.sort(key=lambda e: e.order)
        return [e.stmt for e in hits]


def plan_edits(icfa: InstrumentedCfa, program: Optional[Program] = None) -> EditPlan:
    """One edit per synthetic edge, anchored at the statement of its original edge."""
    program = program or icfa.source.program
    uids = {s.uid for s in program.statements()}
    plan = EditPlan()
    by_eid: dict[int, Edge] = {e.eid: e for e in icfa.source.edges}
    # B-ops on both edges of an if condition collapse into one edit before the if
    if_before: dict[int, dict[tuple, list[int]]] = {}
    for se in icfa.synthetic_edges:
        prov = se.provenance
        orig = by_eid.get(prov.edge)
        if orig is None:
            raise OrphanSyntheticEdge(f"synthetic edge {se.src}->{se.dst} refers to unknown edge {prov.edge}")
        meta = {"automaton": prov.automaton, "automaton_name": icfa.automata[prov.automaton].name,
                "transition": prov.transition, "placement": prov.placement,
                "edge": prov.edge, "index": prov.index}
        order = (prov.automaton, prov.transition, prov.index)
        kind = orig.op.kind
        origin = orig.origin
        meta["anchor_uid"] = origin.uid if origin is not None else None
        stmt = copy.deepcopy(se.op.stmt)
        _mark(stmt, meta)
        if kind is OpKind.SKIP:
            if orig.op.tag == "entry":
                plan.edits.append(Edit(None, MAIN_START, stmt, meta, order))
            elif prov.placement == "B":
                plan.edits.append(Edit(None, MAIN_END, stmt, meta, order))
            else:
                raise UnsupportedPlacement("instrumentation after the end of main")
            continue
        if origin is None or origin.uid not in uids:
            raise OrphanSyntheticEdge(f"edge {orig.src}->{orig.dst} has no source statement")
        if kind is OpKind.ASSUME:
            if isinstance(origin, If):
                if prov.placement == "A":
                    pos = THEN_START if orig.op.positive else ELSE_START
                    plan.edits.append(Edit(origin.uid, pos, stmt, meta, order))
                else:
                    key = (prov.automaton, prov.transition, prov.index)
                    if_before.setdefault(origin.uid, {}).setdefault(key, []).append(
                        int(orig.op.positive))
                    if len(if_before[origin.uid][key]) == 1:
                        plan.edits.append(Edit(origin.uid, BEFORE, stmt, meta, order))
                continue
            if isinstance(origin, While):
                if prov.placement == "B":
                    raise UnsupportedPlacement("B-placed operation on a loop condition")
                if orig.op.positive:
                    plan.edits.append(Edit(origin.uid, BODY_START, stmt, meta, order))
                else:
                    if _loop_breaks(origin):
                        raise UnsupportedPlacement("operation on a loop exit of a loop with break")
                    plan.edits.append(Edit(origin.uid, AFTER, stmt, meta, order))
                continue
            raise OrphanSyntheticEdge("assume edge without a branching statement")
        if prov.placement == "A" and isinstance(origin, Return):
            raise UnsupportedPlacement("operation after a return statement")
        pos = BEFORE if prov.placement == "B" else AFTER
        plan.edits.append(Edit(origin.uid, pos, stmt, meta, order))
    for uid, keys in if_before.items():
        for key, sides in keys.items():
            if sorted(sides) != [0, 1]:
                raise UnsupportedPlacement(
                    "B-placed operation on only one branch of a condition")
    return plan


def _loop_breaks(loop: While) -> bool:
    def scan(stmts) -> bool:
        for s in stmts:
            if isinstance(s, Break):
                return True
            if isinstance(s, While):
                continue
            for b in s.child_blocks():
                if scan(b.stmts):
                    return True
        return False
    return scan(loop.body.stmts)


def _mark(stmt: Stmt, meta: dict) -> None:
    for s in walk_stmts(stmt):
        s.provenance = dict(meta)


def apply_edits(plan: EditPlan, program: Program) -> Program:
    """Return a new AST with the planned statements inserted."""
    if program.main is None:
        return program

    def block(b: Block) -> Block:
        out: list[Stmt] = []
        for s in b.stmts:
            out.extend(plan.at(s.uid, BEFORE))
            out.append(rebuild(s))
            out.extend(plan.at(s.uid, AFTER))
        return Block(out, span=b.span, uid=b.uid, provenance=b.provenance)

    def rebuild(s: Stmt) -> Stmt:
        if isinstance(s, If):
            then = block(s.then)
            then.stmts[:0] = plan.at(s.uid, THEN_START)
            orelse = block(s.orelse) if s.orelse is not None else None
            extra = plan.at(s.uid, ELSE_START)
            if extra:
                if orelse is None:
                    orelse = Block([], span=s.span)
                orelse.stmts[:0] = extra
            return If(s.cond, then, orelse, span=s.span, uid=s.uid, provenance=s.provenance)
        if isinstance(s, While):
            body = block(s.body)
            body.stmts[:0] = plan.at(s.uid, BODY_START)
            return While(s.cond, body, span=s.span, uid=s.uid, provenance=s.provenance)
        if isinstance(s, Block):
            return block(s)
        return s

    main = program.main
    body = block(main.body)
    body.stmts[:0] = plan.at(None, MAIN_START)
    end = plan.at(None, MAIN_END)
    if end:
        body.stmts.extend(end)
    new_main = FunctionDef(main.name, main.ret, main.params, body, main.span)
    return Program(list(program.globals), new_main)


def strip_inserted(program: Program) -> Program:
    """Remove every statement carrying provenance."""
    if program.main is None:
        return program

    def block(b: Block) -> Block:
        return Block([rebuild(s) for s in b.stmts if s.provenance is None],
                     span=b.span, uid=b.uid)

    def rebuild(s: Stmt) -> Stmt:
        if isinstance(s, If):
            orelse = block(s.orelse) if s.orelse is not None else None
            if orelse is not None and not orelse.stmts:
                orelse = None
            return If(s.cond, block(s.then), orelse, span=s.span, uid=s.uid)
        if isinstance(s, While):
            return While(s.cond, block(s.body), span=s.span, uid=s.uid)
        if isinstance(s, Block):
            return block(s)
        return s

    main = program.main
    return Program(list(program.globals),
                   FunctionDef(main.name, main.ret, main.params, block(main.body), main.span))


def inserted_statements(program: Program) -> list[Stmt]:
    """Top-level inserted statements (not their nested children)."""
    out = []

    def visit(b: Block, inside: bool):
        for s in b.stmts:
            mine = s.provenance is not None
            if mine and not inside:
                out.append(s)
            for c in s.child_blocks():
                visit(c, inside or mine)
    if program.main is not None:
        visit(program.main.body, False)
    return out


def source_map(program: Program, prelude: bool = True) -> tuple[str, list[dict]]:
    """Emit ``program`` and list every inserted statement with its output line
    and the output line of the statement it instruments."""
    text, lines = emit_with_lines(program, prelude=prelude)
    entries = []
    for s in inserted_statements(program):
        meta = dict(s.provenance)
        anchor = meta.pop("anchor_uid", None)
        meta["anchor_line"] = lines.get(anchor) if anchor is not None else None
        entries.append({"line": lines.get(s.uid), **meta})
    entries.sort(key=lambda d: (d["line"] or 0))
    return text, entries


def sidecar_json(entries: list[dict], property_name: str, source: str) -> str:
    return json.dumps({"source": source, "property": property_name, "inserted": entries},
                      indent=2, sort_keys=True) + "\n"
