"""End-to-end transformation: parse, build the CFA, sequentialize with the
property automata and map the result back to C."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .automata import InstrumentationAutomaton
from .cfa import Cfa, LocationFacts, analyze, build_cfa, lower_expressions
from .frontend import SourceProgram, emit, parse
from .frontend.nodes import Program
from .instrument import EditPlan, apply_edits, plan_edits, sidecar_json, source_map
from .properties import PropertyKind
from .sequentialize import InstrumentedCfa, initialize_automata, sequentialize


@dataclass
class TransformTask:
    """One input file, one property, and where the results go."""

    input: Path
    prop: PropertyKind
    out_dir: Path = Path("out")
    dump_cfa: bool = False
    dump_product: bool = False

    @property
    def stem(self) -> str:
        return Path(self.input).stem

    def output_path(self) -> Path:
        return Path(self.out_dir) / f"{self.stem}.{self.prop.value}.c"

    def sidecar_path(self) -> Path:
        return Path(self.out_dir) / f"{self.stem}.{self.prop.value}.map.json"


@dataclass
class TransformResult:
    prop: PropertyKind
    original: Program
    base: Program  # the AST that was instrumented (decomposed for no-overflow)
    cfa: Cfa
    facts: LocationFacts
    automata: list[InstrumentationAutomaton]
    icfa: InstrumentedCfa
    plan: EditPlan
    program: Program
    text: str
    source_map: list[dict] = field(default_factory=list)


def transform(program: Program, prop: PropertyKind | str,
              automata: Optional[Sequence[InstrumentationAutomaton]] = None) -> TransformResult:
    """Rewrite ``program`` so that ``prop`` becomes reachability of reach_error().

    With ``automata`` given, those are used instead of the property's own.
    """
    prop = PropertyKind.parse(prop) if isinstance(prop, str) else prop
    base = lower_expressions(program) if prop is PropertyKind.NO_OVERFLOW else program
    cfa = build_cfa(base)
    facts = analyze(cfa)
    ias = list(automata) if automata is not None else initialize_automata(cfa, prop, facts)
    icfa = sequentialize(cfa, ias, facts)
    plan = plan_edits(icfa, base)
    out = apply_edits(plan, base)
    text, smap = source_map(out, prelude=True)
    return TransformResult(prop, program, base, cfa, facts, ias, icfa, plan, out, text, smap)


def transform_text(text: str, prop: PropertyKind | str, path: str = "<input>") -> TransformResult:
    return transform(parse(text, path), prop)


def run_task(task: TransformTask) -> TransformResult:
    src = SourceProgram.load(task.input)
    result = transform(src.parse(), task.prop)
    out_dir = Path(task.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    task.output_path().write_text(result.text, encoding="utf-8")
    task.sidecar_path().write_text(
        sidecar_json(result.source_map, task.prop.value, str(task.input)), encoding="utf-8")
    if task.dump_cfa:
        (out_dir / f"{task.stem}.{task.prop.value}.cfa.dot").write_text(result.cfa.dump())
    if task.dump_product:
        (out_dir / f"{task.stem}.{task.prop.value}.product.dot").write_text(result.icfa.dump())
    return result


__all__ = ["TransformTask", "TransformResult", "transform", "transform_text", "run_task", "emit"]
