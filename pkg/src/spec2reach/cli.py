"""Command-line entry point: ``spec2reach {transform,oracle,verify,corpus,dump-ia}``."""

from __future__ import annotations

import argparse
import csv
import io
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .automata import dump_ia
from .bridge import BUILTIN, VerifierConfigError, map_back, resolve, run_verifier
from .cfa import analyze, build_cfa, lower_expressions
from .frontend import SourceProgram, parse
from .frontend.errors import FrontendError
from .oracle import ExecConfig, VerdictKind, check_original, check_reachability
from .pipeline import TransformTask, run_task
from .properties import PropertyKind, build_automata

EXIT_CODES = {VerdictKind.TRUE: 0, VerdictKind.FALSE: 10, VerdictKind.UNKNOWN: 20}
EXIT_DIAGNOSTIC, EXIT_INTERNAL = 1, 2

_VERDICT_HEADER = re.compile(r"//\s*VERDICT:\s*(TRUE|FALSE|UNKNOWN)")


def parse_domain(text: str) -> tuple[int, ...]:
    """Comma-separated integers and inclusive ranges ``a..b``."""
    values: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        m = re.fullmatch(r"(-?\d+)\.\.(-?\d+)", part)
        if m:
            lo, hi = int(m.group(1)), int(m.group(2))
            if lo > hi:
                raise argparse.ArgumentTypeError(f"empty range {part}")
            values.extend(range(lo, hi + 1))
        else:
            try:
                values.append(int(part))
            except ValueError:
                raise argparse.ArgumentTypeError(f"bad domain value {part!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty domain")
    return tuple(dict.fromkeys(values))


def _property(text: str) -> PropertyKind:
    try:
        return PropertyKind.parse(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"unknown property {text!r} (choose from {', '.join(p.value for p in PropertyKind)})"
        ) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--property", "-p", type=_property, required=True,
                        help="no-overflow, termination, memory-cleanup or explicit-liveness")
    common.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    common.add_argument("--jobs", type=int, default=1, help="parallel workers for corpus runs")
    common.add_argument("--verifier", default=BUILTIN, help="verifier profile name")
    common.add_argument("--config", type=Path, default=None, help="verifier profile file")

    bounds = argparse.ArgumentParser(add_help=False)
    bounds.add_argument("--domain", type=parse_domain, default=None,
                        help="nondet values, e.g. '-2,0..130'")
    bounds.add_argument("--max-steps", type=int, default=None)
    bounds.add_argument("--max-states", type=int, default=None)

    ap = argparse.ArgumentParser(prog="spec2reach",
                                 description="Reduce C program properties to reachability.")
    sub = ap.add_subparsers(dest="command", required=True)

    t = sub.add_parser("transform", parents=[common], help="write the transformed program")
    t.add_argument("file", type=Path)
    t.add_argument("--dump-cfa", action="store_true")
    t.add_argument("--dump-product", action="store_true")

    o = sub.add_parser("oracle", parents=[common, bounds], help="bounded check of a program")
    o.add_argument("file", type=Path)
    o.add_argument("--reachability", action="store_true",
                   help="check reach_error() reachability instead of the property")

    v = sub.add_parser("verify", parents=[common], help="transform, verify and map back")
    v.add_argument("file", type=Path)

    c = sub.add_parser("corpus", parents=[common], help="verify every fixture in a directory")
    c.add_argument("dir", type=Path)
    c.add_argument("--csv", type=Path, default=None, help="report path (default <out>/report.csv)")

    d = sub.add_parser("dump-ia", parents=[common], help="print the property automata")
    d.add_argument("file", type=Path, nargs="?", default=None)
    return ap


def _exec_config(args) -> ExecConfig:
    base = ExecConfig()
    return ExecConfig(domain=args.domain or base.domain,
                      max_steps=args.max_steps or base.max_steps,
                      max_states=args.max_states or base.max_states)


def _diag(msg: str) -> None:
    print(f"spec2reach: {msg}", file=sys.stderr)


def cmd_transform(args) -> int:
    task = TransformTask(args.file, args.property, args.out, args.dump_cfa, args.dump_product)
    result = run_task(task)
    print(f"wrote {task.output_path()} ({len(result.source_map)} inserted statements)")
    return 0


def cmd_oracle(args) -> int:
    src = SourceProgram.load(args.file)
    cfg = _exec_config(args)
    if args.reachability:
        program = parse(src.text, str(args.file), allow_reserved=True)
        v = check_reachability(program, cfg)
    else:
        v = check_original(src.parse(), args.property, cfg)
    print(f"VERDICT: {v.kind.value}")
    if v.reason:
        print(f"reason: {v.reason}")
    if v.witness is not None:
        print(v.witness.render())
    return EXIT_CODES[v.kind]


def verify_file(path: Path, prop: PropertyKind, profile: str, out: Path,
                config: Optional[Path] = None):
    cfg = resolve(profile, config)
    task = TransformTask(path, prop, out)
    run_task(task)
    reach = run_verifier(cfg, task.output_path(), out / "logs")
    return map_back(reach, prop)


def cmd_verify(args) -> int:
    v = verify_file(args.file, args.property, args.verifier, args.out, args.config)
    print(f"PROPERTY {args.property.value}: {v.kind.value}")
    print(f"reason: {v.reason}")
    return EXIT_CODES[v.kind]


@dataclass
class CorpusRow:
    file: str
    expected: str
    got: str
    cpu_ms: int
    reason: str = ""

    @property
    def category(self) -> str:
        if self.got == VerdictKind.UNKNOWN.value or self.got == "ERROR":
            return "unknown"
        if self.expected not in ("TRUE", "FALSE"):
            return "unchecked"
        if self.got != self.expected:
            return "incorrect"
        return "correct proof" if self.got == "TRUE" else "correct alarm"


def expected_verdict(path: Path) -> str:
    for line in path.read_text(encoding="utf-8").splitlines()[:5]:
        m = _VERDICT_HEADER.search(line)
        if m:
            return m.group(1)
    return ""


def _corpus_one(job: tuple) -> CorpusRow:
    path, prop, profile, out, config = job
    expected = expected_verdict(path)
    t0 = time.process_time()
    try:
        v = verify_file(path, prop, profile, out, config)
        got, reason = v.kind.value, v.reason
    except (FrontendError, ValueError) as exc:
        got, reason = "ERROR", str(exc).splitlines()[0]
    ms = int((time.process_time() - t0) * 1000)
    return CorpusRow(path.name, expected, got, ms, reason)


def run_corpus(directory: Path, prop: PropertyKind, profile: str = BUILTIN, out: Path = Path("out"),
               jobs: int = 1, config: Optional[Path] = None) -> list[CorpusRow]:
    files = sorted(Path(directory).glob("*.c"))
    resolve(profile, config)  # fail fast on a bad profile
    jobs_list = [(f, prop, profile, Path(out), config) for f in files]
    if jobs > 1 and len(files) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_corpus_one, jobs_list))
    return [_corpus_one(j) for j in jobs_list]


SUMMARY_ORDER = ("correct proof", "correct alarm", "incorrect", "unknown")


def summarize(rows: Sequence[CorpusRow]) -> dict[str, int]:
    counts = {k: 0 for k in SUMMARY_ORDER}
    for r in rows:
        counts[r.category] = counts.get(r.category, 0) + 1
    return counts


def report_csv(rows: Sequence[CorpusRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["file", "expected", "got", "cpu_ms"])
    for r in rows:
        w.writerow([r.file, r.expected, r.got, r.cpu_ms])
    return buf.getvalue()


def cmd_corpus(args) -> int:
    rows = run_corpus(args.dir, args.property, args.verifier, args.out, max(1, args.jobs), args.config)
    for r in rows:
        print(f"{r.file}: expected {r.expected or '-'} got {r.got} [{r.category}]")
    counts = summarize(rows)
    print(f"{'category':<16}count")
    for k, n in counts.items():
        print(f"{k:<16}{n}")
    path = args.csv or (Path(args.out) / "report.csv")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(report_csv(rows), encoding="utf-8")
    print(f"report: {path}")
    return 0


def cmd_dump_ia(args) -> int:
    if args.file is None:
        if args.property in (PropertyKind.TERMINATION, PropertyKind.EXPLICIT_LIVENESS):
            _diag(f"{args.property.value} automata depend on the program's loops; pass a file")
            return EXIT_DIAGNOSTIC
        program = parse("int main() { __assert_live(1); return 0; }", allow_reserved=True)
    else:
        program = SourceProgram.load(args.file).parse()
    if args.property is PropertyKind.NO_OVERFLOW:
        program = lower_expressions(program)
    cfa = build_cfa(program)
    for ia in build_automata(cfa, args.property, analyze(cfa)):
        print(dump_ia(ia))
    return 0


COMMANDS = {"transform": cmd_transform, "oracle": cmd_oracle, "verify": cmd_verify,
            "corpus": cmd_corpus, "dump-ia": cmd_dump_ia}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except VerifierConfigError as exc:
        _diag(f"configuration error: {exc}")
        return EXIT_INTERNAL
    except FrontendError as exc:
        _diag(str(exc))
        return EXIT_DIAGNOSTIC
    except (ValueError, OSError) as exc:
        _diag(str(exc))
        return EXIT_DIAGNOSTIC
    except Exception as exc:  # noqa: BLE001 - last-resort internal error
        _diag(f"internal error: {type(exc).__name__}: {exc}")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
