"""Run a reachability verifier on a transformed program and translate its
answer back to the original property.

Profiles come from a TOML file::

    [profiles.cbmc]
    executable = "cbmc"
    args = ["--unwind", "20", "{file}"]
    timeout = 60
    rules = [
      { pattern = "VERIFICATION SUCCESSFUL", verdict = "TRUE" },
      { pattern = "VERIFICATION FAILED", verdict = "FALSE" },
    ]

The profile ``builtin-oracle`` is always available and runs the bounded
executor in-process. ``SPEC2REACH_VERIFIERS`` overrides the config path.
"""

from __future__ import annotations

import os
import re
import signal
import subprocess
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .frontend import parse
from .frontend.errors import FrontendError
from .oracle import ExecConfig, VerdictKind, check_reachability
from .properties import PropertyKind

BUILTIN = "builtin-oracle"
ENV_VAR = "SPEC2REACH_VERIFIERS"
DEFAULT_CONFIG = Path("verifiers.toml")
DEFAULT_LOG_DIR = Path("out/logs")


class VerifierConfigError(ValueError):
    """Unknown profile, malformed config, or a verifier that cannot start."""


@dataclass(frozen=True)
class Rule:
    pattern: str
    verdict: VerdictKind

    def matches(self, line: str) -> bool:
        return re.search(self.pattern, line) is not None


@dataclass
class VerifierConfig:
    name: str
    executable: str = ""
    args: list[str] = field(default_factory=lambda: ["{file}"])
    timeout: float = 60.0
    rules: list[Rule] = field(default_factory=list)
    builtin: bool = False
    exec_config: ExecConfig = field(default_factory=ExecConfig)
    strict_termination: bool = False

    def __post_init__(self):
        if self.timeout <= 0:
            raise VerifierConfigError(f"profile {self.name}: timeout must be positive")
        if not self.builtin and not self.executable:
            raise VerifierConfigError(f"profile {self.name}: no executable")
        for r in self.rules:
            try:
                re.compile(r.pattern)
            except re.error as exc:
                raise VerifierConfigError(f"profile {self.name}: bad pattern {r.pattern!r}: {exc}")

    def command(self, file: Path) -> list[str]:
        return [self.executable, *(a.replace("{file}", str(file)) for a in self.args)]

    def extract(self, output: str) -> tuple[VerdictKind, str]:
        """First rule matching any output line decides; otherwise UNKNOWN."""
        lines = output.splitlines()
        for rule in self.rules:
            for line in lines:
                if rule.matches(line):
                    return rule.verdict, line.strip()
        return VerdictKind.UNKNOWN, "no extraction rule matched"


def builtin_profile() -> VerifierConfig:
    return VerifierConfig(BUILTIN, builtin=True, timeout=600.0)


def config_path(path: Optional[Path] = None) -> Path:
    if path is not None:
        return Path(path)
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else DEFAULT_CONFIG


def load_profiles(path: Optional[Path] = None) -> dict[str, VerifierConfig]:
    """Profiles from the config file; a missing default file yields only the builtin."""
    profiles = {BUILTIN: builtin_profile()}
    p = config_path(path)
    if not p.exists():
        if path is not None or os.environ.get(ENV_VAR):
            raise VerifierConfigError(f"verifier config {p} not found")
        return profiles
    try:
        data = tomllib.loads(p.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise VerifierConfigError(f"{p}: {exc}") from exc
    for name, body in data.get("profiles", {}).items():
        profiles[name] = _profile(name, body)
    return profiles


def _profile(name: str, body: dict) -> VerifierConfig:
    try:
        rules = [Rule(r["pattern"], VerdictKind(r["verdict"].upper())) for r in body.get("rules", [])]
    except (KeyError, ValueError, AttributeError) as exc:
        raise VerifierConfigError(f"profile {name}: bad rule ({exc})") from exc
    if body.get("builtin", False):
        cfg = ExecConfig(
            domain=tuple(body.get("domain", ExecConfig().domain)),
            max_steps=int(body.get("max_steps", ExecConfig().max_steps)),
            max_states=int(body.get("max_states", ExecConfig().max_states)))
        return VerifierConfig(name, builtin=True, timeout=float(body.get("timeout", 600)),
                              exec_config=cfg,
                              strict_termination=bool(body.get("strict_termination", False)))
    args = body.get("args", ["{file}"])
    if not isinstance(args, list) or not all(isinstance(a, str) for a in args):
        raise VerifierConfigError(f"profile {name}: args must be a list of strings")
    return VerifierConfig(name, str(body.get("executable", "")), list(args),
                          float(body.get("timeout", 60)), rules)


def resolve(name: str, path: Optional[Path] = None) -> VerifierConfig:
    profiles = load_profiles(path)
    if name not in profiles:
        raise VerifierConfigError(f"unknown verifier profile '{name}' "
                                  f"(known: {', '.join(sorted(profiles))})")
    return profiles[name]


@dataclass
class VerifierVerdict:
    kind: VerdictKind
    reason: str = ""
    log: Optional[Path] = None
    witness: Optional[str] = None
    seconds: float = 0.0


def _log_path(log_dir: Path, cfg: VerifierConfig, file: Path) -> Path:
    log_dir.mkdir(parents=True, exist_ok=True)
    return log_dir / f"{Path(file).name}.{cfg.name}.log"


def run_verifier(cfg: VerifierConfig, file: Path, log_dir: Path = DEFAULT_LOG_DIR) -> VerifierVerdict:
    """Check reachability of reach_error() in ``file`` with the given profile."""
    file = Path(file)
    log = _log_path(Path(log_dir), cfg, file)
    start = time.monotonic()
    if cfg.builtin:
        return _run_builtin(cfg, file, log, start)
    try:
        proc = subprocess.Popen(cfg.command(file), stdout=subprocess.PIPE, stderr=subprocess.STDOUT,
                                text=True, start_new_session=True)
    except OSError as exc:
        raise VerifierConfigError(f"cannot start {cfg.executable}: {exc}") from exc
    try:
        out, _ = proc.communicate(timeout=cfg.timeout)
    except subprocess.TimeoutExpired:
        _kill_group(proc)
        out, _ = proc.communicate()
        log.write_text((out or "") + f"\n[timeout after {cfg.timeout}s]\n", encoding="utf-8")
        return VerifierVerdict(VerdictKind.UNKNOWN, "timeout", log, seconds=time.monotonic() - start)
    log.write_text(out or "", encoding="utf-8")
    kind, reason = cfg.extract(out or "")
    return VerifierVerdict(kind, reason, log, seconds=time.monotonic() - start)


def _kill_group(proc: subprocess.Popen) -> None:
    try:
        os.killpg(proc.pid, signal.SIGKILL)
    except ProcessLookupError:
        pass


def _run_builtin(cfg: VerifierConfig, file: Path, log: Path, start: float) -> VerifierVerdict:
    try:
        program = parse(file.read_text(encoding="utf-8"), str(file), allow_reserved=True)
    except FrontendError as exc:
        log.write_text(f"{exc}\n", encoding="utf-8")
        return VerifierVerdict(VerdictKind.UNKNOWN, f"parse error: {exc}", log)
    v = check_reachability(program, cfg.exec_config, strict_termination=cfg.strict_termination)
    witness = v.witness.render() if v.witness else None
    text = f"VERDICT: {v.kind.value}\nreason: {v.reason}\nstates: {v.states}\n"
    if witness:
        text += witness + "\n"
    log.write_text(text, encoding="utf-8")
    return VerifierVerdict(v.kind, v.reason, log, witness, time.monotonic() - start)


_FALSE_REASONS = {
    PropertyKind.NO_OVERFLOW: "signed integer overflow",
    PropertyKind.TERMINATION: "non-terminating execution (state revisited)",
    PropertyKind.MEMORY_CLEANUP: "allocation never freed or double free",
    PropertyKind.EXPLICIT_LIVENESS: "infinite execution that stops satisfying an assert_live condition",
}
_TRUE_REASONS = {
    PropertyKind.NO_OVERFLOW: "no signed integer overflow",
    PropertyKind.TERMINATION: "every execution terminates",
    PropertyKind.MEMORY_CLEANUP: "every allocation is freed exactly once",
    PropertyKind.EXPLICIT_LIVENESS: "every assert_live condition holds infinitely often",
}
FINITE_STATE_CAVEAT = "(sound only for finite-state programs)"


def map_back(reach: VerifierVerdict, prop: PropertyKind) -> VerifierVerdict:
    """Restate a reachability answer in the vocabulary of ``prop``; the kind never changes."""
    prop = PropertyKind(prop)
    if reach.kind is VerdictKind.FALSE:
        reason = _FALSE_REASONS[prop]
    elif reach.kind is VerdictKind.TRUE:
        reason = _TRUE_REASONS[prop]
        if prop in (PropertyKind.TERMINATION, PropertyKind.EXPLICIT_LIVENESS):
            reason += f" {FINITE_STATE_CAVEAT}"
    else:
        reason = reach.reason or "unknown"
    return VerifierVerdict(reach.kind, reason, reach.log, reach.witness, reach.seconds)
