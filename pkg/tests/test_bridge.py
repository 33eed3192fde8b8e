from __future__ import annotations

import sys
import time
from pathlib import Path

import psutil
import pytest

from helpers import CORPUS
from spec2reach.bridge import (
    BUILTIN, ENV_VAR, FINITE_STATE_CAVEAT, Rule, VerifierConfig, VerifierConfigError,
    VerifierVerdict, load_profiles, map_back, resolve, run_verifier,
)
from spec2reach.oracle import ExecConfig, VerdictKind
from spec2reach.pipeline import TransformTask, run_task
from spec2reach.properties import PropertyKind

STUBS = Path(__file__).resolve().parent / "stubs"
T, F, U = VerdictKind.TRUE, VerdictKind.FALSE, VerdictKind.UNKNOWN

STUB_RULES = [Rule("VERIFICATION SUCCESSFUL", T), Rule("VERIFICATION FAILED", F)]


def stub(name: str, **kw) -> VerifierConfig:
    return VerifierConfig(name, sys.executable, [str(STUBS / f"{name}.py"), "{file}"],
                          rules=STUB_RULES, **kw)


@pytest.fixture
def program(tmp_path):
    f = tmp_path / "p.c"
    f.write_text("int main() { return 0; }\n")
    return f


def test_false_stub(program, tmp_path):
    v = run_verifier(stub("say_false"), program, tmp_path / "logs")
    assert v.kind is F and v.reason == "VERIFICATION FAILED"
    assert v.log == tmp_path / "logs" / "p.c.say_false.log"
    assert str(program) in v.log.read_text()


def test_true_stub(program, tmp_path):
    assert run_verifier(stub("say_true"), program, tmp_path).kind is T


def test_unrecognized_output_is_unknown(program, tmp_path):
    v = run_verifier(stub("mumble"), program, tmp_path)
    assert v.kind is U and v.reason == "no extraction rule matched"


def test_rules_are_tried_in_order():
    cfg = VerifierConfig("x", "true", rules=[Rule("FAILED", F), Rule("SUCC", T)])
    assert cfg.extract("VERIFICATION SUCCESSFUL\nVERIFICATION FAILED\n")[0] is F


def test_timeout_kills_the_whole_process_group(tmp_path):
    pidfile = tmp_path / "grandchild.pid"
    cfg = VerifierConfig("sleeper", sys.executable, [str(STUBS / "sleeper.py"), str(pidfile)],
                         timeout=1.5, rules=STUB_RULES)
    start = time.monotonic()
    v = run_verifier(cfg, tmp_path / "p.c", tmp_path)
    assert v.kind is U and v.reason == "timeout"
    assert time.monotonic() - start < 10
    assert _gone(int(pidfile.read_text()))


def _gone(pid: int, wait: float = 5.0) -> bool:
    deadline = time.monotonic() + wait
    while time.monotonic() < deadline:
        try:
            if psutil.Process(pid).status() == psutil.STATUS_ZOMBIE:
                return True
        except psutil.NoSuchProcess:
            return True
        time.sleep(0.05)
    return False


def test_missing_executable_is_config_error(program, tmp_path):
    cfg = VerifierConfig("ghost", "/nonexistent/verifier")
    with pytest.raises(VerifierConfigError):
        run_verifier(cfg, program, tmp_path)


def test_profile_validation():
    with pytest.raises(VerifierConfigError):
        VerifierConfig("x", "")
    with pytest.raises(VerifierConfigError):
        VerifierConfig("x", "cbmc", timeout=0)
    with pytest.raises(VerifierConfigError):
        VerifierConfig("x", "cbmc", rules=[Rule("(", T)])


TOML = """
[profiles.stub]
executable = "{exe}"
args = ["{script}", "{{file}}"]
timeout = 5
rules = [
  {{ pattern = "VERIFICATION SUCCESSFUL", verdict = "TRUE" }},
  {{ pattern = "VERIFICATION FAILED", verdict = "false" }},
]

[profiles.small]
builtin = true
domain = [0, 1, 2]
max_steps = 500
"""


@pytest.fixture
def config(tmp_path):
    p = tmp_path / "verifiers.toml"
    p.write_text(TOML.format(exe=sys.executable, script=STUBS / "say_false.py"))
    return p


def test_load_profiles(config):
    profiles = load_profiles(config)
    assert set(profiles) == {BUILTIN, "stub", "small"}
    s = profiles["stub"]
    assert s.timeout == 5 and [r.verdict for r in s.rules] == [T, F]
    assert s.command(Path("a.c")) == [sys.executable, str(STUBS / "say_false.py"), "a.c"]
    small = profiles["small"]
    assert small.builtin and small.exec_config == ExecConfig(domain=(0, 1, 2), max_steps=500)


def test_env_var_overrides_default(config, monkeypatch):
    monkeypatch.setenv(ENV_VAR, str(config))
    assert "stub" in load_profiles()


def test_missing_default_file_gives_builtin_only(tmp_path, monkeypatch):
    monkeypatch.delenv(ENV_VAR, raising=False)
    monkeypatch.chdir(tmp_path)
    assert set(load_profiles()) == {BUILTIN}


def test_missing_explicit_file_raises(tmp_path):
    with pytest.raises(VerifierConfigError):
        load_profiles(tmp_path / "nope.toml")


def test_unknown_profile_raises(config):
    with pytest.raises(VerifierConfigError, match="unknown verifier profile"):
        resolve("cpachecker", config)


def test_bad_rule_raises(tmp_path):
    p = tmp_path / "v.toml"
    p.write_text('[profiles.x]\nexecutable = "x"\nrules = [{ pattern = "a", verdict = "MAYBE" }]\n')
    with pytest.raises(VerifierConfigError):
        load_profiles(p)


def test_malformed_toml_raises(tmp_path):
    p = tmp_path / "v.toml"
    p.write_text("[profiles.x\n")
    with pytest.raises(VerifierConfigError):
        load_profiles(p)


def test_builtin_runs_on_transformed_file(tmp_path):
    task = TransformTask(CORPUS / "termination" / "oscillator.c", PropertyKind.TERMINATION, tmp_path)
    run_task(task)
    v = run_verifier(resolve(BUILTIN), task.output_path(), tmp_path / "logs")
    assert v.kind is F and v.witness
    assert v.log.read_text().startswith("VERDICT: FALSE")


def test_builtin_parse_error_is_unknown(tmp_path):
    f = tmp_path / "bad.c"
    f.write_text("int main() { return 0 }")
    v = run_verifier(resolve(BUILTIN), f, tmp_path)
    assert v.kind is U and v.reason.startswith("parse error")


@pytest.mark.parametrize("prop", list(PropertyKind))
def test_map_back_keeps_kind(prop):
    for kind in VerdictKind:
        assert map_back(VerifierVerdict(kind, "timeout"), prop).kind is kind


def test_map_back_reasons():
    false = map_back(VerifierVerdict(F), PropertyKind.NO_OVERFLOW)
    assert false.reason == "signed integer overflow"
    true = map_back(VerifierVerdict(T), PropertyKind.TERMINATION)
    assert true.reason.endswith(FINITE_STATE_CAVEAT)
    assert FINITE_STATE_CAVEAT not in map_back(VerifierVerdict(T), PropertyKind.MEMORY_CLEANUP).reason
    assert map_back(VerifierVerdict(U, "timeout"), PropertyKind.TERMINATION).reason == "timeout"
