from __future__ import annotations

import csv
import shutil
import sys

import pytest

from helpers import CORPUS, GOLDEN, RUNNING_EXAMPLE
from spec2reach.cli import CorpusRow, expected_verdict, main, parse_domain, report_csv, summarize


@pytest.fixture
def example(tmp_path):
    f = tmp_path / "running_example.c"
    f.write_text(RUNNING_EXAMPLE)
    return f


def test_transform_writes_golden_and_dumps(example, tmp_path, capsys):
    out = tmp_path / "out"
    rc = main(["transform", str(example), "-p", "termination", "--out", str(out),
               "--dump-cfa", "--dump-product"])
    assert rc == 0
    assert "wrote" in capsys.readouterr().out
    assert (out / "running_example.termination.c").read_text() == \
        (GOLDEN / "running_example.termination.c").read_text()
    assert (out / "running_example.termination.cfa.dot").read_text() == \
        (GOLDEN / "running_example.cfa.dot").read_text()
    assert (out / "running_example.termination.product.dot").exists()
    assert (out / "running_example.termination.map.json").exists()


def test_transform_unsupported_input_is_diagnostic(tmp_path, capsys):
    f = tmp_path / "bad.c"
    f.write_text("int main() { for (int i = 0; i < 3; i++) {} return 0; }\n")
    assert main(["transform", str(f), "-p", "no-overflow", "--out", str(tmp_path)]) == 1
    assert "spec2reach:" in capsys.readouterr().err


def test_missing_input_is_diagnostic(tmp_path):
    assert main(["transform", str(tmp_path / "nope.c"), "-p", "termination"]) == 1


def test_unknown_property_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["transform", "x.c", "-p", "safety"])
    assert exc.value.code == 2


def test_verify_exit_codes(tmp_path, capsys):
    rc = main(["verify", str(CORPUS / "termination" / "oscillator.c"), "-p", "termination",
               "--out", str(tmp_path)])
    assert rc == 10
    assert "PROPERTY termination: FALSE" in capsys.readouterr().out
    rc = main(["verify", str(CORPUS / "memory-cleanup" / "freed.c"), "-p", "memcleanup",
               "--out", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "logs" / "freed.memory-cleanup.c.builtin-oracle.log").exists()


def test_verify_unknown_profile_is_config_error(tmp_path):
    rc = main(["verify", str(CORPUS / "termination" / "oscillator.c"), "-p", "termination",
               "--out", str(tmp_path), "--verifier", "nope"])
    assert rc == 2


def test_oracle_prints_verdict(capsys):
    rc = main(["oracle", str(CORPUS / "no-overflow" / "add_max.c"), "-p", "no-overflow"])
    out = capsys.readouterr().out
    assert rc == 10 and out.startswith("VERDICT: FALSE\nreason: signed overflow")


def test_oracle_reachability_on_transformed(example, tmp_path, capsys):
    main(["transform", str(example), "-p", "termination", "--out", str(tmp_path)])
    capsys.readouterr()
    rc = main(["oracle", str(tmp_path / "running_example.termination.c"), "-p", "termination",
               "--reachability", "--domain", "0..130"])
    assert rc == 0 and capsys.readouterr().out.startswith("VERDICT: TRUE")


def test_parse_domain():
    assert parse_domain("-2,0..3, 7") == (-2, 0, 1, 2, 3, 7)
    with pytest.raises(Exception):
        parse_domain("3..1")


@pytest.mark.parametrize("jobs", ["1", "3"])
def test_corpus_termination_has_no_incorrect(tmp_path, capsys, jobs):
    report = tmp_path / "r.csv"
    rc = main(["corpus", str(CORPUS / "termination"), "-p", "termination", "--out", str(tmp_path),
               "--csv", str(report), "--jobs", jobs])
    assert rc == 0
    out = capsys.readouterr().out
    assert "incorrect       0" in out
    rows = list(csv.reader(report.read_text().splitlines()))
    assert rows[0] == ["file", "expected", "got", "cpu_ms"]
    assert len(rows) == 1 + len(list((CORPUS / "termination").glob("*.c")))


def test_corpus_empty_dir(tmp_path, capsys):
    empty = tmp_path / "empty"
    empty.mkdir()
    assert main(["corpus", str(empty), "-p", "termination", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "report.csv").read_text() == "file,expected,got,cpu_ms\n"


def test_corpus_counts_wrong_expectation_as_incorrect(tmp_path, capsys):
    d = tmp_path / "c"
    d.mkdir()
    text = (CORPUS / "termination" / "oscillator.c").read_text()
    (d / "liar.c").write_text(text.replace("VERDICT: FALSE", "VERDICT: TRUE"))
    assert expected_verdict(d / "liar.c") == "TRUE"
    main(["corpus", str(d), "-p", "termination", "--out", str(tmp_path)])
    assert "liar.c: expected TRUE got FALSE [incorrect]" in capsys.readouterr().out


def test_summary_categories():
    rows = [CorpusRow("a", "TRUE", "TRUE", 1), CorpusRow("b", "FALSE", "FALSE", 1),
            CorpusRow("c", "TRUE", "FALSE", 1), CorpusRow("d", "TRUE", "UNKNOWN", 1)]
    assert summarize(rows) == {"correct proof": 1, "correct alarm": 1, "incorrect": 1, "unknown": 1}
    assert report_csv(rows[:1]) == "file,expected,got,cpu_ms\na,TRUE,TRUE,1\n"


def test_dump_ia(capsys):
    assert main(["dump-ia", "-p", "memory-cleanup"]) == 0
    assert "automaton" in capsys.readouterr().out
    assert main(["dump-ia", "-p", "termination"]) == 1
    assert main(["dump-ia", str(CORPUS / "termination" / "oscillator.c"), "-p", "termination"]) == 0


@pytest.mark.skipif(shutil.which("spec2reach") is None, reason="console script not installed")
def test_console_script(tmp_path):
    import subprocess
    r = subprocess.run(["spec2reach", "verify", str(CORPUS / "termination" / "count_up.c"),
                        "-p", "termination", "--out", str(tmp_path)], capture_output=True, text=True)
    assert r.returncode == 0, r.stderr


def test_module_entry(tmp_path):
    import subprocess
    r = subprocess.run([sys.executable, "-m", "spec2reach", "oracle",
                        str(CORPUS / "memory-cleanup" / "leak.c"), "-p", "memory-cleanup"],
                       capture_output=True, text=True)
    assert r.returncode == 10 and "allocated memory not freed at exit" in r.stdout
