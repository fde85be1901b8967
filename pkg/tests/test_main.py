import json
import os
import shutil

import pytest

from src import config
from src.main import main

SEC3 = os.path.join(config.CORPUS_DIR, "sec3.shy")
REC_ALLOC = os.path.join(config.CORPUS_DIR, "rec_alloc.shy")


@pytest.fixture
def write_program(tmp_path):
    def write(text: str, name: str = "program.shy") -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return write


def test_parse_prints_declarations_and_procedures(capsys, golden):
    assert main(["parse", SEC3]) == 0
    assert capsys.readouterr().out == golden("sec3_parse.txt")


def test_parse_json(capsys):
    assert main(["parse", SEC3, "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)

    assert payload["globals"] == ["g", "nil"]
    assert [p["name"] for p in payload["procedures"]] == ["main", "p"]
    assert payload["procedures"][1]["text"] == "g := new"


def test_abstract_run_with_trace(capsys, golden):
    assert main(["run", SEC3, "--semantics", "abstract", "--trace"]) == 0
    assert capsys.readouterr().out == golden("sec3_abstract_trace.txt")


def test_concrete_run_ends_in_the_same_heap(capsys, golden):
    assert main(["run", SEC3]) == 0
    expected = golden("sec3_abstract_trace.txt").splitlines()[9:]
    assert capsys.readouterr().out.splitlines() == expected


def test_stuck_run_names_the_statement(capsys, write_program):
    path = write_program("globals g; locals ; fields f; proc main { g.f := nil }")
    assert main(["run", path]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "STUCK at g.f := nil"


def test_check_holds(capsys):
    assert main(["check", REC_ALLOC, "--formula", "G {eps}", "--bound", "1"]) == 0
    assert capsys.readouterr().out == "HOLDS\n"


def test_check_violated(capsys):
    assert main(["check", REC_ALLOC, "--formula", "F !{eps}", "--bound", "1"]) == 1
    out = capsys.readouterr().out.splitlines()
    assert out[:2] == ["VIOLATED", "witness:"]


def test_check_key_value_output(capsys):
    assert main(["check", REC_ALLOC, "--formula", "F !{eps}", "--bound", "1", "--format", "kv"]) == 1
    lines = capsys.readouterr().out.splitlines()

    assert lines[:4] == ["verdict=VIOLATED", "exit_code=1", "bound=1", "formula=F !{eps}"]
    assert any(line.startswith("loop_head.control=") for line in lines)


def test_check_bound_exceeded(capsys):
    assert main(["check", SEC3, "--formula", "true", "--bound", "1"]) == 2
    assert capsys.readouterr().out.startswith("BOUND-EXCEEDED\nhead: ")


def test_check_formula_file(capsys, tmp_path):
    formula = tmp_path / "always.ltl"
    formula.write_text("G {eps}\n", encoding="utf-8")
    assert main(["check", REC_ALLOC, "--formula-file", str(formula), "--bound", "1", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["verdict"] == "HOLDS"


def test_bisim(capsys):
    assert main(["bisim", REC_ALLOC, "--steps", "30", "--trials", "5"]) == 0
    assert capsys.readouterr().out == "PASS 5/5\n"


def test_corpus_directory(capsys, tmp_path):
    shutil.copy(SEC3, tmp_path)
    shutil.copy(REC_ALLOC, tmp_path)
    assert main(["corpus", "--dir", str(tmp_path), "--steps", "20", "--trials", "2"]) == 0
    assert capsys.readouterr().out.splitlines() == ["rec_alloc.shy: PASS 2/2", "sec3.shy: PASS 2/2"]


def test_empty_corpus_directory(tmp_path):
    assert main(["corpus", "--dir", str(tmp_path)]) == 64


def test_pds_dump(capsys):
    assert main(["pds-dump", REC_ALLOC, "--bound", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    legend = [line for line in lines if line.startswith("legend ")]

    assert len(legend) == 2
    assert lines[-2:] == legend
    assert all(" -> " in line for line in lines[:-2])


@pytest.mark.parametrize("argv", [
    [],
    ["check", SEC3],
    ["check", SEC3, "--formula", "true", "--bound", "-1"],
    ["run", SEC3, "--steps", "0"],
    ["run", SEC3, "--semantics", "symbolic"],
])
def test_usage_errors(argv, capsys):
    assert main(argv) == 64
    assert "usage error" in capsys.readouterr().err


def test_missing_program_file(tmp_path):
    assert main(["parse", str(tmp_path / "absent.shy")]) == 64


def test_malformed_program(write_program, capsys):
    path = write_program("globals g; locals ; fields ;\nproc main { g := := }")
    assert main(["parse", path]) == 65
    assert "line 2" in capsys.readouterr().err


def test_unknown_name_in_formula(capsys):
    assert main(["check", SEC3, "--formula", "G {zz}"]) == 65
    assert "zz" in capsys.readouterr().err
