from __future__ import annotations

import subprocess
import sys

import pytest

from bibnet.cli import main

from conftest import DATA, GOLDEN

TABLE1_CSV = str(DATA / "table1.csv")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "counting, golden, code",
    [("fractional", "audit_table1_fractional.txt", 0), ("full", "audit_table1_full.txt", 2)],
)
def test_audit_golden(capsys, counting, golden, code):
    got = run(capsys, "audit", "--input", TABLE1_CSV, "--counting", counting, "--strict")
    assert got[0] == code
    assert got[1] == (GOLDEN / golden).read_text()


def test_audit_without_strict_exits_zero(capsys):
    code, out, _ = run(capsys, "audit", "--input", TABLE1_CSV, "--counting", "full")
    assert code == 0
    assert "network_mass=17.000000000" in out and "conserved=false" in out


def test_single_author_full_is_conserved(capsys):
    code, out, _ = run(capsys, "audit", "--input", str(DATA / "single_authors.csv"), "--counting", "full", "--strict")
    assert code == 0 and "conserved=true" in out


def test_jsonl_input_gives_same_report(capsys):
    _, from_csv, _ = run(capsys, "audit", "--input", TABLE1_CSV, "--counting", "fractional")
    _, from_jsonl, _ = run(capsys, "audit", "--input", str(DATA / "table1.jsonl"), "--counting", "fractional")
    assert from_csv == from_jsonl


@pytest.mark.parametrize(
    "fmt, counting, golden",
    [
        ("edgelist", "fractional", "table1_fractional.csv"),
        ("pajek", "full", "table1_full.net"),
        ("graphml", "fractional", "table1_fractional.graphml"),
    ],
)
def test_build_golden(tmp_path, capsys, fmt, counting, golden):
    out = tmp_path / "net"
    code, stdout, _ = run(
        capsys, "build", "--input", TABLE1_CSV, "--counting", counting, "--format", fmt, "--output", str(out)
    )
    assert code == 0 and stdout == ""
    assert out.read_bytes() == (GOLDEN / golden).read_bytes()


def test_build_with_audit(tmp_path, capsys):
    out = tmp_path / "net.csv"
    code, stdout, _ = run(
        capsys, "build", "--input", TABLE1_CSV, "--counting", "fractional", "--output", str(out), "--audit"
    )
    assert code == 0
    assert stdout == (GOLDEN / "audit_table1_fractional.txt").read_text()

    code, stdout, _ = run(
        capsys, "build", "--input", TABLE1_CSV, "--counting", "full", "--output", str(out), "--audit", "--strict"
    )
    assert code == 2
    assert "network_mass=17.000000000" in stdout and "column_violations=3" in stdout


def test_build_self_loops_off_warns(tmp_path, capsys):
    out = tmp_path / "net.csv"
    code, _, err = run(
        capsys, "build", "--input", TABLE1_CSV, "--counting", "fractional", "--output", str(out), "--self-loops", "off"
    )
    assert code == 0
    assert "discarded diagonal mass 1.33333333" in err
    assert "a1,a1" not in out.read_text()


def test_aggregation_chain(tmp_path, capsys):
    to_country = tmp_path / "countries.csv"
    to_country.write_text("entity_id,group_id\ng1,X\ng2,Y\n")
    out = tmp_path / "net.csv"
    code, stdout, _ = run(
        capsys,
        "build", "--input", TABLE1_CSV, "--counting", "fractional", "--output", str(out), "--audit",
        "--aggregate", str(DATA / "groups.csv"), "--from", "author", "--to", "institute",
        "--aggregate", str(to_country), "--from", "institute", "--to", "country",
    )  # fmt: skip
    assert code == 0
    assert "conserved=true" in stdout
    assert out.read_text() == "source,target,weight\nX,X,1.44444444\nX,Y,0.222222222\nY,Y,1.11111111\n"


@pytest.mark.parametrize(
    "argv, needle",
    [
        (["audit", "--input", "/no/such/file.csv", "--counting", "full"], "/no/such/file.csv"),
        (["audit", "--input", TABLE1_CSV, "--counting", "bogus"], "invalid choice"),
        (["audit", "--input", TABLE1_CSV, "--counting", "full", "--tolerance", "0"], "tolerance"),
        (["audit", "--input", TABLE1_CSV, "--counting", "fractional-custom"], "credit weights"),
        (["audit", "--input", TABLE1_CSV, "--counting", "full", "--aggregate", str(DATA / "groups.csv")], "--from"),
        (["audit"], "required"),
        ([], "required"),
    ],
)
def test_input_errors_exit_one(capsys, argv, needle):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert needle in err


def test_malformed_file_names_path_and_line(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("paper_id,entity_id\np1,a\np2,b\np1,c\n")
    code, _, err = run(capsys, "audit", "--input", str(bad), "--counting", "full")
    assert code == 1
    assert f"{bad}: line 4:" in err


def test_unmapped_entity_names_map_file(tmp_path, capsys):
    partial = tmp_path / "partial.csv"
    partial.write_text("entity_id,group_id\na1,g\n")
    code, _, err = run(
        capsys, "audit", "--input", TABLE1_CSV, "--counting", "fractional",
        "--aggregate", str(partial), "--from", "author", "--to", "institute",
    )  # fmt: skip
    assert code == 1 and str(partial) in err and "'a2'" in err


def test_module_entry_point_exit_codes():
    base = [sys.executable, "-m", "bibnet", "audit", "--input", TABLE1_CSV, "--strict", "--counting"]
    frac = subprocess.run(base + ["fractional"], capture_output=True)
    full = subprocess.run(base + ["full"], capture_output=True)
    assert frac.returncode == 0 and full.returncode == 2
    assert frac.stdout == (GOLDEN / "audit_table1_fractional.txt").read_bytes()
    assert full.stdout == (GOLDEN / "audit_table1_full.txt").read_bytes()
