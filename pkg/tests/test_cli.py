import subprocess
import sys

import pytest

from gwitt.appendix import golden_lines
from gwitt.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_witt_appendix(capsys):
    code, out, _ = run(capsys, "witt", "--group", "d6", "--coeff", "Z/3")
    assert code == 0
    assert out.startswith("# gwitt witt v1\n")
    assert "  invariant_factors: [3, 3, 9]" in out
    assert "  order: 81" in out
    assert "group: Z/3 + Z/3 + Z/9" in out


def test_witt_small_cases(capsys):
    assert "group: Z/4" in run(capsys, "witt", "--group", "c2", "--coeff", "Z/2")[1]
    assert "group: 0" in run(capsys, "witt", "--group", "d6", "--trunc", "none")[1]
    out = run(capsys, "witt", "--group", "d6", "--coeff", "Z")[1]
    assert "  rank: 4" in out and "order: infinite" in out


def test_witt_relation_file(tmp_path, capsys):
    rel = tmp_path / "m.txt"
    rel.write_text("3 1\n0 -1\n")
    out = run(capsys, "witt", "--group", "d6", "--coeff", f"rank 2 rel {rel}")[1]
    assert "group: Z/3 + Z/3 + Z/9" in out


def test_truncation_list(capsys):
    code, out, _ = run(capsys, "witt", "--group", "c2", "--coeff", "Z/2", "--trunc", "all;{e}")
    assert code == 0 and "group: Z/4" in out


@pytest.mark.parametrize(
    "argv,code,kind",
    [
        (["witt", "--coeff", "Q"], 2, "parse"),
        (["witt", "--group", "nope"], 2, None),
        (["witt", "--group", "d6", "--trunc", "{e}"], 2, None),
        (["witt", "--group", "c60"], 4, None),
        (["op", "F", "--group", "d6", "--subgroup", "<s>", "--to", "<r>"], 2, None),
    ],
)
def test_error_lines(capsys, argv, code, kind):
    got, out, err = run(capsys, *argv)
    assert got == code
    assert out == ""
    line = err.strip().splitlines()[-1]
    assert line.startswith(f"error: code={code} kind=")
    assert " message=" in line
    if kind:
        assert f"kind={kind}" in line


def test_truncation_witness_is_reported(capsys):
    _, _, err = run(capsys, "witt", "--group", "d6", "--trunc", "{e}")
    assert "kind=truncation" in err


def test_output_is_deterministic(capsys):
    argv = ["op", "star", "--group", "s3", "--coeff", "Z^2", "--random", "--seed", "11", "--other-coeff", "Z/2"]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second
    assert first[0] == 0


def test_out_flag(tmp_path, capsys):
    path = tmp_path / "report.txt"
    code, out, _ = run(capsys, "witt", "--group", "c2", "--coeff", "Z/2", "--out", str(path))
    assert code == 0 and out == ""
    assert "group: Z/4" in path.read_text()


def test_ghost_and_dwork_round_trip(tmp_path, capsys):
    code, out, _ = run(capsys, "ghost", "--group", "c2", "--coeff", "Z^2", "--element", "1 0 2 0 1")
    assert code == 0
    blocks = [ln for ln in out.splitlines() if ln.startswith("{")]
    assert blocks == ["{e,g}: (y0)", "{e}: 5*(y0,y0) + 2*(y1,y1)"]
    f = tmp_path / "ghost.txt"
    f.write_text("\n".join(blocks) + "\n")
    code, out, _ = run(capsys, "dwork", "--group", "c2", "--coeff", "Z^2", "--ghost-file", str(f))
    assert code == 0
    assert "preimage: 1 0 2 0 1" in out


def test_dwork_failure(tmp_path, capsys):
    f = tmp_path / "ghost.txt"
    f.write_text("{e,g}: 1\n{e}: 0\n")
    code, out, err = run(capsys, "dwork", "--group", "c2", "--ghost-file", str(f))
    assert code == 3
    assert "fail" in out and "{e}" in out
    assert "error: code=3 kind=dwork" in err


def test_dwork_random_passes(capsys):
    code, out, _ = run(capsys, "dwork", "--group", "d6", "--coeff", "Z^2", "--random", "--seed", "4")
    assert code == 0 and "dwork: pass" in out


def test_ghost_file_must_be_fixed(tmp_path, capsys):
    f = tmp_path / "ghost.txt"
    f.write_text("{e,s,sr2,r,r2,sr}: 0\n{e,r,r2}: (y0,y1)\n")
    code, _, err = run(capsys, "dwork", "--group", "d6", "--coeff", "Z^2", "--ghost-file", str(f))
    assert code == 2 and err.startswith("error: code=2")


@pytest.mark.parametrize(
    "argv",
    [
        ["op", "F", "--subgroup", "all", "--to", "<s>", "--random"],
        ["op", "V", "--subgroup", "<s>", "--to", "all", "--random"],
        ["op", "c", "--subgroup", "<s>", "--by", "r", "--random"],
        ["op", "R", "--to-trunc", "top", "--random"],
        ["op", "tau", "--subgroup", "<r>", "--coeff", "Z^2", "--tensor", "2*(y0,y1) - (y1,y1)"],
        ["op", "star", "--coeff", "Z^2", "--random", "--other-coeff", "Z"],
    ],
)
def test_operators_verify(capsys, argv):
    code, out, _ = run(capsys, *argv, "--seed", "3")
    assert code == 0
    assert "ghost check: pass" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["op", "F", "--coeff", "Z/3", "--to", "<r>", "--random"],
        ["op", "V", "--subgroup", "<s>", "--coeff", "Z/3", "--random"],
        ["op", "tau", "--coeff", "Z/3", "--tensor", "2"],
        ["op", "star", "--coeff", "Z/3", "--random", "--other-coeff", "Z/2"],
    ],
)
def test_operators_lift_independence(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert "lift independence check: pass" in out


def test_mackey_report(capsys):
    code, out, _ = run(capsys, "mackey", "--group", "c2", "--coeff", "Z/2")
    assert code == 0
    assert "  {e,g}: Z/4" in out and "  {e}: Z/2" in out
    assert "axioms: pass" in out


def test_mackey_corrupt(capsys):
    code, out, err = run(capsys, "mackey", "--group", "c2", "--coeff", "Z/2", "--corrupt")
    assert code == 3
    assert "axioms: fail" in out and "witness" in out
    assert "error: code=3 kind=verification" in err


def test_reproduce_matches_golden(capsys):
    code, out, _ = run(capsys, "reproduce", "d6-appendix")
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == "golden: match"
    assert lines[:-1] == golden_lines()
    assert "basis (1, 1, 1, 1)" in lines and "basis (0, 0, 0, 6)" in lines
    assert sum(ln.startswith("row ") for ln in lines) == 16
    assert "invariant_factors 3 3 9" in lines


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_reproduce_under_permuted_elements(capsys, seed):
    code, out, _ = run(capsys, "reproduce", "d6-appendix", "--permute", str(seed))
    assert code == 0 and out.splitlines()[-1] == "golden: match"


def test_reproduce_detects_tampering(tmp_path, capsys):
    lines = golden_lines()
    i = next(k for k, ln in enumerate(lines) if ln.startswith("row "))
    tampered = lines[:]
    tampered[i] = tampered[i][:-1] + ("0" if tampered[i][-1] != "0" else "1")
    f = tmp_path / "golden.txt"
    f.write_text("\n".join(tampered) + "\n")
    code, out, err = run(capsys, "reproduce", "d6-appendix", "--golden", str(f))
    assert code == 3
    assert f"golden: mismatch at line {i + 1}" in out
    assert f"  got:      {lines[i]}" in out
    assert "error: code=3" in err


def test_reps_file_pins_representatives(tmp_path, capsys):
    f = tmp_path / "reps.txt"
    f.write_text("canonical {e,sr}\nname {e,sr} = <sr>\nreps {e,sr} : e r r2\n")
    code, out, _ = run(capsys, "witt", "--group", "d6", "--coeff", "Z/3", "--reps", str(f))
    assert code == 0
    basis = out.split("free_basis")[1]
    assert "<sr>:" in basis and "{e,s}:" not in basis
    assert "group: Z/3 + Z/3 + Z/9" in out


def test_reps_file_rejects_bad_reps(tmp_path, capsys):
    f = tmp_path / "reps.txt"
    f.write_text("reps {e,s} : e s r\n")
    code, _, err = run(capsys, "witt", "--group", "d6", "--reps", str(f))
    assert code == 2 and err.startswith("error: code=2")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "gwitt", "witt", "--group", "c2", "--coeff", "Z/2"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and "group: Z/4" in res.stdout
