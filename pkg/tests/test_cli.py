import subprocess
import sys

import pytest

from jacobi_diagrams.cli import main

CHORD_FILE = """\
coeff: 2
support: I
colors: []
v0: U M 0 0
v1: U M 0 1
e: (v0.0, v1.0)
"""

TRIPOD_FILE = """\
support: S1
colors: []
v0: T
v1: U M 0 0
v2: U M 0 1
v3: U M 0 2
e: (v0.0, v1.0)
e: (v0.1, v2.0)
e: (v0.2, v3.0)
"""


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_dim_prints_header_and_value(capsys):
    code, out, _ = run(capsys, "dim", "S1", "2")
    header, value = out.splitlines()
    assert code == 0
    assert header.startswith("# jacobi-diagrams 0.1.0 seed=0")
    assert value == "2"


def test_structured_dim(capsys):
    code, out, _ = run(capsys, "dim", "S1", "4", "--format", "structured", "--method", "full")
    assert out.splitlines()[1] == "dim=6"


def test_bad_support_exits_two(capsys):
    code, out, err = run(capsys, "dim", "Q", "2")
    assert code == 2
    assert err.startswith("error:")


def test_reduce_and_chordify(tmp_path, capsys):
    f = tmp_path / "chord.txt"
    f.write_text(CHORD_FILE)
    code, out, _ = run(capsys, "reduce", str(f))
    assert code == 0 and "coeff: 2" in out
    code, out, _ = run(capsys, "chordify", str(f), "--format", "structured")
    assert code == 0 and "coeff=2" in out


def test_chordify_removes_trivalent_vertices(tmp_path, capsys):
    f = tmp_path / "tripod.txt"
    f.write_text(TRIPOD_FILE)
    code, out, _ = run(capsys, "chordify", str(f))
    assert code == 0
    assert ": T" not in out
    assert "coeff:" in out


def test_malformed_input_file(tmp_path, capsys):
    f = tmp_path / "bad.txt"
    f.write_text("support: I\nv0: U M 0 0\ne: (v0.0 v0.0)\n")
    code, _, err = run(capsys, "reduce", str(f))
    assert code == 2 and "line 3" in err
    code, _, err = run(capsys, "reduce", str(tmp_path / "missing.txt"))
    assert code == 2


def test_verify_bseries(capsys):
    code, out, _ = run(capsys, "verify", "bseries", "--N", "6", "--symbolic")
    assert code == 0
    assert "B_2=0, B_4=-A4, B_6=-A6" in out
    assert out.rstrip().endswith("result: pass")


def test_verify_is_deterministic(capsys):
    first = run(capsys, "verify", "slide", "--seed", "5", "--format", "structured")
    second = run(capsys, "verify", "slide", "--seed", "5", "--format", "structured")
    assert first == second and first[0] == 0


def test_unknown_suite_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as err:
        main(["verify", "nothing"])
    assert err.value.code == 2


def test_denom_bound(capsys):
    code, out, _ = run(capsys, "denom", "bound", "d", "3")
    assert code == 0
    assert "d(3) = 3840" in out and "2^8 * 3 * 5" in out
    code, _, err = run(capsys, "denom", "bound", "D2", "3")
    assert code == 2 and "n >= 5" in err


def test_denom_check(capsys):
    code, out, _ = run(capsys, "denom", "check", "Dmult", "--max", "50")
    assert code == 0 and "result: pass" in out
    code, out, _ = run(capsys, "denom", "check", "D-odd", "--mutate")
    assert code == 1
    assert "witness: k=4" in out and "prime: 3" in out


def test_anomaly_invert(capsys):
    code, out, _ = run(capsys, "anomaly", "invert", "--symbolic", "6", "--vanish", "2")
    lines = out.splitlines()
    assert code == 0
    assert "B_2: 0" in lines and "B_4: -A4" in lines and "B_6: -A6" in lines


def test_cache_commands(tmp_path, capsys):
    code, _, _ = run(capsys, "dim", "I", "2", "--cache-dir", str(tmp_path))
    code, out, _ = run(capsys, "cache", "stats", "--cache-dir", str(tmp_path))
    assert code == 0 and "files: " in out
    code, out, _ = run(capsys, "cache", "purge", "--cache-dir", str(tmp_path), "--format", "structured")
    assert code == 0 and "removed=" in out


def test_cache_without_directory(capsys):
    code, _, err = run(capsys, "cache", "stats")
    assert code == 2 and "no cache directory" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "jacobi_diagrams", "dim", "S1", "3"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1] == "3"
