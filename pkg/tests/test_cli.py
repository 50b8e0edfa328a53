import json
import subprocess
import sys

import numpy as np
import pytest

from nsconic.cli import main
from nsconic.fileio import load_problem


def lp_doc():
    # min x1 + 2 x2 s.t. x1 + x2 = 2, x >= 0; optimum (2, 0), value 2
    return {
        "c": [1.0, 2.0],
        "b": [2.0],
        "A": {"m": 1, "n": 2, "rows": [0, 0], "cols": [0, 1], "vals": [1.0, 1.0]},
        "cones": [{"type": "lp", "dim": 2}],
    }


def infeasible_doc():
    # x1 = -1 with x >= 0
    return {
        "c": [0.0, 0.0],
        "b": [-1.0],
        "A": {"m": 1, "n": 2, "rows": [0], "cols": [0], "vals": [1.0]},
        "cones": [{"type": "lp", "dim": 2}],
    }


def write_doc(tmp_path, doc, name="prob.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def without_timing(text):
    return "\n".join(
        line for line in text.splitlines() if "solveSeconds" not in line
    )


def test_solve_writes_result_to_stdout(tmp_path, capsys):
    code = main(["solve", write_doc(tmp_path, lp_doc())])
    out = capsys.readouterr().out
    assert code == 0
    doc = json.loads(out)
    assert doc["status"] == "Optimal"
    assert doc["pObj"] == pytest.approx(2.0, abs=1e-5)
    assert doc["x"] == pytest.approx([2.0, 0.0], abs=1e-5)


def test_solve_output_flag_writes_file(tmp_path, capsys):
    dest = tmp_path / "result.json"
    code = main(["solve", write_doc(tmp_path, lp_doc()), "--output", str(dest)])
    assert code == 0
    assert capsys.readouterr().out == ""
    assert json.loads(dest.read_text())["status"] == "Optimal"


def test_solve_verbose_logs_iterations(tmp_path, capsys):
    dest = tmp_path / "result.json"
    code = main(
        ["solve", write_doc(tmp_path, lp_doc()), "--verbose", "--output", str(dest)]
    )
    assert code == 0
    log = capsys.readouterr().out
    assert "iter" in log and "mu" in log
    assert json.loads(dest.read_text())["status"] == "Optimal"


def test_infeasible_exits_2(tmp_path, capsys):
    code = main(["solve", write_doc(tmp_path, infeasible_doc())])
    assert code == 2
    assert json.loads(capsys.readouterr().out)["status"] == "PrimalInfeasible"


def test_iteration_limit_exits_3(tmp_path, capsys):
    code = main(["solve", write_doc(tmp_path, lp_doc()), "--max-iter", "1"])
    assert code == 3
    assert json.loads(capsys.readouterr().out)["status"] == "IterationLimit"


def test_input_errors_exit_4(tmp_path, capsys):
    assert main(["solve", str(tmp_path / "missing.json")]) == 4
    bad = tmp_path / "bad.json"
    bad.write_text('{"c": [1.0]}')
    assert main(["solve", str(bad)]) == 4
    assert main(["random-lp", "--m", "9", "--n", "6"]) == 4
    assert main(["random-lp", "--n", "6"]) == 4  # --m is required
    assert main(["no-such-command"]) == 4
    err = capsys.readouterr().err
    assert "error:" in err


def test_tolerance_flag_tightens_result(tmp_path, capsys):
    path = write_doc(tmp_path, lp_doc())
    main(["solve", path, "--tol", "1e-10"])
    doc = json.loads(capsys.readouterr().out)
    assert doc["residualNorms"]["mu"] <= 1e-10


def test_random_lp_solves_and_emits(tmp_path, capsys):
    emitted = tmp_path / "inst.json"
    code = main(
        ["random-lp", "--m", "4", "--n", "9", "--seed", "11", "--emit", str(emitted)]
    )
    assert code == 0
    assert json.loads(capsys.readouterr().out)["status"] == "Optimal"
    c, A, b, cones, x0 = load_problem(emitted)
    assert A.shape == (4, 9)
    assert len(cones) == 1 and cones[0].type == "lp" and cones[0].dim == 9
    assert A.matvec(x0) == pytest.approx(b, abs=1e-12)


def test_random_lp_deterministic_for_seed(capsys):
    args = ["random-lp", "--m", "3", "--n", "7", "--seed", "2"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    second = capsys.readouterr().out
    assert without_timing(first) == without_timing(second)
    assert first != without_timing(first)  # timing line present


def test_solving_emitted_file_matches_direct_run(tmp_path, capsys):
    emitted = tmp_path / "inst.json"
    main(["random-lp", "--m", "3", "--n", "8", "--seed", "4", "--emit", str(emitted)])
    direct = capsys.readouterr().out
    assert main(["solve", str(emitted)]) == 0
    from_file = capsys.readouterr().out
    assert without_timing(from_file) == without_timing(direct)


def test_edesign_command(capsys):
    code = main(["edesign", "--n", "3", "--seed", "1"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["status"] == "Optimal"
    # p defaults to 2n, variables are (t, x)
    assert len(doc["x"]) == 7
    weights = np.array(doc["x"][1:])
    assert weights.sum() == pytest.approx(1.0, abs=1e-6)
    assert weights.min() > -1e-9
    assert doc["pObj"] < 0.0  # maximizing a positive eigenvalue


@pytest.mark.parametrize("cone", ["lp", "socp", "exp", "gpow", "free"])
def test_check_barrier_passes_for_builtins(cone, capsys):
    assert main(["check-barrier", "--cone", cone]) == 0
    out = capsys.readouterr().out
    assert "max gradient error" in out
    assert "result: OK" in out


def test_check_barrier_custom_shape(capsys):
    code = main(
        ["check-barrier", "--cone", "gpow", "--lambda", "0.2", "0.3", "0.5"]
    )
    assert code == 0
    assert "dim 4" in capsys.readouterr().out
    assert main(["check-barrier", "--cone", "lp", "--dim", "9"]) == 0
    assert "dim 9" in capsys.readouterr().out


def test_check_barrier_rejects_bad_weights(capsys):
    code = main(["check-barrier", "--cone", "gpow", "--lambda", "0.9", "0.9"])
    assert code == 4
    assert "error:" in capsys.readouterr().err


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "nsconic.cli", "check-barrier", "--cone", "exp"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "result: OK" in proc.stdout
