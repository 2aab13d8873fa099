import json

import numpy as np
import pytest

from nlmeq.cli import main
from nlmeq.experiments import example2_spec
from nlmeq.io import MatrixFileError, matrix_from_dict, matrix_to_dict, read_matrix, write_matrix
from nlmeq.solver import solve_fixed_point


def test_roundtrip_real_and_complex(tmp_path):
    for M in (np.array([[1.0, 2.0], [3.0, 4.0]]), np.array([[1 + 2j, 0], [0.5j, 3]])):
        f = tmp_path / "m.json"
        write_matrix(f, M)
        np.testing.assert_array_equal(read_matrix(f), M)
    assert "imag" not in matrix_to_dict(np.eye(2))


@pytest.mark.parametrize("d,field", [
    ({"real": [[1]]}, "n"),
    ({"n": 0, "real": [[1]]}, "n"),
    ({"n": 2}, "real"),
    ({"n": 2, "real": [[1, 2]]}, "real"),
    ({"n": 1, "real": [["x"]]}, "real"),
    ({"n": 1, "real": [[1]], "imag": [[1, 2]]}, "imag"),
])
def test_malformed_dicts_name_field(d, field):
    with pytest.raises(MatrixFileError, match=f"'{field}'"):
        matrix_from_dict(d)


def _write(tmp_path, name, M):
    f = tmp_path / name
    write_matrix(f, M)
    return str(f)


def test_cli_solve_identity(tmp_path, capsys):
    A = _write(tmp_path, "A.json", np.zeros((2, 2)))
    Q = _write(tmp_path, "Q.json", np.eye(2))
    assert main(["solve", A, Q, "--p", "0.5"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["iterations"] == 1 and out["status"] == "converged"
    np.testing.assert_array_equal(matrix_from_dict(out["X"]), np.eye(2))


def test_cli_solve_example2_matches_library(tmp_path):
    spec = example2_spec()
    A = _write(tmp_path, "A.json", spec.A)
    Q = _write(tmp_path, "Q.json", spec.Q)
    out = tmp_path / "X.json"
    code = main(["solve", A, Q, "--p", "0.75", "--no-symmetrize", "--x0", "3",
                 "--tol", "1e-13", "--out", str(out)])
    assert code == 0
    X_cli = matrix_from_dict(json.loads(out.read_text())["X"])
    X_lib = solve_fixed_point(spec, X0=3 * spec.Q, tol=1e-13).X
    assert np.abs(X_cli - X_lib).max() <= 1e-12


def test_cli_malformed_file_exit4(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 2, "real": [[1, 2]]}))
    Q = _write(tmp_path, "Q.json", np.eye(2))
    assert main(["solve", str(bad), Q, "--p", "0.5"]) == 4
    assert "'real'" in capsys.readouterr().err
    assert main(["solve", str(tmp_path / "missing.json"), Q, "--p", "0.5"]) == 4


def test_cli_condition_failures_exit2(tmp_path):
    A = _write(tmp_path, "A.json", 10 * np.eye(2))
    Q = _write(tmp_path, "Q.json", np.eye(2))
    # p||A||^2 >= lambda_min(Q)^(p+1)
    assert main(["condnum", A, Q, "--p", "2"]) == 2
    # backward bounds are for p < 1
    assert main(["backward", A, Q, "--p", "2", "--X", Q]) == 2
    negQ = _write(tmp_path, "negQ.json", -np.eye(2))
    assert main(["solve", A, negQ, "--p", "0.5"]) == 2


def test_cli_no_convergence_exit3(tmp_path):
    A = _write(tmp_path, "A.json", 0.5 * np.eye(2))
    Q = _write(tmp_path, "Q.json", np.eye(2))
    assert main(["solve", A, Q, "--p", "0.5", "--max-iter", "2", "--tol", "1e-15"]) == 3


def test_cli_perturb_and_condnum(tmp_path, capsys):
    A = _write(tmp_path, "A.json", 0.3 * np.eye(2))
    Q = _write(tmp_path, "Q.json", 2 * np.eye(2))
    dA = _write(tmp_path, "dA.json", 1e-6 * np.eye(2))
    assert main(["perturb", A, Q, "--p", "0.5", "--dA", dA]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["regime"] == "p-lt-1" and out["mu_star"] > 0
    assert main(["perturb", A, Q, "--p", "2", "--dA", dA]) == 0
    assert json.loads(capsys.readouterr().out)["rho"] > 0
    assert main(["condnum", A, Q, "--p", "2"]) == 0
    c_real = json.loads(capsys.readouterr().out)["c"]
    assert main(["condnum", A, Q, "--p", "2", "--complex-path"]) == 0
    assert json.loads(capsys.readouterr().out)["c"] == pytest.approx(c_real, rel=1e-10)


def test_cli_example_csv(tmp_path):
    out = tmp_path / "t.csv"
    assert main(["example", "4", "--values", "1,3", "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "k,c_rel,flags" and len(lines) == 3
