import json
import subprocess
import sys

import pytest

from ellgenus import cli


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None, out


@pytest.fixture
def solved_file(tmp_path, capsys):
    path = tmp_path / "solved.json"
    code, rep, _ = run(["solve", "0", "1/6", "0", "0", "--order", "12", "--json-out", str(path)], capsys)
    assert code == 0
    return path


def test_solve_zero_seed(capsys):
    code, rep, _ = run(["solve", "0", "0", "0", "0"], capsys)
    assert code == 0
    assert rep["lambda"] == [0, 1]
    assert all(a == [0, 1] for a in rep["series"]["alphas"])


def test_solve_odd_family(solved_file):
    rep = json.loads(solved_file.read_text())
    alphas = rep["series"]["alphas"]
    assert len(alphas) == 12
    assert all(alphas[k] == [0, 1] for k in range(0, 12, 2))


def test_solve_negative_and_complex_seeds(capsys):
    code, rep, _ = run(["solve", "--order", "8", "--", "1/2", "-2/3", "3/7", "5/4"], capsys)
    assert code == 0 and rep["series"]["alphas"][4] == [1723, 2520]
    code, rep, _ = run(["solve", "0.1+0.2j", "0", "0.3i", "1", "--order", "8"], capsys)
    assert code == 0 and rep["series"]["field"] == "complex"


def test_malformed_seed_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["solve", "a", "b", "c", "d"])
    assert info.value.code == 2


def test_bad_order_is_usage_error():
    with pytest.raises(SystemExit) as info:
        cli.main(["solve", "0", "0", "0", "0", "--order", "99"])
    assert info.value.code == 2


def test_verify_gysin(solved_file, capsys):
    code, rep, _ = run(["verify", "gysin", "--input", str(solved_file)], capsys)
    assert code == 0
    assert rep["lands_in_h0"] is True and rep["h0_value"] == [0, 1] and rep["equivalence"] is True


def test_verify_failure_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"field": "exact", "alphas": [[1, 2], [0, 1], [0, 1], [0, 1], [1, 1], [0, 1], [0, 1], [0, 1], [0, 1], [0, 1]]}))
    code, rep, _ = run(["verify", "funpole", "--input", str(path)], capsys)
    assert code == 1 and rep["pass"] is False and rep["first_failure_degree"] is not None


def test_params_and_numeric_verifiers(solved_file, tmp_path, capsys):
    params = tmp_path / "params.json"
    code, rep, _ = run(["params", "--input", str(solved_file), "--json-out", str(params)], capsys)
    assert code == 0 and rep["kind"] == "genus_spec"
    for which in ("funl", "bridge", "triple-product"):
        code, rep, _ = run(["verify", which, "--input", str(params), "--samples", "10"], capsys)
        assert code == 0, rep
        assert rep["pass"] is True and rep["max_residual"] < rep["tol"]


def test_verify_funl_on_series(solved_file, capsys):
    code, rep, _ = run(["verify", "funl", "--input", str(solved_file)], capsys)
    assert code == 0 and rep["lambda"] == [0, 1]


def test_genus_table(solved_file, capsys):
    code, rep, _ = run(["genus", "--input", str(solved_file), "--n", "0..4"], capsys)
    assert code == 0
    assert rep["table"][0] == {"n": 0, "value": [1, 1]}
    assert len(rep["table"]) == 5


def test_special_functions(capsys):
    code, rep, _ = run(["special", "sigma", "0", "--tau", "1i"], capsys)
    assert code == 0 and rep["value"] == [0.0, 0.0]
    code, rep, _ = run(["special", "zeta", "0", "--tau", "1i"], capsys)
    assert code == 1 and "PoleError" in rep["error"]


def test_qexp_collapses_at_zero_nome(capsys):
    code, rep, _ = run(["qexp", "0.3", "2", "0"], capsys)
    from ellgenus.genus import chi_y_R

    assert code == 0 and rep["value"][0] == pytest.approx(chi_y_R(0.3, 2).real, rel=1e-15)


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# demo\norder = 7\nseed = 3\n")
    code, rep, _ = run(["solve", "0", "1", "0", "0", "--config", str(cfg)], capsys)
    assert len(rep["series"]["alphas"]) == 7
    code, rep, _ = run(["solve", "0", "1", "0", "0", "--config", str(cfg), "--order", "9"], capsys)
    assert len(rep["series"]["alphas"]) == 9
    cfg.write_text("colour = blue\n")
    with pytest.raises(SystemExit) as info:
        cli.main(["solve", "0", "0", "0", "0", "--config", str(cfg)])
    assert info.value.code == 2


def test_deterministic_output(solved_file, tmp_path, capsys):
    params = tmp_path / "params.json"
    run(["params", "--input", str(solved_file), "--json-out", str(params)], capsys)
    outs = [run(["verify", "funl", "--input", str(params), "--seed", "5", "--samples", "5"], capsys)[2] for _ in range(2)]
    assert outs[0] == outs[1]


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "ellgenus", "special", "wp", "0.3", "--tau", "1.2i"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["function"] == "wp"
