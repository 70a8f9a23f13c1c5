import json
import os
import subprocess
import sys

import pytest

from eddeg import cli
from eddeg.montecarlo import CARDIOID


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out else None), (json.loads(err) if err.strip().startswith("{") else err)


def test_parse_examples():
    ns = cli.parse(["segre", "--dims", "2,2,2"])
    assert ns.command == "segre" and list(ns.dims) == [2, 2, 2]
    ns = cli.parse(["formula", "hurwitz", "--n", "5", "--homogeneous"])
    assert ns.command == "formula" and ns.name == "hurwitz" and ns.homogeneous
    ns = cli.parse(["aed", "--model", "ellipse", "--samples", "100000", "--seed", "7"])
    assert (ns.model, ns.samples, ns.seed, ns.workers) == ("ellipse", 100000, 7, 1)


def test_unknown_flag_is_usage_error(capsys):
    code, out, err = run(["segre", "--dims", "2,2", "--bogus"], capsys)
    assert code == 2 and out is None
    assert err["error"]["kind"] == "usage" and err["error"]["exit_code"] == 2
    code, _, _ = run([], capsys)
    assert code == 2


def test_segre_and_formula(capsys):
    code, out, _ = run(["segre", "--dims", "2,2,2"], capsys)
    assert code == 0 and out["result"]["ed_degree"] == 6
    code, out, _ = run(["formula", "hurwitz", "--n", "5", "--homogeneous"], capsys)
    assert code == 0 and out["result"] == 6
    assert out["version"]


def test_domain_error_exit_3(capsys):
    code, _, err = run(["formula", "cayley_menger", "--p", "0"], capsys)
    assert code == 3 and err["error"]["kind"] == "domain"
    code, _, err = run(["hurwitz", "--n", "12"], capsys)
    assert code == 3


def test_unknown_table_is_usage_error(capsys):
    code, _, err = run(["table", "nonsense"], capsys)
    assert code == 2


def test_retry_exhaustion_exit_4(capsys):
    code, _, err = run(["solve", "--curve", "x^2+y^2-1", "--data", "0,0"], capsys)
    assert code == 4 and err["error"]["kind"] == "retry_exhausted"


def test_bad_matrix_file_exit_2(tmp_path, capsys):
    f = tmp_path / "m.txt"
    f.write_text("1 2\n3\n")
    code, _, _ = run(["matrix", "--file", str(f), "--rank", "1"], capsys)
    assert code == 2


def test_solve_cardioid_seed_1(capsys):
    code, out, _ = run(["solve", "--curve", CARDIOID, "--singular", "0,0", "--seed", "1"], capsys)
    assert code == 0
    assert out["result"]["complex_count"] == 3
    assert out["command"]["seed"] == 1


def test_table_multiview(capsys):
    code, out, _ = run(["table", "multiview"], capsys)
    assert code == 0
    assert out["result"]["source"] == "reference"
    assert [r[1] for r in out["result"]["rows"]] == [6, 47, 148, 336, 638, 1081]


def test_seed_env_override(monkeypatch):
    monkeypatch.setenv("EDDEG_SEED", "42")
    assert cli.parse(["aed", "--model", "ellipse"]).seed == 42
    assert cli.parse(["aed", "--model", "ellipse", "--seed", "3"]).seed == 3
    monkeypatch.delenv("EDDEG_SEED")
    assert cli.parse(["aed", "--model", "ellipse"]).seed == 0


def test_stable_serialization_across_processes():
    argv = [sys.executable, "-m", "eddeg.cli", "aed", "--model", "cardioid", "--samples", "300", "--seed", "4"]
    env = dict(os.environ)
    env.pop("EDDEG_SEED", None)
    a = subprocess.run(argv, capture_output=True, text=True, env=env, check=True).stdout
    b = subprocess.run(argv + ["--workers", "2"], capture_output=True, text=True, env=env, check=True).stdout
    ja, jb = json.loads(a), json.loads(b)
    assert ja["result"] == jb["result"]
    c = subprocess.run(argv, capture_output=True, text=True, env=env, check=True).stdout
    assert a == c


def test_echo_reproduces_run(capsys):
    code, out, _ = run(["hurwitz", "--n", "4", "--seed", "2"], capsys)
    assert code == 0
    echo = out["command"]
    argv = [echo["command"], "--n", str(echo["n"]), "--seed", str(echo["seed"])]
    code, again, _ = run(argv, capsys)
    assert again == out


def test_timings_only_on_request(capsys):
    _, out, _ = run(["toric", "--cube", "3"], capsys)
    assert "timings" not in out["diagnostics"]
    _, out, _ = run(["toric", "--cube", "3", "--timings"], capsys)
    assert out["diagnostics"]["timings"]["total_seconds"] >= 0


@pytest.mark.parametrize("argv,value", [
    (["toric", "--cube", "3"], 34),
    (["hurwitz", "--n", "4"], 5),
    (["hurwitz", "--n", "4", "--homogeneous"], 10),
    (["solve", "--param", "t1;t2;t1*t2"], 5),
])
def test_result_values(argv, value, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 0
    res = out["result"]
    assert res.get("ed_degree", res.get("complex_count")) == value
