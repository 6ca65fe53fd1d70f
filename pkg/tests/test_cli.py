import csv
import json

import pytest

from src.cli.app import create_app
from src.main import main

UNIFORM = """
[kernel]
family = "uniform"
b = -1.0
a = 1.0

[reaction]
family = "logistic"
rate = 1.0
"""


def write_config(tmp_path, command, body=UNIFORM, name="run.toml"):
    path = tmp_path / name
    path.write_text(f'command = "{command}"\n' + body)
    return path


def read_key_values(path):
    pairs = (line.split(" = ", 1) for line in path.read_text().splitlines())
    return {key: value for key, value in pairs}


def read_rows(path):
    with path.open(newline="") as handle:
        return list(csv.DictReader(handle))


def test_every_command_has_a_handler():
    assert create_app().commands == ["casestudy", "certify", "simulate", "speeds", "verify"]


def test_speeds_for_symmetric_kernel(tmp_path):
    out = tmp_path / "out"
    assert main([str(write_config(tmp_path, "speeds")), "--output-dir", str(out)]) == 0

    values = read_key_values(out / "speeds.txt")
    assert values["classification"] == "iii"
    assert values["sign_pattern_matches"] == "true"
    assert float(values["c_right"]) == pytest.approx(0.90526, abs=1e-5)
    assert float(values["c_left"]) == pytest.approx(-float(values["c_right"]), rel=1e-12)
    assert len(read_rows(out / "speeds.csv")) == 1


def test_speeds_for_skewed_normal_kernel(tmp_path):
    body = """
[kernel]
family = "normal"
mean = 1.4142135623730951
variance = 1.0

[reaction]
rate = 0.2

[speeds]
c_table = [0.5, 1.0]
"""
    out = tmp_path / "out"
    assert main([str(write_config(tmp_path, "speeds", body)), "--output-dir", str(out)]) == 0
    values = read_key_values(out / "speeds.txt")
    assert values["classification"] == "i"
    assert float(values["c_left"]) > 0
    assert [row["lambda"] for row in read_rows(out / "c_lambda.csv")] == ["0.5", "1"]


def test_casestudy_tables(tmp_path):
    out = tmp_path / "out"
    assert main([str(write_config(tmp_path, "casestudy")), "--output-dir", str(out)]) == 0
    assert len(read_rows(out / "normal_sweep.csv")) == 41
    assert len(read_rows(out / "uniform_sweep.csv")) == 50
    thresholds = read_rows(out / "thresholds.csv")
    assert [row["f0"] for row in thresholds] == ["0.10000000000000001", "0.25", "0.5", "0.75", "0.90000000000000002"]


def test_simulate_writes_trace_and_comparison(tmp_path):
    body = UNIFORM + """
[simulate]
domain = [-30.0, 30.0]
t_final = 10.0
output_every = 0.5
snapshot_times = [5.0]
hair_trigger_omega = 0.5
"""
    out = tmp_path / "out"
    assert main([str(write_config(tmp_path, "simulate", body)), "--output-dir", str(out)]) == 0
    assert len(read_rows(out / "trace.csv")) == 21
    assert len(read_rows(out / "snapshot_t5.csv")) == 601
    assert {row["side"] for row in read_rows(out / "fits.csv")} == {"left", "right"}

    comparison = read_key_values(out / "comparison.txt")
    assert comparison["classification"] == "iii"
    assert float(comparison["right_omega_0.5_fitted"]) > 0
    assert 0 < float(comparison["hair_trigger_time"]) <= 10.0
    assert comparison["clamp_count"] == "0"


def test_invalid_config_exits_with_2(tmp_path):
    body = UNIFORM.replace("a = 1.0", "a = -1.0")
    assert main([str(write_config(tmp_path, "speeds", body))]) == 2
    assert main([str(tmp_path / "missing.toml")]) == 2


def test_numerical_failure_exits_with_3(tmp_path):
    body = UNIFORM + """
[simulate]
domain = [-12.0, 12.0]
t_final = 5.0
"""
    assert main([str(write_config(tmp_path, "simulate", body)), "--output-dir", str(tmp_path / "out")]) == 3


@pytest.mark.slow
def test_certify_then_verify(tmp_path):
    body = UNIFORM + """
[certify]
sides = ["right", "left"]
r = 120.0
speed_fraction = 0.1
upper_gamma = 1.0
exp_lambdas = [1.0]
schedule_kappas = [0.0, 0.5, 1.0]
schedule_tau = 2.0
times = [0.0, 1.0]
"""
    certified = tmp_path / "certified"
    assert main([str(write_config(tmp_path, "certify", body)), "--output-dir", str(certified)]) == 0
    residuals = read_rows(certified / "residuals.csv")
    assert [row["kind"] for row in residuals] == ["lower", "lower", "upper", "exp-lower"]
    assert [row["side"] for row in residuals[:2]] == ["right", "left"]
    assert all(row["passed"] == "true" for row in residuals)

    lowers = json.loads((certified / "certificates.json").read_text())["certificates"][:2]
    assert lowers[0]["eta"] == lowers[1]["eta"]
    schedule = read_rows(certified / "schedule.csv")
    assert [float(row["kappa"]) for row in schedule] == [0.0, 0.5, 1.0]
    assert float(schedule[0]["terminal_position"]) == pytest.approx(2.0 * lowers[1]["c"], rel=1e-12)
    assert float(schedule[-1]["terminal_position"]) == pytest.approx(2.0 * lowers[0]["c"], rel=1e-12)

    verify_body = UNIFORM + f"""
[verify]
certificate = "{(certified / 'certificates.json').as_posix()}"
times = [0.0, 1.0]
"""
    verified = tmp_path / "verified"
    assert main([str(write_config(tmp_path, "verify", verify_body, "verify.toml")), "--output-dir", str(verified)]) == 0
    assert [row["passed"] for row in read_rows(verified / "verify.csv")] == ["true"] * 4

    other = verify_body.replace('family = "uniform"', 'family = "normal"')
    assert main([str(write_config(tmp_path, "verify", other, "other.toml")), "--output-dir", str(verified)]) == 4


def test_certify_reports_an_infeasible_support(tmp_path):
    body = UNIFORM + """
[certify]
sides = ["right"]
r = 1.0
upper_gamma = 1.0
"""
    assert main([str(write_config(tmp_path, "certify", body)), "--output-dir", str(tmp_path / "out")]) == 3


def test_set_overrides_the_config(tmp_path):
    out = tmp_path / "out"
    code = main([
        str(write_config(tmp_path, "speeds")),
        "--set", "reaction.rate=0.5",
        "--output-dir", str(out),
    ])
    assert code == 0
    assert read_key_values(out / "speeds.txt")["f0"] == "0.5"
