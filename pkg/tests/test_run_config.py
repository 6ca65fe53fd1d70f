import pytest

from src.config.run_config import apply_overrides, load_run_config, parse_override, parse_run_config
from src.services.simulation import ExponentialData
from src.utils.errors import ConfigError, InvalidModelError

UNIFORM = {"command": "speeds", "kernel": {"family": "uniform", "b": -1.0, "a": 1.0}}


def with_kernel(**kernel):
    return {"command": "speeds", "kernel": kernel}


def test_minimal_config_fills_defaults():
    config = parse_run_config(UNIFORM)
    assert config.reaction.family == "logistic"
    assert config.simulate.domain == (-300.0, 300.0)
    assert config.certify.sides == ["right", "left"]
    assert config.build_model().f0 == 1.0


@pytest.mark.parametrize("data, field", [
    (with_kernel(family="uniform", a=-1.0), "kernel.a"),
    (with_kernel(family="normal", sigma=1.0), "kernel.sigma"),
    (with_kernel(family="cauchy"), "kernel.family"),
    (with_kernel(family="tabulated"), "kernel.table"),
    ({**UNIFORM, "simulate": {"omegas": [1.5]}}, "simulate.omegas"),
    ({**UNIFORM, "speeds": {"odd_moment_order": 4}}, "speeds.odd_moment_order"),
    ({**UNIFORM, "command": "verify"}, "verify.certificate"),
])
def test_validation_errors_name_the_field(data, field):
    with pytest.raises(ConfigError) as exc:
        parse_run_config(data)
    assert field in str(exc.value)
    assert exc.value.exit_code == 2


def test_missing_table_file():
    with pytest.raises(ConfigError) as exc:
        parse_run_config(with_kernel(family="tabulated", table="no/such/kernel.txt"))
    assert "file not found" in str(exc.value)


def test_table_violating_hypotheses(tmp_path):
    path = tmp_path / "kernel.txt"
    path.write_text("0.5 0\n0.75 4\n1.0 0\n")
    config = parse_run_config(with_kernel(family="tabulated", table=str(path)))
    with pytest.raises(InvalidModelError):
        config.build_model()


def test_parse_override_values():
    assert parse_override("simulate.dx=0.05") == (["simulate", "dx"], 0.05)
    assert parse_override("simulate.omegas=[0.25, 0.5]") == (["simulate", "omegas"], [0.25, 0.5])
    assert parse_override("kernel.family=normal") == (["kernel", "family"], "normal")
    assert parse_override("simulate.check_boundary=false") == (["simulate", "check_boundary"], False)
    with pytest.raises(ConfigError):
        parse_override("simulate.dx")


def test_overrides_create_and_replace_sections():
    data = apply_overrides({"kernel": {"family": "uniform"}}, ["kernel.a=2.0", "simulate.initial.kind=plateau"])
    assert data["kernel"] == {"family": "uniform", "a": 2.0}
    assert data["simulate"] == {"initial": {"kind": "plateau"}}
    with pytest.raises(ConfigError):
        apply_overrides({"kernel": {"family": "uniform"}}, ["kernel.family.x=1"])


def test_load_with_overrides(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text(
        'command = "simulate"\n'
        "[kernel]\n"
        'family = "uniform"\n'
        "[simulate]\n"
        "domain = [-50.0, 50.0]\n"
        "[simulate.initial]\n"
        'kind = "exponential"\n'
        "lam = 0.5\n"
    )
    config = load_run_config(path, ["simulate.t_final=10", "simulate.initial.center=1.0"])
    sim = config.simulate.to_sim_config()
    assert (sim.x_min, sim.x_max, sim.t_final) == (-50.0, 50.0, 10)
    assert sim.initial == ExponentialData(lam=0.5, amplitude=1.0, center=1.0)


def test_exponential_initial_needs_rate():
    with pytest.raises(ConfigError) as exc:
        parse_run_config({**UNIFORM, "simulate": {"initial": {"kind": "exponential"}}})
    assert "simulate.initial.lam" in str(exc.value)


def test_unreadable_config(tmp_path):
    with pytest.raises(ConfigError):
        load_run_config(tmp_path / "missing.toml")
    broken = tmp_path / "broken.toml"
    broken.write_text("command = \n")
    with pytest.raises(ConfigError):
        load_run_config(broken)
