import math

import numpy as np
import pytest

from src.models import KppModel, NormalKernel
from src.services.simulation import (
    BumpData,
    ExponentialData,
    FrontTrace,
    PlateauData,
    SimConfig,
    SimState,
    TableData,
    check_symmetry_monotone,
    default_dt,
    discretize,
    estimate_speeds,
    fit_for,
    front_positions,
    hair_trigger_time,
    run,
    stencil_weights,
    step,
)
from src.utils.errors import (
    BlowUpError,
    ConfigError,
    FrontNearBoundaryError,
    InsufficientDataError,
    RangeError,
    TruncationError,
)


def config(initial, **kwargs):
    defaults = dict(x_min=-30.0, x_max=30.0, dx=0.1, t_final=5.0, initial=initial, output_every=0.5)
    defaults.update(kwargs)
    return SimConfig(**defaults)


# ============================================================================
# OPERATOR AND STEPPER
# ============================================================================

def test_uniform_stencil(uniform_model):
    weights = stencil_weights(uniform_model.kernel, 0.1)
    assert weights.size == 21
    assert weights.sum() == pytest.approx(1.0, abs=1e-15)
    np.testing.assert_allclose(weights, weights[::-1], atol=0)
    assert weights[0] == pytest.approx(0.025, rel=1e-12)
    assert weights[10] == pytest.approx(0.05, rel=1e-12)


def test_operator_annihilates_constants(uniform_model):
    operator = discretize(uniform_model, config(PlateauData(0.3)))
    np.testing.assert_allclose(operator.apply(np.full(601, 0.3)), 0.0, atol=1e-14)
    assert operator.half_width == pytest.approx(1.0, rel=1e-2)


def test_direct_and_fft_convolution_agree(normal_model):
    operator = discretize(normal_model, config(PlateauData(0.0)))
    u = np.random.default_rng(7).uniform(0.0, 1.0, 601)
    np.testing.assert_allclose(operator.convolve(u, "direct"), operator.convolve(u, "fft"), atol=1e-12)


def test_auto_method_picks_fft_for_wide_stencils(logistic):
    wide = KppModel(NormalKernel(0.0, 25.0), logistic)
    assert discretize(wide, config(PlateauData(0.0), x_min=-100.0, x_max=100.0)).method == "fft"


def test_unknown_method(uniform_model):
    with pytest.raises(ConfigError):
        discretize(uniform_model, config(PlateauData(0.0), method="spectral"))


def test_kernel_wider_than_domain(logistic):
    wide = KppModel(NormalKernel(0.0, 100.0), logistic)
    with pytest.raises(TruncationError):
        discretize(wide, config(PlateauData(0.0), x_min=-5.0, x_max=5.0))


@pytest.mark.parametrize("level", [0.0, 1.0])
def test_equilibria_are_fixed_points(uniform_model, level):
    operator = discretize(uniform_model, config(PlateauData(level)))
    x = config(PlateauData(level)).grid()
    state = step(SimState(0.0, x, np.full(x.size, level)), operator, uniform_model.reaction, 0.1)
    np.testing.assert_allclose(state.values, level, atol=1e-14)
    assert state.clamp_count == 0


def test_constant_state_follows_scalar_rk4(uniform_model):
    dt = 0.1
    f = lambda u: u * (1 - u)
    k1 = f(0.5)
    k2 = f(0.5 + 0.5 * dt * k1)
    k3 = f(0.5 + 0.5 * dt * k2)
    k4 = f(0.5 + dt * k3)
    expected = 0.5 + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)

    cfg = config(PlateauData(0.5))
    state = step(SimState(0.0, cfg.grid(), np.full(601, 0.5)), discretize(uniform_model, cfg), uniform_model.reaction, dt)
    np.testing.assert_allclose(state.values, expected, atol=1e-10)
    assert state.time == pytest.approx(dt)


def test_oversized_step_blows_up(uniform_model):
    cfg = config(PlateauData(0.5))
    with pytest.raises(BlowUpError):
        step(SimState(0.0, cfg.grid(), np.full(601, 0.5)), discretize(uniform_model, cfg), uniform_model.reaction, 10.0)


# ============================================================================
# FRONTS AND FITS
# ============================================================================

def test_front_positions_interpolate():
    state = SimState(0.0, np.arange(4.0), np.array([0.0, 1.0, 1.0, 0.0]))
    assert front_positions(state, 0.5) == (0.5, 2.5)

    skewed = SimState(0.0, np.arange(5.0), np.array([0.0, 0.4, 1.0, 0.6, 0.0]))
    left, right = front_positions(skewed, 0.5)
    assert left == pytest.approx(1.0 + 0.1 / 0.6)
    assert right == pytest.approx(3.0 + 0.1 / 0.6)


def test_front_positions_edge_cases():
    x = np.arange(3.0)
    assert front_positions(SimState(0.0, x, np.array([0.1, 0.2, 0.1])), 0.5) == (None, None)
    assert front_positions(SimState(0.0, x, np.array([1.0, 1.0, 0.0])), 0.5) == (0.0, 1.5)
    with pytest.raises(RangeError):
        front_positions(SimState(0.0, x, np.zeros(3)), 1.0)


def test_linear_fronts_fit_exactly():
    trace = FrontTrace(omegas=(0.5,))
    for t in range(21):
        trace.append(float(t), [(-2.0 * t, 2.0 * t + 1.0)])
    fits = estimate_speeds(trace)
    assert fit_for(fits, 0.5, "right").speed == pytest.approx(2.0, abs=1e-12)
    assert fit_for(fits, 0.5, "left").speed == pytest.approx(-2.0, abs=1e-12)
    assert fit_for(fits, 0.5, "right").samples == 11


def test_stalled_front_has_zero_speed():
    trace = FrontTrace(omegas=(0.5,))
    for t in range(21):
        trace.append(float(t), [(-3.0, 3.0)])
    assert fit_for(estimate_speeds(trace), 0.5, "right").speed == pytest.approx(0.0, abs=1e-12)


def test_short_trace_cannot_be_fitted():
    trace = FrontTrace(omegas=(0.5,))
    for t in range(5):
        trace.append(float(t), [(-t, t)])
    with pytest.raises(InsufficientDataError):
        estimate_speeds(trace)


def test_missing_fronts_are_nan():
    trace = FrontTrace(omegas=(0.5,))
    trace.append(0.0, [(None, None)])
    _, left, right = trace.series(0.5)
    assert math.isnan(left[0]) and math.isnan(right[0])


def test_symmetry_check():
    x = np.linspace(-5.0, 5.0, 101)
    state = SimState(0.0, x, BumpData(0.0, 2.0, 1.0).sample(x))
    asymmetry, violation = check_symmetry_monotone(state, 0.0)
    assert asymmetry <= 1e-12
    assert violation == 0.0

    shifted = SimState(0.0, x, BumpData(1.0, 2.0, 1.0).sample(x))
    asymmetry, violation = check_symmetry_monotone(shifted, 0.0)
    assert asymmetry > 0.1
    assert violation > 0


# ============================================================================
# RUNS
# ============================================================================

def test_default_dt(uniform_model):
    assert default_dt(uniform_model) == pytest.approx(0.1)


def test_symmetric_run_stays_symmetric(uniform_model):
    result = run(uniform_model, config(BumpData(0.0, 1.0, 1.0), symmetry_center=0.0), fit=False)
    assert len(result.trace.times) == 11
    assert max(s.asymmetry for s in result.symmetry) <= 1e-10
    assert max(s.monotone_violation for s in result.symmetry) <= 1e-10
    assert result.clamp_count == 0

    times, left, right = result.trace.series(0.5)
    np.testing.assert_allclose(left, -right, atol=1e-9)


def test_comparison_principle(uniform_model):
    small = run(uniform_model, config(BumpData(0.0, 1.0, 0.5), x_min=-10.0, x_max=10.0, check_boundary=False), fit=False)
    large = run(uniform_model, config(BumpData(0.0, 1.0, 1.0), x_min=-10.0, x_max=10.0, check_boundary=False), fit=False)
    assert np.all(small.final.values <= large.final.values + 1e-12)


def test_plateau_stays_at_one(uniform_model):
    result = run(uniform_model, config(PlateauData(1.0), check_boundary=False, t_final=1.0), fit=False)
    np.testing.assert_allclose(result.final.values, 1.0, atol=1e-14)


def test_snapshots_and_probes(uniform_model):
    result = run(uniform_model, config(BumpData(), t_final=2.0, snapshot_times=(1.0,)), fit=False)
    assert list(result.snapshots) == [1.0]
    assert result.snapshots[1.0].shape == (601,)
    assert result.probes[0].center_value == pytest.approx(1.0)
    assert len(result.probes) == len(result.trace.times)


def test_hair_trigger(uniform_model):
    result = run(uniform_model, config(BumpData(0.0, 1.0, 0.1), t_final=10.0), fit=False)
    hit = hair_trigger_time(result, 0.5)
    assert hit is not None and 0 < hit <= 10.0
    assert hair_trigger_time(result, 0.999999) is None


def test_front_reaching_the_boundary(uniform_model):
    with pytest.raises(FrontNearBoundaryError):
        run(uniform_model, config(BumpData(), x_min=-12.0, x_max=12.0, t_final=5.0), fit=False)


def test_truncated_exponential_datum(uniform_model):
    with pytest.raises(TruncationError):
        run(uniform_model, config(ExponentialData(lam=10.0), x_min=-300.0, x_max=300.0), fit=False)


@pytest.mark.parametrize("changes", [
    dict(dt=0.3),
    dict(omegas=(1.2,)),
    dict(x_min=1.0, x_max=-1.0),
    dict(t_final=0.0),
])
def test_invalid_runs(uniform_model, changes):
    with pytest.raises(ConfigError):
        run(uniform_model, config(BumpData(), **changes), fit=False)


def test_table_datum(tmp_path):
    path = tmp_path / "u0.txt"
    path.write_text("# x u\n-1 0\n0 1\n1 0\n")
    data = TableData.from_file(path)
    np.testing.assert_allclose(data.sample(np.array([-2.0, -0.5, 0.0, 0.5, 2.0])), [0.0, 0.5, 1.0, 0.5, 0.0])
    with pytest.raises(ConfigError):
        TableData.from_points([0.0, 1.0], [0.5, 1.5])


@pytest.mark.slow
def test_fitted_speed_approaches_spreading_speed(uniform_model):
    cfg = config(BumpData(), x_min=-120.0, x_max=120.0, t_final=60.0, output_every=1.0)
    result = run(uniform_model, cfg)
    right = fit_for(result.fits, 0.5, "right")
    assert right.speed == pytest.approx(0.90526, rel=0.05)
