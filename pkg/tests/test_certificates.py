import dataclasses
import json
import math

import numpy as np
import pytest

from src.models import KppModel, NormalKernel
from src.services.analysis.speeds import extremal_speeds
from src.services.certificates import (
    ConstantProfile,
    Side,
    build_exp_lower_solution,
    build_exp_upper_solution,
    build_lower_solution,
    build_upper_solution,
    dominates,
    eta_for_epsilon,
    forward_backward_schedule,
    h_profile,
    load_certificates,
    residual,
    save_certificates,
    standard_frames,
    solve_B_for_height,
    specs_of,
    support_radius,
    verify_certificate,
    xi_window,
)
from src.services.certificates.lower import G_eta, g_roots, shifted_speed
from src.services.certificates.records import reaction_params
from src.services.certificates.verification import _check_lower
from src.utils.errors import (
    ConfigError,
    HeightUnreachableError,
    InfeasibleWidthError,
    NoRootError,
    PreconditionError,
    RangeError,
)

FRAMES = [(t, np.linspace(-4.0, 4.0, 81)) for t in (0.0, 0.5, 1.0)]


def lower_speed(model, side, epsilon, fraction):
    """c*(η) + fraction·(c* − c*(η)) on one side."""
    eta = eta_for_epsilon(model, epsilon, side)
    slow = shifted_speed(model, eta, side)
    speeds = extremal_speeds(model.kernel, model.f0)
    star = speeds.c_right if side == Side.RIGHT else speeds.c_left
    return slow + fraction * (star - slow)


def compact_lower(model, side, epsilon=0.1, r=120.0, fraction=0.1):
    """Wide lower solution close to c*(η)."""
    return build_lower_solution(model, lower_speed(model, side, epsilon, fraction), side, epsilon, r)


# ============================================================================
# AUXILIARY H
# ============================================================================

def test_h_profile_roots_and_peak():
    h = h_profile(A=1.0, B=0.1, D=0.5, delta=0.5)
    assert float(h.value(h.mu)) == pytest.approx(0.0, abs=1e-12)
    assert float(h.value(h.nu)) == pytest.approx(0.0, abs=1e-10)
    assert h.mu < h.z0 < h.nu
    assert float(h.value(h.z0)) == pytest.approx(h.h_max, rel=1e-12)
    for z in (0.99 * h.z0, 1.01 * h.z0):
        assert float(h.value(z)) < h.h_max


def test_h_profile_rejects_degenerate_coefficients():
    with pytest.raises(RangeError):
        h_profile(A=1.0, B=0.6, D=0.5, delta=0.5)
    with pytest.raises(RangeError):
        h_profile(A=1.0, B=0.1, D=0.5, delta=1.0)


def test_height_target():
    h = solve_B_for_height(1.0, 0.5, 0.5, 0.2)
    assert h.h_max == pytest.approx(0.2, rel=1e-12)
    with pytest.raises(HeightUnreachableError):
        solve_B_for_height(1.0, 0.5, 0.5, -0.1)


# ============================================================================
# LOWER SOLUTIONS
# ============================================================================

def test_eta_shifts_the_speed_by_epsilon(uniform_model):
    eta = eta_for_epsilon(uniform_model, 0.1, Side.RIGHT)
    speeds = extremal_speeds(uniform_model.kernel, 1.0)
    assert 0 < eta < 1
    assert shifted_speed(uniform_model, eta, Side.RIGHT) == pytest.approx(speeds.c_right - 0.1, abs=1e-10)
    with pytest.raises(RangeError):
        eta_for_epsilon(uniform_model, 5.0, Side.RIGHT)


def test_g_roots_bracket_the_maximum(uniform_model):
    eta = eta_for_epsilon(uniform_model, 0.1, Side.RIGHT)
    c = extremal_speeds(uniform_model.kernel, 1.0).c_right - 0.05
    roots = g_roots(uniform_model, eta, c, Side.RIGHT)
    assert 0 < roots.alpha < roots.gamma < roots.beta
    for lam in (roots.alpha, roots.beta):
        assert G_eta(uniform_model, eta, c, lam) == pytest.approx(0.0, abs=1e-12)
    assert roots.g_max > 0
    with pytest.raises(NoRootError):
        g_roots(uniform_model, eta, 2.0, Side.RIGHT)


@pytest.mark.parametrize("side", [Side.RIGHT, Side.LEFT])
def test_compact_lower_solution_is_consistent(uniform_model, side):
    spec = compact_lower(uniform_model, side)
    assert spec.side == side.value
    assert _check_lower(uniform_model, spec) == []
    assert spec.width <= 0.5 * spec.r * (1 + 1e-9)
    assert spec.h_max <= spec.p2 * (1 + 1e-10)

    lo, hi = spec.support(0.0)
    assert -spec.r <= lo < hi <= spec.r
    window = xi_window(spec)
    assert window[0] <= spec.xi <= window[1]

    values = spec.value(0.0, np.linspace(lo - 1.0, hi + 1.0, 201))
    assert np.all(values >= 0)
    assert np.max(values) <= spec.h_max * (1 + 1e-12)


def test_perturbed_lower_certificate_is_flagged(uniform_model):
    spec = compact_lower(uniform_model, Side.RIGHT)
    broken = dataclasses.replace(spec, B=1.1 * spec.B)
    assert _check_lower(uniform_model, broken)


def test_G_eta_is_concave(uniform_model):
    eta = eta_for_epsilon(uniform_model, 0.1, Side.RIGHT)
    lams = np.linspace(-2.5, 2.5, 51)
    values = np.array([G_eta(uniform_model, eta, 0.8, lam) for lam in lams])
    assert np.all(values[:-2] - 2.0 * values[1:-1] + values[2:] < 0)


def test_support_narrows_with_the_height():
    widths = [solve_B_for_height(2.0, 1.0, 0.5, p).log_width for p in (0.1, 0.01, 0.001)]
    assert widths[0] > widths[1] > widths[2] > 0


@pytest.mark.slow
@pytest.mark.parametrize("side", [Side.RIGHT, Side.LEFT])
def test_compact_lower_residual_is_nonpositive(uniform_model, side):
    spec = compact_lower(uniform_model, side)
    report = verify_certificate(uniform_model, spec, frames=standard_frames(uniform_model, spec, (0.0, 1.0)))
    assert report.violations == []
    assert report.residual.max_residual <= 1e-6
    assert report.residual.evaluated > 0


@pytest.mark.parametrize("side", [Side.RIGHT, Side.LEFT])
def test_narrow_lower_support_is_infeasible(uniform_model, side):
    speeds = extremal_speeds(uniform_model.kernel, 1.0)
    c = speeds.c_right - 0.025 if side == Side.RIGHT else speeds.c_left + 0.025
    with pytest.raises(InfeasibleWidthError):
        build_lower_solution(uniform_model, c, side, 0.05, 1.0)


def test_lower_solution_takes_a_shared_eta(uniform_model):
    right = eta_for_epsilon(uniform_model, 0.1, Side.RIGHT)
    shared = 0.99 * right
    c = lower_speed(uniform_model, Side.RIGHT, 0.1, 0.1)
    spec = build_lower_solution(uniform_model, c, Side.RIGHT, 0.1, 120.0, eta=shared)
    assert spec.eta == shared
    assert _check_lower(uniform_model, spec) == []
    with pytest.raises(RangeError):
        build_lower_solution(uniform_model, c, Side.RIGHT, 0.1, 120.0, eta=1.5)


def test_support_radius(uniform_model):
    right = compact_lower(uniform_model, Side.RIGHT)
    left = compact_lower(uniform_model, Side.LEFT)
    assert support_radius(right, left) == pytest.approx(2 * (right.width + left.width))


def test_exp_lower_residual_is_nonpositive(uniform_model):
    spec = build_exp_lower_solution(uniform_model, 1.0)
    report = verify_certificate(uniform_model, spec)
    assert report.violations == []
    assert report.residual.max_residual <= 1e-6
    assert report.passed


def test_exp_lower_needs_slow_decay(uniform_model):
    with pytest.raises(RangeError):
        build_exp_lower_solution(uniform_model, 2.5)


# ============================================================================
# UPPER SOLUTIONS
# ============================================================================

def test_upper_residual_is_nonnegative(uniform_model):
    spec = build_upper_solution(uniform_model, 1.0)
    report = verify_certificate(uniform_model, spec)
    assert report.passed
    assert report.residual.min_residual >= -1e-6
    assert report.residual.evaluated > 0


def test_upper_solution_dominates_matching_data(uniform_model):
    spec = build_upper_solution(uniform_model, 1.0)
    x = np.linspace(-5.0, 5.0, 101)
    decay = np.exp(-spec.lambda_right * np.abs(x))
    assert dominates(spec, x, 0.5 * decay)
    assert not dominates(spec, x, np.minimum(1.0, 2.0 * decay))


def test_upper_certificate_for_another_model_is_flagged(uniform_model, normal_model):
    spec = build_upper_solution(uniform_model, 2.0)
    assert spec.gamma0 == 2.0
    report = verify_certificate(normal_model, spec, frames=FRAMES)
    assert not report.passed
    assert any("c_r*" in v for v in report.violations)


def test_exp_upper_residual_is_nonnegative(laplace_model):
    spec = build_exp_upper_solution(laplace_model, 0.5)
    assert spec.c == pytest.approx(4.0 / (0.5 * 3.75), rel=1e-12)
    report = verify_certificate(laplace_model, spec, frames=FRAMES)
    assert report.passed


def test_exp_upper_needs_symmetric_kernel(logistic):
    with pytest.raises(PreconditionError):
        build_exp_upper_solution(KppModel(NormalKernel(0.5, 1.0), logistic), 0.5)


@pytest.mark.parametrize("level, expected", [(0.0, 0.0), (1.0, 0.0), (0.5, -0.25)])
def test_residual_of_constant_states(uniform_model, level, expected):
    report = residual(uniform_model, ConstantProfile(level), [0.0, 1.0], np.linspace(-2.0, 2.0, 9))
    assert report.evaluated == 18
    assert report.max_residual == pytest.approx(expected, abs=1e-8)
    assert report.min_residual == pytest.approx(expected, abs=1e-8)


def test_residual_does_not_depend_on_workers(uniform_model):
    spec = build_upper_solution(uniform_model, 1.0)
    serial = residual(uniform_model, spec, [0.0, 0.5], np.linspace(-3.0, 3.0, 25), workers=1)
    threaded = residual(uniform_model, spec, [0.0, 0.5], np.linspace(-3.0, 3.0, 25), workers=3)
    assert threaded == serial


# ============================================================================
# FILES AND SCHEDULES
# ============================================================================

def test_certificate_file_replays_exactly(tmp_path, uniform_model, laplace_model):
    specs = [
        build_upper_solution(uniform_model, 1.5),
        build_exp_lower_solution(uniform_model, 1.0),
        compact_lower(uniform_model, Side.RIGHT),
    ]
    path = save_certificates(
        tmp_path / "certificates.json",
        uniform_model.kernel.to_params(),
        reaction_params(uniform_model.reaction),
        specs,
    )
    bundle = load_certificates(path)
    assert bundle.kernel == {"family": "uniform", "b": -1.0, "a": 1.0}
    assert bundle.reaction["name"] == "logistic"
    assert specs_of(bundle) == specs


def test_missing_or_malformed_certificate_file(tmp_path):
    with pytest.raises(ConfigError):
        load_certificates(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"kernel": {}, "reaction": {}, "certificates": [{"kind": "sideways"}]}))
    with pytest.raises(ConfigError):
        load_certificates(bad)


def test_forward_backward_schedule():
    schedule = forward_backward_schedule(1.0, 0.5, 0.5, 2.0)
    assert schedule.switch_time == 1.0
    assert schedule.terminal_position == pytest.approx(1.5)
    assert schedule.xi2 is None

    anchored = forward_backward_schedule(1.0, 0.5, 0.5, 2.0, rho2=2.0, z2=math.e)
    assert anchored.xi2 == pytest.approx(0.5 + 0.5)

    with pytest.raises(RangeError):
        forward_backward_schedule(0.5, 1.0, 0.5, 2.0)
    with pytest.raises(RangeError):
        forward_backward_schedule(1.0, 0.5, 1.5, 2.0)


def test_schedule_sweeps_between_the_two_speeds():
    c1, c2, tau = 0.8, -0.6, 3.0
    positions = [forward_backward_schedule(c1, c2, kappa, tau).terminal_position for kappa in np.linspace(0.0, 1.0, 11)]
    assert positions[0] == pytest.approx(c2 * tau, rel=1e-15)
    assert positions[-1] == pytest.approx(c1 * tau, rel=1e-15)
    assert all(a < b for a, b in zip(positions, positions[1:]))
    assert all(c2 * tau <= p <= c1 * tau for p in positions)
