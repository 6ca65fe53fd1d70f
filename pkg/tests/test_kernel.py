import math

import numpy as np
import pytest

from src.models import (
    AsymmetricExponentialKernel,
    Hypothesis,
    KppModel,
    NormalKernel,
    ReactionKPP,
    TabulatedKernel,
    UniformKernel,
    exp_abscissas,
    kernel_density,
    kernel_from_params,
    mgf,
    mgf_prime,
    reflect,
    validate_kernel,
)
from src.utils.errors import DomainError, InvalidModelError

FAMILIES = [
    NormalKernel(mean=0.3, variance=0.8),
    UniformKernel(b=-1.0, a=2.0),
    AsymmetricExponentialKernel(theta_left=1.5, theta_right=2.5),
    TabulatedKernel.from_points([-1.0, 0.0, 1.0, 2.0], [0.0, 0.6, 0.4, 0.0]),
]


@pytest.mark.parametrize("kernel", FAMILIES)
def test_mgf_at_zero_is_exactly_one(kernel):
    assert mgf(kernel, 0.0) == 1.0


@pytest.mark.parametrize("kernel", FAMILIES)
@pytest.mark.parametrize("lam", [-0.9, -0.3, 0.4, 1.2])
def test_closed_form_matches_quadrature(kernel, lam):
    assert kernel.mgf(lam) == pytest.approx(kernel.mgf_quadrature(lam), rel=1e-8)
    assert kernel.mgf_prime(lam) == pytest.approx(kernel.mgf_quadrature(lam, order=1), rel=1e-7, abs=1e-10)


def test_uniform_mgf_is_sinh_ratio():
    k = UniformKernel(b=-1.0, a=1.0)
    for lam in (0.01, 0.5, 1.5, 3.0):
        assert k.mgf(lam) == pytest.approx(math.sinh(lam) / lam, rel=1e-13)


def test_normal_mgf_closed_form():
    k = NormalKernel(mean=0.5, variance=2.0)
    assert k.mgf(0.7) == pytest.approx(math.exp(0.5 * 0.7 + 0.5 * 2.0 * 0.49), rel=1e-14)
    assert k.first_moment() == pytest.approx(0.5, abs=1e-15)


def test_asymmetric_exponential_mgf_and_abscissas():
    k = AsymmetricExponentialKernel(theta_left=1.0, theta_right=3.0)
    assert exp_abscissas(k) == (-1.0, 3.0)
    lam = 1.2
    assert k.mgf(lam) == pytest.approx(3.0 / ((3.0 - lam) * (1.0 + lam)), rel=1e-14)


def test_triangular_table_mgf():
    k = TabulatedKernel.from_points([-1.0, 0.0, 1.0], [0.0, 1.0, 0.0])
    lam = 0.7
    assert k.mgf(lam) == pytest.approx(2.0 * (math.cosh(lam) - 1.0) / lam ** 2, rel=1e-12)
    assert k.mgf_prime(0.0) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("lam", [2.0, 2.5, -1.5])
def test_outside_abscissas_is_domain_error(lam):
    k = AsymmetricExponentialKernel(theta_left=1.5, theta_right=2.0)
    with pytest.raises(DomainError):
        k.mgf(lam)
    with pytest.raises(DomainError):
        mgf_prime(k, lam)


def test_reflection_flips_the_moment_generating_function():
    k = UniformKernel(b=-1.0, a=2.0)
    r = reflect(k)
    assert r.support() == (-2.0, 1.0)
    assert r.mgf(0.8) == pytest.approx(k.mgf(-0.8), rel=1e-13)
    assert r.first_moment() == pytest.approx(-k.first_moment(), abs=1e-15)


def test_table_supported_right_of_zero_violates_k2():
    k = TabulatedKernel.from_points([0.5, 0.75, 1.0], [0.0, 4.0, 0.0])
    result = validate_kernel(k)
    assert not result.ok
    assert Hypothesis.K2 in [v.hypothesis for v in result.violations]


def test_table_mass_drift_is_renormalized_and_recorded():
    k = TabulatedKernel.from_points([-1.0, 0.0, 1.0], [0.0, 0.9, 0.0])
    assert k.correction == pytest.approx(1.0 / 0.9, rel=1e-14)
    assert float(k.cdf(1.0)) == pytest.approx(1.0, abs=1e-14)
    assert validate_kernel(k).ok


def test_table_mass_drift_beyond_limit_is_rejected():
    with pytest.raises(InvalidModelError):
        TabulatedKernel.from_points([-1.0, 0.0, 1.0], [0.0, 0.5, 0.0])


def test_table_from_file(tmp_path):
    path = tmp_path / "kernel.txt"
    path.write_text("# x density\n-1 0\n0 1\n1 0\n")
    k = TabulatedKernel.from_file(path)
    assert k.support() == (-1.0, 1.0)
    assert k.source == str(path)


def test_missing_table_file():
    with pytest.raises(InvalidModelError):
        TabulatedKernel.from_file("does/not/exist.txt")


@pytest.mark.parametrize("build", [
    lambda: UniformKernel(b=1.0, a=-1.0),
    lambda: NormalKernel(mean=0.0, variance=0.0),
    lambda: AsymmetricExponentialKernel(theta_left=-1.0, theta_right=1.0),
    lambda: TabulatedKernel.from_points([0.0, 0.0], [1.0, 1.0]),
])
def test_bad_parameters_are_rejected(build):
    with pytest.raises(InvalidModelError):
        build()


def test_monotone_on_positive_half_axis():
    assert NormalKernel(0.0, 1.0).is_nonincreasing_on_positive()
    assert UniformKernel(-1.0, 1.0).is_nonincreasing_on_positive()
    assert not NormalKernel(1.0, 1.0).is_nonincreasing_on_positive()


def test_truncation_bounds_hold_the_requested_mass():
    k = NormalKernel(mean=0.2, variance=0.5)
    lo, hi = k.truncation_bounds(1e-12)
    assert k.mass_outside(lo, hi) == pytest.approx(1e-12, rel=1e-6)


def test_cdf_of_asymmetric_exponential_splits_mass():
    k = AsymmetricExponentialKernel(theta_left=1.0, theta_right=3.0)
    assert k.mass_left() == pytest.approx(0.75, rel=1e-14)
    assert k.mass_right() == pytest.approx(0.25, rel=1e-14)
    assert np.all(np.diff(k.cdf(np.linspace(-5, 5, 101))) >= 0)


@pytest.mark.parametrize("kernel", FAMILIES[:3])
def test_params_rebuild_the_same_kernel(kernel):
    assert kernel_from_params(kernel.to_params()) == kernel


def test_density_values():
    np.testing.assert_allclose(kernel_density(UniformKernel(-1.0, 1.0), np.array([-2.0, 0.0, 0.5, 2.0])), [0.0, 0.5, 0.5, 0.0])
    assert float(kernel_density(NormalKernel(0.3, 2.0), 0.3)) == pytest.approx(1.0 / math.sqrt(4.0 * math.pi), rel=1e-14)
    assert float(kernel_density(AsymmetricExponentialKernel(1.0, 3.0), -1.0)) < float(kernel_density(AsymmetricExponentialKernel(1.0, 3.0), 0.0))


LAMBDAS = np.linspace(-1.2, 1.2, 25)


@pytest.mark.parametrize("kernel", FAMILIES)
def test_mgf_is_strictly_convex(kernel):
    values = np.array([mgf(kernel, lam) for lam in LAMBDAS])
    assert np.all(values[:-2] - 2.0 * values[1:-1] + values[2:] > 0)


@pytest.mark.parametrize("kernel", FAMILIES)
def test_mgf_prime_is_strictly_increasing(kernel):
    slopes = np.array([mgf_prime(kernel, lam) for lam in LAMBDAS])
    assert np.all(np.diff(slopes) > 0)


@pytest.mark.parametrize("kernel", FAMILIES)
def test_reflection_flips_every_family(kernel):
    mirrored = reflect(kernel)
    for lam in LAMBDAS:
        assert mgf(mirrored, lam) == pytest.approx(mgf(kernel, -lam), rel=1e-12)


def test_validation_reports_the_table_correction():
    k = TabulatedKernel.from_points([-1.0, 0.0, 1.0], [0.0, 0.9, 0.0])
    assert validate_kernel(k).correction == pytest.approx(1.0 / 0.9, rel=1e-14)
    assert KppModel(k, ReactionKPP.logistic(1.0)).validate().correction == pytest.approx(1.0 / 0.9, rel=1e-14)
    assert validate_kernel(UniformKernel(-1.0, 1.0)).correction is None


def test_table_params_keep_the_correction():
    k = TabulatedKernel.from_points([-1.0, 0.0, 1.0], [0.0, 0.9, 0.0])
    rebuilt = kernel_from_params(k.to_params())
    assert rebuilt.correction == pytest.approx(1.0 / 0.9, rel=1e-12)
    np.testing.assert_allclose(rebuilt.ys, k.ys, rtol=1e-14)
    np.testing.assert_array_equal(rebuilt.xs, k.xs)
