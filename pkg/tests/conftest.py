"""Shared fixtures."""
import pytest

from src.config.settings import get_settings
from src.models import AsymmetricExponentialKernel, KppModel, NormalKernel, ReactionKPP, UniformKernel


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch, tmp_path):
    """Settings rebuilt per test, with log files kept out of the working tree."""
    monkeypatch.setenv("KPP_LOG_FILE", str(tmp_path / "logs" / "kpp_{time}.log"))
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def logistic():
    return ReactionKPP.logistic(1.0)


@pytest.fixture
def uniform_model(logistic):
    """uniform(−1, 1) with logistic(1): c_r* ≈ 0.90526."""
    return KppModel(UniformKernel(b=-1.0, a=1.0), logistic)


@pytest.fixture
def normal_model(logistic):
    return KppModel(NormalKernel(mean=0.0, variance=1.0), logistic)


@pytest.fixture
def laplace_model(logistic):
    """Symmetric exponential kernel with θ_l = θ_r = 2."""
    return KppModel(AsymmetricExponentialKernel(theta_left=2.0, theta_right=2.0), logistic)
