import math

import numpy as np
import pytest

from src.models import Hypothesis, KppModel, ReactionKPP, UniformKernel, validate_reaction
from src.utils.errors import InvalidModelError


@pytest.mark.parametrize("reaction, f0", [
    (ReactionKPP.logistic(2.0), 2.0),
    (ReactionKPP.sine(1.0), math.pi),
    (ReactionKPP.generalized_logistic(1.5, 2.0), 1.5),
])
def test_builtin_reactions_are_kpp(reaction, f0):
    assert reaction.f0 == pytest.approx(f0, rel=1e-15)
    assert validate_reaction(reaction).ok


def test_reaction_above_its_tangent_is_flagged():
    f = ReactionKPP.custom(lambda u: u * (1.0 - u) * (1.0 + 2.0 * u), f0=1.0, name="hump")
    hypotheses = [v.hypothesis for v in validate_reaction(f).violations]
    assert hypotheses == [Hypothesis.KPP_BOUND]


def test_reaction_not_vanishing_at_one_is_flagged():
    f = ReactionKPP.custom(lambda u: u * (0.5 - u), f0=0.5)
    hypotheses = {v.hypothesis for v in validate_reaction(f).violations}
    assert Hypothesis.ENDPOINTS in hypotheses
    assert Hypothesis.POSITIVE in hypotheses


def test_invalid_model_lists_every_violation():
    f = ReactionKPP.custom(lambda u: u * (0.5 - u), f0=0.5)
    with pytest.raises(InvalidModelError) as exc:
        KppModel(UniformKernel(-1.0, 1.0), f).require_valid()
    assert "f(1)" in str(exc.value)


@pytest.mark.parametrize("build", [
    lambda: ReactionKPP.logistic(0.0),
    lambda: ReactionKPP.sine(-1.0),
    lambda: ReactionKPP.generalized_logistic(1.0, 0.0),
])
def test_bad_reaction_parameters(build):
    with pytest.raises(InvalidModelError):
        build()


def test_lipschitz_bound_of_logistic():
    assert ReactionKPP.logistic(2.0).lipschitz_bound() == pytest.approx(2.0, rel=1e-12)


def test_kpp_threshold_of_logistic():
    threshold = ReactionKPP.logistic(1.0).kpp_threshold(0.5, samples=2000)
    assert 0.48 < threshold <= 0.5


def test_power_bound_of_logistic():
    assert ReactionKPP.logistic(1.0).power_bound(1.0, 1.0) == pytest.approx(1.0, rel=1e-9)


def test_reaction_is_vectorized():
    u = np.linspace(0.0, 1.0, 5)
    np.testing.assert_allclose(ReactionKPP.logistic(1.0)(u), u * (1 - u))
