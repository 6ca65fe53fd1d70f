import math

import numpy as np
import pytest

from src.services.calculation.quadrature import integrate
from src.services.calculation.roots import (
    bisection_root,
    bracket_increasing,
    bracket_on_ray,
    brent_root,
)
from src.utils.errors import BracketNotFoundError, QuadratureError


def test_ray_bracket_doubles_outward():
    assert bracket_on_ray(lambda x: x - 3.0, 1.0, math.inf) == (2.0, 4.0, 2)


def test_ray_bracket_halves_toward_zero():
    assert bracket_on_ray(lambda x: x - 0.1, 1.0, math.inf) == (0.0625, 0.125, 3)


def test_ray_bracket_approaches_finite_limit():
    inner, outer, expansions = bracket_on_ray(lambda x: x - 1.9, 1.0, 2.0)
    assert (inner, outer, expansions) == (1.875, 1.9375, 4)


def test_ray_bracket_runs_out_of_budget():
    with pytest.raises(BracketNotFoundError):
        bracket_on_ray(lambda x: -1.0, 1.0, math.inf, max_doublings=5)


def test_increasing_bracket_both_directions():
    assert bracket_increasing(lambda x: x - 2.5, -math.inf, math.inf) == (2.0, 4.0, 2)
    assert bracket_increasing(lambda x: x + 2.5, -math.inf, math.inf) == (-4.0, -2.0, 2)


def test_refinement_finds_sqrt_two():
    f = lambda x: x * x - 2.0
    assert brent_root(f, 1.0, 2.0).root == pytest.approx(math.sqrt(2.0), abs=1e-13)
    assert bisection_root(f, 2.0, 1.0).root == pytest.approx(math.sqrt(2.0), abs=1e-12)


def test_integrate_with_break_points():
    assert integrate(math.sin, 0.0, math.pi) == pytest.approx(2.0, rel=1e-12)
    assert integrate(abs, -1.0, 1.0, points=[0.0, 5.0]) == pytest.approx(1.0, rel=1e-12)
    assert integrate(math.sin, 1.0, 1.0) == 0.0


def test_integrate_reports_non_convergence():
    with pytest.raises(QuadratureError):
        integrate(lambda x: np.sin(1.0 / x), 1e-8, 1.0, limit=5)
