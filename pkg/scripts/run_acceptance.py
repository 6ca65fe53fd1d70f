"""
Minute-scale acceptance runs: grid simulation against the analytic speeds.
Run: python scripts/run_acceptance.py
"""
import sys
import os

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np

from src.config.run_config import load_run_config
from src.main import configure_logging
from src.models import KppModel, ReactionKPP, UniformKernel
from src.services.analysis.speeds import exp_decay_speed, spreading_speeds
from src.services.simulation import SimConfig, TableData, discretize, fit_for, run

CONFIGS = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "configs")

C_STAR = 0.90526
EXP_LAMBDAS = [0.5, 1.0, 1.5, 1.91501]


def simulate(name, *overrides):
    """Load one config from configs/ and run it in-process."""
    config = load_run_config(os.path.join(CONFIGS, name), overrides)
    model = config.build_model()
    return model, run(model, config.simulate.to_sim_config())


def report(label, passed, detail):
    mark = "✅" if passed else "❌"
    print(f"   {mark} {label}: {detail}")
    return passed


def check_case_iii():
    """Bump datum, uniform kernel: fitted speeds within 5% of ±c*."""
    _, result = simulate("simulate_case_iii.toml")
    right = fit_for(result.fits, 0.5, "right").speed
    left = fit_for(result.fits, 0.5, "left").speed
    return all([
        report("правый фронт", abs(right - C_STAR) <= 0.05 * C_STAR, f"{right:.5f} (c* = {C_STAR})"),
        report("левый фронт", abs(left + C_STAR) <= 0.05 * C_STAR, f"{left:.5f} (c* = {-C_STAR})"),
    ])


def check_exponential_data():
    """e^{−λ|x|} data: speeds follow c(λ) and decrease with λ."""
    fitted = []
    passed = True
    for lam in EXP_LAMBDAS:
        model, result = simulate("simulate_exponential.toml", f"simulate.initial.lam={lam}")
        expected = exp_decay_speed(model, lam)
        speed = fit_for(result.fits, 0.5, "right").speed
        fitted.append(speed)
        passed &= report(f"λ = {lam}", abs(speed - expected) <= 0.05 * expected, f"{speed:.5f} (c(λ) = {expected:.5f})")

    decreasing = all(a > b for a, b in zip(fitted, fitted[1:]))
    passed &= report("скорости убывают по λ", decreasing, ", ".join(f"{s:.4f}" for s in fitted))
    return passed


def check_extinction():
    """Case i: both fronts move right and the population at 0 dies out, unlike the plateau."""
    model, bump = simulate("simulate_extinction.toml")
    speeds = spreading_speeds(model)
    left = fit_for(bump.fits, 0.5, "left").speed
    right = fit_for(bump.fits, 0.5, "right").speed
    at_zero = bump.probes[-1].center_value

    _, plateau = simulate("simulate_plateau.toml")
    plateau_min = min(p.center_value for p in plateau.probes)

    return all([
        report("случай", speeds.classification.value == "i", speeds.classification.value),
        report("обе скорости > 0", left > 0 and right > 0, f"{left:.4f}, {right:.4f}"),
        report("u(T, 0) < 0.01", at_zero < 0.01, f"{at_zero:.3e}"),
        report("плато: u(t, 0) ≥ 0.05", plateau_min >= 0.05, f"min {plateau_min:.4f}"),
    ])


def check_symmetry():
    """Symmetric kernel and bump: symmetric and decreasing in |x| at every output."""
    _, result = simulate("simulate_symmetry.toml")
    asymmetry = max(s.asymmetry for s in result.symmetry)
    violation = max(s.monotone_violation for s in result.symmetry)
    return all([
        report("асимметрия ≤ 1e-10", asymmetry <= 1e-10, f"{asymmetry:.3e}"),
        report("монотонность ≤ 1e-10", violation <= 1e-10, f"{violation:.3e}"),
    ])


def check_comparison(pairs=20, seed=11):
    """Random ordered initial pairs stay ordered."""
    model = KppModel(UniformKernel(-1.0, 1.0), ReactionKPP.logistic(1.0))
    rng = np.random.default_rng(seed)
    knots = np.linspace(-20.0, 20.0, 41)

    def config(values):
        return SimConfig(
            x_min=-30.0,
            x_max=30.0,
            dx=0.1,
            t_final=10.0,
            initial=TableData.from_points(knots, values),
            check_boundary=False,
        )

    operator = None
    worst = 0.0
    for _ in range(pairs):
        upper = rng.uniform(0.0, 1.0, knots.size)
        lower = upper * rng.uniform(0.0, 1.0, knots.size)
        first = config(upper)
        operator = operator or discretize(model, first)
        high = run(model, first, operator, fit=False).final.values
        low = run(model, config(lower), operator, fit=False).final.values
        worst = max(worst, float(np.max(low - high)))
    return report(f"{pairs} пар упорядочены", worst <= 1e-10, f"max(u_low − u_high) = {worst:.3e}")


def run_acceptance():
    print("=" * 60)
    print("   ПРИЁМОЧНЫЕ ПРОГОНЫ")
    print("=" * 60)

    configure_logging()
    steps = [
        ("Равномерное ядро, компактные данные", check_case_iii),
        ("Экспоненциальные данные", check_exponential_data),
        ("Вымирание в точке 0 (случай i)", check_extinction),
        ("Симметрия и монотонность", check_symmetry),
        ("Принцип сравнения", check_comparison),
    ]
    results = []
    for number, (title, check) in enumerate(steps, start=1):
        print(f"\n{number}. {title}...")
        results.append(check())

    print("\n" + "=" * 60)
    if all(results):
        print("   ✅ ГОТОВО! Все проверки пройдены")
    else:
        failed = [title for (title, _), ok in zip(steps, results) if not ok]
        print(f"   ❌ Не пройдено: {', '.join(failed)}")
    print("=" * 60)
    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(run_acceptance())
