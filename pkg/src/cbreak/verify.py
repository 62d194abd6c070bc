"""Cross-checks between the symbolic engine and the numerical oracle."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from cbreak.expalg import ExpPoly
from cbreak.model import CaseSpec, birth, death
from cbreak.oracle import (
    MomentOdeSystem,
    QuadratureConfig,
    quad_birth,
    quad_death,
    rk4_moments,
)
from cbreak.analysis import exact_reference


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def random_exppoly(rng: random.Random, max_terms: int = 3) -> ExpPoly:
    """Small random decaying exponential polynomial for property checks."""
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        j = rng.randint(0, 2)
        k = rng.randint(0, 3)
        lam = Fraction(rng.randint(1, 6), rng.randint(1, 2))
        coeff = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        if coeff == 0:
            coeff = Fraction(1)
        key = (j, k, lam)
        terms[key] = terms.get(key, Fraction(0)) + coeff
    poly = ExpPoly(terms)
    return poly if not poly.is_zero else ExpPoly.term(1, lam=1)


def check_birth_death_quadrature(
    spec: CaseSpec, seed: int = 0, samples: int = 20, rel_tol: float = 1e-7
) -> CheckResult:
    """Symbolic birth/death vs adaptive quadrature on randomized inputs."""
    rng = random.Random(seed)
    cfg = QuadratureConfig(rel_tol=1e-10, abs_tol=1e-13)
    worst = 0.0
    for _ in range(samples):
        f = random_exppoly(rng)
        g = random_exppoly(rng)
        s = rng.uniform(0.0, 1.0)
        eps = rng.uniform(0.05, 3.0)
        sym_b = birth(spec, f, g).eval(s, eps)
        sym_d = death(spec, f, g).eval(s, eps)
        num_b = quad_birth(spec, f, g, eps, cfg, s=s)
        num_d = quad_death(spec, f, g, eps, cfg, s=s)
        for sym, num in ((sym_b, num_b), (sym_d, num_d)):
            rel = abs(sym - num) / max(1.0, abs(sym))
            worst = max(worst, rel)
    ok = worst <= rel_tol
    return CheckResult(
        name=f"birth/death quadrature [{spec.label or 'custom'}]",
        ok=ok,
        detail=f"worst relative deviation {worst:.3e} (tol {rel_tol:.1e})",
    )


def check_rk4_vs_analytic(label: str, tol: float = 1e-6) -> CheckResult:
    """RK4 moment curves against the closed moment formulas."""
    from cbreak.model import builtin_case

    spec = builtin_case(label)
    ref = exact_reference(label)
    if label in ("example1", "example2"):
        j_set, t_end = (0, 1), 1.0
    else:
        j_set, t_end = (0, 1, 2), 0.5
    system = MomentOdeSystem(spec=spec, j_set=tuple(j_set))
    times, curves = rk4_moments(system, t_end=t_end, dt=1e-4)
    worst = 0.0
    for j in j_set:
        exact_vals = np.array([ref.moment(j, t) for t in times])
        worst = max(worst, float(np.max(np.abs(curves[j] - exact_vals))))
    ok = worst <= tol
    return CheckResult(
        name=f"rk4 vs analytic moments [{label}]",
        ok=ok,
        detail=f"worst absolute deviation {worst:.3e} (tol {tol:.1e})",
    )


def check_rk4_order(low: float = 10.0, high: float = 24.0) -> CheckResult:
    """Step-halving error ratio on the blow-up moment ODE, expecting ~16x."""
    from cbreak.model import builtin_case

    spec = builtin_case("example3")
    system = MomentOdeSystem(spec=spec, j_set=(0,))
    ref = exact_reference("example3")
    errors = []
    for dt in (0.02, 0.01):
        _, curves = rk4_moments(system, t_end=0.5, dt=dt)
        errors.append(abs(curves[0][-1] - ref.moment(0, 0.5)))
    ratio = errors[0] / errors[1]
    ok = low <= ratio <= high
    return CheckResult(
        name="rk4 order-4 convergence [example3]",
        ok=ok,
        detail=f"halving error ratio {ratio:.2f} (expected ~16)",
    )


def run_all_checks(spec: CaseSpec, seed: int = 0, samples: int = 20) -> list[CheckResult]:
    results = [check_birth_death_quadrature(spec, seed=seed, samples=samples)]
    if spec.label in ("example1", "example2", "example3"):
        results.append(check_rk4_vs_analytic(spec.label))
    results.append(check_rk4_order())
    return results
