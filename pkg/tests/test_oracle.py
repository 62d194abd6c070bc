"""Numerical oracle: quadrature, moment closures, RK4 integration."""

import math

import numpy as np
import pytest

from cbreak.expalg import ExpPoly
from cbreak.model import builtin_case
from cbreak.oracle import (
    DomainExit,
    MomentOdeSystem,
    NotClosed,
    QuadratureConfig,
    ToleranceNotMet,
    adaptive_simpson,
    moment_rhs,
    quad_birth,
    quad_death,
    rk4_moments,
)

CFG = QuadratureConfig()


def test_quadrature_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(rel_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureConfig(abs_tol=-1.0)


def test_adaptive_simpson_polynomials_and_exponentials():
    assert adaptive_simpson(lambda x: x**2, 0.0, 1.0, CFG) == pytest.approx(1 / 3, rel=1e-12)
    assert adaptive_simpson(lambda x: math.sin(x), 0.0, math.pi, CFG) == pytest.approx(2.0, rel=1e-10)
    assert adaptive_simpson(lambda x: x, 1.0, 1.0, CFG) == 0.0
    assert adaptive_simpson(lambda x: x, 2.0, 1.0, CFG) == 0.0


def test_adaptive_simpson_resolves_narrow_decay_on_long_interval():
    # all the mass sits in x < 2 of a 40-long interval; a naive three-point
    # starting estimate sees only zeros here
    value = adaptive_simpson(lambda x: math.exp(-10.0 * x), 0.0, 40.0, CFG)
    assert value == pytest.approx(0.1, rel=1e-10)


def test_adaptive_simpson_depth_limit():
    shallow = QuadratureConfig(rel_tol=1e-14, abs_tol=1e-16, max_depth=3)
    with pytest.raises(ToleranceNotMet):
        adaptive_simpson(lambda x: math.exp(-x) / math.sqrt(x + 1e-12), 0.0, 10.0, shallow)


def test_quad_birth_death_known_values_product_kernel():
    # K = xr, b = 2/r, f = g = e^(-x): birth = 2 e^(-eps), death = eps e^(-eps)
    spec = builtin_case("example1")
    f = ExpPoly.term(1, lam=1)
    for eps in (0.25, 1.0, 2.5):
        assert quad_birth(spec, f, f, eps, CFG) == pytest.approx(2 * math.exp(-eps), rel=1e-9)
        assert quad_death(spec, f, f, eps, CFG) == pytest.approx(eps * math.exp(-eps), rel=1e-9)
    assert quad_birth(spec, ExpPoly.zero(), f, 1.0, CFG) == 0.0
    assert quad_death(spec, f, ExpPoly.zero(), 1.0, CFG) == 0.0


def test_quad_birth_discrete_delta_collapse():
    # constant kernel, daughters at 2/5 and 3/5 of the parent size:
    # birth(eps) = sum_i (w_i/a_i) f(eps/a_i) * M_0[g]
    spec = builtin_case("example3")
    f = ExpPoly.term(1, lam=1)
    eps = 0.8
    expected = (5 / 2 * math.exp(-eps * 5 / 2) + 5 / 3 * math.exp(-eps * 5 / 3)) * 1.0
    assert quad_birth(spec, f, f, eps, CFG) == pytest.approx(expected, rel=1e-9)


def test_moment_rhs_closure_coefficients():
    # product kernel: dM_0/ds = (2/1 - 1) M_1 M_1 = 1 at s = 0
    spec1 = builtin_case("example1")
    assert moment_rhs(spec1, 0, {0: 1.0, 1: 1.0}) == pytest.approx(1.0)
    # mass is conserved: the closure coefficient vanishes for j = 1
    assert moment_rhs(spec1, 1, {}) == 0.0
    # constant kernel: dM_0/ds = (w1 + w2 - 1) M_0^2 = M_0^2
    spec3 = builtin_case("example3")
    assert moment_rhs(spec3, 0, {0: 3.0}) == pytest.approx(9.0)
    # dM_2/ds = ((2/5)^2 + (3/5)^2 - 1) M_2 M_0 = -(12/25) M_2 M_0
    assert moment_rhs(spec3, 2, {0: 1.0, 2: 2.0}) == pytest.approx(-24 / 25)


def test_moment_rhs_not_closed():
    spec1 = builtin_case("example1")
    with pytest.raises(NotClosed):
        moment_rhs(spec1, 2, {1: 1.0, 2: 1.0, 3: 1.0})
    with pytest.raises(NotClosed):
        moment_rhs(spec1, 0, {})  # needs M_1


def test_moment_ode_system_collects_auxiliaries():
    spec = builtin_case("example3")
    system = MomentOdeSystem(spec=spec, j_set=(2,))
    # M_2' couples to M_0, which must join the state automatically
    assert system.state_indices == (0, 2)
    init = system.initial_state()
    assert init.tolist() == [1.0, 2.0]
    with pytest.raises(NotClosed):
        MomentOdeSystem(spec=builtin_case("example1"), j_set=(2,))


def test_rk4_matches_closed_moments():
    # example1: M_0 = 1 + s exactly
    system = MomentOdeSystem(spec=builtin_case("example1"), j_set=(0,))
    times, curves = rk4_moments(system, t_end=1.0, dt=1e-3)
    assert np.allclose(curves[0], 1.0 + times, atol=1e-10)
    with pytest.raises(ValueError):
        rk4_moments(system, t_end=1.0, dt=0.0)


def test_rk4_detects_finite_time_blowup():
    # example3: M_0 = 1/(1-s) leaves every bounded set at s -> 1
    system = MomentOdeSystem(spec=builtin_case("example3"), j_set=(0,))
    with np.errstate(over="ignore"), pytest.raises(DomainExit):
        rk4_moments(system, t_end=1.5, dt=1e-3)
