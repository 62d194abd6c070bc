"""Variational iteration recursion and its closed form for the product kernel."""

from fractions import Fraction

import pytest

from cbreak.expalg import ExpPoly
from cbreak.model import BUILTIN_LABELS, builtin_case
from cbreak.vim import (
    closed_form_check_example1,
    closed_form_component_example1,
    exact_taylor_truncation_example1,
    vim_solve,
    vim_step,
)


def _e(coeff, j=0, k=0, lam=1):
    return ExpPoly.term(Fraction(coeff), j=j, k=k, lam=lam)


def test_vim_solve_validates_order():
    with pytest.raises(ValueError):
        vim_solve(builtin_case("example1"), -1)


def test_zeroth_component_is_initial_condition():
    for label in BUILTIN_LABELS:
        spec = builtin_case(label)
        series = vim_solve(spec, 2)
        assert series.method == "vim"
        assert series.components[0] == spec.init


def test_product_kernel_components_match_published_forms():
    # f_1 = s(2 - x)e^(-x), f_2 = s^2 (1 - 2x + x^2/2) e^(-x), ...
    series = vim_solve(builtin_case("example1"), 5)
    f = series.components
    assert f[1] == _e(2, j=1) + _e(-1, j=1, k=1)
    assert f[2] == _e(1, j=2) + _e(-2, j=2, k=1) + _e(Fraction(1, 2), j=2, k=2)
    assert f[3] == _e(-1, j=3, k=1) + _e(1, j=3, k=2) + _e(Fraction(-1, 6), j=3, k=3)
    assert f[4] == _e(Fraction(1, 2), j=4, k=2) + _e(Fraction(-1, 3), j=4, k=3) + _e(
        Fraction(1, 24), j=4, k=4
    )
    assert f[5] == _e(Fraction(-1, 6), j=5, k=3) + _e(Fraction(1, 12), j=5, k=4) + _e(
        Fraction(-1, 120), j=5, k=5
    )


def test_closed_form_component_pattern():
    with pytest.raises(ValueError):
        closed_form_component_example1(1)
    f2 = closed_form_component_example1(2)
    assert f2 == _e(1, j=2) + _e(-2, j=2, k=1) + _e(Fraction(1, 2), j=2, k=2)


def test_closed_form_check_to_order_ten():
    report = closed_form_check_example1(10)
    assert report.ok, report.first_mismatch


def test_truncation_equals_taylor_expansion_of_exact_solution():
    import math

    # spot check the Taylor builder itself against the closed solution
    phi = exact_taylor_truncation_example1(8)
    for s in (0.05, 0.1):
        for x in (0.5, 1.0, 2.0):
            val = (1 + s) ** 2 * math.exp(-x * (1 + s))
            # degree-8 truncation at small s is extremely close to the limit
            assert phi.eval(s, x) == pytest.approx(val, abs=1e-9)


def test_time_degree_grows_with_component_index():
    series = vim_solve(builtin_case("example1"), 6)
    for k, comp in enumerate(series.components):
        assert comp.time_degree() == (k if k else 0)


def test_components_beyond_first_carry_no_mass():
    # M_1 is conserved, so every correction term has zero first moment
    for label in BUILTIN_LABELS:
        series = vim_solve(builtin_case(label), 4)
        for comp in series.components[1:]:
            assert comp.total_integral(1).is_zero


def test_vim_step_matches_manual_first_iteration():
    # f_1 = int_0^s (birth - death)(f_0, f_0) dt since d(f_0)/dt = 0
    from cbreak.model import collision_rate

    for label in BUILTIN_LABELS:
        spec = builtin_case(label)
        manual = collision_rate(spec, spec.init, spec.init).int_time()
        assert vim_step(spec, spec.init) == manual
