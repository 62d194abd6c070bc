"""Variational iteration: components via the correction functional.

Each new component is the action of the iteration operator on the running
partial sum,

    f_{k+1} = int_0^s ( -d(phi_k)/dt + birth(phi_k, phi_k) - death(phi_k, phi_k) ) dt,

with the Lagrange multiplier fixed at -1.  An algebraically equivalent
telescoped form, f^in - phi_k + int_time(birth - death), is computed as well
and the two must agree exactly; a mismatch means the algebra layer is broken.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from cbreak.expalg import ExpPoly
from cbreak.model import CaseSpec, builtin_case, collision_rate
from cbreak.series import SeriesSolution


class StepMismatch(AssertionError):
    """The two equivalent forms of the iteration step disagreed."""


def vim_step(spec: CaseSpec, phi_k: ExpPoly) -> ExpPoly:
    """Next component from the current partial sum phi_k."""
    interaction = collision_rate(spec, phi_k, phi_k).int_time()
    direct = (-phi_k.ddt()).int_time() + interaction
    telescoped = spec.init - phi_k + interaction
    if direct != telescoped:
        raise StepMismatch("direct and telescoped iteration steps differ")
    return direct


def vim_solve(spec: CaseSpec, n: int) -> SeriesSolution:
    """Components f_0..f_n by repeated steps on running partial sums."""
    if n < 0:
        raise ValueError("order must be non-negative")
    components = [spec.init]
    phi = spec.init
    for _ in range(n):
        nxt = vim_step(spec, phi)
        components.append(nxt)
        phi = phi + nxt
    return SeriesSolution(method="vim", spec=spec, components=tuple(components))


# -- closed form for the product-kernel case --------------------------------------

def closed_form_component_example1(k: int) -> ExpPoly:
    """k-th component of the known closed-form series, k >= 2.

    coefficient pattern: ((-1)^k x^(k-2)/(k-2)! + 2(-1)^(k-1) x^(k-1)/(k-1)!
    + (-1)^k x^k/k!) e^(-x) s^k.
    """
    if k < 2:
        raise ValueError("closed-form pattern starts at k = 2")
    sign = Fraction((-1) ** k)
    return ExpPoly(
        {
            (k, k - 2, Fraction(1)): sign / math.factorial(k - 2),
            (k, k - 1, Fraction(1)): -2 * sign / math.factorial(k - 1),
            (k, k, Fraction(1)): sign / math.factorial(k),
        }
    )


def exact_taylor_truncation_example1(n: int) -> ExpPoly:
    """Degree-n time-Taylor truncation of (1+s)^2 exp(-x(1+s)).

    The s^k coefficient is e^(-x) ((-x)^k/k! + 2(-x)^(k-1)/(k-1)!
    + (-x)^(k-2)/(k-2)!), negative-index pieces dropped.
    """
    acc: dict[tuple[int, int, Fraction], Fraction] = {}
    for k in range(n + 1):
        for shift, factor in ((0, Fraction(1)), (1, Fraction(2)), (2, Fraction(1))):
            p = k - shift
            if p < 0:
                continue
            coeff = factor * Fraction((-1) ** p) / math.factorial(p)
            key = (k, p, Fraction(1))
            acc[key] = acc.get(key, Fraction(0)) + coeff
    return ExpPoly(acc)


@dataclass(frozen=True)
class ClosedFormReport:
    ok: bool
    first_mismatch: tuple[int, str] | None = None


def closed_form_check_example1(n: int) -> ClosedFormReport:
    """Exact comparison of computed components against the closed pattern.

    Checks every component with 2 <= k <= n and the full truncation against
    the time-Taylor expansion of the exact solution.
    """
    if n < 2:
        raise ValueError("closed-form check needs order n >= 2")
    series = vim_solve(builtin_case("example1"), n)
    for k in range(2, n + 1):
        expected = closed_form_component_example1(k)
        if series.components[k] != expected:
            diff = series.components[k] - expected
            return ClosedFormReport(ok=False, first_mismatch=(k, repr(diff)))
    if series.partial_sum(n) != exact_taylor_truncation_example1(n):
        diff = series.partial_sum(n) - exact_taylor_truncation_example1(n)
        return ClosedFormReport(ok=False, first_mismatch=(-1, repr(diff)))
    return ClosedFormReport(ok=True)
