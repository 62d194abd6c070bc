"""Optimized decomposition: bilinear convolution polynomials Q_k plus a
linearization-corrected update.

    f_1     = L^-1[Q_0]
    f_2     = L^-1[Q_1 - C(x) f_1]
    f_{k+1} = L^-1[Q_k - C(x)(f_k - f_{k-1})],  k >= 2,

where L^-1 is the time integral from 0, C(x) the linearization coefficient
of the nonlinear operator at t = 0, and Q_k = sum_{i+j=k} (birth - death)(f_i, f_j).
"""

from __future__ import annotations

from typing import Sequence

from cbreak.expalg import ExpPoly
from cbreak.model import CaseSpec, collision_rate, linearization_coefficient
from cbreak.series import SeriesSolution


def q_polynomial(spec: CaseSpec, components: Sequence[ExpPoly], k: int) -> ExpPoly:
    """Q_k: the order-k slice of the quadratic nonlinearity."""
    if k < 0:
        raise ValueError("index must be non-negative")
    if len(components) <= k:
        raise ValueError(f"need components f_0..f_{k}, got {len(components)}")
    acc = ExpPoly.zero()
    for i in range(k + 1):
        acc = acc + collision_rate(spec, components[i], components[k - i])
    return acc


def odm_step(spec: CaseSpec, components: Sequence[ExpPoly], k: int) -> ExpPoly:
    """Produce f_{k+1} from f_0..f_k by the three-branch update rule."""
    q_k = q_polynomial(spec, components, k)
    if k == 0:
        integrand = q_k
    else:
        c_eps = linearization_coefficient(spec)
        if k == 1:
            correction = components[1]
        else:
            correction = components[k] - components[k - 1]
        integrand = q_k - c_eps * correction
    return integrand.int_time()


def odm_solve(spec: CaseSpec, n: int) -> SeriesSolution:
    """Components f_0..f_n of the decomposition series."""
    if n < 0:
        raise ValueError("order must be non-negative")
    components = [spec.init]
    for k in range(n):
        components.append(odm_step(spec, components, k))
    return SeriesSolution(method="odm", spec=spec, components=tuple(components))


def truncation_identity_holds(spec: CaseSpec, n: int) -> bool:
    """Check psi_n = f^in + L^-1( sum_{k<n} Q_k - C(x) f_{n-1} ) exactly.

    The middle sum is the quadratic nonlinearity of psi_{n-1} restricted to
    bilinear orders i+j <= n-1; the identity is exact at that restriction.
    The linearization corrections telescope to C(x) f_{n-1} only from n = 2
    on; psi_1 carries no correction at all.
    """
    if n < 1:
        raise ValueError("identity needs n >= 1")
    series = odm_solve(spec, n)
    comps = series.components
    q_sum = ExpPoly.zero()
    for k in range(n):
        q_sum = q_sum + q_polynomial(spec, comps, k)
    correction = ExpPoly.zero()
    if n >= 2:
        correction = linearization_coefficient(spec) * comps[n - 1]
    rhs = spec.init + (q_sum - correction).int_time()
    return series.partial_sum(n) == rhs
