"""Independent numerical ground truth for the symbolic engine.

Two routes: depth-limited adaptive Simpson quadrature for the birth/death
integrals, and a fixed-step classical Runge-Kutta integrator for the closed
moment ODEs.  Nothing here reuses the closed-form size integrals, so
agreement with the algebra layer is a genuine cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from cbreak.expalg import ExpPoly
from cbreak.model import CaseSpec, Discrete, PowerLaw


class ToleranceNotMet(RuntimeError):
    """Adaptive refinement exhausted max_depth before reaching tolerance."""


class NotClosed(ValueError):
    """The requested moment has no closed right-hand side for this case."""


class DomainExit(RuntimeError):
    """Moment integration left the domain of finite solutions."""


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_depth: int = 48
    outer_cutoff: float | None = None  # None: (40 + max size degree) / min decay rate

    def __post_init__(self) -> None:
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")


def _cutoff(cfg: QuadratureConfig, *polys: ExpPoly) -> float:
    if cfg.outer_cutoff is not None:
        return cfg.outer_cutoff
    degree = max((p.max_size_degree() for p in polys), default=0)
    rates = [lam for p in polys for (_, _, lam), _ in p.terms if lam > 0]
    slowest = float(min(rates)) if rates else 1.0
    return (40.0 + degree) / min(slowest, 1.0)


_INITIAL_PANELS = 32
_MIN_DEPTH = 2


def adaptive_simpson(
    fn: Callable[[float], float], a: float, b: float, cfg: QuadratureConfig
) -> float:
    """Depth-limited adaptive Simpson on [a, b].

    The interval is stratified into uniform panels first so integrands
    concentrated in a small region of a long domain cannot fool the initial
    error estimate, and each panel refines at least _MIN_DEPTH levels.
    """
    if b <= a:
        return 0.0

    def simpson(lo: float, hi: float, flo: float, fmid: float, fhi: float) -> float:
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    def recurse(lo, hi, flo, fmid, fhi, whole, tol, depth):
        mid = 0.5 * (lo + hi)
        fl = fn(0.5 * (lo + mid))
        fr = fn(0.5 * (mid + hi))
        left = simpson(lo, mid, flo, fl, fmid)
        right = simpson(mid, hi, fmid, fr, fhi)
        delta = left + right - whole
        if depth >= _MIN_DEPTH and abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        if depth >= cfg.max_depth:
            raise ToleranceNotMet(f"max depth {cfg.max_depth} reached on [{lo}, {hi}]")
        return recurse(lo, mid, flo, fl, fmid, left, tol / 2.0, depth + 1) + recurse(
            mid, hi, fmid, fr, fhi, right, tol / 2.0, depth + 1
        )

    edges = [a + (b - a) * i / _INITIAL_PANELS for i in range(_INITIAL_PANELS + 1)]
    values = [fn(x) for x in edges]
    mids = [0.5 * (edges[i] + edges[i + 1]) for i in range(_INITIAL_PANELS)]
    mid_values = [fn(x) for x in mids]
    panel_estimates = [
        simpson(edges[i], edges[i + 1], values[i], mid_values[i], values[i + 1])
        for i in range(_INITIAL_PANELS)
    ]
    scale = sum(abs(est) for est in panel_estimates)
    tol = max(cfg.abs_tol, cfg.rel_tol * scale) / _INITIAL_PANELS
    return sum(
        recurse(
            edges[i], edges[i + 1], values[i], mid_values[i], values[i + 1],
            panel_estimates[i], tol, 0,
        )
        for i in range(_INITIAL_PANELS)
    )


def _sigma_factor(spec: CaseSpec, g: ExpPoly, s: float, cfg: QuadratureConfig) -> float:
    a = spec.kernel.a
    cutoff = _cutoff(cfg, g)
    return adaptive_simpson(lambda x: x**a * g.eval(s, x), 0.0, cutoff, cfg)


def quad_birth(
    spec: CaseSpec, f: ExpPoly, g: ExpPoly, eps: float, cfg: QuadratureConfig, s: float = 0.0
) -> float:
    """Birth integral at size eps and time s, by quadrature.

    The kernel family is separable, so the double integral is the product of
    a sigma-integral over [0, cutoff] and a rho-integral over [eps, cutoff];
    for discrete fragmentation the rho-integral collapses analytically at the
    delta roots before any quadrature.
    """
    if f.is_zero or g.is_zero:
        return 0.0
    kern = spec.kernel
    sigma = _sigma_factor(spec, g, s, cfg)
    if isinstance(spec.frag, PowerLaw):
        frag = spec.frag
        cutoff = _cutoff(cfg, f)
        rho = adaptive_simpson(
            lambda x: x ** (kern.a + frag.delta) * f.eval(s, x),
            eps,
            cutoff,
            cfg,
        )
        return float(kern.c * frag.beta) * eps**frag.gamma * rho * sigma
    assert isinstance(spec.frag, Discrete)
    total = 0.0
    for w, a in spec.frag.fragments:
        root = eps / float(a)
        total += float(w / a) * root ** kern.a * f.eval(s, root)
    return float(kern.c) * total * sigma


def quad_death(
    spec: CaseSpec, f: ExpPoly, g: ExpPoly, eps: float, cfg: QuadratureConfig, s: float = 0.0
) -> float:
    """Death integral at size eps and time s, by quadrature."""
    if f.is_zero or g.is_zero:
        return 0.0
    kern = spec.kernel
    return float(kern.c) * eps**kern.a * f.eval(s, eps) * _sigma_factor(spec, g, s, cfg)


# -- closed moment ODEs -----------------------------------------------------------


def _closure_coefficient(spec: CaseSpec, j: int) -> float:
    """Coefficient kappa_j with dM_j/dt = kappa_j * M_{j+a} * M_a.

    Derived by multiplying the equation by x^j and integrating; for the
    supported conservative families the daughter-moment integral collapses to
    a multiple of rho^j.
    """
    if isinstance(spec.frag, PowerLaw):
        frag = spec.frag
        return float(spec.kernel.c) * (
            float(frag.beta) / (frag.gamma + j + 1) - 1.0
        )
    ratio = sum(float(w) * float(a) ** j for w, a in spec.frag.fragments)
    return float(spec.kernel.c) * (ratio - 1.0)


def _required_moments(spec: CaseSpec, j: int) -> tuple[int, ...]:
    return (j + spec.kernel.a, spec.kernel.a)


def _admissible(spec: CaseSpec, j: int) -> bool:
    a = spec.kernel.a
    if a == 0:
        return True
    if a == 1:
        # j=0 needs only the conserved mass; j=1 has a zero coefficient
        return j in (0, 1)
    return False


def moment_rhs(spec: CaseSpec, j: int, moments: Mapping[int, float]) -> float:
    """Closed right-hand side of dM_j/dt, or NotClosed if inadmissible."""
    if not _admissible(spec, j):
        raise NotClosed(f"moment j={j} is not closed for kernel degree {spec.kernel.a}")
    kappa = _closure_coefficient(spec, j)
    if kappa == 0.0:
        return 0.0
    needed = _required_moments(spec, j)
    missing = [idx for idx in needed if idx not in moments]
    if missing:
        raise NotClosed(f"rhs of M_{j} needs moments {missing}")
    return kappa * moments[needed[0]] * moments[needed[1]]


@dataclass(frozen=True)
class MomentOdeSystem:
    """Closed system of moment ODEs for one case."""

    spec: CaseSpec
    j_set: tuple[int, ...]
    state_indices: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        indices = set(self.j_set)
        for j in self.j_set:
            if not _admissible(self.spec, j):
                raise NotClosed(
                    f"moment j={j} is not closed for kernel degree {self.spec.kernel.a}"
                )
            if _closure_coefficient(self.spec, j) != 0.0:
                indices.update(_required_moments(self.spec, j))
        for j in tuple(indices):
            if not _admissible(self.spec, j):
                raise NotClosed(f"auxiliary moment j={j} is not closed")
        object.__setattr__(self, "state_indices", tuple(sorted(indices)))

    def initial_state(self) -> np.ndarray:
        return np.array(
            [self.spec.init.total_integral(j).eval(0.0, 0.0) for j in self.state_indices]
        )

    def rhs(self, state: np.ndarray) -> np.ndarray:
        moments = dict(zip(self.state_indices, state))
        return np.array([moment_rhs(self.spec, j, moments) for j in self.state_indices])


def rk4_moments(
    system: MomentOdeSystem, t_end: float, dt: float
) -> tuple[np.ndarray, dict[int, np.ndarray]]:
    """Classical fixed-step RK4 from the initial moments.

    Returns the time grid and one sampled curve per requested moment index.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    steps = int(round(t_end / dt))
    times = np.linspace(0.0, steps * dt, steps + 1)
    state = system.initial_state()
    history = np.empty((steps + 1, state.size))
    history[0] = state
    for i in range(steps):
        k1 = system.rhs(state)
        k2 = system.rhs(state + 0.5 * dt * k1)
        k3 = system.rhs(state + 0.5 * dt * k2)
        k4 = system.rhs(state + dt * k3)
        state = state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(state)):
            raise DomainExit(f"moment blow-up near t = {times[i + 1]}")
        history[i + 1] = state
    curves = {
        j: history[:, system.state_indices.index(j)].copy() for j in system.j_set
    }
    return times, curves
