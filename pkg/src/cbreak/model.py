"""Problem definitions: collision kernels, fragmentation laws, initial data.

A case couples a monomial collision kernel K(x, r) = c * (x*r)^a with either
a conservative power-law fragmentation b = beta * x^gamma * r^delta or a
discrete (Dirac comb) fragmentation b = sum_i w_i * delta(x - a_i * r), plus
a decaying initial condition.  The bilinear birth/death operators and the
linearization coefficient used by the decomposition scheme live here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from cbreak.expalg import ExpPoly, _as_fraction, parse


class NegativeExponent(ValueError):
    """Power-law birth would need a negative rho-power inside the tail integral."""


class UnknownCase(KeyError):
    """No built-in case with the requested label."""


@dataclass(frozen=True)
class CollisionKernel:
    """K(x, r) = c * (x*r)^a; symmetric by construction."""

    c: Fraction
    a: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", _as_fraction(self.c))
        if self.c <= 0:
            raise ValueError("kernel prefactor must be positive")
        if self.a < 0:
            raise ValueError("kernel degree must be non-negative")


@dataclass(frozen=True)
class PowerLaw:
    """b(x, r) = beta * x^gamma * r^delta."""

    beta: Fraction
    gamma: int
    delta: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta", _as_fraction(self.beta))


@dataclass(frozen=True)
class Discrete:
    """b(x, r) = sum_i w_i * delta(x - a_i * r) with 0 < a_i <= 1."""

    fragments: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "fragments",
            tuple((_as_fraction(w), _as_fraction(a)) for w, a in self.fragments),
        )


Fragmentation = Union[PowerLaw, Discrete]


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...] = ()


def validate(frag: Fragmentation) -> ValidationReport:
    """Exact mass-conservation check; reports every failed identity."""
    problems: list[str] = []
    if isinstance(frag, PowerLaw):
        # int_0^r x * b dx = beta/(gamma+2) * r^(gamma+2+delta) must equal r.
        if frag.delta != -(frag.gamma + 1):
            problems.append(
                f"delta must equal -(gamma+1) = {-(frag.gamma + 1)}, got {frag.delta}"
            )
        if frag.beta != frag.gamma + 2:
            problems.append(f"beta must equal gamma+2 = {frag.gamma + 2}, got {frag.beta}")
        if frag.gamma < 0:
            problems.append(f"gamma must be non-negative, got {frag.gamma}")
    elif isinstance(frag, Discrete):
        if not frag.fragments:
            problems.append("discrete fragmentation needs at least one fragment")
        for w, a in frag.fragments:
            if w <= 0:
                problems.append(f"fragment weight must be positive, got {w}")
            if not (0 < a <= 1):
                problems.append(f"fragment ratio must lie in (0, 1], got {a}")
        total = sum((w * a for w, a in frag.fragments), Fraction(0))
        if total != 1:
            problems.append(f"sum of w_i * a_i must equal 1, got {total}")
    else:
        raise TypeError(f"unknown fragmentation type {type(frag).__name__}")
    return ValidationReport(ok=not problems, violations=tuple(problems))


@dataclass(frozen=True)
class CaseSpec:
    """Kernel + fragmentation + initial condition; a full problem instance."""

    kernel: CollisionKernel
    frag: Fragmentation
    init: ExpPoly
    label: str = ""

    def __post_init__(self) -> None:
        report = validate(self.frag)
        if not report.ok:
            raise ValueError("fragmentation fails mass conservation: " + "; ".join(report.violations))
        for (j, _, lam), _ in self.init:
            if j != 0:
                raise ValueError("initial condition must be time-independent")
            if lam <= 0:
                raise ValueError("initial condition must decay in size")


def birth(spec: CaseSpec, f: ExpPoly, g: ExpPoly) -> ExpPoly:
    """Birth operator of the breakage equation, bilinear in (f, g).

    int_0^oo int_x^oo K(r, s) b(x, r) f(r) g(s) dr ds, evaluated in closed
    form over the exponential-polynomial family.
    """
    if f.is_zero or g.is_zero:
        return ExpPoly.zero()
    kern = spec.kernel
    sigma_moment = g.total_integral(kern.a)  # time-only factor
    if isinstance(spec.frag, PowerLaw):
        m = kern.a + spec.frag.delta
        if m < 0:
            raise NegativeExponent(
                f"rho-power a+delta = {m} is negative; tail integral unsupported"
            )
        rho_part = f.tail_integral(m)
        prefactor = ExpPoly.term(kern.c * spec.frag.beta, k=spec.frag.gamma)
        return prefactor * rho_part * sigma_moment
    result = ExpPoly.zero()
    for w, a in spec.frag.fragments:
        # delta(x - a*r) collapses the r-integral at r = x/a (>= x since a <= 1).
        piece = ExpPoly.term(kern.c * w / a ** (kern.a + 1), k=kern.a) * f.scale_arg(a)
        result = result + piece
    return result * sigma_moment


def death(spec: CaseSpec, f: ExpPoly, g: ExpPoly) -> ExpPoly:
    """Death operator: c * x^a * f(s, x) * int_0^oo r^a g(s, r) dr."""
    if f.is_zero or g.is_zero:
        return ExpPoly.zero()
    kern = spec.kernel
    return ExpPoly.term(kern.c, k=kern.a) * f * g.total_integral(kern.a)


def collision_rate(spec: CaseSpec, f: ExpPoly, g: ExpPoly) -> ExpPoly:
    """birth - death; the full nonlinear operator as a bilinear form."""
    return birth(spec, f, g) - death(spec, f, g)


def linearization_coefficient(spec: CaseSpec) -> ExpPoly:
    """C(x) = -int_0^oo K(x, r) f(0, r) dr; a size monomial, possibly lam = 0."""
    kern = spec.kernel
    moment = spec.init.total_integral(kern.a)
    return (-ExpPoly.term(kern.c, k=kern.a)) * moment


def fragment_count(frag: Fragmentation) -> Fraction:
    """Mean number of daughters per breakup; feeds the moment-ODE oracle."""
    report = validate(frag)
    if not report.ok:
        raise ValueError("; ".join(report.violations))
    if isinstance(frag, PowerLaw):
        return Fraction(frag.gamma + 2, frag.gamma + 1)
    return sum((w for w, _ in frag.fragments), Fraction(0))


# -- built-in cases ---------------------------------------------------------------

def builtin_case(label: str) -> CaseSpec:
    """The three stock cases: product, scaled-product and constant kernels."""
    exp_x = ExpPoly.term(1, k=0, lam=1)
    if label == "example1":
        return CaseSpec(
            kernel=CollisionKernel(c=Fraction(1), a=1),
            frag=PowerLaw(beta=Fraction(2), gamma=0, delta=-1),
            init=exp_x,
            label=label,
        )
    if label == "example2":
        return CaseSpec(
            kernel=CollisionKernel(c=Fraction(1, 20), a=1),
            frag=PowerLaw(beta=Fraction(2), gamma=0, delta=-1),
            init=ExpPoly.term(1, k=2, lam=1),
            label=label,
        )
    if label == "example3":
        return CaseSpec(
            kernel=CollisionKernel(c=Fraction(1), a=0),
            frag=Discrete(fragments=((Fraction(1), Fraction(2, 5)), (Fraction(1), Fraction(3, 5)))),
            init=exp_x,
            label=label,
        )
    raise UnknownCase(label)


BUILTIN_LABELS = ("example1", "example2", "example3")


def parse_case_file(text: str) -> CaseSpec:
    """Key-value case description; see README for the schema.

    Recognized keys: kernel.c, kernel.a, frag.kind, frag.beta, frag.gamma,
    frag.delta, repeated frag.fragment = w,a, init (ExpPoly text form, ';'
    separated or repeated), label.
    """
    values: dict[str, str] = {}
    fragments: list[tuple[Fraction, Fraction]] = []
    init_lines: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "frag.fragment":
            w_str, _, a_str = value.partition(",")
            fragments.append((Fraction(w_str.strip()), Fraction(a_str.strip())))
        elif key == "init":
            init_lines.append(value)
        else:
            values[key] = value
    missing = {"kernel.c", "kernel.a", "frag.kind"} - set(values)
    if missing:
        raise ValueError(f"missing keys: {sorted(missing)}")
    if not init_lines:
        raise ValueError("missing keys: ['init']")
    kernel = CollisionKernel(c=Fraction(values["kernel.c"]), a=int(values["kernel.a"]))
    kind = values["frag.kind"]
    frag: Fragmentation
    if kind == "powerlaw":
        frag = PowerLaw(
            beta=Fraction(values["frag.beta"]),
            gamma=int(values["frag.gamma"]),
            delta=int(values["frag.delta"]),
        )
    elif kind == "discrete":
        frag = Discrete(fragments=tuple(fragments))
    else:
        raise ValueError(f"frag.kind must be 'powerlaw' or 'discrete', got {kind!r}")
    init = parse(";".join(init_lines))
    return CaseSpec(kernel=kernel, frag=frag, init=init, label=values.get("label", ""))


def load_case(label_or_path: str) -> CaseSpec:
    """Resolve a built-in label or read a case file from disk."""
    if label_or_path in BUILTIN_LABELS:
        return builtin_case(label_or_path)
    try:
        with open(label_or_path, "r", encoding="utf-8") as handle:
            return parse_case_file(handle.read())
    except FileNotFoundError:
        raise UnknownCase(label_or_path) from None
