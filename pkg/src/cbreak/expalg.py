"""Exact algebra over finite sums of terms c * s^j * x^k * exp(-lam*x).

Here ``s`` is the time variable and ``x`` the particle size.  Coefficients
``c`` and decay rates ``lam`` are exact rationals, so every operation the
series recursions need (products, time integrals, the two size integrals)
stays closed and exact.  The empty sum represents the zero function.

Terms are kept keyed by ``(j, k, lam)`` and ordered by ``(lam, k, j)``
ascending, which fixes serialization and floating-point summation order.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Tuple, Union

import numpy as np

Scalar = Union[int, Fraction]
Key = Tuple[int, int, Fraction]


class NonDecayingTerm(ValueError):
    """A size integral over [x, oo) or [0, oo) hit a term with lam == 0."""


class InvalidScale(ValueError):
    """Argument scaling requested with a non-positive factor."""


def _as_fraction(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected int or Fraction, got {type(value).__name__}")


class ExpPoly:
    """Immutable finite sum of terms coeff * s^j * x^k * exp(-lam*x)."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Key, Scalar] | Iterable[tuple[Key, Scalar]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        merged: dict[Key, Fraction] = {}
        for (j, k, lam), coeff in items:
            lam = _as_fraction(lam)
            coeff = _as_fraction(coeff)
            if j < 0 or k < 0:
                raise ValueError("negative power in ExpPoly term")
            if lam < 0:
                raise ValueError("negative decay rate in ExpPoly term")
            key = (int(j), int(k), lam)
            acc = merged.get(key, Fraction(0)) + coeff
            if acc:
                merged[key] = acc
            elif key in merged:
                del merged[key]
        object.__setattr__(
            self,
            "_terms",
            tuple(sorted(merged.items(), key=lambda item: (item[0][2], item[0][1], item[0][0]))),
        )

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def zero() -> "ExpPoly":
        return _ZERO

    @staticmethod
    def term(coeff: Scalar, j: int = 0, k: int = 0, lam: Scalar = 0) -> "ExpPoly":
        return ExpPoly({(j, k, _as_fraction(lam)): coeff})

    # -- basic protocol --------------------------------------------------------

    @property
    def terms(self) -> tuple[tuple[Key, Fraction], ...]:
        return self._terms

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __iter__(self) -> Iterator[tuple[Key, Fraction]]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExpPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("ExpPoly is immutable")

    def __repr__(self) -> str:
        if self.is_zero:
            return "ExpPoly(0)"
        return f"ExpPoly({serialize(self)!r})"

    # -- ring operations -------------------------------------------------------

    def __add__(self, other: "ExpPoly") -> "ExpPoly":
        if not isinstance(other, ExpPoly):
            return NotImplemented
        acc = dict(self._terms)
        for key, coeff in other._terms:
            val = acc.get(key, Fraction(0)) + coeff
            if val:
                acc[key] = val
            elif key in acc:
                del acc[key]
        return ExpPoly(acc)

    def __neg__(self) -> "ExpPoly":
        return ExpPoly({key: -coeff for key, coeff in self._terms})

    def __sub__(self, other: "ExpPoly") -> "ExpPoly":
        return self + (-other)

    def __mul__(self, other: "ExpPoly") -> "ExpPoly":
        if not isinstance(other, ExpPoly):
            return NotImplemented
        acc: dict[Key, Fraction] = {}
        for (j1, k1, l1), c1 in self._terms:
            for (j2, k2, l2), c2 in other._terms:
                key = (j1 + j2, k1 + k2, l1 + l2)
                val = acc.get(key, Fraction(0)) + c1 * c2
                if val:
                    acc[key] = val
                elif key in acc:
                    del acc[key]
        return ExpPoly(acc)

    def scale(self, factor: Scalar) -> "ExpPoly":
        factor = _as_fraction(factor)
        if not factor:
            return _ZERO
        return ExpPoly({key: coeff * factor for key, coeff in self._terms})

    # -- calculus --------------------------------------------------------------

    def ddt(self) -> "ExpPoly":
        """Partial derivative with respect to time s."""
        return ExpPoly({(j - 1, k, lam): coeff * j for (j, k, lam), coeff in self._terms if j > 0})

    def int_time(self) -> "ExpPoly":
        """Time integral from 0 to s; vanishes at s = 0."""
        return ExpPoly(
            {(j + 1, k, lam): coeff / (j + 1) for (j, k, lam), coeff in self._terms}
        )

    def tail_integral(self, m: int = 0) -> "ExpPoly":
        """Integrate x^m * (each term) over sizes rho in [x, oo).

        Uses int_x^oo rho^n e^(-lam rho) drho
            = e^(-lam x) * sum_{i=0}^{n} (n!/i!) x^i / lam^(n-i+1)
        with n = k + m.  Time powers pass through untouched.
        """
        if m < 0:
            raise ValueError("weight power m must be non-negative")
        acc: dict[Key, Fraction] = {}
        for (j, k, lam), coeff in self._terms:
            if lam <= 0:
                raise NonDecayingTerm("tail integral diverges for lam == 0 term")
            n = k + m
            nfact = math.factorial(n)
            for i in range(n + 1):
                key = (j, i, lam)
                val = acc.get(key, Fraction(0)) + coeff * Fraction(
                    nfact // math.factorial(i)
                ) / lam ** (n - i + 1)
                if val:
                    acc[key] = val
                elif key in acc:
                    del acc[key]
        return ExpPoly(acc)

    def total_integral(self, m: int = 0) -> "ExpPoly":
        """Integrate x^m * (each term) over sizes in [0, oo); time-only result.

        Uses int_0^oo x^n e^(-lam x) dx = n! / lam^(n+1) with n = k + m.
        """
        if m < 0:
            raise ValueError("weight power m must be non-negative")
        acc: dict[Key, Fraction] = {}
        for (j, k, lam), coeff in self._terms:
            if lam <= 0:
                raise NonDecayingTerm("total integral diverges for lam == 0 term")
            n = k + m
            key = (j, 0, Fraction(0))
            val = acc.get(key, Fraction(0)) + coeff * math.factorial(n) / lam ** (n + 1)
            if val:
                acc[key] = val
            elif key in acc:
                del acc[key]
        return ExpPoly(acc)

    def scale_arg(self, a: Scalar) -> "ExpPoly":
        """Substitute x -> x/a, i.e. return g with g(s, x) = f(s, x/a)."""
        a = _as_fraction(a)
        if a <= 0:
            raise InvalidScale("scale factor must be positive")
        return ExpPoly(
            {(j, k, lam / a): coeff / a**k for (j, k, lam), coeff in self._terms}
        )

    # -- evaluation ------------------------------------------------------------

    def eval(self, s: float, e: float) -> float:
        """Floating evaluation at time s, size e, in canonical term order."""
        total = 0.0
        for (j, k, lam), coeff in self._terms:
            total += float(coeff) * s**j * e**k * math.exp(-float(lam) * e)
        return total

    def eval_sizes(self, s: float, sizes: np.ndarray) -> np.ndarray:
        """Vectorized evaluation over an array of sizes at a fixed time."""
        sizes = np.asarray(sizes, dtype=float)
        total = np.zeros_like(sizes)
        for (j, k, lam), coeff in self._terms:
            total += float(coeff) * s**j * sizes**k * np.exp(-float(lam) * sizes)
        return total

    def eval_times(self, times: np.ndarray) -> np.ndarray:
        """Vectorized evaluation of a time-only value (k = 0, lam = 0 terms)."""
        times = np.asarray(times, dtype=float)
        total = np.zeros_like(times)
        for (j, k, lam), coeff in self._terms:
            if k or lam:
                raise ValueError("eval_times requires a time-only ExpPoly")
            total += float(coeff) * times**j
        return total

    def time_degree(self) -> int:
        """Largest power of s present; -1 for the zero function."""
        return max((j for (j, _, _), _ in self._terms), default=-1)

    def max_size_degree(self) -> int:
        """Largest power of x present; 0 for the zero function."""
        return max((k for (_, k, _), _ in self._terms), default=0)

    def decaying(self) -> bool:
        return all(lam > 0 for (_, _, lam), _ in self._terms)


_ZERO = ExpPoly()


# -- text serialization ---------------------------------------------------------

_TERM_RE = re.compile(
    r"^\s*(?P<cn>-?\d+)/(?P<cd>\d+)\s+s\^(?P<j>\d+)\s+x\^(?P<k>\d+)\s+"
    r"exp\(-(?P<ln>\d+)/(?P<ld>\d+)\s+x\)\s*$"
)


def serialize(f: ExpPoly) -> str:
    """One term per line, canonical order; the zero function serializes to ''."""
    lines = []
    for (j, k, lam), coeff in f:
        lines.append(
            f"{coeff.numerator}/{coeff.denominator} s^{j} x^{k} "
            f"exp(-{lam.numerator}/{lam.denominator} x)"
        )
    return "\n".join(lines)


def parse(text: str) -> ExpPoly:
    """Inverse of :func:`serialize`; also accepts ';' as a line separator."""
    acc: dict[Key, Fraction] = {}
    for raw in re.split(r"[;\n]", text):
        line = raw.strip()
        if not line:
            continue
        match = _TERM_RE.match(line)
        if match is None:
            raise ValueError(f"unparseable ExpPoly term: {line!r}")
        j = int(match["j"])
        k = int(match["k"])
        lam = Fraction(int(match["ln"]), int(match["ld"]))
        coeff = Fraction(int(match["cn"]), int(match["cd"]))
        key = (j, k, lam)
        acc[key] = acc.get(key, Fraction(0)) + coeff
    return ExpPoly(acc)
