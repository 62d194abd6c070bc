"""Ordered series components f_0..f_n and their partial sums."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

from cbreak.expalg import ExpPoly, serialize
from cbreak.model import CaseSpec


@dataclass(frozen=True)
class SeriesSolution:
    """Components of a truncated series solution for one case.

    ``method`` is "vim" or "odm"; ``components[0]`` is always the initial
    condition and ``partial_sum(m)`` is the m-th truncation.
    """

    method: str
    spec: CaseSpec
    components: tuple[ExpPoly, ...]

    def __post_init__(self) -> None:
        if self.method not in ("vim", "odm"):
            raise ValueError(f"method must be 'vim' or 'odm', got {self.method!r}")
        if not self.components:
            raise ValueError("a series needs at least the initial component")
        if self.components[0] != self.spec.init:
            raise ValueError("components[0] must equal the initial condition")

    @property
    def n(self) -> int:
        return len(self.components) - 1

    def partial_sum(self, m: int | None = None) -> ExpPoly:
        if m is None:
            m = self.n
        if not 0 <= m <= self.n:
            raise ValueError(f"partial sum order {m} outside [0, {self.n}]")
        return reduce(lambda a, b: a + b, self.components[: m + 1])

    def dump(self) -> str:
        """Text form: one '# component k' header per block of terms."""
        blocks = []
        for k, comp in enumerate(self.components):
            blocks.append(f"# component {k}\n{serialize(comp)}")
        return "\n\n".join(blocks) + "\n"
