"""Series solvers for the nonlinear collision-induced breakage equation.

Exact exponential-polynomial algebra, VIM/ODM series recursions, moment and
convergence diagnostics, and an independent numerical oracle.
"""

from cbreak.expalg import ExpPoly, NonDecayingTerm, InvalidScale
from cbreak.model import (
    CaseSpec,
    CollisionKernel,
    Discrete,
    PowerLaw,
    birth,
    builtin_case,
    death,
    fragment_count,
    linearization_coefficient,
)
from cbreak.series import SeriesSolution
from cbreak.vim import vim_solve, vim_step
from cbreak.odm import odm_solve, odm_step, q_polynomial

__all__ = [
    "CaseSpec",
    "CollisionKernel",
    "Discrete",
    "ExpPoly",
    "InvalidScale",
    "NonDecayingTerm",
    "PowerLaw",
    "SeriesSolution",
    "birth",
    "builtin_case",
    "death",
    "fragment_count",
    "linearization_coefficient",
    "odm_solve",
    "odm_step",
    "q_polynomial",
    "vim_solve",
    "vim_step",
]

__version__ = "0.1.0"
