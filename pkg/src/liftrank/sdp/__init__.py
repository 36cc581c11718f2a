"""A small interior-point solver for block-diagonal semidefinite programs."""

from .problem import DIAG, PSD, Block, SdpBuilder, SdpProblem, SdpSolution, SolverSettings
from .solver import evaluate, presolve, solve
from .feasibility import FeasibilityResult, feasibility
from .sdpa import read_sdpa, write_sdpa

__all__ = [
    "DIAG",
    "PSD",
    "Block",
    "SdpBuilder",
    "SdpProblem",
    "SdpSolution",
    "SolverSettings",
    "evaluate",
    "presolve",
    "solve",
    "FeasibilityResult",
    "feasibility",
    "read_sdpa",
    "write_sdpa",
]
