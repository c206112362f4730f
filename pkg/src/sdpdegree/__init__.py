"""Exact algebraic degrees of semidefinite programming, plus a dense SDP solver
and the random-instance rank experiment built on it."""

from .degree import CrossCheckError, DegreeResult, delta, pataki_check, row_sum, table
from .experiment import ExperimentConfig, RankHistogram, rank_distribution, reproduce_rank_table
from .kernels import BACKEND
from .sdp import SdpInstance, SdpSolution, SolverOptions, SolveStatus, load_instance, solve_sdp

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CrossCheckError",
    "DegreeResult",
    "ExperimentConfig",
    "RankHistogram",
    "SdpInstance",
    "SdpSolution",
    "SolveStatus",
    "SolverOptions",
    "delta",
    "load_instance",
    "pataki_check",
    "rank_distribution",
    "reproduce_rank_table",
    "row_sum",
    "solve_sdp",
    "table",
]
