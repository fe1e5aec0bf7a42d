"""Exact diagonalization of dimerized spin-1/2 Heisenberg rings and their
ground-state pairwise entanglement."""

__version__ = "0.1.0"

from .eigensolver import GroundState, SpectrumReport, full_spectrum, ground_state, lanczos_ground
from .entanglement import (
    ConcurrenceReport,
    concurrence_report,
    mean_concurrence,
    signed_concurrence,
    wootters_concurrence,
)
from .exceptions import (
    ConvergenceError,
    DegenerateGroundStateError,
    NumericalError,
    SymmetryBreakingError,
)
from .hamiltonian import CouplingParams, bond_list
from .spin_basis import BasisState, Sector, enumerate_sector
from .sweep import SweepConfig, SweepResult, find_threshold, run_sweep

__all__ = [
    "BasisState",
    "ConcurrenceReport",
    "ConvergenceError",
    "CouplingParams",
    "DegenerateGroundStateError",
    "GroundState",
    "NumericalError",
    "Sector",
    "SpectrumReport",
    "SweepConfig",
    "SweepResult",
    "SymmetryBreakingError",
    "bond_list",
    "concurrence_report",
    "enumerate_sector",
    "find_threshold",
    "full_spectrum",
    "ground_state",
    "lanczos_ground",
    "mean_concurrence",
    "run_sweep",
    "signed_concurrence",
    "wootters_concurrence",
]
