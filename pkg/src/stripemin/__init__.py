"""Periodic and constant minimizers of 1D local mean-field free energies with
reflection-positive long-range interactions."""
from .energy import (
    EnergyBreakdown,
    Profile,
    euler_lagrange_residual,
    finite_volume_energy,
    per_period_energy,
    per_period_gradient,
)
from .kernel import MixtureKernel, PeriodizedKernel, power_law_approximation, single_exponential
from .local_term import LocalTerm, constant_branch
from .minimizer import (
    InnerSolveReport,
    PhasePoint,
    SolverOptions,
    inner_minimize,
    locate_transition,
    outer_minimize,
    phase_sweep,
)
from .reflection import (
    ProfileSequence,
    chessboard_check,
    juxtapose,
    lemma1_check,
    reflect,
)

__version__ = "0.1.0"
