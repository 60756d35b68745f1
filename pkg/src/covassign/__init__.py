"""Cascade and locally dissipative synthesis of linear quantum systems
that prepare a prescribed pure Gaussian state."""

from .core import (
    CascadeChain,
    GaussianGraph,
    OscSubsystem,
    PureGaussianState,
    Realization,
    StateSpaceModel,
    SynthesisParams,
    graph_from_covariance,
    interleaving_permutation,
    purity_check,
    state_from_graph,
    symplectic_form,
)
from .errors import (
    CovAssignError,
    ImpureStateError,
    InfeasibleTargetError,
    NotHurwitzError,
    NotPositiveDefiniteError,
    RankConditionError,
)

__version__ = "0.1.0"

__all__ = [
    "CascadeChain",
    "CovAssignError",
    "GaussianGraph",
    "ImpureStateError",
    "InfeasibleTargetError",
    "NotHurwitzError",
    "NotPositiveDefiniteError",
    "OscSubsystem",
    "PureGaussianState",
    "RankConditionError",
    "Realization",
    "StateSpaceModel",
    "SynthesisParams",
    "graph_from_covariance",
    "interleaving_permutation",
    "purity_check",
    "state_from_graph",
    "symplectic_form",
]
