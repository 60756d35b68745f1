"""Exception hierarchy. Every rejection raised by the package derives from
:class:`CovAssignError`, which is itself a ``ValueError``."""


class CovAssignError(ValueError):
    pass


class NotPositiveDefiniteError(CovAssignError):
    def __init__(self, message, min_eigenvalue):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class ImpureStateError(CovAssignError):
    def __init__(self, message, det_defect):
        super().__init__(message)
        self.det_defect = det_defect


class ResonantSpectrumError(CovAssignError):
    """Raised when the drift has eigenvalues summing to (nearly) zero, so the
    Lyapunov operator is singular."""

    def __init__(self, message, min_eigenvalue_sum):
        super().__init__(message)
        self.min_eigenvalue_sum = min_eigenvalue_sum


class NotHurwitzError(CovAssignError):
    def __init__(self, message, spectral_abscissa):
        super().__init__(message)
        self.spectral_abscissa = spectral_abscissa


class RankConditionError(CovAssignError):
    """The Krylov rank condition on (Q, P) fails; ``report`` is the
    :class:`~covassign.linalg.RankReport` that was computed."""

    def __init__(self, message, report):
        super().__init__(message)
        self.report = report


class InfeasibleTargetError(CovAssignError):
    """The requested mode cannot carry a local coupling for this target;
    ``feasibility`` is the :class:`~covassign.synthesis.LocalFeasibility`."""

    def __init__(self, message, feasibility):
        super().__init__(message)
        self.feasibility = feasibility


class ChannelMismatchError(CovAssignError):
    pass
