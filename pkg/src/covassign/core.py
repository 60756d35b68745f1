"""Domain types: graphs, pure states, realizations and the symplectic form.

All 2N-vectors use the grouped quadrature ordering (q_1..q_N, p_1..p_N).
The interleaved ordering (q_1, p_1, q_2, p_2, ...) only shows up inside
cascade composition, via :func:`interleaving_permutation`.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import ImpureStateError, NotPositiveDefiniteError
from .linalg import inv_sqrt_spd, sqrt_spd

SYMMETRY_TOL = 1e-9
PURITY_TOL = 1e-8


def _frozen(a, dtype=None):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


def symmetrize(A, name="matrix", tol=SYMMETRY_TOL):
    """Return ``(A + A^T)/2``, refusing inputs whose relative asymmetry
    exceeds ``tol`` in Frobenius norm."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"{name} must be square, got shape {A.shape}")
    scale = np.linalg.norm(A)
    asym = np.linalg.norm(A - A.T)
    if asym > tol * max(scale, np.finfo(float).tiny):
        raise ValueError(f"{name} is not symmetric (relative asymmetry {asym / scale:.3g})")
    return 0.5 * (A + A.T)


def antisymmetrize(A, name="matrix", tol=SYMMETRY_TOL):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"{name} must be square, got shape {A.shape}")
    scale = np.linalg.norm(A)
    sym = np.linalg.norm(A + A.T)
    if sym > tol * max(scale, np.finfo(float).tiny):
        raise ValueError(f"{name} is not skew-symmetric (relative defect {sym / scale:.3g})")
    return 0.5 * (A - A.T)


def symplectic_form(n):
    """The 2n x 2n matrix ``[[0, I], [-I, 0]]``."""
    if n < 1:
        raise ValueError("mode count must be >= 1")
    I = np.eye(n)
    Z = np.zeros((n, n))
    return np.block([[Z, I], [-I, Z]])


def interleaving_permutation(n):
    """Permutation ``P`` with ``P @ (x1, x2, ..., x2n) = (x1, x3, ..., x2, x4, ...)``.

    Maps an interleaved per-mode vector (q_1, p_1, q_2, p_2, ...) to the
    grouped ordering (q_1, ..., q_n, p_1, ..., p_n).
    """
    if n < 1:
        raise ValueError("mode count must be >= 1")
    P = np.zeros((2 * n, 2 * n))
    for k in range(n):
        P[k, 2 * k] = 1.0
        P[n + k, 2 * k + 1] = 1.0
    return P


@dataclass(frozen=True)
class GaussianGraph:
    """Pure Gaussian state specified by its graph ``Z = X + iY``.

    ``X`` is real symmetric, ``Y`` real symmetric positive definite.
    """

    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        X = symmetrize(self.X, "X")
        Y = symmetrize(self.Y, "Y")
        if X.shape != Y.shape:
            raise ValueError(f"X{X.shape} and Y{Y.shape} differ in shape")
        w = np.linalg.eigvalsh(Y)
        if w[0] <= 0:
            raise NotPositiveDefiniteError(
                f"Y is not positive definite (min eigenvalue {w[0]:.6g})", float(w[0])
            )
        object.__setattr__(self, "X", _frozen(X))
        object.__setattr__(self, "Y", _frozen(Y))

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def Z(self):
        return self.X + 1j * self.Y


@dataclass(frozen=True)
class PureGaussianState:
    """Covariance ``V = S S^T / 2`` together with its symplectic factor."""

    V: np.ndarray
    S: np.ndarray

    def __post_init__(self):
        V = np.asarray(self.V, dtype=float)
        S = np.asarray(self.S, dtype=float)
        if V.shape != S.shape or V.shape[0] % 2 or V.shape[0] != V.shape[1]:
            raise ValueError(f"V{V.shape} and S{S.shape} must be equal, square and even")
        object.__setattr__(self, "V", _frozen(V))
        object.__setattr__(self, "S", _frozen(S))

    @property
    def n(self):
        return self.V.shape[0] // 2


@dataclass(frozen=True)
class Realization:
    """Linear quantum system with Hamiltonian ``x^T M x / 2`` and coupling
    vector ``L = C x``."""

    M: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        M = symmetrize(self.M, "M")
        C = np.atleast_2d(np.asarray(self.C, dtype=complex))
        if M.shape[0] % 2:
            raise ValueError(f"M must be 2N x 2N, got {M.shape}")
        if C.ndim != 2 or C.shape[1] != M.shape[0]:
            raise ValueError(f"C must be K x {M.shape[0]}, got {C.shape}")
        object.__setattr__(self, "M", _frozen(M))
        object.__setattr__(self, "C", _frozen(C))

    @property
    def n(self):
        return self.M.shape[0] // 2

    @property
    def k(self):
        return self.C.shape[0]


@dataclass(frozen=True)
class StateSpaceModel:
    """Drift ``A`` and diffusion ``D`` of the moment equations
    ``d<x>/dt = A <x>``, ``dV/dt = A V + V A^T + D``."""

    A: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "A", _frozen(self.A, float))
        object.__setattr__(self, "D", _frozen(self.D, float))


@dataclass(frozen=True)
class SynthesisParams:
    """Free parameters of the general realization: symmetric ``R``,
    skew-symmetric ``Gamma`` and a nonzero channel matrix ``P`` (N x K)."""

    R: np.ndarray
    Gamma: np.ndarray
    P: np.ndarray

    def __post_init__(self):
        R = symmetrize(self.R, "R")
        G = antisymmetrize(self.Gamma, "Gamma")
        P = np.asarray(self.P, dtype=complex)
        if P.ndim == 1:
            P = P[:, None]
        if R.shape != G.shape or P.shape[0] != R.shape[0]:
            raise ValueError(f"inconsistent shapes R{R.shape}, Gamma{G.shape}, P{P.shape}")
        if not np.any(P):
            raise ValueError("P must be nonzero")
        object.__setattr__(self, "R", _frozen(R))
        object.__setattr__(self, "Gamma", _frozen(G))
        object.__setattr__(self, "P", _frozen(P))

    def Q(self, Y):
        """``Q = -i R Y + Y^{-1} Gamma``, the matrix entering the rank test."""
        Y = np.asarray(Y, dtype=float)
        return -1j * self.R @ Y + np.linalg.solve(Y, self.Gamma)


@dataclass(frozen=True)
class OscSubsystem:
    """One-mode component of a cascade: ``M_j`` is 2x2, ``C_j`` is K x 2,
    both over (q_j, p_j)."""

    M: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        M = symmetrize(self.M, "M_j")
        C = np.atleast_2d(np.asarray(self.C, dtype=complex))
        if M.shape != (2, 2) or C.ndim != 2 or C.shape[1] != 2:
            raise ValueError(f"subsystem needs 2x2 M and Kx2 C, got {M.shape}, {C.shape}")
        object.__setattr__(self, "M", _frozen(M))
        object.__setattr__(self, "C", _frozen(C))


@dataclass(frozen=True)
class CascadeChain:
    """Ordered cascade ``G_N <| ... <| G_1``: ``subsystems[0]`` is the first
    in the chain and its output feeds ``subsystems[1]``."""

    subsystems: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "subsystems", tuple(self.subsystems))

    def __len__(self):
        return len(self.subsystems)

    def __iter__(self):
        return iter(self.subsystems)


class PurityReport(NamedTuple):
    det_defect: float
    min_uncertainty_eig: float


def state_from_graph(g):
    """Covariance and symplectic factor of the state with graph ``g``."""
    Yh = sqrt_spd(g.Y)
    Yih = inv_sqrt_spd(g.Y)
    n = g.n
    S = np.block([[Yih, np.zeros((n, n))], [g.X @ Yih, Yh]])
    V = 0.5 * S @ S.T
    return PureGaussianState(0.5 * (V + V.T), S)


def purity_check(V):
    """Determinant defect ``|det(2V) - 1|`` and the smallest eigenvalue of
    the Hermitian matrix ``V + (i/2) Sigma``."""
    V = np.asarray(V, dtype=float)
    n = V.shape[0] // 2
    sign, logdet = np.linalg.slogdet(2.0 * V)
    det2v = sign * np.exp(logdet)
    H = V + 0.5j * symplectic_form(n)
    min_eig = float(np.linalg.eigvalsh(0.5 * (H + H.conj().T))[0])
    return PurityReport(float(abs(det2v - 1.0)), min_eig)


def graph_from_covariance(V, tol=PURITY_TOL):
    """Recover ``(X, Y)`` from a pure covariance matrix.

    Uses ``Y^{-1} = 2 V_qq`` and ``X = V_qq^{-1} V_qp``.
    """
    V = symmetrize(V, "V")
    if V.shape[0] % 2:
        raise ValueError(f"covariance must be 2N x 2N, got {V.shape}")
    n = V.shape[0] // 2
    defect = purity_check(V).det_defect
    if not defect <= tol:
        raise ImpureStateError(f"covariance is not pure: |det(2V) - 1| = {defect:.3g}", defect)
    Vqq = V[:n, :n]
    Vqp = V[:n, n:]
    if np.linalg.cond(Vqq) > 1e12:
        raise ValueError("q-block of the covariance is singular")
    X = np.linalg.solve(Vqq, Vqp)
    Y = np.linalg.inv(2.0 * Vqq)
    return GaussianGraph(0.5 * (X + X.T), 0.5 * (Y + Y.T))
