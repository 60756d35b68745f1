"""Stability, steady state and moment dynamics of a realization."""

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .core import (
    PureGaussianState,
    Realization,
    StateSpaceModel,
    purity_check,
    state_from_graph,
    symplectic_form,
)
from .errors import NotHurwitzError
from .linalg import DEFAULT_HURWITZ_MARGIN, is_hurwitz, matrix_exponential, solve_lyapunov

SUPPORT_TOL = 1e-12
NULLIFIER_TOL = 1e-9


@dataclass(frozen=True)
class VerificationReport:
    hurwitz: bool
    spectral_abscissa: float
    lyapunov_residual: float
    assignment_error: Optional[float]
    purity_defect: Optional[float]
    local_modes: tuple
    tol: float

    @property
    def passed(self):
        return self.hurwitz and self.assignment_error is not None and self.assignment_error <= self.tol

    @property
    def cause(self):
        if not self.hurwitz:
            return f"drift is not Hurwitz (spectral abscissa {self.spectral_abscissa:.3g})"
        if not self.passed:
            return f"assignment error {self.assignment_error:.3g} exceeds {self.tol:.3g}"
        return None

    def as_dict(self):
        return {
            "passed": self.passed,
            "cause": self.cause,
            "hurwitz": self.hurwitz,
            "spectral_abscissa": self.spectral_abscissa,
            "lyapunov_residual": self.lyapunov_residual,
            "assignment_error": self.assignment_error,
            "purity_defect": self.purity_defect,
            "local_modes": [list(m) for m in self.local_modes],
            "tol": self.tol,
        }


@dataclass(frozen=True)
class MomentTrajectory:
    times: np.ndarray
    means: np.ndarray  # (T, 2N)
    covariances: np.ndarray  # (T, 2N, 2N)

    def __post_init__(self):
        for name in ("times", "means", "covariances"):
            a = np.array(getattr(self, name), dtype=float)
            a.setflags(write=False)
            object.__setattr__(self, name, a)


class NullifierReport(NamedTuple):
    is_nullifier_form: bool
    P: Optional[np.ndarray]


class LocalCandidate(NamedTuple):
    """Outcome of trying a single-mode channel ``P = e_mode`` (1-based)."""

    mode: int
    row: np.ndarray
    violation: float
    admissible: bool


def state_space(r):
    """Drift ``A = Sigma (M + Im C^dag C)`` and diffusion
    ``D = Sigma Re(C^dag C) Sigma^T``."""
    sigma = symplectic_form(r.n)
    CC = r.C.conj().T @ r.C
    A = sigma @ (r.M + CC.imag)
    D = sigma @ CC.real @ sigma.T
    return StateSpaceModel(A, 0.5 * (D + D.T))


def steady_state_covariance(r, margin=DEFAULT_HURWITZ_MARGIN):
    ss = state_space(r)
    rep = is_hurwitz(ss.A, margin)
    if not rep.hurwitz:
        raise NotHurwitzError(
            f"drift is not Hurwitz (spectral abscissa {rep.spectral_abscissa:.3g})",
            rep.spectral_abscissa,
        )
    return solve_lyapunov(ss.A, ss.D)


def coupling_support(C, tol=SUPPORT_TOL):
    """1-based modes touched by each row of ``C`` (q_j and p_j columns both
    count towards mode j)."""
    C = np.atleast_2d(np.asarray(C))
    n = C.shape[1] // 2
    mag = np.abs(C)
    per_mode = np.maximum(mag[:, :n], mag[:, n:])
    return tuple(tuple(int(j) + 1 for j in np.flatnonzero(row > tol)) for row in per_mode)


def _as_state(target):
    if isinstance(target, PureGaussianState):
        return target
    return state_from_graph(target)


def verify_assignment(r, target, tol=1e-7, margin=DEFAULT_HURWITZ_MARGIN):
    """Check that ``r`` is stable and steers any initial state to ``target``.

    ``target`` may be a :class:`PureGaussianState` or a graph.
    """
    target = _as_state(target)
    if target.n != r.n:
        raise ValueError(f"realization has {r.n} modes, target has {target.n}")
    ss = state_space(r)
    rep = is_hurwitz(ss.A, margin)
    Vt = target.V
    residual = float(np.linalg.norm(ss.A @ Vt + Vt @ ss.A.T + ss.D))
    err = purity = None
    if rep.hurwitz:
        Vinf = solve_lyapunov(ss.A, ss.D)
        err = float(np.linalg.norm(Vinf - Vt))
        purity = purity_check(Vinf).det_defect
    return VerificationReport(
        hurwitz=rep.hurwitz,
        spectral_abscissa=rep.spectral_abscissa,
        lyapunov_residual=residual,
        assignment_error=err,
        purity_defect=purity,
        local_modes=coupling_support(r.C),
        tol=float(tol),
    )


def default_rk4_step(A):
    return min(1e-2, 0.1 / max(np.linalg.norm(A), np.finfo(float).tiny))


def _rk4(A, D, x0, V0, times, step):
    # The moment equations are linear and autonomous in z = (x, vec V, 1),
    # so one classical RK4 step is exactly z <- T(hF) z with T the degree-4
    # Taylor polynomial. Equal substeps between grid points then collapse
    # to a matrix power, evaluated by repeated squaring.
    dim = A.shape[0]
    I = np.eye(dim)
    m = dim + dim * dim
    F = np.zeros((m + 1, m + 1))
    F[:dim, :dim] = A
    F[dim:m, dim:m] = np.kron(I, A) + np.kron(A, I)
    F[dim:m, m] = D.reshape(-1, order="F")

    def increment(h, nsteps):
        # E with T(hF)^nsteps = I + E; kept in increment form so the
        # identity never swamps the O(h) update in floating point
        hF = h * F
        E = hF.copy()
        term = hF
        for k in range(2, 5):
            term = term @ hF / k
            E = E + term
        acc = None
        while nsteps:
            if nsteps & 1:
                acc = E if acc is None else acc + E + acc @ E
            nsteps >>= 1
            if nsteps:
                E = 2 * E + E @ E
        return acc

    z = np.concatenate([x0, V0.reshape(-1, order="F"), [1.0]])
    xs, Vs, t = [], [], 0.0
    for target in times:
        span = target - t
        nsteps = int(np.ceil(span / step - 1e-12)) if span > 0 else 0
        if nsteps:
            z = z + increment(span / nsteps, nsteps) @ z
        t = target
        V = z[dim:m].reshape(dim, dim, order="F")
        xs.append(z[:dim].copy())
        Vs.append(0.5 * (V + V.T))
    return np.array(xs), np.array(Vs)


def simulate_moments(r, V0, x0=None, times=None, method="auto", step=None,
                     margin=DEFAULT_HURWITZ_MARGIN):
    """Evolve mean and covariance from ``(x0, V0)`` at ``t = 0``.

    ``method="auto"`` uses the closed form
    ``V(t) = e^{At} (V0 - V_inf) e^{A^T t} + V_inf`` when the drift is
    Hurwitz and fixed-step RK4 otherwise. ``"closed"`` and ``"rk4"`` force
    one path. The RK4 step defaults to ``min(1e-2, 0.1/||A||_F)``.
    """
    ss = state_space(r)
    A, D = ss.A, ss.D
    dim = A.shape[0]
    V0 = np.asarray(V0, dtype=float)
    x0 = np.zeros(dim) if x0 is None else np.asarray(x0, dtype=float)
    times = np.asarray(times if times is not None else np.linspace(0.0, 10.0, 101), dtype=float)
    if times.ndim != 1 or np.any(times < 0) or np.any(np.diff(times) < 0):
        raise ValueError("times must be a non-decreasing grid of non-negative values")
    if V0.shape != (dim, dim) or x0.shape != (dim,):
        raise ValueError("initial moments do not match the realization dimension")

    if method == "auto":
        method = "closed" if is_hurwitz(A, margin).hurwitz else "rk4"
    if method == "closed":
        Vinf = solve_lyapunov(A, D)
        means, covs = [], []
        for t in times:
            E = matrix_exponential(A, t)
            means.append(E @ x0)
            V = E @ (V0 - Vinf) @ E.T + Vinf
            covs.append(0.5 * (V + V.T))
        return MomentTrajectory(times, np.array(means), np.array(covs))
    if method == "rk4":
        h = default_rk4_step(A) if step is None else float(step)
        means, covs = _rk4(A, D, x0, V0, times, h)
        return MomentTrajectory(times, means, covs)
    raise ValueError(f"unknown method {method!r}")


def decay_conditioning(A):
    """Condition number of the eigenvector matrix of ``A`` (1 for normal A).

    Bounds ``||V(t) - V_inf|| <= kappa^2 e^{2 a t} ||V(0) - V_inf||``; the
    squared factor is returned since the covariance is transformed on both
    sides.
    """
    _, W = np.linalg.eig(np.asarray(A))
    return float(np.linalg.cond(W)) ** 2


def nullifier_check(r, g, tol=NULLIFIER_TOL):
    """Try to write ``C = P^T [-Z, I]``; ``P`` is read off the right block."""
    n = g.n
    if r.n != n:
        raise ValueError(f"realization has {r.n} modes, graph has {n}")
    left, right = r.C[:, :n], r.C[:, n:]
    P = right.T.copy()
    ok = np.linalg.norm(left + right @ g.Z) <= tol * max(1.0, np.linalg.norm(r.C))
    return NullifierReport(bool(ok), P if ok else None)


def local_nullifier_search(g, tol=NULLIFIER_TOL):
    """Enumerate every single-mode channel ``P = e_l`` and test whether the
    resulting nullifier row ``[-Z_l, e_l]`` is local to mode ``l``.

    A local coupling of nullifier form exists only if some candidate is
    admissible. For each mode the reported violation is the largest row
    magnitude outside mode ``l``; the truncated (forced-local) row is also
    run through :func:`nullifier_check`.
    """
    n = g.n
    Z = g.Z
    out = []
    for ell in range(n):
        row = np.concatenate([-Z[ell], np.eye(n)[ell]]).astype(complex)
        off = np.ones(2 * n, dtype=bool)
        off[[ell, n + ell]] = False
        violation = float(np.max(np.abs(row[off]), initial=0.0))
        local_row = np.where(off, 0.0, row)
        trial = Realization(np.zeros((2 * n, 2 * n)), local_row[None, :])
        admissible = violation <= tol and nullifier_check(trial, g, tol).is_nullifier_form
        out.append(LocalCandidate(ell + 1, row, violation, bool(admissible)))
    return out
