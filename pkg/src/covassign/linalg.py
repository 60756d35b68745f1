"""Dense numerical kernels used by synthesis and verification.

Everything here works on plain numpy arrays and is sized for desk-scale
problems (a few dozen modes at most).
"""

from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import NotPositiveDefiniteError, ResonantSpectrumError

# Minimum projected norm for a canonical basis vector to be accepted during
# Gram-Schmidt completion.
GS_SKIP_TOL = 1e-8

DEFAULT_HURWITZ_MARGIN = 1e-9


class RankReport(NamedTuple):
    numerical_rank: int
    singular_values: np.ndarray
    threshold: float

    @property
    def full(self):
        return self.numerical_rank == self.singular_values.shape[0]


class HurwitzReport(NamedTuple):
    hurwitz: bool
    spectral_abscissa: float


def solve_lyapunov(A, D):
    """Solve ``A V + V A^T + D = 0`` for symmetric ``V``.

    Uses the Bartels-Stewart Schur method from scipy after checking that no
    two eigenvalues of ``A`` sum to zero (which would make the Lyapunov
    operator singular).

    Parameters
    ----------
    A : (n, n) array_like
        Real drift matrix.
    D : (n, n) array_like
        Real symmetric forcing term.

    Returns
    -------
    V : (n, n) ndarray
        Symmetrized solution.
    """
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or D.shape != A.shape:
        raise ValueError(f"incompatible shapes {A.shape} and {D.shape}")

    lam = np.linalg.eigvals(A)
    sums = np.abs(lam[:, None] + lam[None, :])
    i, j = np.unravel_index(np.argmin(sums), sums.shape)
    scale = max(1.0, np.linalg.norm(A, 2))
    if sums[i, j] <= 1e-10 * scale:
        raise ResonantSpectrumError(
            f"Lyapunov operator is singular: eigenvalues {lam[i]:.3g} and "
            f"{lam[j]:.3g} sum to {sums[i, j]:.3g}",
            float(sums[i, j]),
        )

    V = scipy.linalg.solve_continuous_lyapunov(A, -D)
    return 0.5 * (V + V.T)


def is_hurwitz(A, margin=DEFAULT_HURWITZ_MARGIN):
    """Spectral abscissa test; Hurwitz means abscissa < -margin."""
    A = np.asarray(A)
    abscissa = float(np.max(np.linalg.eigvals(A).real))
    return HurwitzReport(abscissa < -margin, abscissa)


def krylov_matrix(Q, P):
    """``[P, QP, ..., Q^{n-1} P]`` for square ``Q`` of order n."""
    Q = np.asarray(Q, dtype=complex)
    P = np.asarray(P, dtype=complex)
    if P.ndim == 1:
        P = P[:, None]
    n = Q.shape[0]
    if Q.shape != (n, n) or P.shape[0] != n:
        raise ValueError(f"incompatible shapes Q{Q.shape}, P{P.shape}")
    blocks = [P]
    for _ in range(n - 1):
        blocks.append(Q @ blocks[-1])
    return np.hstack(blocks)


def controllability_rank(Q, P, threshold=None):
    """Numerical rank of the Krylov matrix of ``(Q, P)``.

    The default threshold is ``n * K * eps * sigma_max``; pass ``threshold``
    to override it with an absolute value.
    """
    K_mat = krylov_matrix(Q, P)
    n = K_mat.shape[0]
    k = K_mat.shape[1] // n
    sv = np.linalg.svd(K_mat, compute_uv=False)
    if threshold is None:
        smax = sv[0] if sv.size else 0.0
        threshold = n * k * np.finfo(float).eps * smax
    rank = int(np.sum(sv > threshold))
    return RankReport(rank, sv, float(threshold))


def sqrt_spd(Y):
    """Principal square root of a symmetric positive-definite matrix."""
    Y = np.asarray(Y, dtype=float)
    w, U = np.linalg.eigh(0.5 * (Y + Y.T))
    if w[0] <= 0:
        raise NotPositiveDefiniteError(
            f"matrix is not positive definite (min eigenvalue {w[0]:.6g})", float(w[0])
        )
    R = (U * np.sqrt(w)) @ U.T
    return 0.5 * (R + R.T)


def inv_sqrt_spd(Y):
    Y = np.asarray(Y, dtype=float)
    w, U = np.linalg.eigh(0.5 * (Y + Y.T))
    if w[0] <= 0:
        raise NotPositiveDefiniteError(
            f"matrix is not positive definite (min eigenvalue {w[0]:.6g})", float(w[0])
        )
    R = (U / np.sqrt(w)) @ U.T
    return 0.5 * (R + R.T)


def complete_unitary(first_column):
    """Extend a unit vector to a unitary matrix with that vector as column 0.

    Remaining columns come from Gram-Schmidt over the canonical basis vectors
    e_1, e_2, ... in index order; a candidate whose orthogonalized norm falls
    below ``GS_SKIP_TOL`` is skipped. Real input yields a real orthogonal
    matrix.
    """
    v = np.asarray(first_column)
    if v.ndim != 1:
        raise ValueError("first_column must be a vector")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"first_column must have unit norm, got {norm!r}")
    dtype = complex if np.iscomplexobj(v) else float
    n = v.shape[0]

    cols = [v.astype(dtype)]
    for idx in range(n):
        if len(cols) == n:
            break
        e = np.zeros(n, dtype=dtype)
        e[idx] = 1.0
        # two passes of modified Gram-Schmidt
        for _ in range(2):
            for c in cols:
                e = e - c * np.vdot(c, e)
        en = np.linalg.norm(e)
        if en < GS_SKIP_TOL:
            continue
        cols.append(e / en)

    U = np.column_stack(cols)
    U[:, 0] = v
    return U


def matrix_exponential(A, t=1.0):
    """``exp(A t)`` via scipy's scaling-and-squaring Pade approximant."""
    A = np.asarray(A)
    return scipy.linalg.expm(A * t)
