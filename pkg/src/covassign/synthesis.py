"""Constructions of realizations that prepare a given pure Gaussian state.

* :func:`realize_general` -- the full (R, Gamma, P) parametrization.
* :func:`realize_cascade` -- a cascade of N undriven one-mode oscillators,
  available for every target.
* :func:`realize_local` -- a single local dissipation channel, available
  when some mode of the graph is decoupled from the rest.
* :func:`realize_local_passive` -- R = 0 with a Gamma chosen so the
  inter-mode Hamiltonian is beam-splitter-like.
* :func:`passive_transform_realize` -- a stable passive system conjugated
  by the state's symplectic factor.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .core import (
    CascadeChain,
    GaussianGraph,
    OscSubsystem,
    Realization,
    SynthesisParams,
    interleaving_permutation,
    symmetrize,
)
from .errors import (
    ChannelMismatchError,
    CovAssignError,
    InfeasibleTargetError,
    NotHurwitzError,
    RankConditionError,
)
from .linalg import complete_unitary, controllability_rank, inv_sqrt_spd, is_hurwitz, sqrt_spd
from .verify import state_space


@dataclass(frozen=True)
class LocalFeasibility:
    """``eligible_modes`` are 1-based modes whose row of ``Z`` vanishes off
    the diagonal; ``max_offdiag[j]`` is that row's largest off-diagonal
    magnitude for mode ``j + 1``."""

    eligible_modes: tuple
    max_offdiag: tuple
    tol: float

    @property
    def feasible(self):
        return bool(self.eligible_modes)

    def as_dict(self):
        return {
            "eligible_modes": list(self.eligible_modes),
            "max_offdiag": list(self.max_offdiag),
            "tol": self.tol,
        }


def rank_report(g, params, threshold=None):
    return controllability_rank(params.Q(g.Y), params.P, threshold)


def realize_general(g, params, check_rank=True, rank_threshold=None):
    """Hamiltonian and coupling matrices for free parameters (R, Gamma, P).

    The realization is stable with the target as unique steady state iff the
    Krylov matrix of ``(Q, P)`` with ``Q = -i R Y + Y^{-1} Gamma`` has full
    rank; that is enforced unless ``check_rank`` is false.
    """
    X, Y = g.X, g.Y
    R, G, P = params.R, params.Gamma, params.P
    if R.shape != X.shape:
        raise ValueError(f"parameters are {R.shape[0]}-mode, graph is {g.n}-mode")
    if check_rank:
        rep = rank_report(g, params, rank_threshold)
        if not rep.full:
            raise RankConditionError(
                f"rank condition fails: numerical rank {rep.numerical_rank} < {g.n}", rep
            )
    Yinv = np.linalg.inv(Y)
    GYX = G @ Yinv @ X
    M11 = X @ R @ X + Y @ R @ Y - GYX - GYX.T
    M12 = -X @ R + G @ Yinv
    M = np.block([[M11, M12], [M12.T, R]])
    C = P.T @ np.hstack([-g.Z, np.eye(g.n)])
    return Realization(0.5 * (M + M.T), C)


def compose_chain(chain):
    """Hamiltonian and coupling of the cascade ``G_N <| ... <| G_1``.

    In the interleaved ordering the Hamiltonian matrix has diagonal blocks
    ``M_j`` and lower blocks ``Im(C_j^dag C_k)`` for ``j > k``; the result is
    permuted back to grouped ordering.
    """
    subs = list(chain)
    if not subs:
        raise ValueError("empty cascade chain")
    ks = {s.C.shape[0] for s in subs}
    if len(ks) != 1:
        raise ChannelMismatchError(f"subsystems disagree on channel count: {sorted(ks)}")
    n = len(subs)
    big = np.zeros((2 * n, 2 * n))
    for j, sj in enumerate(subs):
        big[2 * j:2 * j + 2, 2 * j:2 * j + 2] = sj.M
        for k in range(j):
            blk = (sj.C.conj().T @ subs[k].C).imag
            big[2 * j:2 * j + 2, 2 * k:2 * k + 2] = blk
            big[2 * k:2 * k + 2, 2 * j:2 * j + 2] = blk.T
    Pn = interleaving_permutation(n)
    M = Pn @ big @ Pn.T
    C = np.hstack([s.C for s in subs]) @ Pn.T
    return Realization(M, C)


def _joint_order(n1, n2):
    # positions of grouped joint coordinates inside the stacked (x1, x2) vector
    q1 = range(n1)
    p1 = range(n1, 2 * n1)
    q2 = range(2 * n1, 2 * n1 + n2)
    p2 = range(2 * n1 + n2, 2 * n1 + 2 * n2)
    return np.array([*q1, *q2, *p1, *p2])


def compose_series(G1, G2):
    """Series product ``G2 <| G1`` on the direct sum of their mode sets.

    ``G1``'s output drives ``G2``. ``H = H1 + H2 + (L2^dag L1 - L1^dag L2)/2i``
    and ``L = L1 + L2``; G1's modes come first in the joint ordering.
    """
    if G1.k != G2.k:
        raise ChannelMismatchError(f"channel counts differ: {G1.k} vs {G2.k}")
    cross = (G2.C.conj().T @ G1.C).imag
    M_stack = np.block([[G1.M, cross.T], [cross, G2.M]])
    C_stack = np.hstack([G1.C, G2.C])
    order = _joint_order(G1.n, G2.n)
    return Realization(M_stack[np.ix_(order, order)], C_stack[:, order])


def realize_cascade(g):
    """Cascade of N undriven oscillators preparing the state with graph ``g``.

    Oscillator j couples through the q_j and p_j columns of
    ``C = i Y^{-1/2} [-Z, I]``; the composed system has ``M = 0``,
    drift ``-I`` and diffusion ``2 V``.

    Returns
    -------
    chain : CascadeChain
    realization : Realization
    """
    n = g.n
    C_full = 1j * inv_sqrt_spd(g.Y) @ np.hstack([-g.Z, np.eye(n)])
    subs = [OscSubsystem(np.zeros((2, 2)), C_full[:, [j, n + j]]) for j in range(n)]
    chain = CascadeChain(tuple(subs))
    return chain, compose_chain(chain)


def local_feasibility(g, tol=1e-12):
    Z = g.Z
    n = g.n
    offmax = []
    for ell in range(n):
        row = np.abs(np.delete(Z[ell], ell))
        offmax.append(float(row.max()) if row.size else 0.0)
    eligible = tuple(ell + 1 for ell, m in enumerate(offmax) if m <= tol)
    return LocalFeasibility(eligible, tuple(offmax), float(tol))


def local_params(g, mode, alphas=None):
    """(R, Gamma, P) of the single-channel local construction on ``mode``
    (1-based).

    With ``W = U1 U2^dag Lambda U2 U1^dag`` anti-Hermitian,
    ``R = -Y^{-1/2} Im(W) Y^{-1/2}`` and ``Gamma = Y^{1/2} Re(W) Y^{1/2}`` make
    ``Q = Y^{-1/2} W Y^{1/2}``, whose Krylov matrix against ``P = e_mode`` is a
    scaled Vandermonde matrix in the distinct ``alphas``.
    """
    n = g.n
    alphas = np.arange(1, n + 1, dtype=float) if alphas is None else np.asarray(alphas, float)
    if alphas.shape != (n,):
        raise ValueError(f"need {n} alphas, got {alphas.shape}")
    if len(np.unique(alphas)) != n:
        raise ValueError("alphas must be pairwise distinct")
    ell = mode - 1
    upsilon = np.zeros(n)
    upsilon[ell] = 1.0

    Yh = sqrt_spd(g.Y)
    Yih = inv_sqrt_spd(g.Y)
    seed = Yh @ upsilon
    U1 = complete_unitary(seed / np.linalg.norm(seed))
    U2 = complete_unitary(np.full(n, 1.0 / np.sqrt(n)))
    Lam = np.diag(1j * alphas)
    T = U1 @ U2.conj().T
    W = T @ Lam @ T.conj().T
    R = -Yih @ W.imag @ Yih
    Gamma = Yh @ W.real @ Yh
    return SynthesisParams(0.5 * (R + R.T), 0.5 * (Gamma - Gamma.T), upsilon[:, None])


def realize_local(g, mode, alphas=None, tol=1e-12):
    """Locally dissipative realization with one channel acting on ``mode``.

    Raises :class:`InfeasibleTargetError` if row ``mode`` of ``Z`` has
    off-diagonal entries above ``tol``.
    """
    feas = local_feasibility(g, tol)
    if mode not in feas.eligible_modes:
        raise InfeasibleTargetError(
            f"mode {mode} cannot carry a local coupling (eligible: {list(feas.eligible_modes)})",
            feas,
        )
    return realize_general(g, local_params(g, mode, alphas))


def _skew_basis(n):
    out = []
    for i, j in itertools.combinations(range(n), 2):
        E = np.zeros((n, n))
        E[i, j], E[j, i] = 1.0, -1.0
        out.append(E)
    return out


def solve_passive_gamma(X, rtol=1e-10):
    """Basis of skew ``Gamma`` with ``Gamma X + X Gamma^T`` diagonal.

    The returned matrices are orthonormal in the Frobenius inner product.
    """
    X = symmetrize(X, "X")
    n = X.shape[0]
    elems = _skew_basis(n)
    if not elems:
        return []
    off = ~np.eye(n, dtype=bool)
    A = np.column_stack([(E @ X - X @ E)[off] for E in elems])
    _, s, Vh = np.linalg.svd(A)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > rtol * max(smax, 1.0)))
    null = Vh[rank:].T  # coefficient vectors, orthonormal
    basis = []
    for col in null.T:
        G = sum(c * E for c, E in zip(col, elems)) / np.sqrt(2.0)
        basis.append(G)
    return basis


def gamma_coefficients(basis, Gamma, tol=1e-10):
    """Coordinates of ``Gamma`` in an orthonormal basis from
    :func:`solve_passive_gamma`; raises if ``Gamma`` lies outside the span."""
    Gamma = np.asarray(Gamma, dtype=float)
    coeffs = np.array([np.sum(B * Gamma) for B in basis])
    rebuilt = sum((c * B for c, B in zip(coeffs, basis)), np.zeros_like(Gamma))
    miss = np.linalg.norm(rebuilt - Gamma)
    if miss > tol * max(1.0, np.linalg.norm(Gamma)):
        raise CovAssignError(f"Gamma is not in the passive span (residual {miss:.3g})")
    return coeffs


def realize_local_passive(g, P, gamma_coeffs, rank_threshold=None):
    """Realization with ``R = 0`` and ``Gamma`` drawn from the passive span of
    ``g.X`` (see :func:`solve_passive_gamma`)."""
    basis = solve_passive_gamma(g.X)
    gamma_coeffs = np.atleast_1d(np.asarray(gamma_coeffs, dtype=float))
    if gamma_coeffs.shape != (len(basis),):
        raise ValueError(f"need {len(basis)} gamma coefficients, got {gamma_coeffs.shape}")
    n = g.n
    Gamma = sum((c * B for c, B in zip(gamma_coeffs, basis)), np.zeros((n, n)))
    params = SynthesisParams(np.zeros((n, n)), Gamma, P)
    return realize_general(g, params, rank_threshold=rank_threshold)


def enlarge_with_auxiliary(g, lam, y_aux=1.0):
    """Append a decoupled auxiliary mode with graph entry ``lam + i y_aux``."""
    if not y_aux > 0:
        raise ValueError(f"y_aux must be positive, got {y_aux!r}")
    n = g.n
    X = np.zeros((n + 1, n + 1))
    Y = np.zeros((n + 1, n + 1))
    X[:n, :n], Y[:n, :n] = g.X, g.Y
    X[n, n], Y[n, n] = lam, y_aux
    return GaussianGraph(X, Y)


def passive_transform_realize(g, Mtilde, Ptilde, margin=1e-9):
    """Conjugate a stable passive system by the symplectic factor ``S`` of
    the target: ``M = S^{-T} Mtilde S^{-1}``, ``C = Ctilde S^{-1}`` with
    ``Ctilde = Ptilde^T [-iI, I]``.
    """
    n = g.n
    Mt = symmetrize(Mtilde, "Mtilde")
    if Mt.shape != (2 * n, 2 * n):
        raise ValueError(f"Mtilde must be {2 * n}x{2 * n}")
    Rt, Gt = Mt[:n, :n], Mt[:n, n:]
    scale = max(1.0, np.linalg.norm(Mt))
    if np.linalg.norm(Mt[n:, n:] - Rt) > 1e-9 * scale or np.linalg.norm(Gt + Gt.T) > 1e-9 * scale:
        raise ValueError("Mtilde is not of passive form [[R, G], [G^T, R]] with G skew")
    Pt = np.asarray(Ptilde, dtype=complex)
    if Pt.ndim == 1:
        Pt = Pt[:, None]
    Ct = Pt.T @ np.hstack([-1j * np.eye(n), np.eye(n)])
    passive = Realization(Mt, Ct)
    rep = is_hurwitz(state_space(passive).A, margin)
    if not rep.hurwitz:
        raise NotHurwitzError(
            f"passive system is not stable (spectral abscissa {rep.spectral_abscissa:.3g})",
            rep.spectral_abscissa,
        )
    Sinv = np.block([
        [sqrt_spd(g.Y), np.zeros((n, n))],
        [-inv_sqrt_spd(g.Y) @ g.X, inv_sqrt_spd(g.Y)],
    ])
    M = Sinv.T @ Mt @ Sinv
    return Realization(0.5 * (M + M.T), Ct @ Sinv)
