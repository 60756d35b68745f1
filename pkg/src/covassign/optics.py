"""Map a realization onto quantum-optical components.

Conventions (ladder operators ``a = (q + i p)/sqrt 2``):

* crystal in a cavity: ``H = Delta a^dag a + (i/2)(eps a^dag^2 - eps^* a^2)``,
  equal to ``xi^T [[Delta - Im eps, Re eps], [Re eps, Delta + Im eps]] xi / 2``
  up to a constant;
* beam splitter between modes j, k:
  ``H = i theta e^{-i phi} a_j^dag a_k - i theta e^{i phi} a_k^dag a_j``;
* two-mode pump between modes j, k:
  ``H = (i/2)(eps a_j^dag a_k^dag - eps^* a_j a_k)``;
* coupling cavity with adiabatically eliminated auxiliary mode of decay
  ``gamma``: ``L = (-eps2^* a + eps1 a^dag)/sqrt(gamma)``.

Modes are 1-based throughout the netlist.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

PRUNE_TOL = 1e-12

# xi = (q, p) = _T @ (a, a^dag)
_T = np.array([[1.0, 1.0], [-1j, 1j]]) / np.sqrt(2.0)
_T_INV = np.linalg.inv(_T)


@dataclass(frozen=True)
class Crystal:
    mode: int
    detuning: float
    pump: complex


@dataclass(frozen=True)
class BeamSplitter:
    mode_j: int
    mode_k: int
    theta: float
    phi: float


@dataclass(frozen=True)
class TwoModePump:
    mode_j: int
    mode_k: int
    pump: complex


@dataclass(frozen=True)
class Coupling:
    """One dissipation channel. ``coefficients`` holds ``(c_q, c_p)`` for
    each mode in ``modes``; ``eps1``/``eps2`` are only set for local rows."""

    modes: tuple
    gamma: float
    eps1: Optional[complex]
    eps2: Optional[complex]
    local: bool
    coefficients: tuple = ()


@dataclass(frozen=True)
class OpticsNetlist:
    n_modes: int
    crystals: tuple = field(default_factory=tuple)
    beamsplitters: tuple = field(default_factory=tuple)
    two_mode_pumps: tuple = field(default_factory=tuple)
    couplings: tuple = field(default_factory=tuple)

    @property
    def pumped_crystal_count(self):
        """Nonlinear crystals with a nonzero pump, including those inside
        coupling cavities and two-mode pumps."""
        count = sum(1 for c in self.crystals if abs(c.pump) > PRUNE_TOL)
        count += len(self.two_mode_pumps)
        count += sum(1 for c in self.couplings if c.local and abs(c.eps1) > PRUNE_TOL)
        return count

    def as_dict(self):
        return {
            "n_modes": self.n_modes,
            "crystals": [
                {"mode": c.mode, "detuning": c.detuning, "pump": _cplx(c.pump)}
                for c in self.crystals
            ],
            "beamsplitters": [
                {"mode_j": b.mode_j, "mode_k": b.mode_k, "theta": b.theta, "phi": b.phi}
                for b in self.beamsplitters
            ],
            "two_mode_pumps": [
                {"mode_j": p.mode_j, "mode_k": p.mode_k, "pump": _cplx(p.pump)}
                for p in self.two_mode_pumps
            ],
            "couplings": [
                {
                    "modes": list(c.modes),
                    "gamma": c.gamma,
                    "eps1": None if c.eps1 is None else _cplx(c.eps1),
                    "eps2": None if c.eps2 is None else _cplx(c.eps2),
                    "local": c.local,
                    "coefficients": [[_cplx(cq), _cplx(cp)] for cq, cp in c.coefficients],
                }
                for c in self.couplings
            ],
        }


def _cplx(z):
    z = complex(z)
    return [z.real, z.imag]


def crystal_params(M_d):
    """Detuning and pump realizing ``H = xi^T M_d xi / 2`` on one mode."""
    M_d = np.asarray(M_d, dtype=float)
    m11, m12, m22 = M_d[0, 0], 0.5 * (M_d[0, 1] + M_d[1, 0]), M_d[1, 1]
    delta = 0.5 * (m11 + m22)
    eps = complex(m12, 0.5 * (m22 - m11))
    return float(delta), eps


def crystal_matrix(delta, eps):
    return np.array([
        [delta - eps.imag, eps.real],
        [eps.real, delta + eps.imag],
    ])


def beamsplitter_params(h):
    """``(theta, phi)`` with ``i theta e^{-i phi} = h``; ``phi`` in [0, 2 pi)."""
    h = complex(h)
    if h == 0:
        raise ValueError("zero beam-splitter coefficient has no component")
    theta = abs(h)
    phi = math.fmod(-np.angle(-1j * h), 2 * math.pi)
    if phi < 0:
        phi += 2 * math.pi
    return float(theta), float(phi)


def beamsplitter_coefficient(theta, phi):
    return 1j * theta * np.exp(-1j * phi)


def coupling_params(c_q, c_p, gamma):
    """Pump amplitudes ``(eps1, eps2)`` of a coupling cavity realizing
    ``L = c_q q + c_p p``."""
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma!r}")
    a_minus = (c_q - 1j * c_p) / np.sqrt(2.0)
    a_plus = (c_q + 1j * c_p) / np.sqrt(2.0)
    rg = np.sqrt(gamma)
    return complex(rg * a_plus), complex(-rg * np.conj(a_minus))


def coupling_coefficients(eps1, eps2, gamma):
    """Inverse of :func:`coupling_params`: ``(c_q, c_p)``."""
    rg = np.sqrt(gamma)
    a_minus = -np.conj(eps2) / rg
    a_plus = eps1 / rg
    return complex((a_minus + a_plus) / np.sqrt(2.0)), complex(1j * (a_minus - a_plus) / np.sqrt(2.0))


def ladder_cross_terms(B):
    """For ``H = xi_j^T B xi_k``, return the coefficients of ``a_j^dag a_k``
    and ``a_j^dag a_k^dag``."""
    G = _T.T @ np.asarray(B, dtype=float) @ _T
    return complex(G[1, 0]), complex(G[1, 1])


def cross_block(h, pump_coeff):
    """Inverse of :func:`ladder_cross_terms`."""
    G = np.array([
        [np.conj(pump_coeff), np.conj(h)],
        [h, pump_coeff],
    ])
    return (_T_INV.T @ G @ _T_INV).real


def default_gamma(r):
    return 100.0 * (float(np.max(np.abs(r.M), initial=0.0)) + float(np.max(np.abs(r.C), initial=0.0))) ** 2


def _idx(j, n):
    return [j, n + j]


def netlist(r, gamma=None):
    """Decompose ``(M, C)`` into crystals, beam splitters, two-mode pumps and
    coupling cavities.

    ``gamma`` is the auxiliary-cavity decay rate recorded with every coupling;
    by default a large value from :func:`default_gamma`.
    """
    n = r.n
    M, C = r.M, r.C
    gamma = default_gamma(r) if gamma is None else float(gamma)
    if not gamma > 0:
        gamma = 1.0

    crystals = []
    for j in range(n):
        blk = M[np.ix_(_idx(j, n), _idx(j, n))]
        if np.max(np.abs(blk)) > PRUNE_TOL:
            delta, eps = crystal_params(blk)
            crystals.append(Crystal(j + 1, delta, eps))

    bss, pumps = [], []
    for j in range(n):
        for k in range(j + 1, n):
            blk = M[np.ix_(_idx(j, n), _idx(k, n))]
            h, pc = ladder_cross_terms(blk)
            if abs(h) > PRUNE_TOL:
                theta, phi = beamsplitter_params(h)
                bss.append(BeamSplitter(j + 1, k + 1, theta, phi))
            if abs(pc) > PRUNE_TOL:
                pumps.append(TwoModePump(j + 1, k + 1, complex(-2j * pc)))

    couplings = []
    for row in C:
        mags = np.maximum(np.abs(row[:n]), np.abs(row[n:]))
        modes = tuple(int(j) + 1 for j in np.flatnonzero(mags > PRUNE_TOL))
        if not modes:
            continue
        coeffs = tuple((complex(row[m - 1]), complex(row[n + m - 1])) for m in modes)
        if len(modes) == 1:
            e1, e2 = coupling_params(*coeffs[0], gamma)
            couplings.append(Coupling(modes, gamma, e1, e2, True, coeffs))
        else:
            couplings.append(Coupling(modes, gamma, None, None, False, coeffs))
    couplings.sort(key=lambda c: c.modes[0])

    return OpticsNetlist(n, tuple(crystals), tuple(bss), tuple(pumps), tuple(couplings))


def rebuild_hamiltonian(nl):
    """Hamiltonian matrix implied by the crystals, beam splitters and
    two-mode pumps of a netlist."""
    n = nl.n_modes
    M = np.zeros((2 * n, 2 * n))
    for c in nl.crystals:
        j = c.mode - 1
        M[np.ix_(_idx(j, n), _idx(j, n))] = crystal_matrix(c.detuning, c.pump)
    h = {}
    pc = {}
    for b in nl.beamsplitters:
        h[(b.mode_j, b.mode_k)] = beamsplitter_coefficient(b.theta, b.phi)
    for p in nl.two_mode_pumps:
        pc[(p.mode_j, p.mode_k)] = 0.5j * p.pump
    for (j, k) in set(h) | set(pc):
        blk = cross_block(h.get((j, k), 0.0), pc.get((j, k), 0.0))
        J, K = _idx(j - 1, n), _idx(k - 1, n)
        M[np.ix_(J, K)] = blk
        M[np.ix_(K, J)] = blk.T
    return M


def rebuild_coupling_row(c, n):
    """Coupling row of ``C`` for one netlist coupling (local rows are rebuilt
    from ``eps1``, ``eps2`` and ``gamma``)."""
    row = np.zeros(2 * n, dtype=complex)
    if c.local:
        cq, cp = coupling_coefficients(c.eps1, c.eps2, c.gamma)
        row[c.modes[0] - 1], row[n + c.modes[0] - 1] = cq, cp
    else:
        for m, (cq, cp) in zip(c.modes, c.coefficients):
            row[m - 1], row[n + m - 1] = cq, cp
    return row
