"""Target states and named fixtures from the worked examples."""

from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np

from .core import CascadeChain, GaussianGraph, OscSubsystem
from .errors import CovAssignError

SQRT2 = np.sqrt(2.0)


def vacuum(n):
    return GaussianGraph(np.zeros((n, n)), np.eye(n))


def two_mode_squeezed(alpha):
    c, s = np.cosh(2 * alpha), np.sinh(2 * alpha)
    return GaussianGraph(np.zeros((2, 2)), np.array([[c, -s], [-s, c]]))


def two_mode_squeezed_covariance(alpha):
    """Closed-form covariance of the two-mode squeezed state."""
    c, s = np.cosh(2 * alpha), np.sinh(2 * alpha)
    return 0.5 * np.array([
        [c, s, 0, 0],
        [s, c, 0, 0],
        [0, 0, c, -s],
        [0, 0, -s, c],
    ])


def canonical_cluster(B, alpha):
    """Canonical Gaussian cluster state: ``X = B``, ``Y = e^{-2 alpha} I``."""
    B = np.asarray(B, dtype=float)
    return GaussianGraph(B, np.exp(-2 * alpha) * np.eye(B.shape[0]))


def canonical_cluster_covariance(B, alpha):
    B = np.asarray(B, dtype=float)
    n = B.shape[0]
    up, dn = np.exp(2 * alpha), np.exp(-2 * alpha)
    return 0.5 * np.block([[up * np.eye(n), up * B], [up * B, dn * np.eye(n) + up * B @ B]])


# Adjacency of the four-mode cluster with a decoupled fourth mode.
ADJ_DECOUPLED_4 = np.array([
    [0, 1, 0, 0],
    [1, 0, 1, 0],
    [0, 1, 0, 0],
    [0, 0, 0, SQRT2],
])

# Four-mode path graph.
ADJ_PATH_4 = np.array([
    [0, 1, 0, 0],
    [1, 0, 1, 0],
    [0, 1, 0, 1],
    [0, 0, 1, 0],
], dtype=float)


def decoupled_cluster_gamma(g1, g2):
    """Two-parameter skew family keeping the Hamiltonian passive between
    modes for :data:`ADJ_DECOUPLED_4`."""
    return np.array([
        [0, g1, 0, g2],
        [-g1, 0, g1, SQRT2 * g2],
        [0, -g1, 0, g2],
        [-g2, -SQRT2 * g2, -g2, 0],
    ])


def path_cluster_gamma(g1, g2):
    """Same as :func:`decoupled_cluster_gamma` for :data:`ADJ_PATH_4`."""
    return np.array([
        [0, g1, 0, g2],
        [-g1, 0, g1 + g2, 0],
        [0, -(g1 + g2), 0, g1],
        [-g2, 0, -g1, 0],
    ])


@dataclass(frozen=True)
class Fixture:
    name: str
    graph: GaussianGraph
    notes: str
    constants: MappingProxyType = field(default_factory=lambda: MappingProxyType({}))
    chain: CascadeChain = None


def _tms_heuristic_chain(alpha):
    c, s = np.cosh(2 * alpha), np.sinh(2 * alpha)
    q1 = s**2 / c - s
    q2 = s - c
    H = np.array([[2.0, q1], [q1, 2.0]])
    L = np.array([[1j * q2, 1.0]])
    chain = CascadeChain((OscSubsystem(H, L), OscSubsystem(-H, L)))
    return chain, {"Q1": q1, "Q2": q2}


def _tms_undriven_chain(alpha):
    ch, sh = np.cosh(alpha), np.sinh(alpha)
    L1 = np.array([[ch, 1j * ch], [-sh, 1j * sh]])
    L2 = np.array([[-sh, 1j * sh], [ch, 1j * ch]])
    Z = np.zeros((2, 2))
    return CascadeChain((OscSubsystem(Z, L1), OscSubsystem(Z, L2))), {}


FIXTURE_NAMES = (
    "cluster-4-eq14",
    "cluster-4-eq16",
    "cluster-5-eq17",
    "tms-realization1-params",
    "tms-realization2-params",
)


def fixture(name, alpha=0.5, lam=SQRT2):
    """Named target from the worked examples.

    ``alpha`` is the squeezing parameter; ``lam`` is the auxiliary-mode
    graph entry of ``cluster-5-eq17``.
    """
    if name == "cluster-4-eq14":
        return Fixture(name, canonical_cluster(ADJ_DECOUPLED_4, alpha),
                       "4-mode canonical cluster, mode 4 decoupled (X44 = sqrt 2)")
    if name == "cluster-4-eq16":
        return Fixture(name, canonical_cluster(ADJ_PATH_4, alpha),
                       "4-mode canonical cluster on the path graph")
    if name == "cluster-5-eq17":
        B = np.zeros((5, 5))
        B[:4, :4] = ADJ_PATH_4
        B[4, 4] = lam
        return Fixture(name, canonical_cluster(B, alpha),
                       "path cluster enlarged by one decoupled auxiliary mode",
                       MappingProxyType({"lambda": lam}))
    if name == "tms-realization1-params":
        chain, consts = _tms_heuristic_chain(alpha)
        return Fixture(name, two_mode_squeezed(alpha),
                       "two-mode squeezed state, heuristic two-oscillator cascade",
                       MappingProxyType(consts), chain)
    if name == "tms-realization2-params":
        chain, consts = _tms_undriven_chain(alpha)
        return Fixture(name, two_mode_squeezed(alpha),
                       "two-mode squeezed state, undriven cascade with cosh/sinh couplings",
                       MappingProxyType(consts), chain)
    raise CovAssignError(f"unknown fixture {name!r}; valid names: {', '.join(FIXTURE_NAMES)}")
