import numpy as np
import pytest
from oracles import closed_form_two_mode

from covassign import CovAssignError, purity_check, state_from_graph
from covassign.states import (
    ADJ_DECOUPLED_4,
    ADJ_PATH_4,
    FIXTURE_NAMES,
    canonical_cluster,
    canonical_cluster_covariance,
    fixture,
    two_mode_squeezed,
    vacuum,
)
from covassign.synthesis import compose_chain, realize_cascade, realize_local
from covassign.verify import simulate_moments, state_space, verify_assignment


def test_vacuum():
    assert np.allclose(state_from_graph(vacuum(1)).V, 0.5 * np.eye(2))
    V = state_from_graph(vacuum(3)).V
    assert np.linalg.det(2 * V) == 1.0
    np.testing.assert_array_equal(vacuum(2).Z, 1j * np.eye(2))


def test_two_mode_squeezed():
    g0 = two_mode_squeezed(0.0)
    np.testing.assert_array_equal(g0.X, vacuum(2).X)
    np.testing.assert_array_equal(g0.Y, vacuum(2).Y)
    V = state_from_graph(two_mode_squeezed(0.5)).V
    assert V[0, 0] == pytest.approx(0.5 * np.cosh(1), rel=1e-15)
    np.testing.assert_allclose(V, closed_form_two_mode(0.5), atol=1e-15)
    for a in (0.1, 0.7, 2.0):
        assert np.linalg.det(two_mode_squeezed(a).Y) == pytest.approx(1.0, rel=1e-12)


def test_canonical_cluster_block_form(rng):
    np.testing.assert_array_equal(canonical_cluster(np.zeros((3, 3)), 0).Y, np.eye(3))
    for alpha in (0.3, 1.0):
        B = rng.uniform(-1, 1, (4, 4))
        B = B + B.T
        V = state_from_graph(canonical_cluster(B, alpha)).V
        expected = canonical_cluster_covariance(B, alpha)
        assert np.abs(V - expected).max() <= 1e-12 * np.abs(expected).max()
        np.testing.assert_allclose(
            2 * V[4:, 4:], np.exp(-2 * alpha) * np.eye(4) + np.exp(2 * alpha) * B @ B, rtol=1e-12
        )


def test_fixture_matrices():
    g = fixture("cluster-4-eq14", 0.3).graph
    np.testing.assert_array_equal(g.X, [[0, 1, 0, 0], [1, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, np.sqrt(2)]])
    assert g.X[3, 3] == np.sqrt(2)
    np.testing.assert_array_equal(g.Y, np.exp(-0.6) * np.eye(4))
    g = fixture("cluster-4-eq16", 0.3).graph
    assert g.X[2, 3] == 1 and g.X[3, 3] == 0
    np.testing.assert_array_equal(g.X, ADJ_PATH_4)
    g = fixture("cluster-5-eq17", 0.3, lam=0.25).graph
    assert g.n == 5 and g.X[4, 4] == 0.25
    np.testing.assert_array_equal(g.Y, np.exp(-0.6) * np.eye(5))
    np.testing.assert_array_equal(ADJ_DECOUPLED_4, ADJ_DECOUPLED_4.T)


def test_tms_fixture_constants():
    fx = fixture("tms-realization1-params", 0.5)
    assert fx.constants["Q2"] == pytest.approx(-np.exp(-1), rel=1e-14)
    c, s = np.cosh(1), np.sinh(1)
    assert fx.constants["Q1"] == pytest.approx(s**2 / c - s, rel=1e-14)
    H1, L1 = fx.chain.subsystems[0].M, fx.chain.subsystems[0].C
    H2, L2 = fx.chain.subsystems[1].M, fx.chain.subsystems[1].C
    np.testing.assert_array_equal(H2, -H1)
    np.testing.assert_array_equal(L1, L2)
    assert L1[0, 0] == 1j * fx.constants["Q2"]


def test_undriven_cascade_fixture_matches_cascade():
    for a in (0.2, 0.5, 1.0):
        fx = fixture("tms-realization2-params", a)
        chain, _ = realize_cascade(fx.graph)
        for s_fx, s in zip(fx.chain, chain):
            np.testing.assert_allclose(s.C, s_fx.C, atol=1e-12)
            np.testing.assert_array_equal(s.M, s_fx.M)


def test_fixture_unknown_name():
    with pytest.raises(CovAssignError) as err:
        fixture("cluster-3")
    for name in FIXTURE_NAMES:
        assert name in str(err.value)


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixtures_are_pure(name):
    for alpha in (0.3, 1.0):
        V = state_from_graph(fixture(name, alpha).graph).V
        assert purity_check(V).det_defect <= 1e-10


def test_heuristic_cascade_converges_from_vacuum():
    fx = fixture("tms-realization1-params", 0.5)
    r = compose_chain(fx.chain)
    abscissa = np.linalg.eigvals(state_space(r).A).real.max()
    t_end = 20 / abs(abscissa)
    times = np.linspace(0, t_end, 41)
    traj = simulate_moments(r, 0.5 * np.eye(4), times=times)
    target = closed_form_two_mode(0.5)
    dist = [np.linalg.norm(V - target) for V in traj.covariances]
    assert dist[-1] < 1e-6
    assert dist[-1] < dist[0]


@pytest.mark.parametrize("alpha", [2.0, 3.0])
def test_conditioning_canary(alpha):
    """Strong squeezing makes Y = e^{-2 alpha} I badly scaled; synthesis must
    still verify at a relaxed tolerance. The local construction needs its
    frequencies scaled to the spectrum of Y to keep the drift away from the
    imaginary axis."""
    g = fixture("cluster-4-eq14", alpha).graph
    _, r = realize_cascade(g)
    assert verify_assignment(r, g, tol=1e-6).passed
    scale = np.linalg.eigvalsh(g.Y)[0]
    r = realize_local(g, 4, alphas=scale * np.arange(1, 5))
    assert verify_assignment(r, g, tol=1e-6).passed
    g = fixture("cluster-5-eq17", alpha).graph
    r = realize_local(g, 5, alphas=scale * np.arange(1, 6))
    assert verify_assignment(r, g, tol=1e-6).passed
