import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import closed_form_two_mode, random_graph_matrices

from covassign import (
    GaussianGraph,
    ImpureStateError,
    NotPositiveDefiniteError,
    Realization,
    SynthesisParams,
    graph_from_covariance,
    interleaving_permutation,
    purity_check,
    state_from_graph,
    symplectic_form,
)


def test_symplectic_form_single_mode():
    np.testing.assert_array_equal(symplectic_form(1), [[0, 1], [-1, 0]])


def test_symplectic_form_two_modes():
    expected = np.array([
        [0, 0, 1, 0],
        [0, 0, 0, 1],
        [-1, 0, 0, 0],
        [0, -1, 0, 0],
    ])
    np.testing.assert_array_equal(symplectic_form(2), expected)


@pytest.mark.parametrize("n", range(1, 7))
def test_symplectic_form_identities(n):
    s = symplectic_form(n)
    np.testing.assert_array_equal(s.T, -s)
    np.testing.assert_array_equal(s @ s, -np.eye(2 * n))
    np.testing.assert_array_equal(s @ s.T, np.eye(2 * n))


def test_interleaving_permutation():
    np.testing.assert_array_equal(interleaving_permutation(1), np.eye(2))
    P = interleaving_permutation(2)
    np.testing.assert_array_equal(P @ np.array([1.0, 2.0, 3.0, 4.0]), [1.0, 3.0, 2.0, 4.0])


@pytest.mark.parametrize("n", range(1, 7))
def test_interleaving_permutation_orthogonal_and_blocks(n):
    P = interleaving_permutation(n)
    np.testing.assert_array_equal(P @ P.T, np.eye(2 * n))
    per_mode = P.T @ symplectic_form(n) @ P
    expected = np.kron(np.eye(n), [[0, 1], [-1, 0]])
    np.testing.assert_array_equal(per_mode, expected)


def test_invalid_mode_count():
    with pytest.raises(ValueError):
        symplectic_form(0)
    with pytest.raises(ValueError):
        interleaving_permutation(0)


def test_graph_validation():
    with pytest.raises(NotPositiveDefiniteError) as err:
        GaussianGraph(np.zeros((2, 2)), np.diag([1.0, -0.5]))
    assert err.value.min_eigenvalue == pytest.approx(-0.5)
    with pytest.raises(ValueError):
        GaussianGraph([[0, 1], [0, 0]], np.eye(2))
    # tiny asymmetry is absorbed
    g = GaussianGraph([[0, 1], [1 + 1e-12, 0]], np.eye(2))
    np.testing.assert_array_equal(g.X, g.X.T)
    assert not g.X.flags.writeable


def test_vacuum_state():
    st_ = state_from_graph(GaussianGraph(np.zeros((3, 3)), np.eye(3)))
    np.testing.assert_allclose(st_.V, 0.5 * np.eye(6), atol=1e-15)


@pytest.mark.parametrize("alpha", [0.2, 0.5, 1.0])
def test_two_mode_squeezed_state(alpha):
    c, s = np.cosh(2 * alpha), np.sinh(2 * alpha)
    g = GaussianGraph(np.zeros((2, 2)), [[c, -s], [-s, c]])
    np.testing.assert_allclose(state_from_graph(g).V, closed_form_two_mode(alpha), atol=1e-13)


def test_state_block_formula(random_graph):
    g = random_graph(3)
    V = state_from_graph(g).V
    Yi = np.linalg.inv(g.Y)
    expected = 0.5 * np.block([[Yi, Yi @ g.X], [g.X @ Yi, g.X @ Yi @ g.X + g.Y]])
    np.testing.assert_allclose(V, expected, rtol=1e-10, atol=1e-10)
    assert np.linalg.det(V) == pytest.approx(2.0**-6, rel=1e-10)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 8), seed=st.integers(0, 2**32 - 1))
def test_state_invariants_and_round_trip(n, seed):
    rng = np.random.default_rng(seed)
    X, Y = random_graph_matrices(rng, n)
    g = GaussianGraph(X, Y)
    st_ = state_from_graph(g)
    sig = symplectic_form(n)
    assert np.linalg.norm(st_.S @ sig @ st_.S.T - sig) <= 1e-10
    np.testing.assert_allclose(st_.V, 0.5 * st_.S @ st_.S.T, atol=1e-12 * np.abs(st_.V).max())
    assert purity_check(st_.V).det_defect <= 1e-8
    assert purity_check(st_.V).min_uncertainty_eig >= -1e-9 * np.abs(st_.V).max()
    back = graph_from_covariance(st_.V)
    assert np.linalg.norm(back.X - g.X) <= 1e-10
    assert np.linalg.norm(back.Y - g.Y) <= 1e-10


def test_graph_from_covariance_examples():
    g = graph_from_covariance(0.5 * np.eye(4))
    np.testing.assert_allclose(g.X, 0, atol=1e-15)
    np.testing.assert_allclose(g.Y, np.eye(2), atol=1e-15)

    g = graph_from_covariance(closed_form_two_mode(0.5))
    np.testing.assert_allclose(g.X, 0, atol=1e-14)
    np.testing.assert_allclose(g.Y, [[np.cosh(1), -np.sinh(1)], [-np.sinh(1), np.cosh(1)]], atol=1e-13)


def test_graph_from_covariance_rejects_impure():
    with pytest.raises(ImpureStateError) as err:
        graph_from_covariance(np.eye(4))
    assert err.value.det_defect == pytest.approx(15.0)


def test_purity_check_examples():
    rep = purity_check(0.5 * np.eye(6))
    assert rep.det_defect == pytest.approx(0, abs=1e-15)
    assert rep.min_uncertainty_eig == pytest.approx(0, abs=1e-15)
    assert purity_check(closed_form_two_mode(0.5)).det_defect <= 1e-10
    for n in (1, 2, 3):
        assert purity_check(np.eye(2 * n)).det_defect == pytest.approx(2 ** (2 * n) - 1)


def test_realization_and_params_validation():
    with pytest.raises(ValueError):
        Realization(np.eye(3), np.zeros((1, 3)))
    with pytest.raises(ValueError):
        Realization(np.eye(2), np.zeros((1, 4)))
    with pytest.raises(ValueError):
        SynthesisParams(np.eye(2), np.eye(2), np.ones((2, 1)))
    with pytest.raises(ValueError):
        SynthesisParams(np.eye(2), np.zeros((2, 2)), np.zeros((2, 1)))
    p = SynthesisParams(np.eye(2), [[0, 1], [-1, 0]], [1, 0])
    assert p.P.shape == (2, 1)
    Y = np.diag([2.0, 3.0])
    np.testing.assert_allclose(p.Q(Y), -1j * Y + np.linalg.inv(Y) @ p.Gamma)
