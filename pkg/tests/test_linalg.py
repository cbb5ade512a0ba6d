import numpy as np
import pytest

from hyperquasi.linalg import ConvergenceError, jacobi_eigh, sort_by_magnitude, symmetric_eigs


def _rand_sym(n, seed, scale=1.0):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n)) * scale
    return a + a.T


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 17, 40])
def test_jacobi_matches_lapack(n):
    a = _rand_sym(n, n)
    w, V = jacobi_eigh(a)
    assert np.allclose(w, np.linalg.eigvalsh(a), atol=1e-10)
    assert np.allclose(a @ V, V * w, atol=1e-9)
    assert np.allclose(V.T @ V, np.eye(n), atol=1e-10)


def test_large_entries_relative_tolerance():
    a = _rand_sym(12, 3, scale=1e8)
    w, _ = jacobi_eigh(a)
    assert np.allclose(w, np.linalg.eigvalsh(a), rtol=1e-12, atol=1e-12 * np.abs(a).max() * 12)


def test_examples():
    k3 = np.ones((3, 3)) - np.eye(3)
    assert np.allclose(symmetric_eigs(k3), [2, -1, -1])
    assert np.allclose(symmetric_eigs(np.eye(4)), [1, 1, 1, 1])
    assert np.allclose(symmetric_eigs(np.zeros((3, 3))), [0, 0, 0])


def test_sorted_by_magnitude():
    w = symmetric_eigs(np.diag([1.0, -3.0, 2.0, 3.0]))
    assert list(w) == [3.0, -3.0, 2.0, 1.0]
    assert list(sort_by_magnitude([0.5, -2, 1])) == [-2, 1, 0.5]


def test_methods_agree():
    a = _rand_sym(30, 9)
    assert np.allclose(symmetric_eigs(a, "jacobi"), symmetric_eigs(a, "lapack"), atol=1e-10)
    with pytest.raises(ValueError):
        symmetric_eigs(a, "qr")


def test_rejects_nonsymmetric():
    with pytest.raises(ValueError):
        jacobi_eigh(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        jacobi_eigh(np.ones((2, 3)))


def test_non_convergence_raises():
    with pytest.raises(ConvergenceError):
        jacobi_eigh(_rand_sym(10, 1), max_sweeps=1)
