"""Dense symmetric eigensolver by cyclic Jacobi rotations.

Rotations are applied in round-robin (tournament) order: each round pairs
up all indices into disjoint (p, q) pairs, whose rotations commute and are
applied together with vectorized row/column updates. ``n - 1`` rounds make
one sweep that touches every off-diagonal pair once.
"""

from __future__ import annotations

import numpy as np

__all__ = ["ConvergenceError", "jacobi_eigh", "symmetric_eigs", "sort_by_magnitude"]

JACOBI_TOL = 1e-10
JACOBI_MAX_SWEEPS = 100
SYMMETRY_TOL = 1e-12
# above this side length the O(n^3)-per-sweep Jacobi is handed to LAPACK
JACOBI_MAX_DIM = 512


class ConvergenceError(RuntimeError):
    pass


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(a, b), max(a, b)) for a, b in pairs if a < n and b < n]
        if pairs:
            P, Q = zip(*pairs)
            rounds.append((np.array(P), np.array(Q)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _check_symmetric(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.max(np.abs(a))) if a.size else 1.0)
    if a.size and np.max(np.abs(a - a.T)) > SYMMETRY_TOL * scale:
        raise ValueError("matrix is not symmetric")
    return (a + a.T) / 2


def jacobi_eigh(a, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS, vectors: bool = True):
    """Eigen-decomposition of a real symmetric matrix.

    Iterates sweeps until the off-diagonal Frobenius norm drops below
    ``tol * max(1, ||a||_F)``. Returns ``(w, V)`` with ``a @ V = V @ diag(w)``
    (``V`` is None when ``vectors`` is false). Eigenvalues come back in
    ascending order.
    """
    A = _check_symmetric(a).copy()
    n = A.shape[0]
    V = np.eye(n) if vectors else None
    if n <= 1:
        return np.diag(A).copy(), V
    threshold = tol * max(1.0, float(np.linalg.norm(A)))
    rounds = _round_robin(n)
    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off < threshold:
            break
        for P, Q in rounds:
            apq = A[P, Q]
            active = np.abs(apq) > 1e-300
            if not active.any():
                continue
            P_, Q_, apq = P[active], Q[active], apq[active]
            theta = (A[Q_, Q_] - A[P_, P_]) / (2.0 * apq)
            t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
            t[theta == 0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            rp, rq = A[P_, :].copy(), A[Q_, :].copy()
            A[P_, :] = c[:, None] * rp - s[:, None] * rq
            A[Q_, :] = s[:, None] * rp + c[:, None] * rq
            cp, cq = A[:, P_].copy(), A[:, Q_].copy()
            A[:, P_] = cp * c - cq * s
            A[:, Q_] = cp * s + cq * c
            A[P_, Q_] = 0.0
            A[Q_, P_] = 0.0
            if V is not None:
                vp, vq = V[:, P_].copy(), V[:, Q_].copy()
                V[:, P_] = vp * c - vq * s
                V[:, Q_] = vp * s + vq * c
    else:
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off >= threshold:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal norm {off:.3e})")
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return w[order], (V[:, order] if V is not None else None)


def sort_by_magnitude(w) -> np.ndarray:
    """Eigenvalues by descending absolute value (ties: larger signed value first)."""
    w = np.asarray(w, dtype=float)
    return w[np.lexsort((-w, -np.abs(w)))]


def symmetric_eigs(m, method: str = "auto") -> np.ndarray:
    """Full spectrum of a symmetric matrix, sorted by descending absolute value.

    ``method`` is ``"jacobi"``, ``"lapack"`` or ``"auto"`` (Jacobi up to
    ``JACOBI_MAX_DIM``, LAPACK beyond).
    """
    a = m.entries if hasattr(m, "entries") else m
    a = np.asarray(a, dtype=float)
    if method == "auto":
        method = "jacobi" if a.shape[0] <= JACOBI_MAX_DIM else "lapack"
    if method == "jacobi":
        w, _ = jacobi_eigh(a, vectors=False)
    elif method == "lapack":
        w = np.linalg.eigvalsh(_check_symmetric(a))
    else:
        raise ValueError(f"unknown method {method!r}")
    return sort_by_magnitude(w)
