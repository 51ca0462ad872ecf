"""Cyclic Jacobi eigenvalue routine for complex Hermitian matrices.

Each rotation first removes the phase of the pivot element ``a[p, q]`` with a
diagonal unitary, then applies the classical real Jacobi rotation that zeroes
it.  Sweeps continue until the off-diagonal Frobenius norm drops below ``tol``.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import ConvergenceError, DimensionError


def off_diagonal_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def jacobi_eigh(a: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100,
                vectors: bool = True) -> tuple[np.ndarray, np.ndarray | None]:
    """Eigen-decompose a Hermitian matrix.

    Args:
        a: square Hermitian matrix (only used through a copy).
        tol: target off-diagonal Frobenius norm; raised to the round-off
            floor ``size * eps * ||a||_F`` for large or badly scaled input.
        max_sweeps: give up after this many full (p, q) sweeps.
        vectors: accumulate eigenvectors as well.

    Returns:
        ``(w, v)`` with eigenvalues ascending and, if requested, unitary ``v``
        whose columns are the matching eigenvectors (``a = v diag(w) v^H``).
    """
    a = np.array(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    size = a.shape[0]
    # Hermitize so round-off in the input does not bias the diagonal.
    a = 0.5 * (a + a.conj().T)
    v = np.eye(size, dtype=complex) if vectors else None
    # Below this floor the rotations only shuffle round-off.
    tol = max(tol, size * np.finfo(float).eps * float(np.linalg.norm(a)))

    for _ in range(max_sweeps):
        if off_diagonal_norm(a) < tol:
            break
        for p in range(size - 1):
            for q in range(p + 1, size):
                apq = a[p, q]
                r = abs(apq)
                if r < 1e-300:
                    continue
                phase = apq / r
                alpha = a[p, p].real
                beta = a[q, q].real
                tau = (beta - alpha) / (2.0 * r)
                if abs(tau) > 1e150:
                    t = 0.5 / tau  # limit of the formula below; avoids tau**2 overflow
                else:
                    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # G restricted to (p, q) is diag(1, conj(phase)) @ [[c, s], [-s, c]].
                g_pp, g_pq = c, s
                g_qp, g_qq = -s * phase.conjugate(), c * phase.conjugate()
                col_p = a[:, p].copy()
                col_q = a[:, q]
                a[:, p] = col_p * g_pp + col_q * g_qp
                a[:, q] = col_p * g_pq + col_q * g_qq
                row_p = a[p, :].copy()
                row_q = a[q, :]
                a[p, :] = np.conj(g_pp) * row_p + np.conj(g_qp) * row_q
                a[q, :] = np.conj(g_pq) * row_p + np.conj(g_qq) * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                if v is not None:
                    vp = v[:, p].copy()
                    vq = v[:, q]
                    v[:, p] = vp * g_pp + vq * g_qp
                    v[:, q] = vp * g_pq + vq * g_qq
    else:
        if off_diagonal_norm(a) >= tol:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(off-diagonal norm {off_diagonal_norm(a):.3e})")

    w = np.real(np.diag(a)).copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    if v is not None:
        v = v[:, order]
    return w, v


def jacobi_eigvalsh(a: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100) -> np.ndarray:
    return jacobi_eigh(a, tol=tol, max_sweeps=max_sweeps, vectors=False)[0]
