"""Small dense symmetric eigenvalue routines.

The witness constructor needs the smallest eigenvalue of matrices of size
n <= ~10 to near machine precision, so a cyclic Jacobi sweep is used instead
of a general LAPACK call. Tests cross-check against ``numpy.linalg.eigvalsh``.
"""

import math

import numpy as np


def sym_eig_2x2(a, b, c):
    """Eigenvalues ``(lo, hi)`` of ``[[a, b], [b, c]]`` in closed form."""
    mean = 0.5 * (a + c)
    rad = math.hypot(0.5 * (a - c), b)
    hi = mean + rad
    # the product form avoids cancellation when one eigenvalue is tiny
    det = a * c - b * b
    lo = det / hi if hi != 0.0 and abs(mean - rad) < 1e-8 * abs(hi) else mean - rad
    return lo, hi


def jacobi_eigh(A, tol=1e-15, max_sweeps=64):
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns ``(w, V)`` with ascending eigenvalues ``w`` and orthonormal
    eigenvectors in the columns of ``V`` so that ``A = V diag(w) V^T``.
    """
    A = np.array(A, dtype=float, copy=True)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    A = 0.5 * (A + A.T)
    V = np.eye(n)
    scale = max(np.abs(A).max(), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = math.sqrt(max(np.sum(A * A) - np.sum(np.diag(A) ** 2), 0.0))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                cs = 1.0 / math.sqrt(t * t + 1.0)
                sn = t * cs
                Ap = A[:, p].copy()
                Aq = A[:, q].copy()
                A[:, p] = cs * Ap - sn * Aq
                A[:, q] = sn * Ap + cs * Aq
                Ap = A[p, :].copy()
                Aq = A[q, :].copy()
                A[p, :] = cs * Ap - sn * Aq
                A[q, :] = sn * Ap + cs * Aq
                A[p, q] = A[q, p] = 0.0
                Vp = V[:, p].copy()
                V[:, p] = cs * Vp - sn * V[:, q]
                V[:, q] = sn * Vp + cs * V[:, q]
    w = np.diag(A).copy()
    order = np.argsort(w)
    return w[order], V[:, order]


def min_eigenvalue(Q):
    """Smallest eigenvalue of a symmetric matrix (closed form for 2x2)."""
    Q = np.asarray(Q, dtype=float)
    if Q.shape == (2, 2):
        return float(sym_eig_2x2(Q[0, 0], 0.5 * (Q[0, 1] + Q[1, 0]), Q[1, 1])[0])
    return float(jacobi_eigh(Q)[0][0])
