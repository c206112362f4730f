"""Pure Python/numpy implementations of the numeric kernels.

These mirror ``_core.pyx`` step for step and are used when the compiled
extension is unavailable or ``SDPDEGREE_PURE_PYTHON`` is set.
"""

from __future__ import annotations

import math

import numpy as np

STATUS_OPTIMAL = 0
STATUS_MAX_ITER = 1
STATUS_NUMERICAL_FAILURE = 2
STATUS_INFEASIBLE = 3

_DIVERGENCE_WINDOW = 10
_BLOWUP = 1e10


def jacobi_eigh(a, rel_tol=1e-12, max_sweeps=100):
    """Cyclic Jacobi eigen-decomposition of a symmetric matrix.

    Returns ``(w, V)`` with ``a = V diag(w) V^T``; eigenvalues are not sorted.
    Sweeps stop once every off-diagonal magnitude is below
    ``rel_tol * ||a||_F``.
    """
    A = np.array(a, dtype=float, copy=True)
    n = A.shape[0]
    V = np.eye(n)
    thresh = rel_tol * math.sqrt(float(np.sum(A * A)))
    for _ in range(max_sweeps):
        off = np.abs(np.triu(A, 1))
        if n < 2 or off.max() <= thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= thresh:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                A[p, q] = A[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    return np.diag(A).copy(), V


def _max_step(L, D):
    """Largest ``alpha <= 1`` (before damping) keeping ``L L^T + alpha D`` PSD."""
    Li = np.linalg.inv(L)
    S = Li @ D @ Li.T
    lo = np.linalg.eigvalsh((S + S.T) * 0.5)[0]
    return 1.0 if lo >= 0.0 else min(1.0, -1.0 / lo)


def hkm_solve(C, A, b, tol=1e-8, max_iter=100, step_factor=0.98):
    """Primal-dual path following with the HKM direction and Mehrotra correction.

    Solves ``min C.X  s.t.  A_i.X = b_i, X >= 0`` together with its dual
    ``max b.y  s.t.  Z = C - sum y_i A_i >= 0`` from ``X = Z = I, y = 0``.
    Returns ``(X, y, Z, iterations, status, gap, primal_res, dual_res)``.
    """
    C = np.asarray(C, dtype=float)
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape[0], C.shape[0]
    Af = A.reshape(m, n * n)
    nb, nc = 1.0 + np.linalg.norm(b), 1.0 + np.linalg.norm(C)
    X, Z, y = np.eye(n), np.eye(n), np.zeros(m)
    best, stall = math.inf, 0
    status, it = STATUS_MAX_ITER, 0
    gap = pres = dres = math.inf
    for it in range(max_iter + 1):
        rp = b - Af @ X.ravel()
        Rd = C - Z - (y @ Af).reshape(n, n)
        dobj = float(b @ y)
        gap = abs(float(np.sum(C * X)) - dobj) / (1.0 + abs(dobj))
        pres = float(np.linalg.norm(rp)) / nb
        dres = float(np.linalg.norm(Rd)) / nc
        err = max(gap, pres, dres)
        if err < tol:
            status = STATUS_OPTIMAL
            break
        if it == max_iter:
            break
        res = max(pres, dres)
        if res < best:
            best, stall = res, 0
        else:
            stall += 1
        if stall >= _DIVERGENCE_WINDOW or np.abs(X).max() > _BLOWUP or np.abs(y).max() > _BLOWUP:
            status = STATUS_INFEASIBLE
            break
        try:
            LX = np.linalg.cholesky(X)
            LZ = np.linalg.cholesky(Z)
        except np.linalg.LinAlgError:
            status = STATUS_NUMERICAL_FAILURE
            break
        LZi = np.linalg.inv(LZ)
        Zi = LZi.T @ LZi
        mu = float(np.sum(X * Z)) / n
        T = np.matmul(np.matmul(X, A), Zi).reshape(m, n * n)
        M = Af @ T.T
        M = (M + M.T) * 0.5
        try:
            LM = np.linalg.cholesky(M)
        except np.linalg.LinAlgError:
            status = STATUS_NUMERICAL_FAILURE
            break
        XRZ = X @ Rd @ Zi
        base = Af @ (X + (XRZ + XRZ.T) * 0.5).ravel()

        def direction(sigma, corr):
            G = sigma * mu * Zi - corr
            rhs = rp - Af @ G.ravel() + base
            dy = np.linalg.solve(LM.T, np.linalg.solve(LM, rhs))
            dZ = Rd - (dy @ Af).reshape(n, n)
            K = X @ dZ @ Zi
            dX = G - X - (K + K.T) * 0.5
            return dX, dy, dZ

        zero = np.zeros((n, n))
        dXa, _, dZa = direction(0.0, zero)
        ap = _max_step(LX, dXa)
        ad = _max_step(LZ, dZa)
        mu_aff = float(np.sum((X + ap * dXa) * (Z + ad * dZa))) / n
        sigma = min(1.0, (mu_aff / mu) ** 3)
        K = dXa @ dZa @ Zi
        dX, dy, dZ = direction(sigma, (K + K.T) * 0.5)
        ap = min(1.0, step_factor * _max_step(LX, dX))
        ad = min(1.0, step_factor * _max_step(LZ, dZ))
        X = X + ap * dX
        X = (X + X.T) * 0.5
        y = y + ad * dy
        Z = Z + ad * dZ
        Z = (Z + Z.T) * 0.5
    return X, y, Z, it, status, gap, pres, dres
