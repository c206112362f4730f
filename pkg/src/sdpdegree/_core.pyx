# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled numeric kernels: cyclic Jacobi and the HKM/Mehrotra SDP iteration.

Same algorithms and return conventions as ``_fallback``.  All matrices are
small (n <= 10, m <= 45), so plain loops over row-major buffers beat calling
into BLAS/LAPACK.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, copysign, isfinite
from libc.string cimport memcpy, memset

cnp.import_array()

cdef int DIVERGENCE_WINDOW = 10
cdef double BLOWUP = 1e10

cdef enum:
    C_OPTIMAL = 0
    C_MAX_ITER = 1
    C_NUMERICAL_FAILURE = 2
    C_INFEASIBLE = 3

STATUS_OPTIMAL = C_OPTIMAL
STATUS_MAX_ITER = C_MAX_ITER
STATUS_NUMERICAL_FAILURE = C_NUMERICAL_FAILURE
STATUS_INFEASIBLE = C_INFEASIBLE


cdef inline void mm(const double* A, const double* B, double* out, int n) noexcept nogil:
    cdef int i, j, k
    cdef double s
    for i in range(n):
        for j in range(n):
            s = 0.0
            for k in range(n):
                s += A[i * n + k] * B[k * n + j]
            out[i * n + j] = s


cdef inline void mm_bt(const double* A, const double* B, double* out, int n) noexcept nogil:
    # out = A B^T
    cdef int i, j, k
    cdef double s
    for i in range(n):
        for j in range(n):
            s = 0.0
            for k in range(n):
                s += A[i * n + k] * B[j * n + k]
            out[i * n + j] = s


cdef inline void mm_at(const double* A, const double* B, double* out, int n) noexcept nogil:
    # out = A^T B
    cdef int i, j, k
    cdef double s
    for i in range(n):
        for j in range(n):
            s = 0.0
            for k in range(n):
                s += A[k * n + i] * B[k * n + j]
            out[i * n + j] = s


cdef inline void symmetrize(double* A, int n) noexcept nogil:
    cdef int i, j
    cdef double v
    for i in range(n):
        for j in range(i + 1, n):
            v = 0.5 * (A[i * n + j] + A[j * n + i])
            A[i * n + j] = v
            A[j * n + i] = v


cdef inline double dot(const double* a, const double* b, int len_) noexcept nogil:
    cdef int i
    cdef double s = 0.0
    for i in range(len_):
        s += a[i] * b[i]
    return s


cdef int cholesky(const double* A, double* L, int n) noexcept nogil:
    """Lower Cholesky factor; returns nonzero if ``A`` is not positive definite."""
    cdef int i, j, k
    cdef double s
    memset(L, 0, n * n * sizeof(double))
    for j in range(n):
        s = A[j * n + j]
        for k in range(j):
            s -= L[j * n + k] * L[j * n + k]
        if not (s > 0.0) or not isfinite(s):
            return 1
        L[j * n + j] = sqrt(s)
        for i in range(j + 1, n):
            s = A[i * n + j]
            for k in range(j):
                s -= L[i * n + k] * L[j * n + k]
            L[i * n + j] = s / L[j * n + j]
    return 0


cdef void lower_inverse(const double* L, double* Li, int n) noexcept nogil:
    cdef int i, j, k
    cdef double s
    memset(Li, 0, n * n * sizeof(double))
    for j in range(n):
        Li[j * n + j] = 1.0 / L[j * n + j]
        for i in range(j + 1, n):
            s = 0.0
            for k in range(j, i):
                s -= L[i * n + k] * Li[k * n + j]
            Li[i * n + j] = s / L[i * n + i]


cdef void chol_solve(const double* L, double* x, int n) noexcept nogil:
    """Overwrite ``x`` with the solution of ``L L^T x = x``."""
    cdef int i, k
    cdef double s
    for i in range(n):
        s = x[i]
        for k in range(i):
            s -= L[i * n + k] * x[k]
        x[i] = s / L[i * n + i]
    for i in range(n - 1, -1, -1):
        s = x[i]
        for k in range(i + 1, n):
            s -= L[k * n + i] * x[k]
        x[i] = s / L[i * n + i]


cdef void jacobi_core(double* A, double* V, int n, double rel_tol, int max_sweeps) noexcept nogil:
    """In-place cyclic Jacobi; ``V`` may be NULL when vectors are not wanted."""
    cdef int sweep, p, q, k
    cdef double fro = 0.0, thresh, off, apq, theta, t, c, s, x, y
    for k in range(n * n):
        fro += A[k] * A[k]
    thresh = rel_tol * sqrt(fro)
    if V != NULL:
        memset(V, 0, n * n * sizeof(double))
        for k in range(n):
            V[k * n + k] = 1.0
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                if fabs(A[p * n + q]) > off:
                    off = fabs(A[p * n + q])
        if off <= thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p * n + q]
                if fabs(apq) <= thresh:
                    continue
                theta = (A[q * n + q] - A[p * n + p]) / (2.0 * apq)
                t = copysign(1.0, theta) / (fabs(theta) + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    x = A[p * n + k]
                    y = A[q * n + k]
                    A[p * n + k] = c * x - s * y
                    A[q * n + k] = s * x + c * y
                for k in range(n):
                    x = A[k * n + p]
                    y = A[k * n + q]
                    A[k * n + p] = c * x - s * y
                    A[k * n + q] = s * x + c * y
                A[p * n + q] = 0.0
                A[q * n + p] = 0.0
                if V != NULL:
                    for k in range(n):
                        x = V[k * n + p]
                        y = V[k * n + q]
                        V[k * n + p] = c * x - s * y
                        V[k * n + q] = s * x + c * y


def jacobi_eigh(a, double rel_tol=1e-12, int max_sweeps=100):
    """Cyclic Jacobi eigen-decomposition; returns unsorted ``(w, V)``."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] A = np.array(a, dtype=np.float64, order="C", copy=True)
    cdef int n = A.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] V = np.empty((n, n), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] w = np.empty(n, dtype=np.float64)
    cdef int k
    if n == 0:
        return w, V
    with nogil:
        jacobi_core(&A[0, 0], &V[0, 0], n, rel_tol, max_sweeps)
    for k in range(n):
        w[k] = A[k, k]
    return w, V


cdef double max_step(const double* L, const double* D, double* Li, double* S, double* W, int n) noexcept nogil:
    """Largest step <= 1 keeping ``L L^T + alpha D`` positive semidefinite."""
    cdef int k
    cdef double lo
    lower_inverse(L, Li, n)
    mm(Li, D, W, n)
    mm_bt(W, Li, S, n)
    symmetrize(S, n)
    jacobi_core(S, NULL, n, 1e-12, 100)
    lo = S[0]
    for k in range(1, n):
        if S[k * n + k] < lo:
            lo = S[k * n + k]
    if lo >= 0.0:
        return 1.0
    return min(1.0, -1.0 / lo)


def hkm_solve(C_in, A_in, b_in, double tol=1e-8, int max_iter=100, double step_factor=0.98):
    """Primal-dual HKM path following with Mehrotra correction.

    Returns ``(X, y, Z, iterations, status, gap, primal_res, dual_res)``.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] Cm = np.ascontiguousarray(C_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=3, mode="c"] Am = np.ascontiguousarray(A_in, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] bm = np.ascontiguousarray(b_in, dtype=np.float64).reshape(-1)
    cdef int n = Cm.shape[0]
    cdef int m = Am.shape[0]
    cdef int nn = n * n
    cdef int i, j, k, it = 0, status = C_MAX_ITER, stall = 0, failed = 0

    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] Xa = np.eye(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] Za = np.eye(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] ya = np.zeros(m)
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] work = np.zeros((17, nn))
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] Tm = np.zeros((max(m, 1), nn))
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] Mm = np.zeros((max(m, 1), max(m, 1)))
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] LMm = np.zeros((max(m, 1), max(m, 1)))
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] vecs = np.zeros((5, max(m, 1)))

    cdef double* C = &Cm[0, 0]
    cdef double* A = &Am[0, 0, 0] if m > 0 else NULL
    cdef double* b = &bm[0] if m > 0 else NULL
    cdef double* X = &Xa[0, 0]
    cdef double* Z = &Za[0, 0]
    cdef double* y = &ya[0] if m > 0 else NULL
    cdef double* T = &Tm[0, 0]
    cdef double* M = &Mm[0, 0]
    cdef double* LM = &LMm[0, 0]
    cdef double* rp = &vecs[0, 0]
    cdef double* rhs = &vecs[1, 0]
    cdef double* dy = &vecs[2, 0]
    cdef double* base = &vecs[3, 0]
    cdef double* dya = &vecs[4, 0]
    cdef double* Rd = &work[0, 0]
    cdef double* LX = &work[1, 0]
    cdef double* LZ = &work[2, 0]
    cdef double* LZi = &work[3, 0]
    cdef double* Zi = &work[4, 0]
    cdef double* W1 = &work[5, 0]
    cdef double* W2 = &work[6, 0]
    cdef double* G = &work[7, 0]
    cdef double* dX = &work[8, 0]
    cdef double* dZ = &work[9, 0]
    cdef double* dXa = &work[10, 0]
    cdef double* dZa = &work[11, 0]
    cdef double* Corr = &work[12, 0]
    cdef double* Li = &work[13, 0]
    cdef double* S = &work[14, 0]
    cdef double* W3 = &work[15, 0]
    cdef double* XRZ = &work[16, 0]

    cdef double nb = 1.0, nc = 1.0, gap = 1e300, pres = 1e300, dres = 1e300
    cdef double best = 1e300, res, err, dobj, pobj, mu, mu_aff, sigma, ap, ad, s, v, xmax
    cdef int corr_pass

    with nogil:
        s = 0.0
        for i in range(m):
            s += b[i] * b[i]
        nb = 1.0 + sqrt(s)
        nc = 1.0 + sqrt(dot(C, C, nn))

        it = 0
        while True:
            # residuals and objectives
            for i in range(m):
                rp[i] = b[i] - dot(A + i * nn, X, nn)
            for k in range(nn):
                v = C[k] - Z[k]
                for i in range(m):
                    v -= y[i] * A[i * nn + k]
                Rd[k] = v
            dobj = 0.0
            for i in range(m):
                dobj += b[i] * y[i]
            pobj = dot(C, X, nn)
            gap = fabs(pobj - dobj) / (1.0 + fabs(dobj))
            pres = sqrt(dot(rp, rp, m)) / nb
            dres = sqrt(dot(Rd, Rd, nn)) / nc
            err = max(gap, max(pres, dres))
            if err < tol:
                status = C_OPTIMAL
                break
            if it == max_iter:
                break
            res = max(pres, dres)
            if res < best:
                best = res
                stall = 0
            else:
                stall += 1
            xmax = 0.0
            for k in range(nn):
                if fabs(X[k]) > xmax:
                    xmax = fabs(X[k])
            for i in range(m):
                if fabs(y[i]) > xmax:
                    xmax = fabs(y[i])
            if stall >= DIVERGENCE_WINDOW or xmax > BLOWUP:
                status = C_INFEASIBLE
                break
            if cholesky(X, LX, n) or cholesky(Z, LZ, n):
                status = C_NUMERICAL_FAILURE
                break
            lower_inverse(LZ, LZi, n)
            mm_at(LZi, LZi, Zi, n)
            mu = dot(X, Z, nn) / n

            # Schur complement M_ij = A_i . (X A_j Z^-1)
            for j in range(m):
                mm(X, A + j * nn, W1, n)
                mm(W1, Zi, T + j * nn, n)
            for i in range(m):
                for j in range(i, m):
                    v = 0.5 * (dot(A + i * nn, T + j * nn, nn) + dot(A + j * nn, T + i * nn, nn))
                    M[i * m + j] = v
                    M[j * m + i] = v
            if cholesky(M, LM, m):
                status = C_NUMERICAL_FAILURE
                break

            mm(X, Rd, W1, n)
            mm(W1, Zi, XRZ, n)
            for k in range(nn):
                W1[k] = X[k]
            for i in range(n):
                for j in range(n):
                    W1[i * n + j] += 0.5 * (XRZ[i * n + j] + XRZ[j * n + i])
            for i in range(m):
                base[i] = dot(A + i * nn, W1, nn)

            memset(Corr, 0, nn * sizeof(double))
            sigma = 0.0
            for corr_pass in range(2):
                # G = sigma mu Z^-1 - Corr
                for k in range(nn):
                    G[k] = sigma * mu * Zi[k] - Corr[k]
                for i in range(m):
                    rhs[i] = rp[i] - dot(A + i * nn, G, nn) + base[i]
                chol_solve(LM, rhs, m)
                for i in range(m):
                    dy[i] = rhs[i]
                for k in range(nn):
                    v = Rd[k]
                    for i in range(m):
                        v -= dy[i] * A[i * nn + k]
                    dZ[k] = v
                mm(X, dZ, W1, n)
                mm(W1, Zi, W2, n)
                for i in range(n):
                    for j in range(n):
                        dX[i * n + j] = G[i * n + j] - X[i * n + j] - 0.5 * (W2[i * n + j] + W2[j * n + i])
                if corr_pass == 0:
                    ap = max_step(LX, dX, Li, S, W3, n)
                    ad = max_step(LZ, dZ, Li, S, W3, n)
                    mu_aff = 0.0
                    for k in range(nn):
                        mu_aff += (X[k] + ap * dX[k]) * (Z[k] + ad * dZ[k])
                    mu_aff /= n
                    sigma = min(1.0, (mu_aff / mu) ** 3)
                    memcpy(dXa, dX, nn * sizeof(double))
                    memcpy(dZa, dZ, nn * sizeof(double))
                    mm(dXa, dZa, W1, n)
                    mm(W1, Zi, W2, n)
                    for i in range(n):
                        for j in range(n):
                            Corr[i * n + j] = 0.5 * (W2[i * n + j] + W2[j * n + i])

            ap = min(1.0, step_factor * max_step(LX, dX, Li, S, W3, n))
            ad = min(1.0, step_factor * max_step(LZ, dZ, Li, S, W3, n))
            for k in range(nn):
                X[k] += ap * dX[k]
                Z[k] += ad * dZ[k]
            symmetrize(X, n)
            symmetrize(Z, n)
            for i in range(m):
                y[i] += ad * dy[i]
            it += 1

    return Xa, ya, Za, it, status, gap, pres, dres
