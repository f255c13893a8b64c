"""Independent high-precision references (mpmath, 256-bit).

These are slow and only used to derive the frozen constants in the tests;
they share no code with the package.
"""
from __future__ import annotations

import mpmath as mp

mp.mp.prec = 256


def dense(diag, sub):
    n = len(diag)
    M = mp.zeros(n, n)
    for i in range(n):
        M[i, i] = mp.mpf(diag[i])
    for i in range(n - 1):
        M[i, i + 1] = M[i + 1, i] = mp.mpf(sub[i])
    return M


def _det(M):
    return mp.det(M)


def qr_star(diag, sub, s):
    """``T - sI = Q R`` by Gram-Schmidt with ``R[k,k] > 0`` (k < n-1) and det Q = 1."""
    A = dense(diag, sub) - mp.mpf(s) * mp.eye(len(diag))
    n = A.rows
    Q = mp.zeros(n, n)
    for j in range(n - 1):
        v = A[:, j]
        for k in range(j):
            v = v - (Q[:, k].T * A[:, j])[0] * Q[:, k]
        Q[:, j] = v / mp.norm(v)
    # complete with the unit vector orthogonal to the first n-1 columns
    best = None
    for i in range(n):
        e = mp.zeros(n, 1)
        e[i] = 1
        v = e
        for k in range(n - 1):
            v = v - (Q[:, k].T * e)[0] * Q[:, k]
        if best is None or mp.norm(v) > mp.norm(best):
            best = v
    Q[:, n - 1] = best / mp.norm(best)
    if _det(Q) < 0:
        Q[:, n - 1] = -Q[:, n - 1]
    R = Q.T * A
    return Q, R


def step_star(diag, sub, s):
    Q, R = qr_star(diag, sub, s)
    return R * Q + mp.mpf(s) * mp.eye(len(diag))


def rq_star(diag, sub, s):
    """``T - sI = R Q`` by row Gram-Schmidt from the bottom, det Q = 1."""
    A = dense(diag, sub) - mp.mpf(s) * mp.eye(len(diag))
    n = A.rows
    Q = mp.zeros(n, n)
    for i in range(n - 1, -1, -1):
        v = A[i, :]
        for k in range(i + 1, n):
            v = v - (A[i, :] * Q[k, :].T)[0] * Q[k, :]
        Q[i, :] = v / mp.norm(v)
    if _det(Q) < 0:
        Q[n - 1, :] = -Q[n - 1, :]
    R = A * Q.T
    return R, Q


def inverse_step(diag, sub, s):
    R, Q = rq_star(diag, sub, s)
    return Q * R + mp.mpf(s) * mp.eye(len(diag))


def char_poly_roots(diag, sub):
    """Eigenvalues as roots of the characteristic polynomial (three-term recurrence)."""
    p_prev = [mp.mpf(1)]
    p = [mp.mpf(1), -mp.mpf(diag[0])]
    for k in range(1, len(diag)):
        a, b2 = mp.mpf(diag[k]), mp.mpf(sub[k - 1]) ** 2
        nxt = [mp.mpf(0)] * (len(p) + 1)
        for i, c in enumerate(p):
            nxt[i] += c
            nxt[i + 1] -= a * c
        for i, c in enumerate(p_prev):
            nxt[i + 2] -= b2 * c
        p_prev, p = p, nxt
    roots = mp.polyroots(p, maxsteps=500, extraprec=500)
    return sorted(mp.re(r) for r in roots)


def wilkinson(a, b, c):
    """Eigenvalue of [[a, b], [b, c]] closest to c (smaller one on a tie)."""
    a, b, c = mp.mpf(a), mp.mpf(b), mp.mpf(c)
    m = (a + c) / 2
    r = mp.sqrt(((a - c) / 2) ** 2 + b * b)
    lo, hi = m - r, m + r
    return lo if abs(lo - c) <= abs(hi - c) else hi


def step_classical(diag, sub, s):
    """``R Q + sI`` from the QR factorization with every ``R[k,k] > 0``."""
    A = dense(diag, sub) - mp.mpf(s) * mp.eye(len(diag))
    n = A.rows
    Q = mp.zeros(n, n)
    for j in range(n):
        v = A[:, j]
        for k in range(j):
            v = v - (Q[:, k].T * A[:, j])[0] * Q[:, k]
        Q[:, j] = v / mp.norm(v)
    R = Q.T * A
    return R * Q + mp.mpf(s) * mp.eye(n)
