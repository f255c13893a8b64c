"""Shifted QR steps on symmetric tridiagonal matrices.

``step_star`` is the signed step ``Q^T T Q`` built from the factorization
in :func:`tridiqr.core.factor_shifted`; ``step_unsigned`` is the classical
step with an all-positive triangular factor; ``inverse_step`` undoes the
signed step for a shift off the spectrum.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    SymTridiagonal,
    _eliminate,
    _frozen,
    flip_last,
    make_tridiagonal,
)
from .errors import ShiftIsEigenvalue, SingularShift, TridiagonalityLost


@dataclass(frozen=True, eq=False)
class StepResult:
    next: SymTridiagonal
    ratios: np.ndarray
    det_sign: int

    @property
    def r(self) -> float:
        """Ratio multiplying ``b1`` in one step (last entry of ``ratios``)."""
        return float(self.ratios[-1])


def det_tolerance(T: SymTridiagonal, s: float) -> float:
    return 1e-12 * (1.0 + T.norm() + abs(s))


def band_tolerance(T: SymTridiagonal, s: float) -> float:
    return 1e-11 * (1.0 + T.norm() + abs(s))


def _check_band(H: np.ndarray, tol: float) -> None:
    n = H.shape[0]
    if n < 2:
        return
    sym = np.max(np.abs(np.diag(H, 1) - np.diag(H, -1)))
    upper = np.max(np.abs(np.triu(H, 2)), initial=0.0)
    resid = max(sym, upper)
    if resid > tol:
        raise TridiagonalityLost(f"off-band residue {resid:.3e} exceeds {tol:.3e}")


def step_star(T: SymTridiagonal, s: float) -> StepResult:
    """Signed step ``Q^T T Q`` where ``T - sI = Q R`` and ``det Q = 1``.

    Evaluated as ``R Q + sI`` by applying the elimination rotations to the
    columns of ``R``; its subdiagonal is then ``R[k+1,k+1] / R[k,k] * T.sub[k]``
    to full relative accuracy.
    """
    s = float(s)
    n = T.n
    if n == 1:
        return StepResult(T, np.zeros(0), int(np.sign(T.diag[0] - s)))
    R, rot = _eliminate(T, s)
    rdiag = np.diag(R).copy()
    H = R
    for k, (c, sn) in enumerate(rot):
        left = H[: k + 2, k].copy()
        right = H[: k + 2, k + 1].copy()
        H[: k + 2, k] = c * left + sn * right
        H[: k + 2, k + 1] = -sn * left + c * right
    _check_band(H, band_tolerance(T, s))
    nxt = make_tridiagonal(np.diag(H) + s, np.diag(H, -1))
    rn = rdiag[-1]
    det_sign = 0 if abs(rn) <= det_tolerance(T, s) else (1 if rn > 0 else -1)
    return StepResult(nxt, _frozen(rdiag[1:] / rdiag[:-1]), det_sign)


def step_unsigned(T: SymTridiagonal, s: float) -> StepResult:
    """Classical shifted QR step (triangular factor with positive diagonal)."""
    res = step_star(T, s)
    if res.det_sign == 0:
        raise SingularShift(f"shift {s!r} is an eigenvalue of T")
    if res.det_sign > 0:
        return res
    ratios = np.array(res.ratios)
    ratios[-1] = -ratios[-1]
    return StepResult(flip_last(res.next), _frozen(ratios), res.det_sign)


def inverse_step(T: SymTridiagonal, s: float) -> SymTridiagonal:
    """The matrix ``T0`` with ``step_star(T0, s).next == T``.

    Factor ``T - sI = R Q`` with ``Q`` in SO(n) and the first ``n-1``
    diagonal entries of ``R`` positive, then return ``Q R + sI``.
    """
    s = float(s)
    n = T.n
    if n == 1:
        return T
    M = T.dense() - s * np.eye(n)
    tol = 1e-12 * (1.0 + T.norm() + abs(s))
    # Column rotations from the bottom row up: M G_{n-1} ... G_1 = R.
    rots = []
    for k in range(n - 1, 0, -1):
        x = M[k, k]
        y = M[k, k - 1]
        r = np.hypot(x, y)
        if r <= tol:
            raise ShiftIsEigenvalue(f"shift {s!r} is (numerically) an eigenvalue")
        c, sn = x / r, y / r
        a = M[: k + 1, k - 1].copy()
        bcol = M[: k + 1, k].copy()
        M[: k + 1, k] = c * bcol + sn * a
        M[: k + 1, k - 1] = -sn * bcol + c * a
        M[k, k] = r
        M[k, k - 1] = 0.0
        rots.append((k, c, sn))
    R = M
    # Q^T = G_{n-1} ... G_1 as accumulated column operations on the identity.
    Qt = np.eye(n)
    for k, c, sn in rots:
        a = Qt[:, k - 1].copy()
        bcol = Qt[:, k].copy()
        Qt[:, k] = c * bcol + sn * a
        Qt[:, k - 1] = -sn * bcol + c * a
    if abs(R[0, 0]) <= tol:
        raise ShiftIsEigenvalue(f"shift {s!r} is (numerically) an eigenvalue")
    Q = Qt.T
    if R[0, 0] < 0:
        # R E and E Q with E = diag(-1, 1, ..., 1, -1) keep det Q = 1.
        R[:, 0] = -R[:, 0]
        R[:, -1] = -R[:, -1]
        Q[0, :] = -Q[0, :]
        Q[-1, :] = -Q[-1, :]
    H = Q @ R
    H[np.diag_indices(n)] += s
    Hs = 0.5 * (H + H.T)
    resid = max(np.max(np.abs(H - H.T)), np.max(np.abs(np.triu(Hs, 2)), initial=0.0))
    btol = band_tolerance(T, s)
    if resid > btol:
        raise TridiagonalityLost(f"off-band residue {resid:.3e} exceeds {btol:.3e}")
    return make_tridiagonal(np.diag(Hs), np.diag(Hs, -1))


def check_commutation(T: SymTridiagonal, s0: float, s1: float) -> float:
    """``|| F_{s0}(F_{s1}(T)) - F_{s1}(F_{s0}(T)) ||`` in the Frobenius norm."""
    a = step_star(step_star(T, s1).next, s0).next
    b = step_star(step_star(T, s0).next, s1).next
    return a.distance(b)
