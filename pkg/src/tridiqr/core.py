"""Symmetric tridiagonal matrices, spectra, sign patterns and the signed
QR factorization of a shifted tridiagonal matrix.

Everything here is a pure function of its inputs. Matrices are stored as
a diagonal plus a subdiagonal array; both arrays are made read-only at
construction so values can be shared freely.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from scipy.linalg import solve_banded

from .errors import (
    AmbiguousClosest,
    BreakdownError,
    DimensionMismatch,
    NonFiniteEntry,
    NonSimpleSpectrum,
    NotAlmostInvertible,
)

ArrayLike = Union[Sequence[float], np.ndarray]


def _frozen(a) -> np.ndarray:
    out = np.array(a, dtype=np.float64, copy=True).reshape(-1)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class SymTridiagonal:
    """Real symmetric tridiagonal matrix held as ``diag`` and ``sub``.

    ``sub[k]`` is the entry at row ``k + 1``, column ``k`` (0-based).
    """

    diag: np.ndarray
    sub: np.ndarray

    @property
    def n(self) -> int:
        return self.diag.shape[0]

    @property
    def b1(self) -> float:
        """Lowest subdiagonal entry, ``T[n-1, n-2]``."""
        if self.n < 2:
            raise DimensionMismatch("b1 needs n >= 2")
        return float(self.sub[-1])

    @property
    def b2(self) -> float:
        """Second-lowest subdiagonal entry, ``T[n-2, n-3]``."""
        if self.n < 3:
            raise DimensionMismatch("b2 needs n >= 3")
        return float(self.sub[-2])

    @property
    def corner(self) -> float:
        return float(self.diag[-1])

    @property
    def second_corner(self) -> float:
        if self.n < 2:
            raise DimensionMismatch("second corner needs n >= 2")
        return float(self.diag[-2])

    @property
    def singular_gap(self) -> float:
        """``|T[n-1,n-1] - T[n-2,n-2]|``; zero where Wilkinson's shift jumps."""
        if self.n < 2:
            return 0.0
        return abs(float(self.diag[-1]) - float(self.diag[-2]))

    def norm(self) -> float:
        """Frobenius norm, ``sqrt(trace(T^2))``."""
        return math.sqrt(float(self.diag @ self.diag) + 2.0 * float(self.sub @ self.sub))

    def dense(self) -> np.ndarray:
        out = np.diag(np.asarray(self.diag, dtype=float))
        if self.n > 1:
            idx = np.arange(self.n - 1)
            out[idx + 1, idx] = self.sub
            out[idx, idx + 1] = self.sub
        return out

    def leading(self, m: int) -> "SymTridiagonal":
        """Leading principal ``m x m`` block."""
        return SymTridiagonal(_frozen(self.diag[:m]), _frozen(self.sub[: max(m - 1, 0)]))

    def replace(self, diag=None, sub=None) -> "SymTridiagonal":
        return make_tridiagonal(self.diag if diag is None else diag,
                                self.sub if sub is None else sub)

    def max_abs_diff(self, other: "SymTridiagonal") -> float:
        if other.n != self.n:
            raise DimensionMismatch("dimension mismatch")
        d = np.max(np.abs(self.diag - other.diag), initial=0.0)
        s = np.max(np.abs(self.sub - other.sub), initial=0.0)
        return float(max(d, s))

    def distance(self, other: "SymTridiagonal") -> float:
        """Frobenius distance ``||self - other||``."""
        if other.n != self.n:
            raise DimensionMismatch("dimension mismatch")
        dd = self.diag - other.diag
        ds = self.sub - other.sub
        return math.sqrt(float(dd @ dd) + 2.0 * float(ds @ ds))

    def is_diagonal(self) -> bool:
        return not np.any(self.sub)

    def __repr__(self) -> str:
        return f"SymTridiagonal(diag={self.diag.tolist()}, sub={self.sub.tolist()})"


def make_tridiagonal(diag: ArrayLike, sub: ArrayLike) -> SymTridiagonal:
    d = np.asarray(diag, dtype=np.float64).reshape(-1)
    e = np.asarray(sub, dtype=np.float64).reshape(-1)
    if d.shape[0] < 1:
        raise DimensionMismatch("need at least one diagonal entry")
    if e.shape[0] != d.shape[0] - 1:
        raise DimensionMismatch(
            f"sub has length {e.shape[0]}, expected {d.shape[0] - 1}")
    if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
        raise NonFiniteEntry("matrix entries must be finite")
    return SymTridiagonal(_frozen(d), _frozen(e))


def from_dense(m: np.ndarray) -> SymTridiagonal:
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    return make_tridiagonal(np.diag(m), np.array([m[k + 1, k] for k in range(n - 1)]))


def block_diag(top: SymTridiagonal, bottom: SymTridiagonal) -> SymTridiagonal:
    """Direct sum with a zero coupling entry."""
    return make_tridiagonal(np.concatenate([top.diag, bottom.diag]),
                            np.concatenate([top.sub, [0.0], bottom.sub]))


def is_unreduced(T: SymTridiagonal) -> bool:
    return bool(np.all(T.sub != 0.0))


# --------------------------------------------------------------- sign patterns

@dataclass(frozen=True)
class SignPattern:
    """Diagonal orthogonal matrix given by its +-1 entries."""

    signs: tuple

    def __post_init__(self):
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +1 or -1")

    @classmethod
    def identity(cls, n: int) -> "SignPattern":
        return cls((1,) * n)

    @classmethod
    def generator(cls, n: int, j: int) -> "SignPattern":
        """``(+1,...,+1,-1,...,-1)`` switching after position ``j`` (1-based).

        Conjugation flips only subdiagonal entry ``j`` (1-based).
        """
        if not 1 <= j < n:
            raise ValueError(f"generator index must lie in [1, {n - 1}]")
        return cls(tuple(1 if k < j else -1 for k in range(n)))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "SignPattern":
        return cls(tuple(int(v) for v in rng.choice([-1, 1], size=n)))

    @property
    def n(self) -> int:
        return len(self.signs)

    def __mul__(self, other: "SignPattern") -> "SignPattern":
        if other.n != self.n:
            raise DimensionMismatch("sign patterns of different length")
        return SignPattern(tuple(a * b for a, b in zip(self.signs, other.signs)))

    def as_array(self) -> np.ndarray:
        return np.array(self.signs, dtype=float)


def conjugate_by_signs(T: SymTridiagonal, E: SignPattern) -> SymTridiagonal:
    """``E T E``: the diagonal is untouched, ``sub[k]`` picks up ``E_k E_{k+1}``."""
    if E.n != T.n:
        raise DimensionMismatch("sign pattern and matrix differ in size")
    s = E.as_array()
    return SymTridiagonal(T.diag, _frozen(T.sub * (s[:-1] * s[1:])))


def flip_last(T: SymTridiagonal) -> SymTridiagonal:
    """Negate the lowest subdiagonal entry (conjugation by the last generator)."""
    if T.n < 2:
        return T
    return conjugate_by_signs(T, SignPattern.generator(T.n, T.n - 1))


# -------------------------------------------------------------------- spectra

class ApClass(str, enum.Enum):
    AP_FREE = "APFree"
    WEAK_AP = "WeakAP"
    STRONG_AP = "StrongAP"


def _spectral_gap(lam: np.ndarray) -> float:
    if lam.shape[0] < 2:
        return math.inf
    return float(np.min(np.diff(lam)))


def _classify(lam: np.ndarray, tau: float) -> ApClass:
    n = lam.shape[0]
    for i in range(n - 2):
        if abs(lam[i] + lam[i + 2] - 2.0 * lam[i + 1]) <= tau:
            return ApClass.STRONG_AP
    for i in range(n):
        for k in range(i + 2, n):
            mid = 0.5 * (lam[i] + lam[k])
            j = int(np.searchsorted(lam, mid))
            for jj in (j - 1, j):
                if i < jj < k and abs(lam[i] + lam[k] - 2.0 * lam[jj]) <= tau:
                    return ApClass.WEAK_AP
    return ApClass.AP_FREE


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Strictly increasing eigenvalue list with its gap and a.p. class."""

    lambdas: np.ndarray
    gap: float
    ap_class: ApClass

    @classmethod
    def from_values(cls, values: ArrayLike) -> "Spectrum":
        lam = np.asarray(values, dtype=np.float64).reshape(-1)
        if lam.shape[0] < 1:
            raise ValueError("spectrum must be non-empty")
        if not np.all(np.isfinite(lam)):
            raise NonFiniteEntry("spectrum entries must be finite")
        if np.any(np.diff(lam) <= 0):
            raise ValueError("spectrum must be strictly increasing")
        gap = _spectral_gap(lam)
        return cls(_frozen(lam), gap, _classify(lam, 1e-12 * gap))

    @property
    def n(self) -> int:
        return self.lambdas.shape[0]

    @property
    def tau_ap(self) -> float:
        return 1e-12 * self.gap if math.isfinite(self.gap) else 0.0

    def norm(self) -> float:
        return float(np.linalg.norm(self.lambdas))

    def without(self, i: int) -> "Spectrum":
        """The spectrum with ``lambdas[i]`` removed."""
        return Spectrum.from_values(np.delete(self.lambdas, i))

    def nearest_index(self, x: float) -> int:
        return int(np.argmin(np.abs(self.lambdas - x)))

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"Spectrum({self.lambdas.tolist()}, gap={self.gap:g}, {self.ap_class.value})"


def as_spectrum(spec) -> Spectrum:
    return spec if isinstance(spec, Spectrum) else Spectrum.from_values(spec)


def classify_ap(spec, tau: Optional[float] = None) -> ApClass:
    spec = as_spectrum(spec)
    return _classify(spec.lambdas, spec.tau_ap if tau is None else tau)


def closest_eigenvalue_index(spec, i: int) -> int:
    """Index of the eigenvalue nearest to ``lambdas[i]`` (excluding ``i``)."""
    spec = as_spectrum(spec)
    if spec.n < 2:
        raise ValueError("need at least two eigenvalues")
    dist = np.abs(spec.lambdas - spec.lambdas[i])
    dist[i] = np.inf
    order = np.argsort(dist, kind="stable")
    if spec.n > 2 and dist[order[1]] - dist[order[0]] <= spec.tau_ap:
        raise AmbiguousClosest(
            f"eigenvalues {order[0]} and {order[1]} are equally close to {i}")
    return int(order[0])


# ------------------------------------------------------ Sturm sequence oracle

def _sturm_counts(d: np.ndarray, e2: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Number of eigenvalues strictly below each entry of ``x``."""
    pivmin = np.finfo(float).tiny * max(1.0, float(e2.max(initial=0.0)))
    q = d[0] - x
    q = np.where(np.abs(q) < pivmin, -pivmin, q)
    count = (q < 0).astype(np.int64)
    for k in range(1, d.shape[0]):
        q = d[k] - x - e2[k - 1] / q
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        count += q < 0
    return count


def sturm_values(T: SymTridiagonal, tol: Optional[float] = None) -> np.ndarray:
    """All eigenvalues of ``T`` by bisection on Sturm counts, sorted ascending.

    Each value is bracketed to width ``tol`` (default: a few units in the
    last place of the Gershgorin bound) or until the bracket cannot shrink
    in floating point. Multiple eigenvalues are returned repeated.
    """
    n = T.n
    d = np.asarray(T.diag, dtype=float)
    e = np.abs(np.asarray(T.sub, dtype=float))
    r = np.zeros(n)
    r[:-1] += e
    r[1:] += e
    if tol is None:
        bound = max(float(np.max(np.abs(d) + r)), np.finfo(float).tiny)
        tol = 4.0 * np.finfo(float).eps * bound
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo0 = float(np.min(d - r)) - tol
    hi0 = float(np.max(d + r)) + tol
    span = max(hi0 - lo0, tol)
    lo0 -= 1e-15 * span
    hi0 += 1e-15 * span
    ks = np.arange(n)
    lo = np.full(n, lo0)
    hi = np.full(n, hi0)
    e2 = e * e
    for _ in range(400):
        width = hi - lo
        if np.all(width <= tol):
            break
        mid = 0.5 * (lo + hi)
        stuck = (mid <= lo) | (mid >= hi)
        if np.all(stuck | (width <= tol)):
            break
        cnt = _sturm_counts(d, e2, mid)
        above = cnt > ks
        hi = np.where(above & ~stuck, mid, hi)
        lo = np.where(~above & ~stuck, mid, lo)
    return np.sort(0.5 * (lo + hi))


def sturm_eigenvalues(T: SymTridiagonal, tol: Optional[float] = None) -> Spectrum:
    """Independent eigenvalue oracle (bisection, never QR iteration).

    Raises NonSimpleSpectrum when two eigenvalues are closer than ``10 tol``
    (``tol`` defaults to ``1e-14 (1 + ||T||)`` for this test).
    """
    lam = sturm_values(T, tol)
    sep_tol = 1e-14 * (1.0 + T.norm()) if tol is None else tol
    if lam.shape[0] > 1 and float(np.min(np.diff(lam))) < 10.0 * sep_tol:
        raise NonSimpleSpectrum(
            f"eigenvalue separation {np.min(np.diff(lam)):.3e} below {10 * sep_tol:.3e}")
    return Spectrum.from_values(lam)


def eigh_oracle(T: SymTridiagonal, tol: Optional[float] = None):
    """Eigenvalues (Sturm bisection) and unit eigenvectors (inverse iteration).

    Returns ``(lam, V)`` with ``T = V diag(lam) V^T``; column ``j`` of ``V``
    belongs to ``lam[j]``. Eigenvectors of nearby eigenvalues are
    re-orthogonalized against each other.
    """
    n = T.n
    lam = sturm_eigenvalues(T, tol).lambdas
    V = np.zeros((n, n))
    if n == 1:
        V[0, 0] = 1.0
        return np.array(lam), V
    scale = 1.0 + T.norm()
    ab = np.zeros((3, n))
    ab[0, 1:] = T.sub
    ab[2, :-1] = T.sub
    start = np.random.default_rng(0).uniform(0.5, 1.5, size=n)
    cluster = 1e-3 * scale
    for j in range(n):
        x = start / np.linalg.norm(start)
        delta = 8.0 * np.finfo(float).eps * scale
        for _ in range(4):
            ab[1] = T.diag - (lam[j] + delta)
            try:
                y = solve_banded((1, 1), ab, x, check_finite=False)
            except np.linalg.LinAlgError:
                delta *= 16.0
                continue
            if not np.all(np.isfinite(y)):
                delta *= 16.0
                continue
            for k in range(j):
                if abs(lam[j] - lam[k]) < cluster:
                    y -= (V[:, k] @ y) * V[:, k]
            for k in range(j):
                if abs(lam[j] - lam[k]) < cluster:
                    y -= (V[:, k] @ y) * V[:, k]
            x = y / np.linalg.norm(y)
        V[:, j] = x
    return np.array(lam), V


# ------------------------------------------------------------------ sampling

def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Counter-based generator keyed by ``(seed, *stream)``.

    Distinct streams are independent, so results never depend on the order
    in which streams are consumed.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *map(int, stream)])))


def _lanczos(lam: np.ndarray, q: np.ndarray):
    """Lanczos on ``diag(lam)`` from unit ``q`` with full reorthogonalization."""
    n = lam.shape[0]
    breakdown = 1e-13 * max(1.0, float(np.max(np.abs(lam))))
    basis = np.zeros((n, n))
    basis[:, 0] = q / np.linalg.norm(q)
    alpha = np.zeros(n)
    beta = np.zeros(max(n - 1, 0))
    for k in range(n):
        v = basis[:, k]
        w = lam * v
        alpha[k] = v @ w
        if k == n - 1:
            break
        w = w - alpha[k] * v
        if k > 0:
            w -= beta[k - 1] * basis[:, k - 1]
        for _ in range(2):
            w -= basis[:, : k + 1] @ (basis[:, : k + 1].T @ w)
        beta[k] = np.linalg.norm(w)
        if beta[k] < breakdown:
            raise BreakdownError(f"Lanczos breakdown at step {k}: beta={beta[k]:.3e}")
        basis[:, k + 1] = w / beta[k]
    return alpha, beta


def sample_isospectral(spec, seed: int, signs: Optional[SignPattern] = None,
                       reverse: bool = False) -> SymTridiagonal:
    """Random tridiagonal matrix with the given spectrum.

    Lanczos on ``diag(spec)`` from a starting vector uniform on the sphere
    (drawn from ``seed``) gives a Jacobi matrix (positive subdiagonal);
    ``signs`` then moves it to any other sign cell. The starting vector is
    the first row of the eigenvector matrix; with ``reverse`` the index
    order is flipped so that it becomes the last row instead.
    """
    spec = as_spectrum(spec)
    if spec.n == 1:
        T = make_tridiagonal(spec.lambdas, [])
    else:
        q = make_rng(seed).standard_normal(spec.n)
        alpha, beta = _lanczos(np.asarray(spec.lambdas), q)
        if reverse:
            alpha, beta = alpha[::-1], beta[::-1]
        T = make_tridiagonal(alpha, beta)
    if signs is not None:
        T = conjugate_by_signs(T, signs)
    return T


def deflation_set_point(spec, i: int, seed: int, signs: Optional[SignPattern] = None) -> SymTridiagonal:
    """Random matrix with ``b1 = 0`` and corner exactly ``lambdas[i]``."""
    spec = as_spectrum(spec)
    corner = make_tridiagonal([spec.lambdas[i]], [])
    if spec.n == 1:
        return corner
    T = block_diag(sample_isospectral(spec.without(i), seed), corner)
    if signs is not None:
        T = conjugate_by_signs(T, signs)
    return T


def sample_near_deflation(spec, i: int, b: float, seed: int,
                          signs: Optional[SignPattern] = None) -> SymTridiagonal:
    """Random matrix with spectrum ``spec``, ``|b1| = b`` and corner near ``lambdas[i]``.

    The last row of the eigenvector matrix is chosen so that its weight on
    ``lambdas[i]`` leaves exactly variance ``b**2``; Lanczos from those
    weights followed by index reversal gives the matrix.
    """
    spec = as_spectrum(spec)
    if b == 0.0:
        return deflation_set_point(spec, i, seed, signs)
    lam = np.asarray(spec.lambdas)
    n = lam.shape[0]
    rng = make_rng(seed, 1)
    u = rng.standard_normal(n)
    u[i] = 0.0
    u /= np.linalg.norm(u)
    dl = lam - lam[i]
    m1 = float(np.sum(u * u * dl))
    m2 = float(np.sum(u * u * dl * dl))
    disc = m2 * m2 - 4.0 * m1 * m1 * b * b
    if disc < 0:
        raise ValueError(f"b={b} too large for a deflation neighborhood sample")
    tau = 2.0 * b * b / (m2 + math.sqrt(disc))
    if tau >= 1.0:
        raise ValueError(f"b={b} too large for a deflation neighborhood sample")
    q = math.sqrt(tau) * u
    q[i] = math.sqrt(1.0 - tau)
    alpha, beta = _lanczos(lam, q)
    T = make_tridiagonal(alpha[::-1], beta[::-1])
    if signs is not None:
        T = conjugate_by_signs(T, signs)
    return T


# -------------------------------------------------- signed QR factorization

@dataclass(frozen=True, eq=False)
class QRStarFactors:
    """``Q R`` with ``det Q = +1`` and ``R[k, k] > 0`` for ``k < n - 1``.

    ``rotations[k] = (c, s)`` is the Givens rotation acting on rows
    ``k, k+1`` during elimination; ``qstar`` is their product transposed.
    """

    qstar: np.ndarray
    rstar: np.ndarray
    rotations: np.ndarray

    @property
    def ratios(self) -> np.ndarray:
        d = np.diag(self.rstar)
        return d[1:] / d[:-1]


def pivot_tolerance(T: SymTridiagonal, s: float) -> float:
    return 1e-13 * (1.0 + T.norm() + abs(s))


def _eliminate(T: SymTridiagonal, s: float):
    """Givens elimination of ``T - sI``; returns dense ``R`` and rotations."""
    n = T.n
    M = T.dense() - s * np.eye(n)
    rot = np.zeros((max(n - 1, 0), 2))
    tol = pivot_tolerance(T, s)
    for k in range(n - 1):
        x = M[k, k]
        y = M[k + 1, k]
        r = math.hypot(x, y)
        if r <= tol:
            raise NotAlmostInvertible(
                f"pivot {k} of T - sI is {r:.3e} (threshold {tol:.3e})")
        c, sn = x / r, y / r
        hi = min(k + 3, n)
        top = M[k, k:hi].copy()
        bot = M[k + 1, k:hi].copy()
        M[k, k:hi] = c * top + sn * bot
        M[k + 1, k:hi] = -sn * top + c * bot
        M[k, k] = r
        M[k + 1, k] = 0.0
        rot[k] = (c, sn)
    return M, rot


def rotations_to_q(rot: np.ndarray, n: int) -> np.ndarray:
    Q = np.eye(n)
    for k, (c, sn) in enumerate(rot):
        left = Q[:, k].copy()
        right = Q[:, k + 1].copy()
        Q[:, k] = c * left + sn * right
        Q[:, k + 1] = -sn * left + c * right
    return Q


def factor_shifted(T: SymTridiagonal, s: float) -> QRStarFactors:
    """Signed QR factorization ``T - sI = Q R`` with ``Q`` in SO(n).

    The first ``n-1`` diagonal entries of ``R`` are positive; the last one
    carries the sign of ``det(T - sI)`` and vanishes when ``s`` is an
    eigenvalue. Raises NotAlmostInvertible when a leading pivot falls below
    ``1e-13 (1 + ||T|| + |s|)``.
    """
    R, rot = _eliminate(T, float(s))
    Q = rotations_to_q(rot, T.n)
    R.setflags(write=False)
    Q.setflags(write=False)
    rot.setflags(write=False)
    return QRStarFactors(Q, R, rot)
