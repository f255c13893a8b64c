"""Deflation neighborhoods, the canonical projection onto a deflation set,
tubular coordinates and the moment map onto the permutohedron.

The deflation set for eigenvalue ``i`` is the set of matrices with
``b1 = 0`` and corner ``lambdas[i]``; its neighborhoods are the matrices
with ``|b1| <= eps``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import linprog

from .core import (
    SignPattern,
    Spectrum,
    SymTridiagonal,
    as_spectrum,
    block_diag,
    eigh_oracle,
    flip_last,
    make_rng,
    make_tridiagonal,
    sample_near_deflation,
)
from .errors import AmbiguousComponent, DimensionMismatch, NotInNeighborhood
from .steps import inverse_step, step_star

SQRT2 = math.sqrt(2.0)

#: Default neighborhood sizes as fractions of the spectral gap.
EPS_TUB_FRACTION = 0.05
EPS_INV_FRACTION = 0.01


@dataclass(frozen=True)
class DeflationLocation:
    component_index: int
    b_value: float
    corner_gap: float


@dataclass(frozen=True, eq=False)
class TubularPoint:
    """``(Pi_i(T), b1(T))`` together with ``||T - Pi_i(T)||``."""

    base: SymTridiagonal
    fiber: float
    distance: float


def deflation_component(T: SymTridiagonal, spec, eps: float) -> DeflationLocation:
    """Locate the deflation neighborhood containing ``T``.

    Raises
    ------
    NotInNeighborhood
        If ``|b1(T)| > eps``, or if the corner is not within ``sqrt(2) eps``
        of an eigenvalue (``T`` is then not isospectral to ``spec``).
    AmbiguousComponent
        If two eigenvalues are equally close to the corner.
    """
    spec = as_spectrum(spec)
    if T.n != spec.n:
        raise DimensionMismatch(f"matrix is {T.n}x{T.n}, spectrum has {spec.n} values")
    if T.n < 2:
        raise DimensionMismatch("deflation needs n >= 2")
    if not 0 <= eps < spec.gap / (2.0 * SQRT2):
        raise ValueError(f"eps={eps} must lie in [0, gap/(2 sqrt 2)) = [0, {spec.gap / (2 * SQRT2)})")
    b = T.b1
    if abs(b) > eps:
        raise NotInNeighborhood(f"|b1|={abs(b):.3e} exceeds eps={eps:.3e}")
    dist = np.abs(spec.lambdas - T.corner)
    order = np.argsort(dist, kind="stable")
    if dist[order[1]] - dist[order[0]] <= spec.tau_ap:
        raise AmbiguousComponent("corner is equidistant from two eigenvalues")
    i = int(order[0])
    gap = float(dist[i])
    slack = 1e-9 * (1.0 + spec.norm())
    if gap >= SQRT2 * eps + slack:
        raise NotInNeighborhood(
            f"corner gap {gap:.3e} is not below sqrt(2)*eps={SQRT2 * eps:.3e}; "
            "matrix is not isospectral to the given spectrum")
    return DeflationLocation(i, b, gap)


def canonical_projection(T: SymTridiagonal, spec, i: int) -> SymTridiagonal:
    """The point of the deflation set for ``lambdas[i]`` attached to ``T``.

    ``T' = F_{lambda_i}(T)`` already splits as ``A' (+) lambda_i``. On the
    deflation set the exact-shift step acts on the leading block as the
    classical step, which differs from the signed one by a flip of the last
    subdiagonal exactly when ``det(A - lambda_i)`` is negative, i.e. when
    an odd number of eigenvalues lie below ``lambda_i``.
    """
    spec = as_spectrum(spec)
    if T.n != spec.n:
        raise DimensionMismatch(f"matrix is {T.n}x{T.n}, spectrum has {spec.n} values")
    lam = float(spec.lambdas[i])
    corner = make_tridiagonal([lam], [])
    if T.n == 1:
        return corner
    Tp = step_star(T, lam).next
    A = Tp.leading(T.n - 1)
    if (i % spec.n) % 2 == 1 and A.n > 1:
        A = flip_last(A)
    return block_diag(inverse_step(A, lam), corner)


def tubular_coords(T: SymTridiagonal, spec, i: int, eps: Optional[float] = None) -> TubularPoint:
    """``(Pi_i(T), b1(T))``; with ``eps`` given, ``|b1| <= eps`` is enforced."""
    if eps is not None and abs(T.b1) > eps:
        raise NotInNeighborhood(f"|b1|={abs(T.b1):.3e} exceeds eps={eps:.3e}")
    base = canonical_projection(T, spec, i)
    return TubularPoint(base, T.b1, T.distance(base))


def double_deflation_membership(T: SymTridiagonal, spec, i: int, j: int,
                                eps1: float, eps2: float) -> bool:
    """Whether ``T`` is near the set where both ``b1`` and ``b2`` vanish.

    ``i`` and ``j`` index the full spectrum. True iff ``|b1(T)| <= eps1``
    and the leading block of ``Pi_i(T)`` has ``|b1| <= eps2`` with corner
    closest to ``lambdas[j]`` among the remaining eigenvalues.
    """
    spec = as_spectrum(spec)
    if T.n < 3:
        raise DimensionMismatch("double deflation needs n >= 3")
    if i == j:
        raise ValueError("i and j must differ")
    if abs(T.b1) > eps1:
        return False
    A = canonical_projection(T, spec, i).leading(T.n - 1)
    if abs(A.b1) > eps2:
        return False
    rest = np.delete(np.arange(spec.n), i)
    k = int(np.argmin(np.abs(spec.lambdas[rest] - A.corner)))
    return int(rest[k]) == j % spec.n


# --------------------------------------------------------------- moment map

def moment_map(T: SymTridiagonal, tol: Optional[float] = None) -> np.ndarray:
    """Diagonal of ``Q Lambda Q^T`` for ``T = Q^T Lambda Q``.

    Coordinate ``j`` is ``sum_k V[k, j]**2 * lambda_k`` where the columns of
    ``V`` are the unit eigenvectors in increasing eigenvalue order.
    """
    lam, V = eigh_oracle(T, tol)
    return (V * V).T @ lam


def permutohedron_vertices(spec) -> np.ndarray:
    """All ``v_pi = (lambda_{pi^-1(1)}, ..., lambda_{pi^-1(n)})``, one per row."""
    lam = np.asarray(as_spectrum(spec).lambdas)
    return np.array([lam[list(p)] for p in itertools.permutations(range(lam.shape[0]))])


def in_permutohedron(x, spec, tol: float = 1e-9) -> bool:
    """Convex-hull membership of ``x`` in the permutohedron, by a feasibility LP."""
    V = permutohedron_vertices(spec)
    x = np.asarray(x, dtype=float)
    m = V.shape[0]
    A_eq = np.vstack([V.T, np.ones((1, m))])
    b_eq = np.concatenate([x, [1.0]])
    # Minimize the total residual of |A_eq w - b_eq| via slack variables.
    k = A_eq.shape[0]
    c = np.concatenate([np.zeros(m), np.ones(2 * k)])
    A = np.hstack([A_eq, np.eye(k), -np.eye(k)])
    res = linprog(c, A_eq=A, b_eq=b_eq, bounds=[(0, None)] * (m + 2 * k), method="highs")
    return bool(res.status == 0 and res.fun <= tol * (1.0 + float(np.abs(V).max())))


# ---------------------------------------------------- neighborhood constants

@dataclass(frozen=True)
class Epsilons:
    """Absolute neighborhood sizes for a given spectrum."""

    tub: float
    inv: float

    @classmethod
    def defaults(cls, spec) -> "Epsilons":
        g = as_spectrum(spec).gap
        return cls(EPS_TUB_FRACTION * g, EPS_INV_FRACTION * g)


def validate_epsilons(spec, eps: Optional[Epsilons] = None, strategy=None,
                      samples: int = 50, seed: int = 0) -> dict:
    """Spot-check configured neighborhood sizes on random samples.

    For every eigenvalue, samples with ``|b1| <= eps.tub`` must sit in the
    right component with corner gap below ``sqrt(2) eps.tub``, and one step
    of ``strategy`` (Wilkinson by default) from ``|b1| <= eps.inv`` must
    land in ``|b1| <= eps.inv / 2``. Raises ``ValueError`` on failure.
    """
    from .shifts import ShiftStrategy, strategy_step

    spec: Spectrum = as_spectrum(spec)
    eps = Epsilons.defaults(spec) if eps is None else eps
    strategy = ShiftStrategy.wilkinson() if strategy is None else strategy
    if not 0 < eps.inv <= eps.tub < spec.gap / (2.0 * SQRT2):
        raise ValueError("need 0 < eps_inv <= eps_tub < gap/(2 sqrt 2)")
    worst_corner = 0.0
    worst_step = 0.0
    for i in range(spec.n):
        for k in range(samples):
            rng = make_rng(seed, 40, i, k)
            signs = SignPattern.random(spec.n, rng)
            b = eps.tub * rng.uniform(0.0, 1.0)
            T = sample_near_deflation(spec, i, b, int(rng.integers(2**63)), signs)
            loc = deflation_component(T, spec, eps.tub)
            if loc.component_index != i:
                raise ValueError(f"sample near eigenvalue {i} classified as {loc.component_index}")
            worst_corner = max(worst_corner, loc.corner_gap / (SQRT2 * eps.tub))
            b = eps.inv * rng.uniform(0.0, 1.0)
            T = sample_near_deflation(spec, i, b, int(rng.integers(2**63)), signs)
            res, _ = strategy_step(T, strategy)
            worst_step = max(worst_step, abs(res.next.b1) / (0.5 * eps.inv))
    if worst_step > 1.0:
        raise ValueError(f"eps_inv={eps.inv} is not invariant: worst |b1'|/(eps/2) = {worst_step:.3g}")
    return {"eps_tub": eps.tub, "eps_inv": eps.inv,
            "worst_corner_ratio": worst_corner, "worst_step_ratio": worst_step}
