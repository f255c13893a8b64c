"""Iteration driver, deflating eigensolver, rate estimation and the
property checkers run on trajectories.

Rates are measured on ``beta_k = |b1_k| / gap``: ``p_k = log beta_{k+1} /
log beta_k`` is close to 2 for quadratic and 3 for cubic decay.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .core import (
    SignPattern,
    Spectrum,
    SymTridiagonal,
    as_spectrum,
    closest_eigenvalue_index,
    conjugate_by_signs,
    eigh_oracle,
    make_rng,
    make_tridiagonal,
    sample_near_deflation,
    sturm_values,
)
from .errors import (
    DimensionMismatch,
    InsufficientData,
    MaxStepsExceeded,
    NotAlmostInvertible,
    StrategyMismatch,
)
from .geometry import double_deflation_membership
from .shifts import ShiftStrategy, strategy_step
from .steps import step_star

SQRT2 = math.sqrt(2.0)

BETA_MAX = 0.1
BETA_MIN = 1e-280
QUADRATIC_BAND = (1.7, 2.3)
CUBIC_MIN = 2.6

STOP_DEFLATED = "deflated"
STOP_MAX_STEPS = "max_steps"
STOP_NOT_INVERTIBLE = "not_almost_invertible"


# ------------------------------------------------------------------- traces

@dataclass
class StepRecord:
    """State ``T_k`` and the shift ``sigma(T_k)`` applied to it."""

    k: int
    shift: float
    b1: float
    b2: Optional[float]
    corner: float
    secondCorner: Optional[float]
    singularGap: float
    height: Optional[float] = None


@dataclass
class IterationTrace:
    steps: List[StepRecord]
    spectrum: List[float]
    strategy: str
    seed: Optional[int]
    stopReason: str
    norm0: float
    final: Optional[SymTridiagonal] = field(default=None, repr=False)

    @property
    def b1(self) -> np.ndarray:
        return np.array([r.b1 for r in self.steps])

    @property
    def b2(self) -> np.ndarray:
        return np.array([np.nan if r.b2 is None else r.b2 for r in self.steps])

    @property
    def shifts(self) -> np.ndarray:
        return np.array([r.shift for r in self.steps])

    def to_dict(self) -> dict:
        steps = []
        for r in self.steps:
            d = asdict(r)
            if d["height"] is None:
                del d["height"]
            steps.append(d)
        return {"spectrum": list(self.spectrum), "strategy": self.strategy,
                "seed": self.seed, "steps": steps, "stopReason": self.stopReason}


def default_deflate_tol(T: SymTridiagonal) -> float:
    return 1e-13 * T.norm()


def _record(k: int, T: SymTridiagonal, shift: float, height: Optional[float]) -> StepRecord:
    n = T.n
    return StepRecord(
        k=k,
        shift=float(shift),
        b1=T.b1 if n >= 2 else 0.0,
        b2=T.b2 if n >= 3 else None,
        corner=T.corner,
        secondCorner=T.second_corner if n >= 2 else None,
        singularGap=T.singular_gap,
        height=None if height is None else float(height),
    )


def iterate(T0: SymTridiagonal, strategy: ShiftStrategy, max_steps: int = 500,
            deflate_tol: Optional[float] = None, *, seed: Optional[int] = None,
            spectrum=None, height_spec: Optional["HeightSpec"] = None) -> IterationTrace:
    """Apply ``F_sigma`` repeatedly, recording every visited state.

    Stops as soon as ``|b1| < deflate_tol`` (that state is recorded) or after
    ``max_steps`` steps. ``deflate_tol = 0`` never triggers, so the run
    always lasts ``max_steps`` steps. A failing factorization ends the run
    with stop reason ``"not_almost_invertible"``.
    """
    tol = default_deflate_tol(T0) if deflate_tol is None else float(deflate_tol)
    if tol < 0:
        raise ValueError("deflate_tol must be >= 0")
    spec_vals = list(as_spectrum(spectrum).lambdas) if spectrum is not None else \
        list(sturm_values(T0))
    spec = height_spec.spectrum if height_spec is not None else None
    records: List[StepRecord] = []
    T = T0
    stop = STOP_MAX_STEPS
    k = 0
    while True:
        h = height(T, spec, height_spec) if height_spec is not None else None
        s = strategy.shift(T)
        records.append(_record(k, T, s, h))
        if T.n < 2 or abs(T.b1) < tol:
            stop = STOP_DEFLATED
            break
        if k >= max_steps:
            break
        try:
            T = step_star(T, s).next
        except NotAlmostInvertible:
            stop = STOP_NOT_INVERTIBLE
            break
        k += 1
    return IterationTrace(records, [float(x) for x in spec_vals], str(strategy), seed,
                          stop, T0.norm(), T)


def deflate_and_recurse(T0: SymTridiagonal, strategy: ShiftStrategy,
                        deflate_tol: Optional[float] = None, max_steps: int = 200,
                        return_steps: bool = False):
    """All eigenvalues of ``T0`` by iterating and splitting.

    Every subdiagonal is tested after each step; an entry below
    ``deflate_tol`` (default ``1e-13 ||T0||``) splits the block in two.
    ``max_steps`` bounds the steps spent on any single block.

    Raises
    ------
    MaxStepsExceeded
        With the eigenvalues found so far in ``partial``.
    """
    tol = default_deflate_tol(T0) if deflate_tol is None else float(deflate_tol)
    found: List[float] = []
    total = 0
    stack = [T0]
    while stack:
        B = stack.pop()
        steps = 0
        while True:
            if B.n == 1:
                found.append(float(B.diag[0]))
                break
            small = np.flatnonzero(np.abs(B.sub) < tol)
            if small.size:
                j = int(small[-1])
                stack.append(make_tridiagonal(B.diag[: j + 1], B.sub[:j]))
                stack.append(make_tridiagonal(B.diag[j + 1:], B.sub[j + 1:]))
                break
            if steps >= max_steps:
                raise MaxStepsExceeded(
                    f"block of size {B.n} did not deflate in {max_steps} steps",
                    partial=sorted(found), steps=total)
            B = step_star(B, strategy.shift(B)).next
            steps += 1
            total += 1
    values = np.sort(np.array(found))
    return (values, total) if return_steps else values


# -------------------------------------------------------------------- rates

@dataclass
class RateSummary:
    exponents: List[float]
    summary: float
    classification: str
    valid_steps: List[int]


def _classify_rate(p: float) -> str:
    if QUADRATIC_BAND[0] <= p <= QUADRATIC_BAND[1]:
        return "quadratic"
    if p >= CUBIC_MIN:
        return "cubic"
    return "inconclusive"


def rate_exponents(trace, gamma: float, cutoff: Optional[int] = None,
                   start: int = 0) -> RateSummary:
    """Per-step exponents ``p_k`` and their tail summary.

    ``trace`` is an :class:`IterationTrace` or a sequence of ``b1`` values.
    Step ``k`` counts when ``1e-280 < beta_k <= 0.1`` and ``beta_{k+1} > 0``.
    Only steps ``start <= k < cutoff`` are considered. The summary is the
    median of the last (up to) three exponents.
    """
    b = trace.b1 if isinstance(trace, IterationTrace) else np.asarray(trace, dtype=float)
    if gamma <= 0 or not math.isfinite(gamma):
        raise ValueError("gamma must be positive and finite")
    beta = np.abs(b) / gamma
    if beta.shape[0] < 2:
        raise InsufficientData("need at least two b1 values")
    stop = beta.shape[0] - 1 if cutoff is None else min(cutoff, beta.shape[0] - 1)
    ps, ks = [], []
    for k in range(start, stop):
        if BETA_MIN < beta[k] <= BETA_MAX and beta[k + 1] > 0:
            ps.append(math.log(beta[k + 1]) / math.log(beta[k]))
            ks.append(k)
    if not ps:
        raise InsufficientData("no step with beta in (1e-280, 0.1]")
    summary = float(np.median(ps[-3:]))
    return RateSummary(ps, summary, _classify_rate(summary), ks)


# ----------------------------------------------------------------- checkers

@dataclass
class CheckReport:
    passed: bool
    worst: float
    details: dict = field(default_factory=dict)


def parlett_check(trace: IterationTrace, T0: SymTridiagonal) -> CheckReport:
    """``|b1_k|^3 <= |b1_0|^2 |b2_0| / sqrt(2)^(k-1)`` for ``k >= 1``.

    ``worst`` is the largest excess of the left side over the bound
    (negative when every step passes with room).
    """
    if not trace.strategy.startswith("wilkinson"):
        raise StrategyMismatch(f"Parlett bound is for Wilkinson traces, got {trace.strategy!r}")
    if T0.n < 3:
        raise DimensionMismatch("Parlett bound needs n >= 3")
    slack = 1e-12 * T0.norm() ** 3
    num = T0.b1 ** 2 * abs(T0.b2)
    worst = -math.inf
    worst_k = None
    for r in trace.steps[1:]:
        bound = num / SQRT2 ** (r.k - 1)
        excess = abs(r.b1) ** 3 - bound - slack
        if excess > worst:
            worst, worst_k = excess, r.k
    if worst_k is None:
        worst = 0.0
    return CheckReport(worst <= 0.0, worst, {"worst_k": worst_k})


def wielandt_hoffman_gap(S: SymTridiagonal, T: SymTridiagonal) -> float:
    """``trace((S - T)^2) - sum_i (sigma_i - lambda_i)^2`` with sorted spectra."""
    if S.n != T.n:
        raise DimensionMismatch("matrices must have the same dimension")
    d = S.distance(T) ** 2
    return d - float(np.sum((sturm_values(S) - sturm_values(T)) ** 2))


# ------------------------------------------------------------------- height

def eps_ap_default(spec, i: int, eps_inv: Optional[float] = None) -> float:
    """Half the distance from ``lambdas[i]`` to the nearest midpoint of a pair.

    Inside ``[lambda_i - eps_ap, lambda_i + eps_ap]`` the order of
    ``|lambda_j - s|`` does not depend on ``s``.
    """
    spec = as_spectrum(spec)
    lam = np.asarray(spec.lambdas)
    mids = (lam[:, None] + lam[None, :]) / 2.0
    iu = np.triu_indices(spec.n, 1)
    d = float(np.min(np.abs(mids[iu] - lam[i]))) if spec.n > 1 else math.inf
    out = 0.5 * d
    cap = 0.01 * spec.gap if eps_inv is None else eps_inv
    return min(out, cap)


@dataclass(frozen=True, eq=False)
class HeightSpec:
    """Parameters of ``H_i(T) = trace(W log((T - lambda_i)^2 + delta_H))``.

    ``log_delta_h`` stores ``log(delta_H)``; calibrated values are far below
    the smallest positive double.
    """

    spectrum: Spectrum
    i: int
    weights: np.ndarray
    log_delta_h: float
    eps_ap: float

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape[0] != self.spectrum.n or np.any(np.diff(w) >= 0):
            raise ValueError("weights must be strictly decreasing, one per eigenvalue")

    @property
    def delta_h(self) -> float:
        return math.exp(self.log_delta_h)

    @classmethod
    def calibrated(cls, spec, i: int, weights=None, eps_ap: Optional[float] = None,
                   eps_inv: Optional[float] = None) -> "HeightSpec":
        """Choose ``delta_H`` so the boundary-separation inequality holds.

        On the boundary ``|b1| = eps`` eigenvector ``i`` carries weight at
        least ``q = eps^2 / D^2`` off the last coordinate, with ``D`` the
        largest ``|lambda_j - lambda_i|``. Taking ``log delta_H`` below
        ``g_max - 2 (g_max - g_min)(sum w - w_n) / (dw q)`` then makes every
        boundary value smaller than every value on the deflation set.
        """
        spec = as_spectrum(spec)
        n = spec.n
        w = np.arange(n, 0, -1, dtype=float) if weights is None else np.asarray(weights, float)
        eps = eps_ap_default(spec, i, eps_inv) if eps_ap is None else float(eps_ap)
        if not eps > 0:
            raise ValueError(f"eps_ap must be positive; lambdas[{i}] is the midpoint of two eigenvalues")
        dl = np.abs(np.delete(spec.lambdas, i) - spec.lambdas[i])
        g = 2.0 * np.log(dl)
        gmax, gmin = float(g.max()), float(g.min())
        q = (eps / float(dl.max())) ** 2
        dw = float(np.min(-np.diff(w)))
        log_delta = gmax - 2.0 * (gmax - gmin + 1.0) * (w.sum() - w[-1]) / (dw * q)
        return cls(spec, i, w, log_delta, eps)

    @classmethod
    def with_delta(cls, spec, i: int, delta_h: float, weights=None,
                   eps_ap: Optional[float] = None) -> "HeightSpec":
        spec = as_spectrum(spec)
        if delta_h <= 0:
            raise ValueError("delta_H must be positive")
        w = np.arange(spec.n, 0, -1, dtype=float) if weights is None else np.asarray(weights, float)
        eps = eps_ap_default(spec, i) if eps_ap is None else float(eps_ap)
        return cls(spec, i, w, math.log(delta_h), eps)

    def g(self) -> np.ndarray:
        lam = np.asarray(self.spectrum.lambdas)
        d2 = (lam - lam[self.i]) ** 2
        with np.errstate(divide="ignore"):
            return np.logaddexp(np.log(d2), self.log_delta_h)


def _height_parts(T: SymTridiagonal, hs: HeightSpec):
    """``H = const + var`` where ``const = g_i w_n`` and ``var`` is small.

    Splitting off the constant keeps differences of heights accurate even
    when ``g_i`` is enormous.
    """
    lam, V = eigh_oracle(T)
    g = hs.g()
    w = np.asarray(hs.weights)
    V2 = V * V
    i = hs.i
    tail = (w - w[-1]) @ V2[:, i]
    m = w @ V2
    m[i] = 0.0
    return g[i] * w[-1], g[i] * tail + float(g @ m)


def height(T: SymTridiagonal, spec, hs: HeightSpec) -> float:
    """``H_i(T) = trace(W lolo_i(T))``."""
    if T.n != hs.spectrum.n:
        raise DimensionMismatch("matrix and height spec dimensions differ")
    c, v = _height_parts(T, hs)
    return c + v


def height_increase(T: SymTridiagonal, T_next: SymTridiagonal, hs: HeightSpec) -> float:
    """``H_i(T_next) - H_i(T)`` computed without the common constant."""
    return _height_parts(T_next, hs)[1] - _height_parts(T, hs)[1]


def boundary_separation(hs: HeightSpec, samples: int = 200, seed: int = 0) -> dict:
    """Compare ``H_i`` on ``|b1| = eps_ap`` against ``H_i`` on the deflation set.

    Reports the analytic bounds and the sampled extremes; ``holds`` uses
    the analytic bounds, which dominate any sample.
    """
    spec, i, w = hs.spectrum, hs.i, np.asarray(hs.weights)
    g = hs.g()
    gi = g[i]
    others = np.delete(g, i)
    rest = float(w.sum() - w[-1])
    lower_d0 = gi * w[-1] + float(others.min()) * rest
    dl = np.abs(np.delete(spec.lambdas, i) - spec.lambdas[i])
    q = (hs.eps_ap / float(dl.max())) ** 2
    dw = float(np.min(-np.diff(w)))
    upper_bd = gi * (w[-1] + dw * q) + float(others.max()) * (rest - dw * q)
    if gi > 0:
        upper_bd = math.inf
    max_bd, min_d0 = -math.inf, math.inf
    for k in range(samples):
        rng = make_rng(seed, 60, k)
        signs = SignPattern.random(spec.n, rng)
        Tb = sample_near_deflation(spec, i, hs.eps_ap, int(rng.integers(2**63)), signs)
        T0 = sample_near_deflation(spec, i, 0.0, int(rng.integers(2**63)), signs)
        max_bd = max(max_bd, height(Tb, spec, hs))
        min_d0 = min(min_d0, height(T0, spec, hs))
    return {"holds": bool(upper_bd < lower_d0 and max_bd < min_d0),
            "bound_boundary_max": upper_bd, "bound_deflation_min": lower_d0,
            "sampled_boundary_max": max_bd, "sampled_deflation_min": min_d0,
            "log_delta_h": hs.log_delta_h}


def visit_count(trace_states: Iterable[SymTridiagonal], spec, i: int, eps: float,
                gap_fraction: float = 0.05) -> int:
    """Number of states in ``{|b1| <= eps, singularGap <= gap_fraction * gap}``
    whose corner is nearest ``lambdas[i]``."""
    spec = as_spectrum(spec)
    count = 0
    for T in trace_states:
        if abs(T.b1) <= eps and T.singular_gap <= gap_fraction * spec.gap \
                and spec.nearest_index(T.corner) == i:
            count += 1
    return count


# --------------------------------------------------- neighborhood dynamics

@dataclass
class InvarianceReport:
    samples: int
    invariant: bool
    worst_invariance: float
    quadratic_constant: float
    cubic_constant: float
    cubic_samples: int
    shift_constant: float
    shift_samples: int
    quadratic_growth: float
    cubic_growth: float

    @property
    def passed(self) -> bool:
        finite = all(math.isfinite(x) for x in (
            self.quadratic_constant, self.cubic_constant, self.shift_constant))
        return self.invariant and finite


def invariance_checks(spec, strategy: ShiftStrategy, eps: float, samples: int,
                      seed: int, gap_threshold: float = 0.1) -> InvarianceReport:
    """One-step behavior of ``F_sigma`` on samples with ``|b1| <= eps``.

    Samples cycle through the eigenvalues with ``|b1|`` log-uniform in
    ``[1e-3 eps, eps]`` and random sign patterns. Reported constants are
    the largest observed ``|b1'| / b1^2``, ``|b1'| / |b1|^3`` (only where
    ``singularGap >= gap_threshold * gap``) and ``|sigma - lambda_i| / b1^2``
    (Wilkinson only, same sub-sample). The growth figures come from
    :func:`ratio_growth`.
    """
    spec = as_spectrum(spec)
    worst_inv = shift_c = 0.0
    b_all, q_all, b_cub, c_cub = [], [], [], []
    n_shift = 0
    for k in range(samples):
        rng = make_rng(seed, 70, k)
        i = k % spec.n
        b = eps * 10.0 ** rng.uniform(-3.0, 0.0)
        signs = SignPattern.random(spec.n, rng)
        T = sample_near_deflation(spec, i, b, int(rng.integers(2**63)), signs)
        res, rec = strategy_step(T, strategy)
        b0, b1 = abs(T.b1), abs(res.next.b1)
        worst_inv = max(worst_inv, b1 / (0.5 * eps))
        if b0 == 0.0:
            continue
        b_all.append(b0)
        q_all.append(b1 / b0 ** 2)
        if rec.singular_gap >= gap_threshold * spec.gap:
            b_cub.append(b0)
            c_cub.append(b1 / b0 ** 3)
            if strategy.kind == "wilkinson":
                shift_c = max(shift_c, abs(rec.shift - spec.lambdas[i]) / b0 ** 2)
                n_shift += 1
    quad = max(q_all, default=0.0)
    cubic = max(c_cub, default=0.0)
    qg = ratio_growth(b_all, q_all) if len(b_all) >= 2 else 0.0
    cg = ratio_growth(b_cub, c_cub) if len(b_cub) >= 2 else 0.0
    return InvarianceReport(samples, worst_inv <= 1.0, worst_inv, quad, cubic, len(c_cub),
                            shift_c, n_shift, qg, cg)


def ratio_growth(b0: np.ndarray, ratio: np.ndarray) -> float:
    """How much a ratio grows as ``b1`` shrinks.

    Splits the samples at the median ``b1`` and returns the largest ratio in
    the lower half over the largest in the upper half; a bounded ratio gives
    a value near or below 1, a ratio blowing up like ``1/b1`` gives roughly
    the spread of ``b1`` values.
    """
    b0 = np.asarray(b0, float)
    ratio = np.asarray(ratio, float)
    med = np.median(b0)
    lo = ratio[b0 <= med]
    hi = ratio[b0 > med]
    if lo.size == 0 or hi.size == 0:
        raise InsufficientData("need samples on both sides of the median")
    if hi.max() == 0.0:
        return 0.0 if lo.max() == 0.0 else math.inf
    return float(lo.max() / hi.max())


def singular_support_samples(b_values: Sequence[float], seed: int,
                             spec=(-1.0, 0.0, 1.0)) -> List[SymTridiagonal]:
    """Matrices with spectrum ``{-c, 0, c}``, equal corner pair and ``|b1| = b``.

    The zero-diagonal family ``[[0, a, 0], [a, 0, b], [0, b, 0]]`` with
    ``a^2 + b^2 = c^2`` has spectrum ``{-c, 0, c}`` and lies on the set where
    Wilkinson's shift jumps. Signs are drawn from ``seed``.
    """
    spec = as_spectrum(spec)
    lam = np.asarray(spec.lambdas)
    if spec.n != 3 or abs(lam[0] + lam[2]) > spec.tau_ap or abs(lam[1]) > spec.tau_ap:
        raise ValueError("singular-support family needs a spectrum {-c, 0, c}")
    c = float(lam[2])
    out = []
    for k, b in enumerate(b_values):
        if not 0 < b < c:
            raise ValueError("b must lie in (0, c)")
        a = math.sqrt(c * c - b * b)
        T = make_tridiagonal([0.0, 0.0, 0.0], [a, b])
        signs = SignPattern.random(3, make_rng(seed, 80, k))
        out.append(conjugate_by_signs(T, signs))
    return out


# ------------------------------------------------------------- weak a.p.

@dataclass
class WeakApReport:
    passed: bool
    i: int
    c_i: int
    final_b2: float
    corner_error: float
    second_corner_error: float
    tail: Optional[RateSummary]
    b2_contraction: Optional[float]


def weak_ap_limits(trace: IterationTrace, spec, i: Optional[int] = None,
                   tol: Optional[float] = None) -> WeakApReport:
    """Limits of ``b2``, the corner and the second corner along a trace.

    Expects ``b2 -> 0``, corner ``-> lambda_i`` and second corner
    ``-> lambda_{c(i)}``, all within ``tol`` (default ``1e-6 gap``).
    ``b2_contraction`` is the median of ``|b2_{k+1} / b2_k|`` over the last
    steps with ``b2`` still above ``1e-200``.
    """
    spec = as_spectrum(spec)
    if len(trace.steps) < 3:
        raise InsufficientData("trace too short")
    if spec.n < 3:
        raise DimensionMismatch("need n >= 3")
    tol = 1e-6 * spec.gap if tol is None else tol
    last = trace.steps[-1]
    if i is None:
        i = spec.nearest_index(last.corner)
    ci = closest_eigenvalue_index(spec, i)
    corner_err = abs(last.corner - spec.lambdas[i])
    second_err = abs(last.secondCorner - spec.lambdas[ci])
    b2 = np.abs(trace.b2)
    ok = b2[:-1] > 1e-200
    ratios = (b2[1:] / np.where(ok, b2[:-1], 1.0))[ok]
    contraction = float(np.median(ratios[-10:])) if ratios.size else None
    try:
        tail = rate_exponents(trace, spec.gap)
    except InsufficientData:
        tail = None
    passed = bool(abs(last.b2) < tol and corner_err < tol and second_err < tol)
    return WeakApReport(passed, i, ci, float(abs(last.b2)), corner_err, second_err,
                        tail, contraction)


def double_deflation_entry(states: Sequence[SymTridiagonal], spec, i: int,
                           eps1: float, eps2: float) -> Optional[int]:
    """First index from which every state lies in the double deflation
    neighborhood for ``(i, c(i))``; ``None`` if the tail leaves it."""
    spec = as_spectrum(spec)
    ci = closest_eigenvalue_index(spec, i)
    inside = [double_deflation_membership(T, spec, i, ci, eps1, eps2) for T in states]
    if not inside or not inside[-1]:
        return None
    k = len(inside) - 1
    while k > 0 and inside[k - 1]:
        k -= 1
    return k


def trajectory(T0: SymTridiagonal, strategy: ShiftStrategy, steps: int) -> List[SymTridiagonal]:
    """States ``T0, F(T0), ..., F^steps(T0)``."""
    out = [T0]
    T = T0
    for _ in range(steps):
        T = strategy_step(T, strategy)[0].next
        out.append(T)
    return out


def exact_shift_convergence(T0: SymTridiagonal, spec, i: int, max_steps: int = 500,
                            tol: Optional[float] = None) -> Optional[int]:
    """Steps of ``F_{lambda_i}`` until ``max |sub| < tol`` (default ``1e-8 gap``)."""
    spec = as_spectrum(spec)
    tol = 1e-8 * spec.gap if tol is None else tol
    s = float(spec.lambdas[i])
    T = T0
    for k in range(max_steps + 1):
        if np.max(np.abs(T.sub), initial=0.0) < tol:
            return k
        if k == max_steps:
            break
        T = step_star(T, s).next
    return None
