"""Property suites, one per behavior family, shared by ``tridiqr verify``
and the acceptance tests.

Each suite returns a :class:`SuiteResult` whose checks carry a name, a
pass flag and the measured metrics. Tolerances are fixed here; the config
only supplies seeds, sample counts and runtime knobs such as
``deflate_tol``.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from .core import (
    SignPattern,
    Spectrum,
    SymTridiagonal,
    conjugate_by_signs,
    deflation_set_point,
    factor_shifted,
    make_rng,
    make_tridiagonal,
    sample_isospectral,
    sample_near_deflation,
    sturm_values,
)
from .dynamics import (
    HeightSpec,
    boundary_separation,
    deflate_and_recurse,
    double_deflation_entry,
    exact_shift_convergence,
    height_increase,
    invariance_checks,
    iterate,
    parlett_check,
    rate_exponents,
    ratio_growth,
    singular_support_samples,
    trajectory,
    visit_count,
    weak_ap_limits,
    wielandt_hoffman_gap,
)
from .errors import MaxStepsExceeded, SingularShift
from .geometry import (
    Epsilons,
    canonical_projection,
    deflation_component,
    in_permutohedron,
    moment_map,
    tubular_coords,
)
from .shifts import ShiftStrategy, rayleigh_shift, strategy_step, wilkinson_shift
from .steps import check_commutation, inverse_step, step_star, step_unsigned

SQRT2 = math.sqrt(2.0)

SPEC_APFREE = (1.0, 2.0, 4.0)
SPEC_STRONG = (-1.0, 0.0, 1.0)
SPEC_WEAK = (-1.0, 0.0, 0.3, 1.0)
SPEC_VERTEX = (4.0, 5.0, 7.0)
# a.p.-free with every ratio of consecutive distances |lambda_j - lambda_i|
# below 0.9, so exact-shift iteration contracts fast for every i
SPEC_APFREE_8 = (2.0, 8.0, 20.0, 27.0, 36.0, 44.0, 49.0, 56.0)


@dataclass
class Check:
    name: str
    passed: bool
    metrics: dict = field(default_factory=dict)


@dataclass
class SuiteResult:
    name: str
    checks: List[Check]
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failing(self) -> List[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {"suite": self.name, "passed": self.passed,
                "checks": [{"name": c.name, "passed": c.passed, "metrics": _jsonable(c.metrics)}
                           for c in self.checks]}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        v = float(x)
        return v if math.isfinite(v) else str(v)
    return x


@dataclass
class VerifyConfig:
    seed: int = 0
    deflate_tol: Optional[float] = None
    max_steps: int = 200
    eps_tub_fraction: float = 0.05
    eps_inv_fraction: float = 0.01
    eps_ap: Optional[float] = None
    mixed_eps_fraction: float = 1e-3


# ---------------------------------------------------------------- helpers

def random_tridiagonal(rng: np.random.Generator, n: int) -> SymTridiagonal:
    return make_tridiagonal(rng.standard_normal(n), rng.standard_normal(n - 1))


def random_spectrum(rng: np.random.Generator, n: int, lo=-5.0, hi=5.0, min_gap=0.05) -> Spectrum:
    while True:
        lam = np.sort(rng.uniform(lo, hi, n))
        if n == 1 or np.min(np.diff(lam)) > min_gap:
            return Spectrum.from_values(lam)


def haar_last_row_sample(rng: np.random.Generator, n: int) -> SymTridiagonal:
    """Isospectral sample whose eigenvector matrix has a uniform last row.

    Exact-shift deflation is only as accurate as ``eps / |v_n|`` where
    ``v_n`` is the last eigenvector component, so the singular-shift checks
    draw matrices with typical, not localized, last components.
    """
    spec = random_spectrum(rng, n)
    return sample_isospectral(spec, int(rng.integers(2**63)), SignPattern.random(n, rng),
                              reverse=True)


# ------------------------------------------------------------------ suites

def suite_factorization(cfg: VerifyConfig, samples: int = 1000) -> SuiteResult:
    resid = orth = det = 0.0
    min_pivot = math.inf
    singular = 0.0
    for k in range(samples):
        rng = make_rng(cfg.seed, 100, k)
        n = int(rng.integers(1, 13))
        T = random_tridiagonal(rng, n)
        s = float(rng.normal(scale=2.0))
        f = factor_shifted(T, s)
        M = T.dense() - s * np.eye(n)
        scale = 1.0 + T.norm() + abs(s)
        resid = max(resid, np.max(np.abs(f.qstar @ f.rstar - M)) / scale)
        orth = max(orth, np.max(np.abs(f.qstar.T @ f.qstar - np.eye(n))))
        det = max(det, abs(np.linalg.det(f.qstar) - 1.0))
        if n > 1:
            min_pivot = min(min_pivot, float(np.min(np.diag(f.rstar)[:-1])))
            U = haar_last_row_sample(rng, n)
            g = factor_shifted(U, float(sturm_values(U)[k % n]))
            singular = max(singular, abs(g.rstar[-1, -1]) / (1.0 + U.norm()))
    return SuiteResult("factorization", [
        Check("residual", resid <= 1e-11, {"max_relative_residual": resid}),
        Check("orthogonality", orth <= 1e-12, {"max_orthogonality_error": orth}),
        Check("det_plus_one", det <= 1e-10, {"max_det_error": det}),
        Check("positive_pivots", min_pivot > 0, {"min_leading_pivot": min_pivot}),
        Check("singular_last_pivot", singular <= 1e-10, {"max_last_pivot_at_eigenvalue": singular}),
    ])


def suite_step_identities(cfg: VerifyConfig, samples: int = 500) -> SuiteResult:
    ratio_err = dense_err = spec_err = defl_b = defl_c = equiv = comm = inv = 0.0
    localized = 0.0
    sign_ok = trichotomy_ok = True
    for k in range(samples):
        rng = make_rng(cfg.seed, 200, k)
        n = int(rng.integers(2, 11))
        T = random_tridiagonal(rng, n)
        lam = sturm_values(T)
        nrm = T.norm()
        s = float(rng.uniform(lam[0] - 1.0, lam[-1] + 1.0))
        res = step_star(T, s)
        f = factor_shifted(T, s)
        ratio_err = max(ratio_err, np.max(np.abs(res.next.sub - res.ratios * T.sub)) / (1 + nrm))
        dense = f.qstar.T @ T.dense() @ f.qstar
        dense_err = max(dense_err, np.max(np.abs(dense - res.next.dense())) / nrm)
        spec_err = max(spec_err, np.max(np.abs(sturm_values(res.next) - lam)) / nrm)
        if n > 2:
            sign_ok &= bool(np.all(np.sign(res.next.sub[:-1]) == np.sign(T.sub[:-1])))
        # exact shift
        U = haar_last_row_sample(rng, n)
        lu = sturm_values(U)
        e = float(lu[k % n])
        exu = step_star(U, e)
        defl_b = max(defl_b, abs(exu.next.b1) / U.norm())
        defl_c = max(defl_c, abs(exu.next.corner - e) / U.norm())
        localized = max(localized, abs(step_star(T, float(lam[k % n])).next.b1) / nrm)
        # equivariance under every generator
        for j in range(1, n):
            E = SignPattern.generator(n, j)
            a = step_star(conjugate_by_signs(T, E), s).next
            b = conjugate_by_signs(res.next, E)
            equiv = max(equiv, a.max_abs_diff(b) / nrm)
        # sign of det and the unsigned step
        expected = int(np.sign(np.prod(lam - s)))
        trichotomy_ok &= res.det_sign == expected
        u = step_unsigned(T, s)
        if expected > 0:
            trichotomy_ok &= u.next.max_abs_diff(res.next) == 0.0
        else:
            trichotomy_ok &= u.next.max_abs_diff(
                res.next.replace(sub=np.r_[res.next.sub[:-1], -res.next.sub[-1]])) == 0.0
        trichotomy_ok &= np.sign(u.next.b1) == np.sign(T.b1)
        trichotomy_ok &= exu.det_sign == 0
        try:
            step_unsigned(U, e)
            trichotomy_ok = False
        except SingularShift:
            pass
        # commutation and inverse
        s1 = float(rng.uniform(lam[0] - 1.0, lam[-1] + 1.0))
        comm = max(comm, check_commutation(T, s, s1) / nrm)
        inv = max(inv, inverse_step(res.next, s).max_abs_diff(T) / nrm)
    drift = 0.0
    for k in range(20):
        rng = make_rng(cfg.seed, 201, k)
        n = int(rng.integers(3, 11))
        T = random_tridiagonal(rng, n)
        lam = sturm_values(T)
        U = T
        for _ in range(100):
            U = step_star(U, float(rng.uniform(lam[0], lam[-1]))).next
        drift = max(drift, np.max(np.abs(sturm_values(U) - lam)) / T.norm())
    return SuiteResult("step-identities", [
        Check("ratio_identity", ratio_err <= 1e-10, {"max_error": ratio_err}),
        Check("chained_matches_dense", dense_err <= 1e-12, {"max_error": dense_err}),
        Check("isospectral_step", spec_err <= 1e-9, {"max_error": spec_err}),
        Check("isospectral_drift_100_steps", drift <= 1e-8, {"max_drift": drift}),
        Check("sign_preservation", bool(sign_ok)),
        Check("exact_shift_deflation", defl_b <= 1e-10 and defl_c <= 1e-9,
              {"max_b1": defl_b, "max_corner_error": defl_c,
               "max_b1_random_entries": localized}),
        Check("sign_equivariance", equiv <= 1e-10, {"max_error": equiv}),
        Check("det_sign_trichotomy", bool(trichotomy_ok)),
        Check("commutation", comm <= 1e-8, {"max_discrepancy": comm}),
        Check("inverse_round_trip", inv <= 1e-9, {"max_error": inv}),
    ])


def suite_strategy_constants(cfg: VerifyConfig, samples: int = 1000) -> SuiteResult:
    checks = []
    for spec_vals in (SPEC_APFREE, SPEC_STRONG, SPEC_WEAK):
        spec = Spectrum.from_values(spec_vals)
        lam = np.asarray(spec.lambdas)
        worst_r = worst_w = worst_wh = 0.0
        ratio_r = ratio_w = 0.0
        invariant = True
        for k in range(samples):
            rng = make_rng(cfg.seed, 300, k)
            signs = SignPattern.random(spec.n, rng)
            T = sample_isospectral(spec, int(rng.integers(2**63)), signs)
            b = abs(T.b1)
            rho, om = rayleigh_shift(T), wilkinson_shift(T)
            dr = float(np.min(np.abs(lam - rho)))
            dw = float(np.min(np.abs(lam - om)))
            worst_r = max(worst_r, dr - SQRT2 * b)
            worst_w = max(worst_w, dw - 2 * SQRT2 * b)
            worst_wh = max(worst_wh, abs(rho - om) - SQRT2 * b)
            ratio_r = max(ratio_r, dr / b)
            ratio_w = max(ratio_w, dw / b)
            E = SignPattern.random(spec.n, make_rng(cfg.seed, 301, k))
            U = conjugate_by_signs(T, E)
            invariant &= rayleigh_shift(U) == rho and wilkinson_shift(U) == om
        tag = "_".join(f"{x:g}" for x in spec_vals)
        checks.append(Check(f"rayleigh_constant[{tag}]", worst_r <= 1e-12,
                            {"max_excess": worst_r, "observed_ratio": ratio_r}))
        checks.append(Check(f"wilkinson_constant[{tag}]", worst_w <= 1e-12,
                            {"max_excess": worst_w, "observed_ratio": ratio_w}))
        checks.append(Check(f"wilkinson_near_corner[{tag}]", worst_wh <= 1e-12,
                            {"max_excess": worst_wh}))
        checks.append(Check(f"sign_invariance[{tag}]", bool(invariant)))
    # Wilkinson's shift jumps across equal corner entries
    jumps = []
    for k in range(50):
        rng = make_rng(cfg.seed, 302, k)
        b, h = float(rng.uniform(0.1, 1.0)), 1e-9
        lo = wilkinson_shift(make_tridiagonal([0.0, -h], [b]))
        hi = wilkinson_shift(make_tridiagonal([0.0, h], [b]))
        jumps.append(abs(hi - lo) / (2 * b))
    checks.append(Check("wilkinson_jump_across_singular_support",
                        min(jumps) > 0.99, {"min_jump_over_block_gap": min(jumps)}))
    return SuiteResult("strategy-constants", checks)


def suite_geometry(cfg: VerifyConfig, samples: int = 200) -> SuiteResult:
    idem = comm = proj = tub = equiv = 0.0
    corner_ratio = 0.0
    classified = True
    cb = 0.0
    sandwich = -math.inf
    for spec_vals in (SPEC_APFREE, SPEC_WEAK, (1.0, 2.0, 3.0, 5.0, 8.0)):
        spec = Spectrum.from_values(spec_vals)
        eps = Epsilons(cfg.eps_tub_fraction * spec.gap, cfg.eps_inv_fraction * spec.gap)
        for k in range(samples):
            rng = make_rng(cfg.seed, 400, spec.n, k)
            i = k % spec.n
            signs = SignPattern.random(spec.n, rng)
            b = eps.tub * float(rng.uniform(0.0, 1.0))
            T = sample_near_deflation(spec, i, b, int(rng.integers(2**63)), signs)
            nrm = T.norm()
            loc = deflation_component(T, spec, eps.tub)
            classified &= loc.component_index == i
            corner_ratio = max(corner_ratio, loc.corner_gap / (SQRT2 * eps.tub))
            tp = tubular_coords(T, spec, i, eps.tub)
            P = tp.base
            idem = max(idem, canonical_projection(P, spec, i).max_abs_diff(P))
            s = float(spec.lambdas[i] + eps.inv * rng.uniform(-1.0, 1.0))
            res = step_star(T, s)
            lhs = canonical_projection(res.next, spec, i)
            comm = max(comm, lhs.max_abs_diff(step_star(P, s).next) / nrm)
            tub = max(tub, abs(res.next.b1 - res.r * tp.fiber))
            D = deflation_set_point(spec, i, int(rng.integers(2**63)), signs)
            proj = max(proj, canonical_projection(D, spec, i).max_abs_diff(D))
            E = SignPattern.random(spec.n, rng)
            equiv = max(equiv, canonical_projection(conjugate_by_signs(T, E), spec, i)
                        .max_abs_diff(conjugate_by_signs(P, E)))
            if tp.fiber != 0.0:
                cb = max(cb, tp.distance / abs(tp.fiber))
                sandwich = max(sandwich, abs(tp.fiber) - tp.distance)
    verts = np.array(list(itertools.permutations(SPEC_VERTEX)))
    vert_err = 0.0
    lam_v = np.array(SPEC_VERTEX)
    for v in verts:
        pi = np.searchsorted(lam_v, v)
        v_pi = lam_v[np.argsort(pi)]
        vert_err = max(vert_err, np.max(np.abs(moment_map(make_tridiagonal(v, [0, 0])) - v_pi)))
    hull = True
    trace_err = 0.0
    for k in range(30):
        rng = make_rng(cfg.seed, 401, k)
        spec = Spectrum.from_values(SPEC_VERTEX if k % 2 == 0 else (1.0, 2.0, 4.0, 9.0))
        T = sample_isospectral(spec, int(rng.integers(2**63)), SignPattern.random(spec.n, rng))
        x = moment_map(T)
        hull &= in_permutohedron(x, spec)
        trace_err = max(trace_err, abs(x.sum() - spec.lambdas.sum()))
    return SuiteResult("geometry", [
        Check("projection_idempotent", idem <= 1e-9, {"max_error": idem}),
        Check("projection_fixes_deflation_set", proj <= 1e-9, {"max_error": proj}),
        Check("projection_commutes_with_steps", comm <= 1e-8, {"max_error": comm}),
        Check("projection_sign_equivariant", equiv <= 1e-10, {"max_error": equiv}),
        Check("component_corner_gap", bool(classified) and corner_ratio < 1.0,
              {"max_gap_over_sqrt2_eps": corner_ratio}),
        Check("tubular_step_identity", tub <= 1e-8, {"max_fiber_error": tub}),
        Check("distance_sandwich", sandwich <= 1e-12,
              {"max_excess": sandwich, "empirical_C_b": cb}),
        Check("moment_map_vertices", vert_err <= 1e-12, {"max_error": vert_err}),
        Check("moment_map_in_hull", bool(hull) and trace_err <= 1e-10,
              {"max_trace_error": trace_err}),
    ])


def suite_invariance_squeeze(cfg: VerifyConfig, samples: int = 500) -> SuiteResult:
    checks = []
    for spec_vals in (SPEC_APFREE, SPEC_STRONG, SPEC_WEAK):
        spec = Spectrum.from_values(spec_vals)
        eps = cfg.eps_inv_fraction * spec.gap
        tag = "_".join(f"{x:g}" for x in spec_vals)
        for strat in (ShiftStrategy.wilkinson(), ShiftStrategy.rayleigh()):
            rep = invariance_checks(spec, strat, eps, samples, cfg.seed)
            m = {"worst_b1_over_half_eps": rep.worst_invariance,
                 "quadratic_C": rep.quadratic_constant, "quadratic_growth": rep.quadratic_growth,
                 "cubic_C": rep.cubic_constant, "cubic_growth": rep.cubic_growth,
                 "cubic_samples": rep.cubic_samples}
            if strat.kind == "wilkinson":
                m["shift_C"] = rep.shift_constant
            checks.append(Check(f"invariance[{strat.kind},{tag}]", rep.invariant, m))
            checks.append(Check(f"quadratic_bounded[{strat.kind},{tag}]",
                                rep.passed and rep.quadratic_growth <= 10.0, m))
            checks.append(Check(f"cubic_bounded_off_singular[{strat.kind},{tag}]",
                                rep.cubic_samples > 0 and rep.cubic_growth <= 10.0, m))
    # equal corner pair: quadratic but not cubic
    b = 10.0 ** make_rng(cfg.seed, 500).uniform(-5.0, -2.0, 200)
    Ts = singular_support_samples(b, cfg.seed)
    W = ShiftStrategy.wilkinson()
    nb = np.array([abs(strategy_step(T, W)[0].next.b1) for T in Ts])
    qg = ratio_growth(b, nb / b ** 2)
    cg = ratio_growth(b, nb / b ** 3)
    checks.append(Check("quadratic_not_cubic_on_singular_support", qg <= 10.0 and cg > 10.0,
                        {"quadratic_growth": qg, "cubic_growth": cg,
                         "quadratic_C": float(np.max(nb / b ** 2))}))
    return SuiteResult("invariance-squeeze", checks)


def _wilkinson_starts(cfg: VerifyConfig):
    for spec_vals in (SPEC_APFREE, SPEC_STRONG, SPEC_WEAK):
        spec = Spectrum.from_values(spec_vals)
        for k in range(30):
            rng = make_rng(cfg.seed, 600, spec.n, k)
            yield spec, sample_isospectral(spec, int(rng.integers(2**63)),
                                           SignPattern.random(spec.n, rng))
    for n in (5, 8, 12):
        for k in range(20):
            rng = make_rng(cfg.seed, 601, n, k)
            spec = random_spectrum(rng, n)
            yield spec, sample_isospectral(spec, int(rng.integers(2**63)),
                                           SignPattern.random(n, rng))


def suite_parlett(cfg: VerifyConfig) -> SuiteResult:
    worst = -math.inf
    fails = 0
    count = 0
    W = ShiftStrategy.wilkinson()
    for spec, T0 in _wilkinson_starts(cfg):
        tr = iterate(T0, W, max_steps=40, deflate_tol=0.0, spectrum=spec)
        rep = parlett_check(tr, T0)
        worst = max(worst, rep.worst / T0.norm() ** 3)
        fails += not rep.passed
        count += 1
    return SuiteResult("parlett-bound", [
        Check("parlett_bound", fails == 0, {"traces": count, "violations": fails,
                                             "worst_relative_excess": worst}),
    ])


def suite_rates(cfg: VerifyConfig, runs: int = 100) -> SuiteResult:
    W = ShiftStrategy.wilkinson()
    checks = []
    spec = Spectrum.from_values(SPEC_APFREE)
    summaries = []
    for k in range(runs):
        rng = make_rng(cfg.seed, 700, k)
        T0 = sample_isospectral(spec, int(rng.integers(2**63)), SignPattern.random(3, rng))
        tr = iterate(T0, W, max_steps=40, deflate_tol=0.0, seed=k, spectrum=spec)
        summaries.append(rate_exponents(tr, spec.gap).summary)
    cubic = int(np.sum(np.array(summaries) >= 2.6))
    checks.append(Check("cubic_rate_apfree", cubic >= 95,
                        {"cubic_runs": cubic, "runs": runs,
                         "median_exponent": float(np.median(summaries))}))
    spec = Spectrum.from_values(SPEC_WEAK)
    i = 2
    eps = cfg.eps_inv_fraction * spec.gap
    cubic = limits = entered = 0
    contraction = []
    worst_b2 = worst_sc = 0.0
    for k in range(runs):
        rng = make_rng(cfg.seed, 701, k)
        b = eps * 10.0 ** rng.uniform(-1.0, 0.0)
        T0 = sample_near_deflation(spec, i, b, int(rng.integers(2**63)),
                                   SignPattern.random(4, rng))
        tr = iterate(T0, W, max_steps=200, deflate_tol=0.0, seed=k, spectrum=spec)
        rep = weak_ap_limits(tr, spec, i)
        cubic += rep.tail is not None and rep.tail.summary >= 2.6
        limits += rep.passed
        worst_b2 = max(worst_b2, rep.final_b2 / spec.gap)
        worst_sc = max(worst_sc, rep.second_corner_error / spec.gap)
        if rep.b2_contraction is not None:
            contraction.append(rep.b2_contraction)
        if k < 20:
            states = trajectory(T0, W, 60)
            entered += double_deflation_entry(states, spec, i, 1e-2 * spec.gap,
                                              1e-2 * spec.gap) is not None
    checks.append(Check("cubic_rate_weak_ap", cubic >= 90, {"cubic_runs": cubic, "runs": runs}))
    checks.append(Check("weak_ap_limits", limits == runs,
                        {"runs_converged": limits, "max_final_b2_over_gap": worst_b2,
                         "max_second_corner_error_over_gap": worst_sc}))
    checks.append(Check("b2_contraction", bool(contraction) and max(contraction) < 1.0,
                        {"max_ratio": max(contraction, default=math.nan),
                         "median_ratio": float(np.median(contraction)) if contraction else math.nan}))
    checks.append(Check("double_deflation_reached_and_kept", entered == min(runs, 20),
                        {"runs": min(runs, 20), "entered": entered}))
    spec = Spectrum.from_values(SPEC_STRONG)
    b = 10.0 ** make_rng(cfg.seed, 702).uniform(-4.0, -1.0, runs)
    quad = 0
    for k, T0 in enumerate(singular_support_samples(b, cfg.seed)):
        tr = iterate(T0, W, max_steps=40, deflate_tol=0.0, seed=k, spectrum=spec)
        on_support = [r.k for r in tr.steps if r.singularGap <= spec.tau_ap]
        rs = rate_exponents(tr, spec.gap, cutoff=max(on_support) + 1)
        quad += rs.classification == "quadratic"
    checks.append(Check("quadratic_regime_strong_ap", quad >= runs // 2,
                        {"quadratic_runs": quad, "runs": runs}))
    return SuiteResult("convergence-rates", checks)


def suite_height(cfg: VerifyConfig, samples: int = 1000) -> SuiteResult:
    spec = Spectrum.from_values(SPEC_APFREE)
    checks = []
    min_inc = math.inf
    nonpos = 0
    sep = {}
    hss = {}
    for i in range(spec.n):
        hss[i] = HeightSpec.calibrated(spec, i, eps_ap=cfg.eps_ap)
        sep[i] = boundary_separation(hss[i], 50, cfg.seed)
    for k in range(samples):
        rng = make_rng(cfg.seed, 800, k)
        i = k % spec.n
        hs = hss[i]
        b = hs.eps_ap * rng.uniform(0.01, 1.0)
        T = sample_near_deflation(spec, i, b, int(rng.integers(2**63)),
                                  SignPattern.random(3, rng))
        s = float(spec.lambdas[i] + hs.eps_ap * rng.uniform(-1.0, 1.0))
        d = height_increase(T, step_star(T, s).next, hs)
        min_inc = min(min_inc, d)
        nonpos += d <= 0
    checks.append(Check("height_strictly_increases", nonpos == 0,
                        {"samples": samples, "min_increase": min_inc}))
    checks.append(Check("boundary_separation", all(v["holds"] for v in sep.values()),
                        {str(i): {"log_delta_h": v["log_delta_h"],
                                  "margin": v["bound_deflation_min"] - v["bound_boundary_max"]}
                         for i, v in sep.items()}))
    # exact-shift iteration from the deflation set reaches a diagonal matrix
    spec8 = Spectrum.from_values(SPEC_APFREE_8)
    worst_steps = 0
    for i in range(spec8.n):
        for k in range(3):
            rng = make_rng(cfg.seed, 801, i, k)
            T = deflation_set_point(spec8, i, int(rng.integers(2**63)),
                                    SignPattern.random(8, rng))
            steps = exact_shift_convergence(T, spec8, i, max_steps=500)
            worst_steps = max(worst_steps, 10**9 if steps is None else steps)
    checks.append(Check("exact_shift_converges_to_diagonal", worst_steps <= 500,
                        {"worst_steps": worst_steps, "n": 8}))
    # visits to the compact {|b1| <= eps_sigma, singularGap <= 0.05 gap}
    W = ShiftStrategy.wilkinson()
    max_visits = 0
    starts = 0
    min_jump = math.inf
    monotone = True
    for i in range(spec.n):
        hs = hss[i]
        eps_sigma = hs.eps_ap / (1.0 + W.c_sigma)
        k = 0
        found = 0
        while found < 10 and k < 5000:
            rng = make_rng(cfg.seed, 802, i, k)
            k += 1
            b = eps_sigma * rng.uniform(0.05, 1.0)
            T0 = sample_near_deflation(spec, i, b, int(rng.integers(2**63)),
                                       SignPattern.random(3, rng))
            if T0.singular_gap > 0.05 * spec.gap:
                continue
            found += 1
            states = trajectory(T0, W, 30)
            visits = visit_count(states, spec, i, eps_sigma)
            max_visits = max(max_visits, visits)
            for a, c in zip(states[:-1], states[1:]):
                if visit_count([a], spec, i, eps_sigma):
                    d = height_increase(a, c, hs)
                    min_jump = min(min_jump, d)
                    monotone &= d > 0
        starts += found
    checks.append(Check("finite_visits_near_singular_support", starts > 0 and monotone,
                        {"starts": starts, "max_visits": max_visits,
                         "min_height_jump": min_jump}))
    return SuiteResult("height-functions", checks)


def suite_eigensolver(cfg: VerifyConfig, per_size: int = 50) -> SuiteResult:
    worst = 0.0
    failures = 0
    steps = 0
    for n in (4, 8, 12):
        for k in range(per_size):
            rng = make_rng(cfg.seed, 900, n, k)
            spec = random_spectrum(rng, n)
            T = sample_isospectral(spec, int(rng.integers(2**63)), SignPattern.random(n, rng))
            ref = sturm_values(T)
            for strat in (ShiftStrategy.wilkinson(),
                          ShiftStrategy.mixed(cfg.mixed_eps_fraction * spec.gap)):
                try:
                    ev, st = deflate_and_recurse(T, strat, cfg.deflate_tol, cfg.max_steps,
                                                 return_steps=True)
                except MaxStepsExceeded:
                    failures += 1
                    continue
                steps = max(steps, st)
                worst = max(worst, float(np.max(np.abs(ev - ref))) / T.norm())
    return SuiteResult("eigensolver", [
        Check("matches_sturm_oracle", failures == 0 and worst <= 1e-8,
              {"max_relative_error": worst, "non_converged": failures,
               "max_total_steps": steps}),
    ])


def suite_wielandt_hoffman(cfg: VerifyConfig, samples: int = 500) -> SuiteResult:
    worst = -math.inf
    corner = -math.inf
    for k in range(samples):
        rng = make_rng(cfg.seed, 1000, k)
        n = int(rng.integers(2, 13))
        S, T = random_tridiagonal(rng, n), random_tridiagonal(rng, n)
        scale = (S.norm() + T.norm()) ** 2
        worst = max(worst, -wielandt_hoffman_gap(S, T) / scale)
        U = T.replace(sub=np.r_[T.sub[:-1], 0.0])
        lam = sturm_values(T)
        corner = max(corner, float(np.min(np.abs(lam - T.corner))) - SQRT2 * abs(T.b1))
        worst = max(worst, -wielandt_hoffman_gap(U, T) / T.norm() ** 2)
    return SuiteResult("wielandt-hoffman", [
        Check("gap_nonnegative", worst <= 1e-9, {"max_negative_gap_relative": worst}),
        Check("corner_within_sqrt2_b1", corner <= 1e-12, {"max_excess": corner}),
    ])


SUITES: Dict[str, Callable[[VerifyConfig], SuiteResult]] = {
    "factorization": suite_factorization,
    "step-identities": suite_step_identities,
    "strategy-constants": suite_strategy_constants,
    "geometry": suite_geometry,
    "invariance-squeeze": suite_invariance_squeeze,
    "parlett-bound": suite_parlett,
    "convergence-rates": suite_rates,
    "height-functions": suite_height,
    "eigensolver": suite_eigensolver,
    "wielandt-hoffman": suite_wielandt_hoffman,
}


def run_suite(name: str, cfg: VerifyConfig) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    t0 = time.perf_counter()
    res = SUITES[name](cfg)
    res.elapsed = time.perf_counter() - t0
    return res


def run_all(cfg: VerifyConfig, only: Optional[List[str]] = None) -> List[SuiteResult]:
    names = list(SUITES) if not only else only
    return [run_suite(n, cfg) for n in names]
