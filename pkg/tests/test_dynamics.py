import math

import numpy as np
import pytest

from tridiqr import (
    HeightSpec,
    ShiftStrategy,
    deflate_and_recurse,
    deflation_set_point,
    height,
    height_increase,
    invariance_checks,
    iterate,
    make_tridiagonal,
    parlett_check,
    rate_exponents,
    sample_isospectral,
    sample_near_deflation,
    step_star,
    sturm_values,
    weak_ap_limits,
    wielandt_hoffman_gap,
)
from tridiqr.dynamics import (
    IterationTrace,
    StepRecord,
    boundary_separation,
    exact_shift_convergence,
    ratio_growth,
    singular_support_samples,
)
from tridiqr.errors import InsufficientData, MaxStepsExceeded, StrategyMismatch

W = ShiftStrategy.wilkinson()


def _synthetic(b1, b2=None, strategy="wilkinson"):
    b2 = b2 if b2 is not None else [1.0] * len(b1)
    steps = [StepRecord(k, 0.0, b, c, 0.0, 0.0, 1.0) for k, (b, c) in enumerate(zip(b1, b2))]
    return IterationTrace(steps, [0.0, 1.0, 2.0], strategy, None, "max_steps", 1.0)


def test_iterate_diagonal():
    tr = iterate(make_tridiagonal([1, 2, 4], [0, 0]), W)
    assert len(tr.steps) == 1 and tr.stopReason == "deflated"


def test_iterate_converges():
    T = sample_isospectral((1, 2, 4), 3)
    tr = iterate(T, W)
    assert tr.stopReason == "deflated"
    assert min(abs(tr.final.corner - x) for x in (1, 2, 4)) <= 1e-8


def test_zero_edge_fixed_up_to_sign():
    # spec {-1, 0, 1}: matrices with b1 = 0 and corner 0 are fixed by F_0
    # up to the sign of the remaining subdiagonal
    T = deflation_set_point((-1.0, 0.0, 1.0), 1, seed=2)
    S = T
    for _ in range(6):
        S = step_star(S, 0.0).next
        assert np.allclose(S.diag, T.diag, atol=1e-12)
        assert np.allclose(np.abs(S.sub), np.abs(T.sub), atol=1e-12)


def test_iterate_max_steps_and_zero_tol():
    tr = iterate(sample_isospectral((1, 2, 4), 5), W, max_steps=7, deflate_tol=0.0)
    assert tr.stopReason == "max_steps" and len(tr.steps) == 8


def test_deflate_and_recurse():
    D = make_tridiagonal([3, 1, 2], [0, 0])
    vals, steps = deflate_and_recurse(D, W, return_steps=True)
    assert np.array_equal(vals, [1, 2, 3]) and steps == 0
    assert np.allclose(deflate_and_recurse(make_tridiagonal([0, 0], [1]), W), [-1, 1], atol=1e-10)
    rng = np.random.default_rng(2)
    spec = np.sort(rng.uniform(-5, 5, 8))
    T = sample_isospectral(spec, 4)
    assert np.max(np.abs(deflate_and_recurse(T, W) - sturm_values(T))) <= 1e-8 * T.norm()


def test_deflate_and_recurse_max_steps():
    T = sample_isospectral((1, 2, 4, 8), 1)
    with pytest.raises(MaxStepsExceeded) as err:
        deflate_and_recurse(T, ShiftStrategy.rayleigh(), deflate_tol=1e-300, max_steps=2)
    assert err.value.steps >= 2


def test_rate_exponents_synthetic():
    r = rate_exponents([1e-1, 1e-3, 1e-9, 1e-27], 1.0)
    assert np.allclose(r.exponents, [3, 3, 3]) and r.summary == pytest.approx(3.0)
    r = rate_exponents([1e-1, 1e-2, 1e-4, 1e-8], 1.0)
    assert r.summary == pytest.approx(2.0) and r.classification == "quadratic"
    with pytest.raises(InsufficientData):
        rate_exponents([0.5, 0.4], 1.0)


def test_rates_wilkinson_cubic():
    spec = (1.0, 2.0, 4.0)
    cubic = 0
    for seed in range(20):
        tr = iterate(sample_isospectral(spec, seed), W, max_steps=40, deflate_tol=0.0)
        cubic += rate_exponents(tr, 1.0).summary >= 2.6
    assert cubic >= 19


def test_parlett():
    assert parlett_check(_synthetic([0.0, 0.0, 0.0]), make_tridiagonal([1, 2, 3], [1, 0])).passed
    bad = parlett_check(_synthetic([1.0] * 30), make_tridiagonal([1, 2, 3], [1, 1]))
    assert not bad.passed and bad.details["worst_k"] > 1
    T0 = sample_isospectral((1, 2, 4), 11)
    assert parlett_check(iterate(T0, W), T0).passed
    with pytest.raises(StrategyMismatch):
        parlett_check(_synthetic([0.1, 0.01], strategy="rayleigh"), T0)


def test_wielandt_hoffman():
    T = sample_isospectral((1, 2, 4, 5), 0)
    assert abs(wielandt_hoffman_gap(T, T)) <= 1e-12
    U = T.replace(sub=np.r_[T.sub[:-1], 0.0])
    assert wielandt_hoffman_gap(U, T) >= 0
    assert np.min(np.abs(sturm_values(T) - T.corner)) <= math.sqrt(2) * abs(T.b1)


def test_height_closed_form_on_diagonal():
    spec = (1.0, 2.0, 4.0)
    hs = HeightSpec.with_delta(spec, 1, 1e-4)
    for perm in ([2.0, 4.0, 1.0], [4.0, 1.0, 2.0]):
        D = make_tridiagonal(perm, [0, 0])
        ref = sum(w * math.log((x - 2.0) ** 2 + 1e-4) for w, x in zip(hs.weights, perm))
        assert height(D, spec, hs) == pytest.approx(ref, rel=1e-12)


def test_height_increases():
    spec = (0.0, 1.0, 3.0, 7.0)
    hs = HeightSpec.calibrated(spec, 2)
    for seed in range(30):
        T = sample_isospectral(spec, seed)
        assert height_increase(T, step_star(T, 3.0).next, hs) > 0
    with pytest.raises(ValueError, match="midpoint"):
        HeightSpec.calibrated((1.0, 2.0, 4.0, 7.0), 2)


def test_boundary_separation_calibrated():
    hs = HeightSpec.calibrated((1.0, 2.0, 4.0), 0)
    assert boundary_separation(hs, samples=30)["holds"]


def test_exact_shift_convergence():
    spec = (2.0, 8.0, 20.0, 27.0, 36.0, 44.0, 49.0, 56.0)
    T = deflation_set_point(spec, 3, seed=1)
    k = exact_shift_convergence(T, spec, 3, max_steps=500)
    assert k is not None and k <= 500


def test_invariance_exact_member():
    spec = (1.0, 2.0, 4.0)
    T = deflation_set_point(spec, 2, seed=0)
    assert step_star(T, W.shift(T)).next.b1 == 0.0
    rep = invariance_checks(spec, W, 0.01, samples=200, seed=0)
    assert rep.passed and rep.worst_invariance <= 1


def test_singular_support_quadratic_not_cubic():
    b = np.logspace(-6, -2, 40)
    mats = singular_support_samples(b, seed=0)
    q = [abs(step_star(T, W.shift(T)).next.b1) / abs(T.b1) ** 2 for T in mats]
    c = [x / abs(T.b1) for x, T in zip(q, mats)]
    assert ratio_growth(b, q) <= 10
    assert ratio_growth(b, c) > 10


def test_weak_ap_limits():
    spec = (-1.0, 0.0, 0.3, 1.0)
    T = sample_near_deflation(spec, 2, 1e-3, seed=4)
    rep = weak_ap_limits(iterate(T, W, max_steps=200, deflate_tol=0.0), spec, 2)
    assert rep.passed and rep.c_i == 1


def test_split_invariance():
    # b2 = 0 with lower block spectrum {0.3, 1}: b2 stays 0 and the second
    # corner tends to 1, not to lambda_c(i) = 0
    c, s = math.cos(0.05), math.sin(0.05)
    lower = [c * c * 1.0 + s * s * 0.3, s * s * 1.0 + c * c * 0.3]
    T = make_tridiagonal([-0.5, -0.5, *lower], [0.5, 0.0, c * s * 0.7])
    tr = iterate(T, W, max_steps=30, deflate_tol=0.0)
    assert np.all(tr.b2 == 0)
    assert tr.steps[-1].secondCorner == pytest.approx(1.0, abs=1e-12)
    assert tr.steps[-1].corner == pytest.approx(0.3, abs=1e-12)
