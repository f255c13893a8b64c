import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tridiqr import (
    SignPattern,
    check_commutation,
    conjugate_by_signs,
    flip_last,
    inverse_step,
    make_tridiagonal,
    sample_isospectral,
    step_star,
    step_unsigned,
    sturm_values,
)
from tridiqr.errors import SingularShift

import oracles

# 256-bit Gram-Schmidt oracle values
STEP_222 = {"diag": [2.8, 2.3428571428571428571, 0.85714285714285714286],
            "sub": [0.74833147735478827712, 0.63887656499993991326]}
INV_22 = {"diag": [1.2, 2.8], "sub": [0.6]}
# classical (all pivots positive) step of diag [-1,1,1], sub [1,1] at s = 0
CLASSICAL_NEG = {"diag": [-1.0, 1.6666666666666666667, 0.33333333333333333333],
                 "sub": [1.2247448713915890491, 0.23570226039551584147]}

entries = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


@st.composite
def tridiagonals(draw, nmin=2, nmax=7):
    n = draw(st.integers(nmin, nmax))
    d = draw(st.lists(entries, min_size=n, max_size=n))
    e = draw(st.lists(st.floats(0.2, 2.0), min_size=n - 1, max_size=n - 1))
    signs = draw(st.lists(st.sampled_from([-1.0, 1.0]), min_size=n - 1, max_size=n - 1))
    return make_tridiagonal(d, np.array(e) * signs)


def test_step_against_oracle():
    nxt = step_star(make_tridiagonal([2, 2, 2], [1, 1]), 0.0).next
    assert np.max(np.abs(nxt.diag - STEP_222["diag"])) <= 1e-12
    assert np.max(np.abs(nxt.sub - STEP_222["sub"])) <= 1e-12


def test_step_diagonal_fixed():
    T = make_tridiagonal([3, -1, 2], [0, 0])
    for s in (0.5, 10.0, -4.0):
        assert step_star(T, s).next.max_abs_diff(T) <= 1e-12


def test_exact_shift_2x2():
    nxt = step_star(make_tridiagonal([0, 0], [1]), 1.0).next
    assert np.allclose(nxt.diag, [-1, 1], atol=1e-15) and abs(nxt.b1) <= 1e-15


def test_unsigned_positive_det_equals_star():
    T = make_tridiagonal([0, 0], [1])
    a, b = step_unsigned(T, 2.0), step_star(T, 2.0)
    assert a.det_sign == 1 and np.array_equal(a.next.sub, b.next.sub)


def test_unsigned_negative_det_2x2():
    # classical QR of [[0,1],[1,0]] has Q = [[0,1],[1,0]], R = I so RQ keeps b1 = 1
    T = make_tridiagonal([0, 0], [1])
    a, b = step_unsigned(T, 0.0), step_star(T, 0.0)
    assert b.det_sign == -1
    assert a.next.b1 == pytest.approx(1.0, abs=1e-15)
    assert b.next.b1 == pytest.approx(-1.0, abs=1e-15)


def test_unsigned_negative_det_against_oracle():
    T = make_tridiagonal([-1, 1, 1], [1, 1])
    res = step_unsigned(T, 0.0)
    assert res.det_sign == -1
    assert np.max(np.abs(res.next.diag - CLASSICAL_NEG["diag"])) <= 1e-12
    assert np.max(np.abs(res.next.sub - CLASSICAL_NEG["sub"])) <= 1e-12
    assert np.allclose(flip_last(step_star(T, 0.0).next).sub, res.next.sub, atol=1e-15)


def test_unsigned_singular_shift():
    with pytest.raises(SingularShift):
        step_unsigned(make_tridiagonal([0, 0], [1]), 1.0)


def test_inverse_against_oracle():
    T = inverse_step(make_tridiagonal([2, 2], [1]), 0.0)
    assert np.max(np.abs(T.diag - INV_22["diag"])) <= 1e-12
    assert abs(T.sub[0] - INV_22["sub"][0]) <= 1e-12


def test_inverse_diagonal_fixed():
    T = make_tridiagonal([1, 5, 2], [0, 0])
    assert inverse_step(T, 0.3).max_abs_diff(T) <= 1e-12


def test_inverse_live_oracle_random():
    rng = np.random.default_rng(5)
    for _ in range(5):
        n = 4
        d, e = rng.standard_normal(n), rng.uniform(0.3, 1.0, n - 1)
        s = float(rng.standard_normal())
        M = oracles.inverse_step(d, e, s)
        ref = np.array(M.tolist(), dtype=float)
        got = inverse_step(make_tridiagonal(d, e), s).dense()
        assert np.max(np.abs(ref - got)) <= 1e-10


def test_step_live_oracle_random():
    rng = np.random.default_rng(6)
    for _ in range(5):
        n = 5
        d, e = rng.standard_normal(n), rng.standard_normal(n - 1)
        s = float(rng.standard_normal())
        ref = np.array(oracles.step_star(d, e, s).tolist(), dtype=float)
        got = step_star(make_tridiagonal(d, e), s).next.dense()
        assert np.max(np.abs(ref - got)) <= 1e-12 * (1 + np.abs(ref).max())


def test_ratio_identity_and_sign_preservation():
    rng = np.random.default_rng(8)
    for _ in range(100):
        n = int(rng.integers(3, 9))
        T = make_tridiagonal(rng.standard_normal(n), rng.standard_normal(n - 1))
        res = step_star(T, float(rng.standard_normal()))
        assert np.max(np.abs(res.next.sub - res.ratios * T.sub)) <= 1e-10 * (1 + T.norm())
        assert np.array_equal(np.sign(res.next.sub[:-1]), np.sign(T.sub[:-1]))


def test_isospectral_drift():
    T = sample_isospectral((-2, -0.5, 1, 3, 4.5), 2)
    lam0 = sturm_values(T)
    for k in range(100):
        T = step_star(T, 0.1 * math.sin(k)).next
    assert np.max(np.abs(sturm_values(T) - lam0)) <= 1e-8 * T.norm()


@settings(max_examples=80, deadline=None)
@given(tridiagonals(), st.floats(-4, 4), st.data())
def test_equivariance(T, s, data):
    j = data.draw(st.integers(1, T.n - 1))
    E = SignPattern.generator(T.n, j)
    left = step_star(conjugate_by_signs(T, E), s).next
    right = conjugate_by_signs(step_star(T, s).next, E)
    assert left.max_abs_diff(right) <= 1e-10 * (1 + T.norm())


@settings(max_examples=80, deadline=None)
@given(tridiagonals(), st.data())
def test_sign_conjugation_is_involution(T, data):
    signs = data.draw(st.lists(st.sampled_from([-1, 1]), min_size=T.n, max_size=T.n))
    E = SignPattern(tuple(signs))
    U = conjugate_by_signs(conjugate_by_signs(T, E), E)
    assert np.array_equal(U.diag, T.diag) and np.array_equal(U.sub, T.sub)


@settings(max_examples=80, deadline=None)
@given(tridiagonals(), st.floats(-4, 4))
def test_inverse_round_trip(T, s):
    lam = sturm_values(T)
    if np.min(np.abs(lam - s)) < 1e-2:
        return
    back = inverse_step(step_star(T, s).next, s)
    assert back.max_abs_diff(T) <= 1e-9 * (1 + T.norm()) / min(1.0, np.min(np.abs(lam - s)))


def test_commutation():
    rng = np.random.default_rng(9)
    T = sample_isospectral((1, 2, 4, 7), 1)
    assert check_commutation(T, 0.3, 0.3) <= 1e-12
    D = make_tridiagonal([1, 2, 3], [0, 0])
    assert check_commutation(D, 0.5, -1.5) <= 1e-12
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 11))
        T = make_tridiagonal(rng.standard_normal(n), rng.standard_normal(n - 1))
        s0, s1 = rng.uniform(-4, 4, 2)
        worst = max(worst, check_commutation(T, float(s0), float(s1)) / T.norm())
    assert worst <= 1e-8
