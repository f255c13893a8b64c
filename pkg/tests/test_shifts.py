import math

import numpy as np
import pytest

from tridiqr import (
    ShiftStrategy,
    deflation_set_point,
    make_tridiagonal,
    mixed_shift,
    parse_strategy,
    rayleigh_shift,
    sample_isospectral,
    strategy_step,
    wilkinson_shift,
)
from tridiqr.shifts import verify_simple_constant

import oracles

# sample_isospectral((1, 2, 4), seed=7), frozen so the oracle values below stay tied to it
SAMPLE_7 = make_tridiagonal([2.3305646600071817, 2.7265000628743543, 1.9429352771184645],
                            [1.3763302643209423, 0.53436798586219536])
# Wilkinson shift and one step from SAMPLE_7, 256-bit oracle
WILK_7 = 1.672114781620884876
WILK_STEP_7 = {"diag": [3.7243873529954387153, 1.3110073120657111896, 1.9646053349388505392],
               "sub": [0.85777221710236737267, -0.19871864233414879236]}


def test_sample_is_frozen():
    T = sample_isospectral((1, 2, 4), 7)
    assert np.array_equal(T.diag, SAMPLE_7.diag) and np.array_equal(T.sub, SAMPLE_7.sub)


def test_rayleigh():
    assert rayleigh_shift(make_tridiagonal([1, 2, 4], [1, 1])) == 4
    assert rayleigh_shift(make_tridiagonal([1, 2, 4], [0, 0])) == 4


def test_wilkinson_tie_takes_smaller():
    assert wilkinson_shift(make_tridiagonal([2, 2], [1])) == 1


def test_wilkinson_reduced_returns_corner():
    assert wilkinson_shift(make_tridiagonal([5, 3, -2], [1, 0])) == -2


def test_wilkinson_closed_form():
    # 2 - sqrt(5) at 256 bits
    ref = -0.23606797749978969641
    assert wilkinson_shift(make_tridiagonal([4, 0], [1])) == pytest.approx(ref, abs=1e-16)
    assert float(oracles.wilkinson(4, 1, 0)) == pytest.approx(ref, abs=1e-18)


def test_wilkinson_step_against_oracle():
    res, rec = strategy_step(SAMPLE_7, ShiftStrategy.wilkinson())
    assert rec.shift == pytest.approx(WILK_7, abs=1e-14)
    assert np.max(np.abs(res.next.diag - WILK_STEP_7["diag"])) <= 1e-12
    assert np.max(np.abs(res.next.sub - WILK_STEP_7["sub"])) <= 1e-12


def test_wilkinson_random_against_oracle():
    rng = np.random.default_rng(4)
    for _ in range(50):
        a, b, c = rng.standard_normal(3)
        T = make_tridiagonal([0.0, a, c], [1.0, b])
        assert abs(wilkinson_shift(T) - float(oracles.wilkinson(a, b, c))) <= 1e-14 * (1 + abs(a) + abs(c))


def test_mixed_branches():
    assert mixed_shift(make_tridiagonal([1, 3], [0]), 1e-3) == 3
    T = make_tridiagonal([4, 1, 2], [0.5, 0.7])
    assert mixed_shift(T, 1e-3) == wilkinson_shift(T)
    T = make_tridiagonal([4, 0], [1e-4])
    assert mixed_shift(T, 1e-3) == 0.0


def test_strategy_step_fixes_diagonal():
    T = make_tridiagonal([1, 2, 4], [0, 0])
    for strat in (ShiftStrategy.rayleigh(), ShiftStrategy.wilkinson(), ShiftStrategy.mixed(1e-3)):
        res, rec = strategy_step(T, strat)
        assert res.next.max_abs_diff(T) <= 1e-12 and rec.shift in (1, 2, 4)


def test_deflation_set_shift_is_eigenvalue():
    spec = (1.0, 2.0, 4.0)
    for i in range(3):
        T = deflation_set_point(spec, i, seed=i)
        assert wilkinson_shift(T) == spec[i]


@pytest.mark.parametrize("strategy, bound", [
    (ShiftStrategy.rayleigh(), math.sqrt(2)),
    (ShiftStrategy.wilkinson(), 2 * math.sqrt(2)),
])
def test_simple_constants(strategy, bound):
    assert verify_simple_constant(strategy, (1, 2, 4), 1000, seed=0) <= bound
    assert strategy.c_sigma == bound


def test_parse_strategy():
    assert parse_strategy("wilkinson").kind == "wilkinson"
    assert parse_strategy("mixed:1e-3").eps == 1e-3
    assert parse_strategy("mixed", (1, 2, 4)).eps == pytest.approx(1e-3)
    s = parse_strategy("exact:2", (1, 2, 4))
    assert s.target == 4 and str(s) == "exact:2"
    with pytest.raises(ValueError):
        parse_strategy("francis")
    with pytest.raises(ValueError):
        parse_strategy("exact:0")
