"""Simple shift strategies and the strategy-driven step.

A strategy maps a matrix to a shift using only its diagonal and the squares
of its subdiagonal, so it is unchanged by sign conjugation. Each one comes
with a constant ``c_sigma`` such that some eigenvalue lies within
``c_sigma * |b1|`` of the shift.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    SignPattern,
    Spectrum,
    SymTridiagonal,
    as_spectrum,
    make_rng,
    sample_isospectral,
)
from .steps import StepResult, step_star

SQRT2 = math.sqrt(2.0)

KINDS = ("rayleigh", "wilkinson", "mixed", "exact")
_CONSTANTS = {"rayleigh": SQRT2, "wilkinson": 2.0 * SQRT2, "mixed": 2.0 * SQRT2, "exact": 0.0}


def rayleigh_shift(T: SymTridiagonal) -> float:
    """The corner entry ``T[n-1, n-1]``."""
    return float(T.diag[-1])


def wilkinson_shift(T: SymTridiagonal) -> float:
    """Eigenvalue of the trailing 2x2 block closest to the corner.

    Uses ``c - sign(d) b^2 / (|d| + hypot(d, b))`` with ``d = (a - c) / 2``.
    When the two eigenvalues are equally close (``|d|`` negligible) the
    smaller one, ``c - |b|``, is returned.
    """
    if T.n < 2:
        return float(T.diag[-1])
    a = float(T.diag[-2])
    c = float(T.diag[-1])
    b = float(T.sub[-1])
    d = 0.5 * (a - c)
    if abs(d) <= 1e-14 * (abs(a) + abs(c) + abs(b)):
        return c - abs(b)
    return c - math.copysign(b * b / (abs(d) + math.hypot(d, b)), d)


def mixed_shift(T: SymTridiagonal, eps: float) -> float:
    """Rayleigh's shift when ``|b1| < eps``, Wilkinson's otherwise."""
    if eps <= 0:
        raise ValueError("mixed threshold must be positive")
    if T.n < 2 or abs(T.b1) < eps:
        return rayleigh_shift(T)
    return wilkinson_shift(T)


@dataclass(frozen=True)
class ShiftStrategy:
    """A tagged shift strategy.

    ``eps`` is used by ``mixed`` only; ``index`` and ``target`` by ``exact``.
    """

    kind: str
    eps: Optional[float] = None
    index: Optional[int] = None
    target: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown strategy kind {self.kind!r}")
        if self.kind == "mixed" and not (self.eps is not None and self.eps > 0):
            raise ValueError("mixed strategy needs a positive threshold")
        if self.kind == "exact" and self.target is None:
            raise ValueError("exact strategy needs a target eigenvalue")

    @classmethod
    def rayleigh(cls) -> "ShiftStrategy":
        return cls("rayleigh")

    @classmethod
    def wilkinson(cls) -> "ShiftStrategy":
        return cls("wilkinson")

    @classmethod
    def mixed(cls, eps: float) -> "ShiftStrategy":
        return cls("mixed", eps=float(eps))

    @classmethod
    def exact(cls, i: int, spec) -> "ShiftStrategy":
        spec = as_spectrum(spec)
        if not -spec.n <= i < spec.n:
            raise IndexError(f"eigenvalue index {i} out of range for n={spec.n}")
        i = i % spec.n
        return cls("exact", index=i, target=float(spec.lambdas[i]))

    @property
    def c_sigma(self) -> float:
        return _CONSTANTS[self.kind]

    def shift(self, T: SymTridiagonal) -> float:
        if self.kind == "rayleigh":
            return rayleigh_shift(T)
        if self.kind == "wilkinson":
            return wilkinson_shift(T)
        if self.kind == "mixed":
            return mixed_shift(T, self.eps)
        return self.target

    def __str__(self) -> str:
        if self.kind == "mixed":
            return f"mixed:{self.eps!r}"
        if self.kind == "exact":
            return f"exact:{self.index}"
        return self.kind


def parse_strategy(text: str, spec=None) -> ShiftStrategy:
    """Parse ``rayleigh | wilkinson | mixed[:<eps>] | exact:<i>``.

    A bare ``mixed`` uses ``1e-3 * gap`` and so needs ``spec``; ``exact``
    always needs ``spec`` to resolve the target eigenvalue.
    """
    name, _, arg = text.strip().partition(":")
    name = name.lower()
    if name in ("rayleigh", "wilkinson"):
        if arg:
            raise ValueError(f"strategy {name!r} takes no argument")
        return ShiftStrategy(name)
    if name == "mixed":
        if arg:
            return ShiftStrategy.mixed(float(arg))
        if spec is None:
            raise ValueError("mixed without a threshold needs a spectrum")
        return ShiftStrategy.mixed(default_mixed_eps(spec))
    if name == "exact":
        if not arg:
            raise ValueError("exact strategy needs an index, e.g. exact:0")
        if spec is None:
            raise ValueError("exact strategy needs a spectrum")
        return ShiftStrategy.exact(int(arg), spec)
    raise ValueError(f"unknown strategy {text!r}")


def default_mixed_eps(spec) -> float:
    return 1e-3 * as_spectrum(spec).gap


@dataclass(frozen=True)
class ShiftRecord:
    shift: float
    kind: str
    singular_gap: float


def strategy_step(T: SymTridiagonal, strategy: ShiftStrategy):
    """One step ``F_sigma(T)``; returns ``(StepResult, ShiftRecord)``."""
    s = strategy.shift(T)
    res: StepResult = step_star(T, s)
    return res, ShiftRecord(s, strategy.kind, T.singular_gap)


def shift_ratio(T: SymTridiagonal, shift: float, spec) -> float:
    """``min_i |shift - lambda_i| / |b1|`` (0 when both vanish)."""
    spec = as_spectrum(spec)
    dist = float(np.min(np.abs(spec.lambdas - shift)))
    b = abs(T.b1)
    if b == 0.0:
        return 0.0 if dist == 0.0 else math.inf
    return dist / b


def verify_simple_constant(strategy: ShiftStrategy, spec, samples: int, seed: int) -> float:
    """Worst observed ``min_i |sigma(T) - lambda_i| / |b1(T)|`` over samples.

    Samples are drawn from every sign cell of the isospectral set.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    spec: Spectrum = as_spectrum(spec)
    if spec.n < 2:
        return 0.0
    worst = 0.0
    for k in range(samples):
        signs = SignPattern.random(spec.n, make_rng(seed, 2, k))
        T = sample_isospectral(spec, int(make_rng(seed, 3, k).integers(2**63)), signs)
        worst = max(worst, shift_ratio(T, strategy.shift(T), spec))
    return worst
