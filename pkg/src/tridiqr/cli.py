"""Command-line front end: ``tridiqr <command> [options]``.

Commands
--------
sample     write a random matrix with a given spectrum
iterate    run shifted QR on one matrix and write the trace
eig        all eigenvalues by iterate-and-split
rates      per-step convergence exponents over seeded runs
portrait   moment-map trajectories for n = 3
verify     run the property suites and write a JSON report

Options come from, in increasing priority: built-in defaults, a
``key=value`` file given by ``--config``, and explicit flags.

Exit codes: 0 success, 1 check failure, 2 usage or validation error,
3 non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import itertools
import json
import math
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import List, Optional

import numpy as np

from .core import (
    SignPattern,
    Spectrum,
    SymTridiagonal,
    _lanczos,
    block_diag,
    make_rng,
    make_tridiagonal,
    sample_isospectral,
    sturm_values,
)
from .dynamics import STOP_DEFLATED, deflate_and_recurse, iterate, rate_exponents
from .errors import InsufficientData, MaxStepsExceeded, NotAlmostInvertible, TridiagError, WrongDimension
from .geometry import moment_map
from .io import format_matrix, read_matrix, trace_to_csv, trace_to_json, write_text
from .shifts import parse_strategy
from .steps import step_star
from .verify import SUITES, VerifyConfig, run_all

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_NOT_CONVERGED = 3

RATE_MAX_STEPS = 40


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    spectrum: Optional[List[float]] = None
    seed: int = 0
    strategy: str = "wilkinson"
    max_steps: Optional[int] = None
    deflate_tol: Optional[float] = None
    out: Optional[str] = None
    format: str = "json"
    eps_tub_fraction: float = 0.05
    eps_inv_fraction: float = 0.01
    eps_ap: Optional[float] = None
    mixed_eps_fraction: float = 1e-3

    def spec(self, default=None) -> Spectrum:
        values = self.spectrum if self.spectrum is not None else default
        if values is None:
            raise UsageError("--spectrum is required")
        return Spectrum.from_values(values)

    def validate(self) -> "RunConfig":
        if self.spectrum is not None:
            Spectrum.from_values(self.spectrum)
        if self.format not in ("json", "csv"):
            raise UsageError(f"format must be json or csv, got {self.format!r}")
        if self.max_steps is not None and self.max_steps < 1:
            raise UsageError("max_steps must be >= 1")
        for name in ("deflate_tol", "eps_tub_fraction", "eps_inv_fraction", "eps_ap",
                     "mixed_eps_fraction"):
            v = getattr(self, name)
            if v is not None and not (v > 0 and math.isfinite(v)):
                raise UsageError(f"{name} must be positive and finite")
        if self.seed < 0:
            raise UsageError("seed must be non-negative")
        return self


def parse_spectrum(text: str) -> List[float]:
    try:
        values = [float(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise UsageError(f"bad spectrum {text!r}: {exc}") from None
    Spectrum.from_values(values)
    return values


_CONVERTERS = {
    "spectrum": parse_spectrum,
    "seed": int,
    "strategy": str,
    "max_steps": int,
    "deflate_tol": float,
    "out": str,
    "format": str,
    "eps_tub_fraction": float,
    "eps_inv_fraction": float,
    "eps_ap": float,
    "mixed_eps_fraction": float,
}


def read_config(path: str) -> dict:
    """Parse a ``key=value`` file; ``#`` starts a comment, dashes equal underscores."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in _CONVERTERS:
            raise UsageError(f"{path}:{lineno}: expected key=value with a known key, got {raw!r}")
        try:
            out[key] = _CONVERTERS[key](value.strip())
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: {exc}") from None
    return out


def build_config(ns: argparse.Namespace) -> RunConfig:
    values = {}
    if getattr(ns, "config", None):
        values.update(read_config(ns.config))
    for f in fields(RunConfig):
        v = getattr(ns, f.name, None)
        if v is not None:
            values[f.name] = parse_spectrum(v) if f.name == "spectrum" else v
    return RunConfig(**values).validate()


# ---------------------------------------------------------------- commands

def _output(cfg: RunConfig, text: str) -> None:
    write_text(text, cfg.out)


def _load_or_sample(ns, cfg: RunConfig) -> SymTridiagonal:
    if getattr(ns, "matrix", None):
        return read_matrix(ns.matrix)
    if cfg.spectrum is None:
        raise UsageError("give a matrix file or --spectrum to sample one")
    return sample_isospectral(cfg.spec(), cfg.seed)


def cmd_sample(ns, cfg: RunConfig) -> int:
    spec = cfg.spec()
    signs = SignPattern.random(spec.n, make_rng(cfg.seed, 1)) if ns.random_signs else None
    _output(cfg, format_matrix(sample_isospectral(spec, cfg.seed, signs)))
    return EXIT_OK


def cmd_iterate(ns, cfg: RunConfig) -> int:
    T = _load_or_sample(ns, cfg)
    spec = cfg.spec(default=sturm_values(T))
    strategy = parse_strategy(cfg.strategy, spec)
    trace = iterate(T, strategy, max_steps=cfg.max_steps or 500, deflate_tol=cfg.deflate_tol,
                    seed=cfg.seed, spectrum=spec)
    d = trace.to_dict()
    _output(cfg, trace_to_csv(d) if cfg.format == "csv" else trace_to_json(d))
    return EXIT_OK if trace.stopReason == STOP_DEFLATED else EXIT_NOT_CONVERGED


def cmd_eig(ns, cfg: RunConfig) -> int:
    T = _load_or_sample(ns, cfg)
    strategy = parse_strategy(cfg.strategy, cfg.spec(default=sturm_values(T)))
    code = EXIT_OK
    try:
        values, steps = deflate_and_recurse(T, strategy, cfg.deflate_tol, cfg.max_steps or 200,
                                            return_steps=True)
        values, converged = list(map(float, values)), True
    except MaxStepsExceeded as exc:
        values, steps, converged = list(map(float, exc.partial)), exc.steps, False
        code = EXIT_NOT_CONVERGED
    if cfg.format == "csv":
        text = "index,eigenvalue\n" + "".join(f"{k},{v!r}\n" for k, v in enumerate(values))
    else:
        text = json.dumps({"n": T.n, "strategy": cfg.strategy, "eigenvalues": values,
                           "steps": steps, "converged": converged}, indent=2) + "\n"
    _output(cfg, text)
    return code


def cmd_rates(ns, cfg: RunConfig) -> int:
    spec = cfg.spec(default=[1.0, 2.0, 4.0])
    strategy = parse_strategy(cfg.strategy, spec)
    steps = cfg.max_steps or RATE_MAX_STEPS
    rows = []
    for run in range(ns.runs):
        rng = make_rng(cfg.seed, 7, run)
        T = sample_isospectral(spec, int(rng.integers(2**63)), SignPattern.random(spec.n, rng))
        trace = iterate(T, strategy, max_steps=steps, deflate_tol=0.0)
        try:
            r = rate_exponents(trace, spec.gap)
            rows.append({"run": run, "exponents": r.exponents, "valid_steps": r.valid_steps,
                         "summary": r.summary, "classification": r.classification})
        except InsufficientData:
            rows.append({"run": run, "exponents": [], "valid_steps": [],
                         "summary": None, "classification": "insufficient"})
    counts = {}
    for r in rows:
        counts[r["classification"]] = counts.get(r["classification"], 0) + 1
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["run", "summary", "classification", "exponents"])
        for r in rows:
            w.writerow([r["run"], "" if r["summary"] is None else repr(r["summary"]),
                        r["classification"], " ".join(repr(p) for p in r["exponents"])])
        text = buf.getvalue()
    else:
        text = json.dumps({"spectrum": [float(x) for x in spec.lambdas], "strategy": cfg.strategy,
                           "seed": cfg.seed, "steps": steps, "counts": counts, "runs": rows},
                          indent=2) + "\n"
    _output(cfg, text)
    return EXIT_OK


# ---------------------------------------------------------------- portrait

def _two_by_two(lo: float, hi: float, theta: float) -> SymTridiagonal:
    c, s = math.cos(theta), math.sin(theta)
    return make_tridiagonal([c * c * lo + s * s * hi, s * s * lo + c * c * hi], [c * s * (hi - lo)])


def portrait_starts(spec: Spectrum, grid: int):
    """``(kind, T)`` pairs: interior grid, hexagon edges and vertices.

    Interior starts put weights ``(a, b, c) / (grid + 2)`` with positive
    integers ``a + b + c = grid + 2`` on the last eigenvector row. Edge
    starts have ``b1 = 0`` or ``b2 = 0`` with a 2x2 block rotated through
    ``grid`` angles; vertex starts are the six permutations of ``diag(spec)``.
    """
    lam = np.asarray(spec.lambdas)
    m = grid + 2
    for a in range(1, m - 1):
        for b in range(1, m - a):
            w = np.array([a, b, m - a - b], dtype=float) / m
            alpha, beta = _lanczos(lam, np.sqrt(w))
            yield "interior", make_tridiagonal(alpha[::-1], beta[::-1])
    thetas = [(k + 1) * (math.pi / 2) / (grid + 1) for k in range(grid)]
    for i in range(3):
        lo, hi = np.delete(lam, i)
        single = make_tridiagonal([lam[i]], [])
        for t in thetas:
            yield "edge", block_diag(_two_by_two(lo, hi, t), single)
            yield "edge", block_diag(single, _two_by_two(lo, hi, t))
    for p in itertools.permutations(range(3)):
        yield "vertex", make_tridiagonal(lam[list(p)], [0.0, 0.0])


def portrait_rows(spec: Spectrum, strategy, grid: int, steps: int):
    rows = []
    for run, (kind, T) in enumerate(portrait_starts(spec, grid)):
        for k in range(steps + 1):
            s = strategy.shift(T)
            rows.append([run, kind, k, *moment_map(T), abs(T.b1), abs(T.b2), s])
            if k == steps:
                break
            try:
                T = step_star(T, s).next
            except NotAlmostInvertible:
                break
    return rows


def cmd_portrait(ns, cfg: RunConfig) -> int:
    spec = cfg.spec()
    if spec.n != 3:
        raise WrongDimension(f"portrait needs a spectrum of length 3, got {spec.n}")
    strategy = parse_strategy(cfg.strategy, spec)
    rows = portrait_rows(spec, strategy, ns.grid, cfg.max_steps or 12)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["run", "kind", "step", "mu_1", "mu_2", "mu_3", "b1", "b2", "shift"])
    for r in rows:
        w.writerow(r[:3] + [format(float(x), ".17g") for x in r[3:]])
    _output(cfg, buf.getvalue())
    return EXIT_OK


# ------------------------------------------------------------------ verify

def cmd_verify(ns, cfg: RunConfig) -> int:
    only = []
    for item in ns.only or []:
        only.extend(x for x in item.split(",") if x)
    unknown = [x for x in only if x not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s) {', '.join(unknown)}; choose from {', '.join(SUITES)}")
    vcfg = VerifyConfig(seed=cfg.seed, deflate_tol=cfg.deflate_tol,
                        max_steps=cfg.max_steps or 200,
                        eps_tub_fraction=cfg.eps_tub_fraction,
                        eps_inv_fraction=cfg.eps_inv_fraction, eps_ap=cfg.eps_ap,
                        mixed_eps_fraction=cfg.mixed_eps_fraction)
    results = run_all(vcfg, only or None)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        extra = "" if r.passed else f"  failing: {', '.join(r.failing())}"
        print(f"{status} {r.name} ({r.elapsed:.1f}s){extra}", file=sys.stderr)
    passed = all(r.passed for r in results)
    report = {
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "config": asdict(vcfg),
        "passed": passed,
        "failing": [f"{r.name}/{c}" for r in results for c in r.failing()],
        "suites": [r.to_dict() for r in results],
    }
    _output(cfg, json.dumps(report, indent=2) + "\n")
    return EXIT_OK if passed else EXIT_CHECK_FAILED


# ------------------------------------------------------------------ parser

def _global_options(p: argparse.ArgumentParser) -> None:
    S = argparse.SUPPRESS
    p.add_argument("--spectrum", default=S,
                   help="comma-separated strictly increasing eigenvalues")
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--strategy", default=S,
                   help="rayleigh | wilkinson | mixed[:<eps>] | exact:<i>")
    p.add_argument("--max-steps", dest="max_steps", type=int, default=S)
    p.add_argument("--deflate-tol", dest="deflate_tol", type=float, default=S)
    p.add_argument("--out", default=S, help="output path ('-' for stdout)")
    p.add_argument("--format", choices=("json", "csv"), default=S)
    p.add_argument("--config", default=S, help="key=value file of defaults")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tridiqr", description="Shifted QR iteration on symmetric tridiagonal matrices.",
        epilog="Exit codes: 0 ok, 1 check failure, 2 usage error, 3 non-convergence.")
    _global_options(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="write a random isospectral matrix")
    p.add_argument("--random-signs", action="store_true",
                   help="conjugate by a random sign pattern")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("iterate", help="run shifted QR and write the trace")
    p.add_argument("matrix", nargs="?", help="matrix file (default: sample from --spectrum)")
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("eig", help="all eigenvalues by iterate-and-split")
    p.add_argument("matrix", nargs="?")
    p.set_defaults(func=cmd_eig)

    p = sub.add_parser("rates", help="convergence exponents over seeded runs")
    p.add_argument("--runs", type=int, default=20)
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("portrait", help="moment-map trajectories (n = 3)")
    p.add_argument("--grid", type=int, default=4, help="grid resolution")
    p.set_defaults(func=cmd_portrait)

    p = sub.add_parser("verify", help="run the property suites")
    p.add_argument("--only", action="append", metavar="SUITE",
                   help=f"suite to run (repeatable): {', '.join(SUITES)}")
    p.set_defaults(func=cmd_verify)

    for sp in sub.choices.values():
        _global_options(sp)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        cfg = build_config(ns)
        return ns.func(ns, cfg)
    except (UsageError, ValueError, TridiagError, OSError, IndexError) as exc:
        print(f"tridiqr: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
