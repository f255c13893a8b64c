"""Shifted QR iteration on real symmetric tridiagonal matrices.

Signed QR steps, simple shift strategies, the geometry of deflation
neighborhoods and diagnostics for convergence rates.
"""
from .core import (
    ApClass,
    SignPattern,
    Spectrum,
    SymTridiagonal,
    as_spectrum,
    block_diag,
    classify_ap,
    closest_eigenvalue_index,
    conjugate_by_signs,
    deflation_set_point,
    eigh_oracle,
    factor_shifted,
    flip_last,
    from_dense,
    is_unreduced,
    make_rng,
    make_tridiagonal,
    sample_isospectral,
    sample_near_deflation,
    sturm_eigenvalues,
    sturm_values,
)
from .dynamics import (
    HeightSpec,
    IterationTrace,
    deflate_and_recurse,
    height,
    height_increase,
    invariance_checks,
    iterate,
    parlett_check,
    rate_exponents,
    weak_ap_limits,
    wielandt_hoffman_gap,
)
from .errors import (
    TridiagError,
    DimensionMismatch,
    NonFiniteEntry,
    NonSimpleSpectrum,
    AmbiguousClosest,
    BreakdownError,
    NotAlmostInvertible,
    SingularShift,
    ShiftIsEigenvalue,
    TridiagonalityLost,
    NotInNeighborhood,
    AmbiguousComponent,
    InsufficientData,
    StrategyMismatch,
    MaxStepsExceeded,
    WrongDimension,
)
from .geometry import (
    canonical_projection,
    deflation_component,
    double_deflation_membership,
    in_permutohedron,
    moment_map,
    permutohedron_vertices,
    tubular_coords,
)
from .shifts import (
    ShiftStrategy,
    mixed_shift,
    parse_strategy,
    rayleigh_shift,
    strategy_step,
    wilkinson_shift,
)
from .steps import StepResult, check_commutation, inverse_step, step_star, step_unsigned

__version__ = "0.1.0"
