"""Exception hierarchy for tridiqr."""


class TridiagError(Exception):
    """Base class for all errors raised by tridiqr."""


class DimensionMismatch(TridiagError, ValueError):
    pass


class NonFiniteEntry(TridiagError, ValueError):
    pass


class NonSimpleSpectrum(TridiagError):
    """Eigenvalues are too close to be treated as distinct."""


class AmbiguousClosest(TridiagError):
    pass


class BreakdownError(TridiagError):
    """Lanczos produced a vanishing norming coefficient."""


class NotAlmostInvertible(TridiagError):
    """The first n-1 columns of T - sI are (numerically) dependent."""


class SingularShift(TridiagError):
    """The shift is an eigenvalue, so the unsigned step is undefined."""


class ShiftIsEigenvalue(TridiagError):
    pass


class TridiagonalityLost(TridiagError):
    """A similarity left entries outside the band above tolerance."""


class NotInNeighborhood(TridiagError):
    pass


class AmbiguousComponent(TridiagError):
    pass


class InsufficientData(TridiagError):
    pass


class StrategyMismatch(TridiagError):
    pass


class MaxStepsExceeded(TridiagError):
    def __init__(self, message, partial=None, steps=0):
        super().__init__(message)
        self.partial = [] if partial is None else list(partial)
        self.steps = steps


class WrongDimension(TridiagError, ValueError):
    pass
