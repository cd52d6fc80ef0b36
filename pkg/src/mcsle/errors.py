"""Exception hierarchy for the mcsle toolkit.

Two families: domain/geometry errors (bad inputs) and numerical errors
(a solve or flow that cannot meet its contract).  Both derive from
McsleError so callers can catch everything from this package at once.
"""


class McsleError(Exception):
    """Base class for all mcsle errors."""


class DomainError(McsleError):
    """Invalid domain or state data."""


class RadiusOutOfRange(DomainError):
    pass


class RadiiTooClose(DomainError):
    pass


class BadArcLength(DomainError):
    pass


class ResolutionTooLow(DomainError):
    pass


class LengthMismatch(DomainError):
    pass


class DegenerateDomain(DomainError):
    """A slit radius, separation, or arc length left the admissible range."""


class NumericalError(McsleError):
    """A numerical routine failed to meet its contract."""


class IllConditioned(NumericalError):
    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class ResidualTooLarge(NumericalError):
    def __init__(self, message, residual=None, tolerance=None):
        super().__init__(message)
        self.residual = residual
        self.tolerance = tolerance


class PoleTooCloseToBoundary(DomainError):
    pass


class GammaOnSlit(DomainError):
    pass


class SingularPeriodMatrix(NumericalError):
    pass


class ExtrapolationDiverged(NumericalError):
    pass


class StepUnderflow(NumericalError):
    pass


class ReverseBlowup(NumericalError):
    pass


class NoConvergence(NumericalError):
    """Root solve failed; carries the partial result built so far."""

    def __init__(self, message, partial_path=None, vertex_index=None):
        super().__init__(message)
        self.partial_path = partial_path
        self.vertex_index = vertex_index


class DriftNotReal(NumericalError):
    """The driving-angle drift bracket acquired a real part: solver failure."""

    def __init__(self, message, real_part=None):
        super().__init__(message)
        self.real_part = real_part


class GridTooCoarse(DomainError):
    pass


class TooFewSamples(DomainError):
    pass
