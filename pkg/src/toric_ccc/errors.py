"""Exception hierarchy shared by every module of the package."""


class ToricError(Exception):
    """Base class for all errors raised by toric_ccc."""


class UnsupportedRankError(ToricError):
    """Ambient rank (or cone dimension) beyond what an operation supports."""


class UnboundedPolyhedronError(ToricError):
    """A bounded polyhedron was required."""


class ToleranceInstabilityError(ToricError):
    """A local computation did not stabilise under refinement."""


class InvalidFanError(ToricError):
    """The cone data violates the fan axioms.

    ``pair`` holds the offending pair of maximal-cone indices when the
    failure is an intersection that is not a common face.
    """

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class NotCoveredError(ToricError):
    """A point is not contained in any cone of a (non-complete) fan."""


class UnknownFanError(ToricError, KeyError):
    pass


class UnsupportedFanError(ToricError):
    """The fan lacks a property (smooth, complete, surface) the caller needs."""


class NotAmpleError(ToricError):
    pass


class BoundingRegionError(ToricError):
    """Nonzero cohomology persisted on the shell of the weight search box."""


class DegenerateInputError(ToricError):
    """No admissible generic perturbation was found."""


class NoCriticalPointsError(ToricError):
    pass


class ParseError(ToricError):
    """Malformed structured-text input; ``field`` names the culprit."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class UnsupportedCycleError(ToricError):
    """A cycle is outside the class an operation handles."""


class IncompatibleFigureError(ToricError):
    """The figure kind cannot be drawn from the given source."""
