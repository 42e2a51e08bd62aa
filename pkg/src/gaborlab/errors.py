"""Exception hierarchy shared by all gaborlab modules."""


class GaborLabError(Exception):
    """Base class for every error raised by gaborlab."""


class DimensionError(GaborLabError, ValueError):
    """Array shapes or lengths do not match the group order."""


class ParityError(GaborLabError, ValueError):
    """A Weyl-calculus path was called with an even group order."""


class LatticeError(GaborLabError, ValueError):
    """Lattice steps do not divide the group order."""


class FrameError(GaborLabError, ValueError):
    """The Gabor system does not span (frame operator not invertible)."""


class SizeLimitError(GaborLabError, ValueError):
    """Requested object exceeds the dense-storage ceiling."""


class WeightError(GaborLabError, ValueError):
    """A weight violates admissibility or moderateness."""


class ContourError(GaborLabError, ValueError):
    """Integration contour does not separate the spectrum as required."""


class PreconditionError(GaborLabError, ValueError):
    """An operation precondition (normality, nonzero input, ...) failed."""


class SingularityError(GaborLabError, ValueError):
    """Operator is not invertible to working precision."""


class ConfigError(GaborLabError, ValueError):
    """Invalid experiment configuration.

    ``field`` names the offending dotted config key.
    """

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
