"""Exception types raised across the package."""


class UFFError(Exception):
    """Base class for all package errors."""


class NotUnitNorm(UFFError, ValueError):
    pass


class ShapeMismatch(UFFError, ValueError):
    pass


class NonQubitPosition(UFFError, ValueError):
    """A sigma mask selects a factor whose dimension is not 2."""


class NonQubitFactor(UFFError, ValueError):
    pass


class NotCanonical(UFFError, ValueError):
    """A retained qubit coordinate is flipped, so it does not lie in F."""


class TooLarge(UFFError, ValueError):
    pass


class MalformedTree(UFFError, ValueError):
    pass


class InvalidUOB(UFFError, ValueError):
    pass


class InconsistentOracle(UFFError, ValueError):
    """Partial sums disagree at equal projected coordinates."""


class NotHermitian(UFFError, ValueError):
    pass


class NotAForm(UFFError, ValueError):
    """The oracle is not a quadratic form on the probed factor."""


class UnsampledPoint(UFFError, KeyError):
    """A table-backed phi was queried outside its sampled coordinates."""


class FormatError(UFFError, ValueError):
    """Malformed JSON input; ``path`` names the offending field."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
