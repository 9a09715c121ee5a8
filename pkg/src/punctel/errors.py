"""Exception hierarchy shared across the package."""


class PunctelError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(PunctelError, ValueError):
    pass


class IndexOutOfRange(PunctelError, IndexError):
    pass


class MatrixFormatError(PunctelError, ValueError):
    pass


class EnumerationTooLarge(PunctelError, ValueError):
    pass


class CssViolation(PunctelError, ValueError):
    """h1 . h2^T is nonzero."""


class EmptySet(PunctelError, ValueError):
    """A distance was requested over an empty set difference (k = 0)."""


class LabelMismatch(PunctelError, ValueError):
    """Recomputed code parameters disagree with the declared labels."""


class UnknownCode(PunctelError, KeyError):
    pass


class DegenerateResult(PunctelError, ValueError):
    """A puncture left k = 0 or a distance below 1."""


class LineageFormatError(PunctelError, ValueError):
    pass


class OutOfRange(PunctelError, ValueError):
    pass


class ZeroNormalization(PunctelError, ArithmeticError):
    pass


class NoCrossing(PunctelError, ValueError):
    pass


class DistanceContradiction(PunctelError):
    """Two correctable-weight errors share a syndrome yet differ by a logical operator."""

    def __init__(self, code_id: str, branch: str, first: str, second: str, radius: int) -> None:
        self.code_id = code_id
        self.branch = branch
        self.pair = (first, second)
        self.radius = radius
        super().__init__(
            f"DistanceContradiction in {code_id} ({branch} branch, radius {radius}): "
            f"errors {first} and {second} share a syndrome but differ by a logical operator"
        )


class SyndromeMismatch(PunctelError):
    """A kept stabilizer reads differently on the punctured code and the padded parent."""
