"""Exception hierarchy for novikov-probe."""

from __future__ import annotations


class NovikovError(ValueError):
    """Root of every error raised by the library."""


class InputError(NovikovError):
    """Invalid input; the CLI exits with code 2."""


class ResourceCapError(NovikovError):
    """A configured cap was hit; the CLI exits with code 3."""


class PresentationSyntaxError(InputError):
    """Malformed presentation text."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownGenerator(InputError):
    pass


class ZeroExponent(InputError):
    pass


class RelatorNonvanishing(InputError):
    """A character row does not kill an abelianized relator."""

    def __init__(self, relator_index: int, row_index: int, value: object) -> None:
        super().__init__(
            f"row {row_index} takes value {value} on relator {relator_index}"
            " (expected 0)"
        )
        self.relator_index = relator_index
        self.row_index = row_index


class ZeroClass(InputError):
    pass


class DependentRows(InputError):
    pass


class ShapeMismatch(InputError):
    pass


class BoundarySquareNonzero(InputError):
    """d_k d_{k+1} has a nonzero entry."""

    def __init__(self, degree: int, row: int, col: int) -> None:
        super().__init__(
            f"boundary composite d{degree} d{degree + 1} is nonzero at entry"
            f" ({row}, {col})"
        )
        self.degree = degree
        self.row = row
        self.col = col


class MalformedTerm(InputError):
    pass


class RankMismatch(InputError):
    pass


class AllZero(InputError):
    pass


class ZeroElement(InputError):
    pass


class RankTooHigh(InputError):
    pass


class ZeroCoordinate(InputError):
    pass


class NoClass(InputError):
    pass


class ExponentOverflow(InputError):
    pass


class SizeExceeded(ResourceCapError):
    pass
