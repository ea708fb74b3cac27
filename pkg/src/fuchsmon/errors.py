"""Exception hierarchy with CLI exit codes per failure class."""


class FuchsmonError(Exception):
    """Base class; exit_code is used by the CLI."""
    exit_code = 1


class ParseError(FuchsmonError):
    """Any rejection of textual input."""
    exit_code = 2


class OperatorSyntaxError(ParseError):
    """Malformed operator expression; carries the offending position."""

    def __init__(self, message, position):
        super().__init__("%s (at position %d)" % (message, position))
        self.position = position


class ThetaDegreeError(ParseError):
    """Operator order exceeds 4."""


class PolynomialDivisionError(ParseError):
    """Division by a non-constant expression."""


class GeometryError(FuchsmonError):
    """Local-analysis or path-geometry failure (irregular point, unsupported
    exponent lattice, path too close to a singularity, ...)."""
    exit_code = 3


class IrregularSingularityError(GeometryError):
    """Operator is not Fuchsian at the requested point."""


class PrecisionError(FuchsmonError):
    """Requested tolerance unreachable with given resources (series order,
    coefficient count, working digits)."""
    exit_code = 4


class RecognitionError(FuchsmonError):
    """Constant/matrix recognition failed (non-rational entry, no relation,
    ambiguous fit treated as data elsewhere)."""
    exit_code = 5


class FixtureMismatchError(FuchsmonError):
    """A reproduction run disagreed with the embedded expected values."""
    exit_code = 6
