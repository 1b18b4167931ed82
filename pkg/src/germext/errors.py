"""Exception types shared across the package."""


class ShapeError(ValueError):
    """Matrix dimensions are incompatible with the requested operation."""


class MatrixFormatError(ValueError):
    """Malformed matrix text. ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GermFormatError(ValueError):
    """Malformed germ JSON."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class InvalidGermError(ValueError):
    """The germ violates a standing hypothesis (see ``validate_germ``)."""

    def __init__(self, report):
        self.report = report
        super().__init__("invalid germ: " + "; ".join(str(i) for i in report.issues))


class GaugeError(ValueError):
    """A gauge element does not belong to G(f) for the given germ."""


class SlideUnavailableError(ValueError):
    """The requested handle slide violates the critical-value order."""


class NotApplicableError(ValueError):
    """Preconditions of a specialised procedure do not hold."""


class SearchSpaceError(ValueError):
    """Refusal to enumerate an oversized search space."""


class ImplementationFault(RuntimeError):
    """An internally produced certificate failed re-verification.

    Raised instead of returning a possibly wrong answer.
    """


class StateError(ValueError):
    """An FMC state is not a valid canonical state."""


class ChainConditionError(ValueError):
    """The boundary operator does not square to zero."""
