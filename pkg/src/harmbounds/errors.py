"""Exception types shared across the package."""


class HarmboundsError(Exception):
    """Base class for all package-specific errors."""


class IncompatibleEvidence(HarmboundsError):
    """No joint distribution is consistent with the supplied evidence."""


class MissingObservational(HarmboundsError):
    """A conditional estimand was requested without natural-choice data."""


class NullStratum(HarmboundsError):
    """Conditioning on a stratum of probability zero."""


class ParseError(HarmboundsError):
    """Input file could not be parsed."""


class ValidationError(HarmboundsError):
    """Parsed input violates a structural invariant."""
