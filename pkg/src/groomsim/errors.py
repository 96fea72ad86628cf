"""Exception types shared across the package."""


class GroomsimError(Exception):
    """Base class for all groomsim errors."""


class ValidationError(GroomsimError, ValueError):
    """Invalid argument or precondition violation."""


class EstimationError(GroomsimError):
    """A fit or optimization could not be carried out on the given data."""


class IngestError(GroomsimError):
    """Malformed input file or event stream."""
