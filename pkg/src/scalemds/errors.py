"""Exception hierarchy shared by all scalemds modules."""


class MdsError(Exception):
    """Base class for all scalemds errors."""


class InvalidInputError(MdsError):
    """Input data is malformed (non-finite values, bad shape, broken symmetry)."""


class ShapeError(MdsError):
    """Matrix dimensions are incompatible for the requested operation."""


class ParamError(MdsError):
    """A parameter value is out of its valid range."""


class NumericalError(MdsError):
    """A numerical routine failed to converge or hit an ill-conditioned system."""


class DegenerateRankError(MdsError):
    """The requested embedding dimension exceeds the usable spectral rank."""


class FormatError(MdsError):
    """A file does not conform to its declared format."""


class JoinError(MdsError):
    """Paired data sets (images and labels) have inconsistent lengths."""


class MetricError(MdsError):
    """A quality metric is undefined for the given inputs."""


class UsageError(MdsError):
    """Command-line usage error."""
