"""Exception types shared across the package."""


class ZinbielError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(ZinbielError, ValueError):
    pass


class SingularMatrix(ZinbielError, ValueError):
    pass


class NotNilpotent(ZinbielError):
    """The lower central series stabilised at a nonzero subspace, or a
    matrix expected to be nilpotent is not."""


class DegenerateError(ZinbielError):
    pass


class ParameterDomainError(ZinbielError, ValueError):
    pass


class RangeError(ZinbielError, ValueError):
    pass


class FormatError(ZinbielError, ValueError):
    """Malformed algebra file. The message names the offending key or line."""
