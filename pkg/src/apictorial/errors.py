"""Exception hierarchy.

Every exception carries a short ``category`` string; the command line
prints it so scripts can branch on the failure kind.
"""


class ApictorialError(Exception):
    category = "error"


class InvalidPolygonError(ApictorialError, ValueError):
    category = "invalid-polygon"


class InvalidInputError(ApictorialError, ValueError):
    category = "invalid-input"


class ResolutionError(ApictorialError, ValueError):
    category = "resolution"


class RadiusTooLargeError(ApictorialError, ValueError):
    category = "radius-too-large"

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class UnderdeterminedFitError(ApictorialError, ValueError):
    category = "underdetermined"


class DegenerateConfigurationError(ApictorialError, ValueError):
    category = "degenerate-configuration"


class NoAssemblyError(ApictorialError):
    category = "no-assembly"

    def __init__(self, message, unreachable=(), stage=None):
        super().__init__(message)
        self.unreachable = tuple(unreachable)
        self.stage = stage


class CycleLimitError(ApictorialError):
    category = "cycle-limit"


class MalformedFileError(ApictorialError, ValueError):
    category = "parse"
