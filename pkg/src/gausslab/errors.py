"""Exception hierarchy shared across the package.

CLI exit-code mapping: ArgumentError -> 2, ResourceCapError -> 3, any
assertion/property violation reported in a run -> 1.
"""


class GausslabError(Exception):
    pass


class ArgumentError(GausslabError, ValueError):
    """Invalid argument combination (bad exponent range, conductor mismatch, ...)."""


class PrimalityError(ArgumentError):
    """A parameter that must be prime is not."""


class ResourceCapError(GausslabError, RuntimeError):
    """A configured size/precision cap was exceeded; message names the cap."""


class PrecisionError(ResourceCapError):
    """Working p-adic precision is insufficient; message names the required precision."""


class FormulaValidationError(GausslabError, RuntimeError):
    """A self-validation gate failed (externally sourced formula rejected)."""
