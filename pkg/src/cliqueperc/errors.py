"""Exception types shared across the package.

The CLI maps these onto exit codes, so library code should raise these
rather than bare ValueError/RuntimeError where the distinction matters.
"""


class InvalidParameterError(ValueError):
    """A parameter is outside its documented domain."""


class UnsupportedParameterError(InvalidParameterError):
    """A parameter is valid in principle but beyond implementation limits."""


class ParseError(ValueError):
    """Malformed input data; message includes the 1-based line number."""


class ResourceGuardError(RuntimeError):
    """Projected work exceeds the configured resource budget; nothing was run."""


class NoCrossingError(ValueError):
    """A scanned sequence never crosses the requested level."""
