"""Exception types shared across the package."""


class FvsKernelError(Exception):
    """Base class for all package errors."""


class InputError(FvsKernelError, ValueError):
    """An argument violates an operation's precondition."""


class OracleLimitError(FvsKernelError):
    """A brute-force oracle was asked to run beyond its configured cap."""


class ParseError(FvsKernelError, ValueError):
    """A text input could not be parsed.

    ``line`` is the 1-based line number of the offending line, when known.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnsupportedPatternError(FvsKernelError):
    """Minor testing was requested for a pattern graph we cannot test exactly."""


class ConstructionError(FvsKernelError):
    """A gadget or reduction could not be wired as requested."""
