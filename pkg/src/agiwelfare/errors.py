"""Exception hierarchy shared across the package."""


class AgiWelfareError(Exception):
    """Base class for all package errors."""


class InputError(AgiWelfareError, ValueError):
    """Malformed or semantically invalid input (economy, candidate, arguments)."""


class DomainError(InputError):
    """An operation was applied outside the domain where it is defined."""


class ConfigurationError(InputError):
    """A check was configured so that its answer would be vacuous or undefined."""


class ResourceCapError(AgiWelfareError):
    """An enumeration would exceed the configured candidate cap."""

    def __init__(self, size: int, cap: int, what: str = "candidates"):
        self.size = size
        self.cap = cap
        super().__init__(f"{what}: {size} exceeds cap {cap}")


class FileSyntaxError(InputError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")
