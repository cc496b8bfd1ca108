"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the domain of an operation (unknown argument, bad parameter)."""


class ResourceError(RuntimeError):
    """An enumeration would exceed its configured cap."""

    def __init__(self, what: str, required: int, allowed: int):
        self.what = what
        self.required = required
        self.allowed = allowed
        super().__init__(f"{what}: requires {required}, cap is {allowed}")


class ParseError(DomainError):
    def __init__(self, message: str, line: int, col: int = 1):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, col {col}: {message}")
