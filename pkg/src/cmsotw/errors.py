"""Exception types shared across the package."""


class CapExceeded(RuntimeError):
    """An exhaustive search would exceed a configured size cap."""


class FormulaError(ValueError):
    """Malformed formula: syntax error, unbound variable, or sort mismatch."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)
        self.offset = offset


class ContractViolation(RuntimeError):
    """A pluggable oracle broke its contract."""
