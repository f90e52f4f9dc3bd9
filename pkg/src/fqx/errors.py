"""Exception types shared across the package."""


class BudgetExceededError(Exception):
    """An enumeration or census would exceed its configured budget."""


class FieldMismatchError(ValueError):
    """Operands belong to different field specifications."""


class ParseError(ValueError):
    """Text input was rejected.

    ``position`` is a character offset into the rejected string when one
    can be pinned down, else None.
    """

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position
