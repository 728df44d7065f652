"""Package exception types."""


class InvalidInputError(ValueError):
    """Raised when an argument violates an operation's precondition."""


class FormatError(InvalidInputError):
    """Raised when a file does not conform to one of the text formats."""
