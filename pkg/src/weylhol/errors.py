class ValidationError(ValueError):
    """Input data violates a documented constraint."""


class StructureError(ValueError):
    """A matrix does not have the block structure required for decoding."""


class DomainError(ArithmeticError):
    """An operation was applied outside its domain (e.g. inverting a jet with zero constant term)."""


class TruncationError(ValueError):
    """Jet order too small for the requested derivative depth."""

    def __init__(self, required: int, given: int):
        self.required = required
        self.given = given
        super().__init__(f"jet order K={given} is too small; at least K={required} is required")
