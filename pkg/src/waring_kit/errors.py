from __future__ import annotations
from typing import Optional


class WaringKitError(Exception):
    pass


class DegreeMismatchError(WaringKitError, ValueError):
    def __init__(self: DegreeMismatchError, left: int, right: int) -> None:
        super().__init__(f"Degree mismatch: {left} != {right}.")
        self.left: int = left
        self.right: int = right


class PreconditionError(WaringKitError, ValueError):
    pass


class WordSyntaxError(WaringKitError, ValueError):
    pass


class MissingGeneratorError(WaringKitError, ValueError):
    def __init__(self: MissingGeneratorError, generator: int) -> None:
        super().__init__(f"No element assigned to generator x{generator}.")
        self.generator: int = generator


class BudgetExceededError(WaringKitError):
    def __init__(
        self: BudgetExceededError,
        required: int,
        budget: int,
        what: Optional[str] = None,
    ) -> None:
        super().__init__(
            f"{what or 'Enumeration'} needs {required} evaluations, "
            f"budget is {budget}. Use sampled mode instead."
        )
        self.required: int = required
        self.budget: int = budget


class VerificationError(WaringKitError):
    pass


class CacheError(WaringKitError):
    pass
