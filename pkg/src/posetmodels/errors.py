"""Exception types shared across the package."""


class PosetModelError(Exception):
    """Base class for all errors raised by this package."""


class SizeLimitError(PosetModelError):
    """An enumeration target exceeds the supported size caps."""


class ValidationError(PosetModelError):
    """Input data violates a structural requirement (names the witness)."""


class UnsupportedStructureError(PosetModelError):
    """The operation needs structure (complements, meets, ...) the poset lacks."""


class PreconditionError(PosetModelError):
    """An argument fails a documented precondition."""


class InternalConsistencyError(PosetModelError):
    """A theorem-backed invariant failed; indicates a bug, not bad input."""


class BudgetExceededError(PosetModelError):
    """A search ran out of its time budget.

    Carries a partial-progress report: how many results were complete
    and how many search nodes were explored when the budget ran out.
    """

    def __init__(self, message: str, found: int = 0, explored: int = 0):
        super().__init__(message)
        self.found = found
        self.explored = explored
