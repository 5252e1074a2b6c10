class MeixnerError(ValueError):
    """Base class for all argument/domain errors raised by this package."""


class DomainError(MeixnerError):
    """An argument lies outside the region where a closed form is valid."""


class BudgetError(MeixnerError):
    """A degree or tensor-size cap would be exceeded."""
