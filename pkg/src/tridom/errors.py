"""Exception hierarchy.  ``DomainError`` subclasses map to CLI exit code 1."""


class TridomError(Exception):
    """Base class for all package errors."""


class DomainError(TridomError):
    pass


class SpecTooSmall(DomainError, ValueError):
    pass


class IsometryNotApplicable(DomainError):
    pass


class EmptySet(DomainError):
    pass


class NotAHole(DomainError):
    pass


class NotAPerfectCode(DomainError):
    pass


class SingletonSet(DomainError):
    pass


class DivisibilityViolation(DomainError):
    def __init__(self, msg: str, required: tuple[int, int] | None = None):
        super().__init__(msg)
        self.required = required


class MotifUnavailable(DomainError):
    pass


class NoMotifFound(DomainError):
    pass


class BudgetExceeded(TridomError):
    """Raised when a search hits its node or wall-clock budget."""

    def __init__(self, msg: str, result=None):
        super().__init__(msg)
        self.result = result


class NotK2Qpds(DomainError):
    pass


class TooFewComponents(DomainError):
    pass


class NoLowType(DomainError):
    pass


class NotTwoTypes(DomainError):
    pass


class NotSandwiched(DomainError):
    pass


class EmptyWord(DomainError, ValueError):
    pass


class DocumentError(DomainError, ValueError):
    pass


class NoTableLayout(DomainError):
    pass
