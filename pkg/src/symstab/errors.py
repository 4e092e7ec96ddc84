"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`SymstabError`,
so the CLI can translate it into an exit code without catching programming bugs.
Validation problems map to exit status 2, :class:`BudgetExceeded` to 3.
"""


class SymstabError(Exception):
    """Base class for all library errors."""


class ValidationError(SymstabError, ValueError):
    """Input violates a documented precondition."""


class BudgetExceeded(SymstabError):
    """An exhaustive enumeration would exceed the configured element budget."""

    def __init__(self, requested: int, budget: int):
        super().__init__(f"enumeration of {requested} elements exceeds budget {budget}")
        self.requested = requested
        self.budget = budget


class NotTwoTorsion(ValidationError):
    pass


class TrivialClass(ValidationError):
    pass


class NotDoubleCover(ValidationError):
    pass


class UnsupportedDegree(ValidationError):
    pass


class InvalidDescriptor(ValidationError):
    pass


class NotTorsion(ValidationError):
    pass


class DegreeNotZero(ValidationError):
    pass


class MultiplicityExceedsDegree(ValidationError):
    pass


class ConjugatePairViolation(ValidationError):
    pass


class SameFiberConflict(ValidationError):
    pass


class IncompleteInput(ValidationError):
    pass


class MissingPresentation(ValidationError):
    pass
