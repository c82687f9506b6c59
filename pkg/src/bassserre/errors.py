"""Exception hierarchy shared by all modules."""


class BassSerreError(Exception):
    """Base class for everything this package raises on purpose."""


class GroupValidationError(BassSerreError):
    """A table, subgroup, embedding, or partial isomorphism fails its axioms."""


class PresentationMismatchError(BassSerreError):
    """Two values built over different splitting presentations were combined."""


class WordDomainError(BassSerreError):
    """A word letter lies outside its factor or carrier group."""


class InfiniteIndexError(BassSerreError):
    """A coset transversal was requested for an infinite-index subgroup."""


class InfiniteDegreeError(BassSerreError):
    """A tree vertex of infinite degree cannot be expanded."""


class SizeBudgetExceededError(BassSerreError):
    """An enumeration outgrew its configured vertex budget."""

    def __init__(self, budget: int):
        super().__init__(f"enumeration exceeded the size budget of {budget} vertices")
        self.budget = budget


class NotHyperbolicError(BassSerreError):
    """An axis or translation-length query was made for an elliptic element."""


class NotEllipticError(BassSerreError):
    """A fixed-point style query was made for a hyperbolic element."""


class DegeneratePresentationError(BassSerreError):
    """The presentation violates the hypotheses of the requested construction."""


class NotApplicableError(BassSerreError):
    """The requested certificate cannot exist for this presentation."""


class BudgetExhaustedError(BassSerreError):
    """A bounded search ended without a certificate; carries the search trace."""

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace if trace is not None else []


class SchemaValidationError(BassSerreError):
    """An input document violates the JSON schema; carries a JSON pointer."""

    def __init__(self, message: str, pointer: str):
        super().__init__(f"{pointer}: {message}")
        self.pointer = pointer
        self.detail = message
