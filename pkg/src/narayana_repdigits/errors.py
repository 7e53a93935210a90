"""Exception hierarchy shared by every stage of the proof engine."""


class ProofError(Exception):
    """Base class for failures that a proof run records instead of crashing on."""


class PrecisionError(ProofError):
    """Working precision is too low to certify a required fact."""


class PrecisionExhausted(PrecisionError):
    """A continued fraction ran out of certified partial quotients.

    ``partial`` holds the convergents that could be certified.
    """

    def __init__(self, message, partial=()):
        super().__init__(message)
        self.partial = list(partial)


class UndecidedComparison(PrecisionError):
    """Two balls overlap, so a strict comparison cannot be certified."""


class DomainError(ProofError, ValueError):
    """A function was applied outside its domain (log of a non-positive ball, ...)."""


class InvalidPattern(ProofError, ValueError):
    pass


class InvalidRational(ProofError, ValueError):
    pass


class LemmaInapplicable(ProofError, ValueError):
    """The hypotheses of an absorption lemma are not met."""


class ReductionFailed(ProofError):
    """No convergent inside the scan budget certified a positive xi."""
