"""Custom exceptions for zecklab."""


class ZeckendorfError(Exception):
    """Base exception for zecklab errors."""
    pass


class DomainError(ZeckendorfError):
    """Raised for arguments outside an operation's domain (negative n, k <= 0, ...)."""
    pass


class InadmissibleWordError(ZeckendorfError):
    """Raised when a digit word is not a valid Zeckendorf word."""

    def __init__(self, word: str, reason: str = "adjacent ones"):
        self.word = word
        self.reason = reason
        super().__init__(f"Inadmissible word {word!r}: {reason}")


class HorizonExhaustedError(ZeckendorfError):
    """Raised when an operation needs digits beyond the known prefix."""

    def __init__(self, position: int, horizon: int, what: str = "carry"):
        self.position = position
        self.horizon = horizon
        self.what = what
        super().__init__(
            f"{what} needs digit position {position} but the prefix ends at {horizon}; extend the prefix"
        )


class PathologicalSampleError(ZeckendorfError):
    """Raised when a sampled prefix never becomes addition-safe within the digit cap."""

    def __init__(self, digits: int, cap: int):
        self.digits = digits
        self.cap = cap
        super().__init__(f"Sample not addition-safe after {digits} digits (cap {cap})")


class PreconditionError(ZeckendorfError):
    """Raised when an estimator's preconditions are not met."""
    pass


class VerificationError(ZeckendorfError):
    """Raised when a verification check fails."""

    def __init__(self, check: str, detail: str = ""):
        self.check = check
        self.detail = detail
        super().__init__(f"Verification failed: {check}" + (f" ({detail})" if detail else ""))


class InvariantBreachError(ZeckendorfError):
    """Raised when a runtime diagnostic of a proven property fails.

    Reaching this means a bug in the implementation, not bad input.
    """

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        self.detail = detail
        super().__init__(f"Invariant breached: {invariant}" + (f" ({detail})" if detail else ""))
