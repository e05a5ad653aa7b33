"""Exception types shared across the package."""


class EllPrimError(Exception):
    pass


class InvalidParams(EllPrimError, ValueError):
    """(q, a) outside q >= 2, a^2 < 4q."""


class PreconditionViolation(EllPrimError, ValueError):
    pass


class DomainError(EllPrimError, ValueError):
    pass


class FactorizationExceeded(EllPrimError):
    pass


class IncompleteFactorization(EllPrimError):
    """Raised when an operation needs a full factorization it could not get."""

    def __init__(self, value, cofactor):
        super().__init__(f"could not fully factor {value}: cofactor {cofactor} left")
        self.value = value
        self.cofactor = cofactor


class MismatchError(EllPrimError, AssertionError):
    """Two exact computations of the same integer disagree (an arithmetic bug)."""


class CongruenceViolation(EllPrimError, AssertionError):
    pass


class NotUnitary(EllPrimError, ValueError):
    pass


class EnumerationTooLarge(EllPrimError):
    pass
