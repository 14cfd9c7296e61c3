"""Exception hierarchy shared by all belyicert modules."""


class CertifyError(Exception):
    """Base class for every error raised by belyicert."""


# ============================================================
# PARSING
# ============================================================


class ParseError(CertifyError, ValueError):
    """Input text does not conform to its grammar."""

    def __init__(self, message: str, position: int = -1):
        if position >= 0:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class CycleNotationError(ParseError):
    pass


class PolynomialSyntaxError(ParseError):
    pass


class NonIntegerCoefficientError(PolynomialSyntaxError):
    pass


class ZeroFactorError(PolynomialSyntaxError):
    pass


class FixtureError(ParseError):
    pass


# ============================================================
# COMPUTATION
# ============================================================


class DegreeMismatchError(CertifyError, ValueError):
    pass


class EmptyGeneratorsError(CertifyError, ValueError):
    pass


class NotTransitiveError(CertifyError, ValueError):
    pass


class NotInGroupError(CertifyError, ValueError):
    pass


class OddIndexSumError(CertifyError, ValueError):
    """Ramification indices of a triple sum to an odd number (corrupted input)."""


class MalformedSubdegreesError(CertifyError, ValueError):
    pass


class IncompleteTableError(CertifyError, RuntimeError):
    """An operation needs a complete class table but only a partial one exists."""


class BudgetExceeded(CertifyError, RuntimeError):
    """A size, time or memory budget ran out before the computation finished.

    `diagnostics` carries whatever partial state is useful for the report.
    """

    def __init__(self, message: str, diagnostics: dict = None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class FingerprintCollisionError(CertifyError, RuntimeError):
    """Two distinct image tables produced the same fingerprint."""


# ============================================================
# BELYI DATA
# ============================================================


class BelyiDataError(CertifyError, ValueError):
    pass


class IdentityMismatchError(BelyiDataError):
    """p != q + r. `difference` is the exact polynomial p - q - r."""

    def __init__(self, message: str, difference=None):
        super().__init__(message)
        self.difference = difference


class NotCoprimeError(BelyiDataError):
    pass


class ProfileInconsistencyError(BelyiDataError):
    pass
