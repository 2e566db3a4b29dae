"""Exception hierarchy.

Every error carries a stable ``code`` string; the CLI prints it and tests
match on it.
"""


class TMotifError(Exception):
    code = "error"

    def __init__(self, message="", code=None):
        super().__init__(message)
        if code is not None:
            self.code = code


class InsufficientPrecision(TMotifError):
    code = "insufficient-precision"


class ZeroDenominator(TMotifError):
    code = "zero-denominator"


class FieldMismatch(TMotifError):
    code = "field-mismatch"


class ShapeMismatch(TMotifError):
    code = "shape-mismatch"


class NotEffective(TMotifError):
    code = "not-effective"


class NotNilpotent(TMotifError):
    code = "not-nilpotent"


class UnsupportedPresentation(TMotifError):
    code = "unsupported-presentation"


class NotConverged(TMotifError):
    code = "not-converged"


class BadReduction(TMotifError):
    code = "bad-reduction"


class DescentFailure(TMotifError):
    code = "descent-failure"


class CapExceeded(TMotifError):
    code = "cap-exceeded"


class TailNoncancellation(TMotifError):
    code = "tail-noncancellation"


class NoConvergence(TMotifError):
    code = "no-convergence"


class RoundTripFailure(TMotifError):
    code = "round-trip-failure"


class DimensionMismatch(TMotifError):
    code = "dimension-mismatch"


class NonIntegral(TMotifError):
    code = "non-integral"


class ParseError(TMotifError):
    code = "parse-error"
