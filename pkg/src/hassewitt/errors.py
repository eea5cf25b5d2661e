"""Exception hierarchy shared across the package."""


class HasseWittError(Exception):
    """Base class for all package errors."""


class CurveError(HasseWittError):
    """Invalid curve model."""


class ZeroLeading(CurveError):
    """Leading coefficient of f is zero."""


class NotSquarefree(CurveError):
    """f has a repeated factor (discriminant vanishes)."""


class UnsupportedGenus(CurveError):
    """Genus outside the supported range 1..3."""


class DivisionByZeroPolynomial(HasseWittError):
    """A pivot polynomial in the transition construction is identically zero."""


class ZeroDenominatorAtIndex(HasseWittError):
    """Denominator polynomial evaluated to zero at a recurrence index."""


class DimensionMismatch(HasseWittError):
    """Matrix/vector dimensions do not agree."""


class ContextTooSmall(HasseWittError):
    """Operands exceed what the NTT context can represent exactly."""


class PrecisionFailure(HasseWittError):
    """Residue precision (e, w) assumptions failed for a particular prime."""

    def __init__(self, p, reason):
        super().__init__(f"p={p}: {reason}")
        self.p = p
        self.reason = reason
