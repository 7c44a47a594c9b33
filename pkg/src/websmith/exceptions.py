"""Exception hierarchy shared by all websmith modules."""


class WebsmithError(Exception):
    """Base class for every error raised by websmith."""


class StructuralError(WebsmithError, ValueError):
    """Objects that cannot be combined (mismatched base point, order, center)."""


class DomainError(WebsmithError, ValueError):
    """Argument outside the region where an evaluation is trusted."""


class PoleError(WebsmithError, ZeroDivisionError):
    """Evaluation hit a pole of a meromorphic function."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class ConvergenceError(WebsmithError, RuntimeError):
    """An iterative solve failed to reach its tolerance."""


class NumericalPrecisionError(WebsmithError, ArithmeticError):
    """A result violates a hard mathematical bound, so precision was lost."""


class TransversalityError(WebsmithError, ValueError):
    """Foliations fail to be pairwise transverse where it is required."""


class ConstantSlope(WebsmithError, ValueError):
    """Samples of a slope function are (numerically) constant.

    Raised by the quartic ODE fit; the classifier catches it to route the
    input to the constant-slope cases.
    """
