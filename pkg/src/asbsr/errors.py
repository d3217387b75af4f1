"""Exception types shared across the package.

Plain ``ValueError`` is used for malformed arguments (bad dimensions,
out-of-range parameters, inconsistent inputs). The subclasses below mark
conditions a caller may want to handle separately.
"""


class DegenerateMaskError(ValueError):
    """Requested mask area is so small the mask would hold only the DC cell."""


class FeasibilityError(ValueError):
    """Problem parameters make recovery impossible (e.g. too few observed pixels)."""


class NumericalFailureError(ArithmeticError):
    """A numeric pipeline produced non-finite results."""
