"""Exception types raised by the public API."""


class NonHermitianError(ValueError):
    """A matrix required to be Hermitian failed the symmetry check."""


class ThetaOutOfRangeError(ValueError):
    """The angle lies outside the range the construction is defined for."""


class UnsupportedThetaError(ValueError):
    """The angle puts the diagonal threshold at an endpoint (1 or 2) where
    the facial analysis does not apply."""


class ConstraintViolatedError(ValueError):
    """An algebraic side constraint on the inputs does not hold."""


class NegativeInputError(ValueError):
    """An input required to be nonnegative is negative."""


class NotPositiveMapError(ValueError):
    """The map is not positive, so the requested analysis is undefined."""


class NotApplicableError(ValueError):
    """The certificate construction does not apply to these parameters."""


class UnsupportedCaseError(ValueError):
    """The parameters fall outside the boundary cases with a known
    product-vector kernel."""


class NotAFaceError(ValueError):
    """The label does not name a proper face."""


class OutOfRangeError(ValueError):
    """A scalar parameter lies outside its admissible interval."""


class NoDetectingChoiceError(RuntimeError):
    """No scanned witness parameter produced a negative detection pairing."""
