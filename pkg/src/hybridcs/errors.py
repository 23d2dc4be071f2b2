"""Exception types shared across the library."""


class InvalidParameterError(ValueError):
    """An argument is outside its documented domain."""


class DegenerateSystemError(RuntimeError):
    """A column-restricted system is numerically rank deficient."""


class OutOfRegimeError(ValueError):
    """Inputs violate the hypotheses under which a bound formula is defined."""


class RecoveryFailureError(RuntimeError):
    """No admissible candidate remained during a recovery iteration."""
