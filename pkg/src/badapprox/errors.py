"""Exception hierarchy shared by every module."""


class BadApproxError(Exception):
    """Base class for all package errors."""


class NotSquarefree(BadApproxError):
    pass


class ReducibleDetected(BadApproxError):
    """The defining polynomial was found to factor (or a zero divisor turned up)."""


class MixedFields(BadApproxError):
    pass


class NotCM(BadApproxError):
    pass


class PrecisionExhausted(BadApproxError):
    """A certified decision did not resolve below the configured precision cap."""


class DegenerateForm(BadApproxError):
    """The form has zero determinant."""


class InfinityZero(BadApproxError):
    pass


class LineNotCircle(BadApproxError):
    pass


class NotTotallyPositive(BadApproxError):
    pass


class NormObstructionMissing(BadApproxError):
    pass


class NotAnisotropic(BadApproxError):
    pass


class NotAZero(BadApproxError):
    pass


class FactorZero(BadApproxError):
    pass


class SpecFileError(BadApproxError):
    """Malformed or unreadable field, form, vector or config file."""
