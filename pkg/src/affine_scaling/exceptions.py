# -*- coding=utf-8 -*-
r"""

"""


__all__ = [
    'QuietExit',
    'AffineScalingError',
    'DomainError', 'DimensionMismatch', 'InvariantViolation', 'ParseError', 'RetryExhausted',
    'NotInterior', 'NotInSwath',
    'NumericalFailure',
    'NonRealEigenvalues', 'DegenerateLeadingCoefficient', 'ConvexityViolation', 'StepBoundViolation',
]


# -------------------------------------------------------------------------------------------------------------------- #


class QuietExit(BaseException):
    def __init__(self, return_code: int):
        self.return_code = return_code


class AffineScalingError(Exception):
    exit_code: int = 1


# -------------------------------------------------------------------------------------------------------------------- #


class DomainError(AffineScalingError, ValueError):
    pass


class DimensionMismatch(DomainError):
    pass


class InvariantViolation(DomainError):
    pass


class ParseError(AffineScalingError):
    exit_code = 4

    def __init__(self, message: str, line_number: int = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class RetryExhausted(AffineScalingError):
    pass


# -------------------------------------------------------------------------------------------------------------------- #


class NotInterior(AffineScalingError):
    exit_code = 3


class NotInSwath(AffineScalingError):
    exit_code = 2


# -------------------------------------------------------------------------------------------------------------------- #


class NumericalFailure(AffineScalingError):
    exit_code = 3


class NonRealEigenvalues(NumericalFailure):
    pass


class DegenerateLeadingCoefficient(NumericalFailure):
    pass


class ConvexityViolation(NumericalFailure):
    pass


class StepBoundViolation(NumericalFailure):
    pass
