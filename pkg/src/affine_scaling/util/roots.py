# -*- coding=utf-8 -*-
r"""

"""
import math
import typing as t


__all__ = ['real_quadratic_roots']


def real_quadratic_roots(a: float, b: float, c: float, discriminant_tol: float = 0.0) -> t.Tuple[float, ...]:
    r"""
    real roots of a*s^2 + b*s + c, ascending

    uses the sign-matched numerator so neither root suffers from cancellation.
    a negative discriminant within `discriminant_tol * b^2` is treated as a double root.
    """
    if a == 0.0:
        if b == 0.0:
            return ()
        return (-c / b,)
    discriminant = b * b - 4.0 * a * c
    if discriminant < 0.0:
        if -discriminant > discriminant_tol * b * b:
            return ()
        discriminant = 0.0
    q = -0.5 * (b + math.copysign(math.sqrt(discriminant), b))
    if q == 0.0:  # b == 0 and c == 0
        return (0.0, 0.0)
    return tuple(sorted((q / a, c / q)))
