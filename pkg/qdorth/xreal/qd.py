"""
Quad-double arithmetic: a real carried as ``c0 + c1 + c2 + c3``, each component at most half an ulp of the previous.

Sums and products are formed from their exact partial terms and rounded to four components by error-free
distillation, see `eft.distill`.
"""
import numpy as np

from ..exceptions import NegativeSqrtError, ZeroDivisorError
from .base import ExtendedReal
from .eft import distill, guarded, two_prod


def _add(a, b):
    terms = [a[0], b[0], a[1], b[1], a[2], b[2], a[3], b[3]]
    return distill(terms, 4)


def _mul(a, b):
    # order 0 to 3 products are taken exactly; order 4 in plain arithmetic; the rest is below 2**-260
    p00, e00 = two_prod(a[0], b[0])
    p01, e01 = two_prod(a[0], b[1])
    p10, e10 = two_prod(a[1], b[0])
    p02, e02 = two_prod(a[0], b[2])
    p11, e11 = two_prod(a[1], b[1])
    p20, e20 = two_prod(a[2], b[0])
    p03, e03 = two_prod(a[0], b[3])
    p12, e12 = two_prod(a[1], b[2])
    p21, e21 = two_prod(a[2], b[1])
    p30, e30 = two_prod(a[3], b[0])
    tail = ((a[1] * b[3] + a[3] * b[1]) + a[2] * b[2]) + ((e03 + e30) + (e12 + e21))
    terms = [p00,
             e00, p01, p10,
             e01, e10, p02, p11, p20,
             e02, e11, e20, p03, p12, p21, p30,
             tail]
    return distill(terms, 4)


def _neg(a):
    return [-c for c in a]


def _from_double(x):
    zero = x * 0.0
    return [x, zero, zero, zero]


def _scale(a, power_of_two):
    return [c * power_of_two for c in a]


def _div(a, b):
    if np.any(b[0] == 0):
        raise ZeroDivisorError("quad-double division by zero")
    one = _from_double(1.0 + b[0] * 0.0)
    y = _from_double(1.0 / b[0])
    # each Newton step on the reciprocal doubles the number of correct bits
    for _ in range(2):
        residual = _add(one, _neg(_mul(b, y)))
        y = _add(y, _mul(y, residual))
    q = _mul(a, y)
    correction = _add(a, _neg(_mul(b, q)))
    return _add(q, _mul(correction, y))


def _sqrt(a):
    if np.any(a[0] < 0):
        raise NegativeSqrtError("square root of a negative quad-double")
    zero = a[0] == 0
    safe = [np.where(zero, 1.0, a[0])] + [np.where(zero, 0.0, c) for c in a[1:]]
    one = _from_double(1.0 + safe[0] * 0.0)
    # Newton on 1/sqrt(a), then one correction of a * (1/sqrt(a))
    r = _from_double(1.0 / np.sqrt(safe[0]))
    for _ in range(3):
        residual = _add(one, _neg(_mul(safe, _mul(r, r))))
        r = _add(r, _scale(_mul(r, residual), 0.5))
    s = _mul(safe, r)
    residual = _add(safe, _neg(_mul(s, s)))
    s = _add(s, _scale(_mul(r, residual), 0.5))
    return [np.where(zero, 0.0, c) for c in s]


class QuadDouble(ExtendedReal):
    """
    Quad-double value or vector.

    Parameters
    ----------
    c0, c1, c2, c3 : float or numpy.ndarray
        Components by decreasing magnitude; missing trailing components are zero
    """

    __slots__ = ()

    COMPONENTS = 4

    c0 = property(lambda self: self._c[0])
    c1 = property(lambda self: self._c[1])
    c2 = property(lambda self: self._c[2])
    c3 = property(lambda self: self._c[3])

    @classmethod
    def _add(cls, a, b):
        return cls.from_components(_add(a, b))

    @classmethod
    def _mul(cls, a, b):
        return cls.from_components(_mul(a, b))

    @classmethod
    def _div(cls, a, b):
        return cls.from_components(_div(a, b))

    @classmethod
    def _sqrt(cls, a):
        return cls.from_components(_sqrt(a))

    def renormalize(self):
        return self.from_components(distill(list(self._c), 4))


@guarded
def qd_add(a, b):
    return QuadDouble.promote(a) + b


@guarded
def qd_sub(a, b):
    return QuadDouble.promote(a) - b


@guarded
def qd_mul(a, b):
    return QuadDouble.promote(a) * b


@guarded
def qd_div(a, b):
    return QuadDouble.promote(a) / b


@guarded
def qd_sqrt(a):
    return QuadDouble.promote(a).sqrt()
