"""
Double-double arithmetic: a real carried as ``hi + lo`` with ``|lo| <= ulp(hi) / 2``.

Addition and multiplication are the accurate (cancellation-safe) variants, with a relative error close to 2**-106.
"""
import numpy as np

from ..exceptions import NegativeSqrtError, ZeroDivisorError
from .base import ExtendedReal
from .eft import guarded, quick_two_sum, two_prod, two_sum


def _add(a, b):
    s, e = two_sum(a[0], b[0])
    t, f = two_sum(a[1], b[1])
    s, e = quick_two_sum(s, e + t)
    return quick_two_sum(s, e + f)


def _mul(a, b):
    p0, e0 = two_prod(a[0], b[0])
    p1, e1 = two_prod(a[0], b[1])
    p2, e2 = two_prod(a[1], b[0])
    s1, t1 = two_sum(p1, p2)
    s2, t2 = two_sum(s1, e0)
    low = ((t1 + t2) + (e1 + e2)) + a[1] * b[1]
    hi, lo = quick_two_sum(p0, s2)
    return quick_two_sum(hi, lo + low)


def _neg(a):
    return -a[0], -a[1]


def _div(a, b):
    if np.any(b[0] == 0):
        raise ZeroDivisorError("double-double division by zero")
    # Newton step on the reciprocal, seeded by the double quotient
    x = 1.0 / b[0]
    zero = x * 0.0
    residual = _add((1.0 + zero, zero), _neg(_mul(b, (x, zero))))
    y = _add((x, zero), _mul(residual, (x, zero)))
    q = _mul(a, y)
    correction = _add(a, _neg(_mul(b, q)))
    return _add(q, _mul(correction, y))


def _sqrt(a):
    if np.any(a[0] < 0):
        raise NegativeSqrtError("square root of a negative double-double")
    zero = a[0] == 0
    hi = np.where(zero, 1.0, a[0])
    lo = np.where(zero, 0.0, a[1])
    s = np.sqrt(hi)
    root = (s, s * 0.0)
    for _ in range(2):
        residual = _add((hi, lo), _neg(_mul(root, root)))
        step = residual[0] * (0.5 / root[0])
        root = _add(root, (step, step * 0.0))
    return np.where(zero, 0.0, root[0]), np.where(zero, 0.0, root[1])


class DoubleDouble(ExtendedReal):
    """
    Double-double value or vector.

    Parameters
    ----------
    hi : float or numpy.ndarray
        Leading component
    lo : float or numpy.ndarray, optional
        Trailing component, zero by default
    """

    __slots__ = ()

    COMPONENTS = 2

    @property
    def hi(self):
        return self._c[0]

    @property
    def lo(self):
        return self._c[1]

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
        return self.from_components(quick_two_sum(*two_sum(self._c[0], self._c[1])))


@guarded
def dd_add(a, b):
    return DoubleDouble.promote(a) + b


@guarded
def dd_sub(a, b):
    return DoubleDouble.promote(a) - b


@guarded
def dd_mul(a, b):
    return DoubleDouble.promote(a) * b


@guarded
def dd_div(a, b):
    return DoubleDouble.promote(a) / b


@guarded
def dd_sqrt(a):
    return DoubleDouble.promote(a).sqrt()
