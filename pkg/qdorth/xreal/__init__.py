"""
Extended-precision reals.

Double precision is plain numpy float64; `DoubleDouble` and `QuadDouble` are element-wise vectors (or scalars) of
unevaluated sums of doubles. The helpers below treat the three kinds alike.
"""
import numpy as np

from ..exceptions import NegativeSqrtError
from .base import ExtendedReal
from .dd import DoubleDouble, dd_add, dd_div, dd_mul, dd_sqrt, dd_sub
from .eft import arithmetic_guard, quick_two_sum, split, two_prod, two_prod_dekker, two_sum
from .qd import QuadDouble, qd_add, qd_div, qd_mul, qd_sqrt, qd_sub
from .serial import exact_value, from_hex, parse_decimal, to_decimal_string, to_hex

__all__ = [
    'DoubleDouble', 'QuadDouble', 'ExtendedReal',
    'two_sum', 'quick_two_sum', 'two_prod', 'two_prod_dekker', 'split', 'arithmetic_guard',
    'dd_add', 'dd_sub', 'dd_mul', 'dd_div', 'dd_sqrt',
    'qd_add', 'qd_sub', 'qd_mul', 'qd_div', 'qd_sqrt',
    'to_decimal_string', 'parse_decimal', 'to_hex', 'from_hex', 'exact_value',
    'renormalize', 'leading', 'where', 'sqrt', 'padded', 'copy', 'bitwise_equal', 'to_dd', 'to_qd', 'to_double',
]


def renormalize(x):
    if isinstance(x, ExtendedReal):
        return x.renormalize()
    return x


def leading(x):
    """Double approximation of `x`, exact for doubles."""
    if isinstance(x, ExtendedReal):
        return x.leading
    return x


def where(mask, a, b):
    if isinstance(a, ExtendedReal):
        return type(a).where(mask, a, b)
    return np.where(mask, a, b)


def sqrt(x):
    if isinstance(x, ExtendedReal):
        return x.sqrt()
    if np.any(x < 0):
        raise NegativeSqrtError("square root of a negative double")
    return np.sqrt(x)


def padded(x, size):
    """`x` extended along the first axis with exact zeros to `size` rows."""
    if isinstance(x, ExtendedReal):
        return x.padded(size)
    return np.concatenate((x, np.zeros((size - len(x),) + x.shape[1:])))


def copy(x):
    if isinstance(x, ExtendedReal):
        return x.copy()
    return np.copy(x)


def bitwise_equal(a, b):
    if isinstance(a, ExtendedReal):
        return a.bitwise_equal(b)
    if isinstance(b, ExtendedReal):
        return False
    return np.array_equal(np.asarray(a, dtype=np.float64).view(np.uint64),
                          np.asarray(b, dtype=np.float64).view(np.uint64))


def to_dd(x):
    """Convert a double or quad-double to double-double; exact from doubles."""
    if isinstance(x, DoubleDouble):
        return x
    if isinstance(x, QuadDouble):
        c = x.components
        hi, lo = two_sum(c[0], c[1] + c[2])
        return DoubleDouble.from_components(quick_two_sum(hi, lo))
    return DoubleDouble(x)


def to_qd(x):
    """Convert a double or double-double to quad-double, exactly."""
    if isinstance(x, QuadDouble):
        return x
    if isinstance(x, DoubleDouble):
        return QuadDouble(x.hi, x.lo)
    return QuadDouble(x)


def to_double(x):
    if isinstance(x, ExtendedReal):
        return x.leading
    return np.asarray(x, dtype=np.float64) if isinstance(x, np.ndarray) else np.float64(x)
