"""
Text forms of extended reals.

Decimal strings are for people, hex floats for bit-exact persistence.
"""
import mpmath
import numpy as np

from .dd import DoubleDouble
from .qd import QuadDouble

DEFAULT_DIGITS = {DoubleDouble: 34, QuadDouble: 66, float: 17}
_PARSE_BITS = 400


def components(x):
    if isinstance(x, (DoubleDouble, QuadDouble)):
        return x.components
    return (x,)


def exact_value(x):
    """The exact sum of the components of a scalar `x`, as an mpmath number."""
    total = mpmath.mpf(0)
    for c in components(x):
        total = mpmath.fadd(total, mpmath.mpf(float(c)), exact=True)
    return total


def to_decimal_string(x, digits=None):
    """
    Scientific decimal form of a scalar double, double-double or quad-double.

    Parameters
    ----------
    x : float, DoubleDouble or QuadDouble
    digits : int, optional
        Significant digits; enough to round-trip the representation by default

    Returns
    -------
    str
        e.g. ``3.3333333333333333333333333333333333e-1``; zero is ``0.0e+0``
    """
    if digits is None:
        digits = DEFAULT_DIGITS.get(type(x), 17)
    if np.ndim(components(x)[0]) != 0:
        raise TypeError("to_decimal_string expects a scalar, not a vector")
    return mpmath.nstr(exact_value(x), digits, min_fixed=0, max_fixed=0, show_zero_exponent=True)


def parse_decimal(text, kind=DoubleDouble):
    """
    Value of kind `kind` nearest to the decimal `text`, component by component.

    Raises
    ------
    ValueError
        `text` is not a decimal number
    """
    with mpmath.workprec(_PARSE_BITS):
        remainder = mpmath.mpf(text.strip())
        if not mpmath.isfinite(remainder):
            raise ValueError("not a finite number: {!r}".format(text))
        if kind is float:
            return float(remainder)
        parts = []
        for _ in range(kind.COMPONENTS):
            c = float(remainder)
            parts.append(np.float64(c))
            remainder = mpmath.fsub(remainder, c, exact=True)
    return kind.from_components(parts)


def to_hex(x):
    """Whitespace-separated hex floats of the components of a scalar, e.g. ``0x1.0p+0 0x0.0p+0``."""
    return ' '.join(float(c).hex() for c in components(x))


def from_hex(text, kind=DoubleDouble):
    fields = text.split()
    size = getattr(kind, 'COMPONENTS', 1)
    if len(fields) != size:
        raise ValueError("expected {} hex floats, got {}".format(size, len(fields)))
    values = [np.float64(float.fromhex(f)) for f in fields]
    if kind is float:
        return values[0]
    return kind.from_components(values)
