"""
Error-free transformations of hardware doubles.

All functions accept numpy scalars or arrays and work element-wise: one ufunc per IEEE operation, so the result of an
element never depends on how many elements are processed together.
"""
import contextlib
import functools
import logging

import numpy as np

from .. import settings
from ..exceptions import ImproperlyConfigured, PrecisionOverflowError

try:
    import pyfma
except ImportError:  # pragma: no cover - optional extra
    pyfma = None

logger = logging.getLogger(__name__)

SPLITTER = 134217729.0  # 2**27 + 1
SPLIT_THRESHOLD = 2.0 ** 996
_SPLIT_DOWN = 2.0 ** -28


@contextlib.contextmanager
def arithmetic_guard():
    """
    Turn floating-point overflow and invalid operations into `PrecisionOverflowError`.

    Underflow stays silent: error terms are allowed to become subnormal. The numpy error state is per thread, so every
    worker entering arithmetic has to open its own guard.
    """
    with np.errstate(over='raise', invalid='raise', divide='raise', under='ignore'):
        try:
            yield
        except FloatingPointError as fpe:
            raise PrecisionOverflowError("floating-point exception: {}".format(fpe)) from None


def guarded(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        with arithmetic_guard():
            return func(*args, **kwargs)

    return wrapper


def quick_two_sum(a, b):
    """
    Sum of `a` and `b` with its rounding error, assuming ``|a| >= |b|`` or ``a == 0``.

    Returns
    -------
    s : float or numpy.ndarray
        fl(a + b)
    err : float or numpy.ndarray
        a + b - s, exactly
    """
    s = a + b
    return s, b - (s - a)


def two_sum(a, b):
    """
    Sum of `a` and `b` with its rounding error, for any ordering of magnitudes.

    Returns
    -------
    s : float or numpy.ndarray
        fl(a + b)
    err : float or numpy.ndarray
        a + b - s, exactly
    """
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def split(a):
    """
    Dekker's splitting of `a` into two halves of at most 26 significant bits each, ``a == hi + lo``.

    Values beyond 2**996 are scaled down first so that the splitter does not overflow.
    """
    big = np.abs(a) > SPLIT_THRESHOLD
    if np.any(big):
        scale = np.where(big, _SPLIT_DOWN, 1.0)
        scaled = a * scale
        t = SPLITTER * scaled
        hi = t - (t - scaled)
        lo = scaled - hi
        return hi / scale, lo / scale
    t = SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod_dekker(a, b):
    """Product of `a` and `b` with its exact rounding error, using Dekker's splitting."""
    p = a * b
    a_hi, a_lo = split(a)
    b_hi, b_lo = split(b)
    err = ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo
    return p, err


def two_prod_fma(a, b):
    """Product of `a` and `b` with its exact rounding error, using a fused multiply-add."""
    p = a * b
    err = pyfma.fma(a, b, -p)
    if np.ndim(err) == 0:
        err = np.float64(err)
    return p, err


def _select_two_prod(choice):
    if choice == 'fma':
        if pyfma is None:
            raise ImproperlyConfigured("two_prod=fma requires the pyfma package")
        return two_prod_fma
    if choice == 'auto' and pyfma is not None:
        return two_prod_fma
    return two_prod_dekker


two_prod = _select_two_prod(settings.TWO_PROD)
logger.debug("two_prod uses {}".format(two_prod.__name__))


def vec_sum(terms):
    """
    One bottom-up error-free summation sweep.

    The first entry of the result holds the rounded sum of all terms, the others hold the rounding errors of the
    sweep, so the exact total is preserved.

    Parameters
    ----------
    terms : list
        Doubles (or arrays of doubles), ordered by roughly decreasing magnitude

    Returns
    -------
    list
    """
    out = list(terms)
    s = out[-1]
    for i in range(len(out) - 2, -1, -1):
        s, out[i + 1] = two_sum(out[i], s)
    out[0] = s
    return out


def distill(terms, count, sweeps=3):
    """
    Round the exact sum of `terms` to `count` components, greedily.

    Each component is the rounded total of the remaining exact expansion after `sweeps` error-free sweeps; the
    sweeps only move error terms around, so what is left after extracting a component is exactly the remainder.

    Parameters
    ----------
    terms : list
    count : int
        Number of components to produce
    sweeps : int

    Returns
    -------
    list
        `count` components, normalized with `renormalize_components`
    """
    terms = list(terms)
    components = []
    for _ in range(count):
        if len(terms) > 1:
            for _ in range(sweeps):
                terms = vec_sum(terms)
        components.append(terms[0])
        terms = terms[1:] or [terms[0] * 0.0]
    return renormalize_components(components)


def renormalize_components(components, passes=2):
    """
    Top-down passes of `quick_two_sum` so that every component is at most half an ulp of the previous one.

    The value is preserved exactly.
    """
    c = list(components)
    for _ in range(passes):
        for i in range(len(c) - 1):
            c[i], c[i + 1] = quick_two_sum(c[i], c[i + 1])
    return c
