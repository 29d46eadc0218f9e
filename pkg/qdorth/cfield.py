"""
Complex numbers and vectors over double, double-double and quad-double reals.
"""
import numpy as np

from . import xreal
from .exceptions import DimensionMismatchError, ZeroDivisorError
from .precision import EPrecision
from .reduction import tree_reduce_inner_product


class Complex(object):
    """
    A complex number, or a vector of them when the components are vectors (a CVector).

    Parameters
    ----------
    re : float, numpy.ndarray, DoubleDouble or QuadDouble
    im : same kind as `re`, optional
        Zero by default
    """

    __slots__ = ('re', 'im')

    def __init__(self, re, im=None):
        if im is None:
            im = re * 0.0
        self.re = re
        self.im = im

    @property
    def precision(self):
        return EPrecision.of(self.re)

    def __len__(self):
        return len(self.re)

    @property
    def ndim(self):
        return np.ndim(xreal.leading(self.re))

    def __getitem__(self, key):
        return Complex(self.re[key], self.im[key])

    def __setitem__(self, key, value):
        value = _promote(value)
        self.re[key] = value.re
        self.im[key] = value.im

    def copy(self):
        return Complex(xreal.copy(self.re), xreal.copy(self.im))

    def conj(self):
        return Complex(self.re, -self.im)

    def __neg__(self):
        return Complex(-self.re, -self.im)

    def __add__(self, other):
        return cadd(self, other)

    def __sub__(self, other):
        return csub(self, other)

    def __mul__(self, other):
        return cmul(self, other)

    def __truediv__(self, other):
        return cdiv(self, other)

    def scale(self, real):
        """Multiply by a real scalar or vector."""
        return Complex(self.re * real, self.im * real)

    def cabs2(self):
        """Squared modulus, a real."""
        return self.re * self.re + self.im * self.im

    def bitwise_equal(self, other):
        return xreal.bitwise_equal(self.re, other.re) and xreal.bitwise_equal(self.im, other.im)

    def to_complex128(self):
        """Leading-component approximation as numpy complex numbers."""
        return xreal.leading(self.re) + 1j * xreal.leading(self.im)

    def __repr__(self):
        return 'Complex({!r}, {!r})'.format(self.re, self.im)


def _promote(value):
    if isinstance(value, Complex):
        return value
    if isinstance(value, complex):
        return Complex(np.float64(value.real), np.float64(value.imag))
    return Complex(value)


def cadd(a, b):
    b = _promote(b)
    return Complex(a.re + b.re, a.im + b.im)


def csub(a, b):
    b = _promote(b)
    return Complex(a.re - b.re, a.im - b.im)


def cmul(a, b):
    b = _promote(b)
    return Complex(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re)


def _smith(a, c, d, ratio_of_d):
    # ratio_of_d: divide by c (|d| <= |c|); otherwise the roles of c and d are swapped
    if ratio_of_d:
        r = d / c
        den = c + d * r
        return Complex((a.re + a.im * r) / den, (a.im - a.re * r) / den)
    r = c / d
    den = d + c * r
    return Complex((a.re * r + a.im) / den, (a.im * r - a.re) / den)


def _smith_mixed(a, c, d, by_c):
    # per lane: |small| <= |big|, so r never exceeds one
    big, small = xreal.where(by_c, c, d), xreal.where(by_c, d, c)
    r = small / big
    den = big + small * r
    re = xreal.where(by_c, a.re + a.im * r, a.re * r + a.im)
    im = xreal.where(by_c, a.im - a.re * r, a.im * r - a.re)
    return Complex(re / den, im / den)


def cdiv(a, b):
    """
    Quotient `a` / `b` by Smith's algorithm, which scales by the larger part of `b` to avoid intermediate overflow.

    Raises
    ------
    ZeroDivisorError
        Some entry of `b` is zero
    """
    b = _promote(b)
    c_lead, d_lead = xreal.leading(b.re), xreal.leading(b.im)
    if np.any((c_lead == 0) & (d_lead == 0)):
        raise ZeroDivisorError("complex division by zero")
    by_c = np.abs(d_lead) <= np.abs(c_lead)
    if np.all(by_c):
        return _smith(a, b.re, b.im, True)
    if not np.any(by_c):
        return _smith(a, b.re, b.im, False)
    return _smith_mixed(a, b.re, b.im, by_c)


def inner_product(x, y):
    """Conjugated inner product of two CVectors, folded by the shared reduction tree."""
    return tree_reduce_inner_product(x, y)


def czeros(m, precision=EPrecision.CD):
    """CVector of `m` zeros."""
    return Complex(precision.zeros((m,)), precision.zeros((m,)))


def cvector(values, precision=EPrecision.CD):
    """CVector from python or numpy complex numbers, widened exactly to `precision`."""
    values = np.asarray(values, dtype=np.complex128)
    if values.ndim != 1:
        raise DimensionMismatchError("a CVector needs a 1-d sequence, got shape {}".format(values.shape))
    return Complex(precision.from_float(np.ascontiguousarray(values.real)),
                   precision.from_float(np.ascontiguousarray(values.imag)))


def astype(z, precision):
    return Complex(precision.convert(z.re), precision.convert(z.im))


def split_rng(seed, streams):
    """
    Independent generators for `streams` trials, spawned deterministically from `seed`.

    Returns
    -------
    list of numpy.random.Generator
        PCG64 bit generators
    """
    return [trial_rng(seed, stream) for stream in range(streams)]


def trial_rng(seed, *key):
    """
    The generator of the stream `key` spawned from `seed`.

    ``trial_rng(seed, i)`` is the i-th child of ``numpy.random.SeedSequence(seed).spawn``, so streams can be created
    independently of each other, on any worker.
    """
    sequence = np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(sequence))


def random_unit_complex(rng, size=None, precision=EPrecision.CD):
    """``exp(i theta)`` with theta uniform on [0, 2 pi)."""
    theta = rng.uniform(0.0, 2.0 * np.pi, size)
    return Complex(precision.from_float(np.cos(theta)), precision.from_float(np.sin(theta)))


def random_ranged_complex(rng, g, size=None, precision=EPrecision.CD, distribution='log'):
    """
    ``r exp(i theta)`` with theta uniform on [0, 2 pi) and r in [10**-g, 10**g].

    With the ``log`` distribution the exponent of r is uniform on [-g, g]; with ``linear`` r itself is uniform.
    Angles and moduli are drawn in double precision and widened exactly.
    """
    if g < 0:
        raise ValueError("magnitude range g must be non-negative, got {}".format(g))
    theta = rng.uniform(0.0, 2.0 * np.pi, size)
    if distribution == 'log':
        r = 10.0 ** rng.uniform(-g, g, size)
    elif distribution == 'linear':
        r = rng.uniform(10.0 ** -g, 10.0 ** g, size)
    else:
        raise ValueError("unknown modulus distribution {!r}".format(distribution))
    return Complex(precision.from_float(r * np.cos(theta)), precision.from_float(r * np.sin(theta)))
