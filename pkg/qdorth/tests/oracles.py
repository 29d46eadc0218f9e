"""
Independent reference computations for the test suite.

Nothing here is used by the library: exact dyadic arithmetic on python integers, a Householder QR in numpy complex
doubles, Cramer's rule and normal equations solved exactly over fractions.
"""
import os
from fractions import Fraction

import mpmath
import numpy as np

SCALE = float(os.environ.get('QDORTH_TEST_SCALE', '1'))
"""
Multiplier of sample sizes and trial counts of the long running tests.
"""


def scaled(count, minimum=1):
    return max(minimum, int(count * SCALE))


class ExactDyadic(object):
    """
    ``mantissa * 2**exponent`` with a python integer mantissa: every finite double, and every finite sum or product
    of doubles, exactly.
    """

    __slots__ = ('mantissa', 'exponent')

    def __init__(self, mantissa, exponent=0):
        self.mantissa = int(mantissa)
        self.exponent = int(exponent)

    @classmethod
    def from_float(cls, x):
        x = float(x)
        if not np.isfinite(x):
            raise ValueError("not a finite double: {}".format(x))
        numerator, denominator = x.as_integer_ratio()
        return cls(numerator, -(denominator.bit_length() - 1))

    @classmethod
    def sum_of(cls, values):
        total = cls(0)
        for v in values:
            total = total + cls.from_float(v)
        return total

    def _aligned(self, other):
        exponent = min(self.exponent, other.exponent)
        return (self.mantissa << (self.exponent - exponent), other.mantissa << (other.exponent - exponent), exponent)

    def __add__(self, other):
        a, b, exponent = self._aligned(other)
        return ExactDyadic(a + b, exponent)

    def __neg__(self):
        return ExactDyadic(-self.mantissa, self.exponent)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return ExactDyadic(self.mantissa * other.mantissa, self.exponent + other.exponent)

    def __eq__(self, other):
        a, b, _ = self._aligned(other)
        return a == b

    def __hash__(self):
        return hash(self.to_fraction())

    def is_zero(self):
        return self.mantissa == 0

    def to_fraction(self):
        if self.exponent >= 0:
            return Fraction(self.mantissa << self.exponent)
        return Fraction(self.mantissa, 1 << -self.exponent)

    def relative_error(self, approx):
        """``|approx - self| / |self|`` of an ExactDyadic approximation, as a float."""
        if self.is_zero():
            return float(abs(approx.to_fraction()))
        return float(abs((approx - self).to_fraction()) / abs(self.to_fraction()))

    def __repr__(self):
        return 'ExactDyadic({}, {})'.format(self.mantissa, self.exponent)


def exact_components(x, index=None):
    """ExactDyadic sum of the components of a double-double or quad-double (or of its entry `index`)."""
    components = getattr(x, 'components', (x,))
    if index is not None:
        components = [c[index] for c in components]
    return ExactDyadic.sum_of(components)


def mp_value(x, index=None):
    """Exact component sum as an mpmath number, rounded to the working precision of mpmath."""
    exact = exact_components(x, index).to_fraction()
    return mpmath.mpf(exact.numerator) / exact.denominator


def householder_qr(A):
    """
    Thin QR of a complex numpy matrix by Householder reflections.

    Returns
    -------
    Q : numpy.ndarray
        m-by-n with orthonormal columns
    R : numpy.ndarray
        n-by-n upper triangular
    """
    A = np.array(A, dtype=np.complex128)
    m, n = A.shape
    R = A.copy()
    Q = np.eye(m, dtype=np.complex128)
    for k in range(n):
        x = R[k:, k]
        norm = np.sqrt(np.sum(np.abs(x) ** 2))
        if norm == 0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * norm
        v /= np.sqrt(np.sum(np.abs(v) ** 2))
        R[k:, :] -= 2.0 * np.outer(v, v.conj() @ R[k:, :])
        Q[:, k:] -= 2.0 * np.outer(Q[:, k:] @ v, v.conj())
    return Q[:, :n], np.triu(R[:n, :])


def cramer_2x2(A, b):
    """Solution of a 2-by-2 complex system by Cramer's rule."""
    (a, c), (d, e) = A
    determinant = a * e - c * d
    return np.array([(b[0] * e - c * b[1]) / determinant, (a * b[1] - d * b[0]) / determinant])


def exact_normal_equations(A, b):
    """
    Least squares solution of a real system from ``A^T A x = A^T b``, solved exactly over fractions.

    Returns
    -------
    list of Fraction
    """
    A = [[Fraction(float(v)) for v in row] for row in np.asarray(A, dtype=np.float64)]
    b = [Fraction(float(v)) for v in np.asarray(b, dtype=np.float64)]
    m, n = len(A), len(A[0])
    G = [[sum(A[k][i] * A[k][j] for k in range(m)) for j in range(n)] + [sum(A[k][i] * b[k] for k in range(m))]
         for i in range(n)]
    for col in range(n):
        pivot = next(row for row in range(col, n) if G[row][col] != 0)
        G[col], G[pivot] = G[pivot], G[col]
        for row in range(n):
            if row != col and G[row][col] != 0:
                factor = G[row][col] / G[col][col]
                G[row] = [x - factor * y for x, y in zip(G[row], G[col])]
    return [G[i][n] / G[i][i] for i in range(n)]
