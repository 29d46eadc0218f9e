"""
Column-major complex matrices and their file format.

A matrix file is plain text: a header line ``m n precision`` followed by the m*n entries in column-major order, one
entry per line, each entry the hex floats of the components of its real part followed by those of its imaginary
part. Lines starting with ``#`` are comments.
"""
import logging
import os
import tempfile

import numpy as np

from . import xreal
from .cfield import Complex, astype
from .exceptions import DimensionMismatchError, MatrixFormatError
from .precision import EPrecision

logger = logging.getLogger(__name__)


class ColMatrix(object):
    """
    An m-by-n complex matrix, stored column-major.

    `data` is one `Complex` whose components are m-by-n arrays; column k is the CVector ``data[:, k]``, a view into
    the storage, so a whole block of columns can be updated by one element-wise operation.

    Parameters
    ----------
    data : Complex
        Components of shape (m, n)
    precision : EPrecision, optional
        Deduced from `data` by default
    """

    def __init__(self, data, precision=None):
        if data.ndim != 2:
            raise DimensionMismatchError("matrix storage must be 2-d, got {} dimensions".format(data.ndim))
        m, n = np.shape(xreal.leading(data.re))
        if m < 1 or n < 1:
            raise DimensionMismatchError("a matrix needs at least one row and one column, got {}x{}".format(m, n))
        self.data = data
        self.precision = precision or data.precision

    @property
    def m(self):
        return np.shape(xreal.leading(self.data.re))[0]

    @property
    def n(self):
        return np.shape(xreal.leading(self.data.re))[1]

    @property
    def shape(self):
        return self.m, self.n

    @classmethod
    def zeros(cls, m, n, precision=EPrecision.CD):
        return cls(Complex(precision.zeros((m, n)), precision.zeros((m, n))), precision)

    @classmethod
    def from_columns(cls, columns, precision=None):
        if not columns:
            raise DimensionMismatchError("a matrix needs at least one column")
        precision = precision or columns[0].precision
        m = len(columns[0])
        matrix = cls.zeros(m, len(columns), precision)
        for j, column in enumerate(columns):
            if len(column) != m:
                raise DimensionMismatchError("column {} has length {}, expected {}".format(j + 1, len(column), m))
            matrix.set_column(j, column)
        return matrix

    @classmethod
    def identity(cls, n, precision=EPrecision.CD, m=None):
        matrix = cls.zeros(m or n, n, precision)
        for k in range(n):
            matrix.set_entry(k, k, Complex(precision.from_float(1.0)))
        return matrix

    @classmethod
    def from_array(cls, array, precision=EPrecision.CD):
        """Matrix from a 2-d numpy array of complex (or real) doubles, widened exactly."""
        array = np.asarray(array, dtype=np.complex128)
        if array.ndim != 2:
            raise DimensionMismatchError("expected a 2-d array, got shape {}".format(array.shape))
        return cls(Complex(precision.from_float(np.array(array.real)), precision.from_float(np.array(array.imag))),
                   precision)

    def to_array(self):
        """Leading-component approximation as a numpy complex array."""
        return self.data.to_complex128()

    def column(self, j):
        return self.data[:, j]

    @property
    def columns(self):
        return [self.column(j) for j in range(self.n)]

    def set_column(self, j, column):
        self.data[:, j] = column

    def block(self, start, stop=None):
        """Columns `start` to `stop` (excluded) as a view."""
        return self.data[:, start:stop]

    def set_block(self, start, stop, values):
        self.data[:, start:stop] = values

    def entry(self, i, j):
        return self.data[i, j]

    def set_entry(self, i, j, value):
        self.data[i, j] = value

    def copy(self):
        return ColMatrix(self.data.copy(), self.precision)

    def astype(self, precision):
        return ColMatrix(astype(self.data, precision), precision)

    def augmented(self, b):
        """The matrix ``[A b]`` with the CVector `b` as an extra last column."""
        if len(b) != self.m:
            raise DimensionMismatchError("right-hand side of length {} for {} rows".format(len(b), self.m))
        matrix = ColMatrix.zeros(self.m, self.n + 1, self.precision)
        matrix.set_block(0, self.n, self.data)
        matrix.set_column(self.n, b)
        return matrix

    def leading_block(self, rows, cols):
        return ColMatrix(self.data[:rows, :cols].copy(), self.precision)

    def bitwise_equal(self, other):
        return (self.shape == other.shape and self.precision is other.precision
                and self.data.bitwise_equal(other.data))

    def __repr__(self):
        return '<ColMatrix {}x{} {}>'.format(self.m, self.n, self.precision)


class QRFactors(object):
    """
    Q and R of ``A = QR``.

    Q is m-by-n with orthonormal columns, R is n-by-n upper triangular with a real positive diagonal. Entries of R
    below the diagonal are zero and never touched.
    """

    def __init__(self, Q, R):
        if R.m != R.n or R.n != Q.n:
            raise DimensionMismatchError("R must be {0}x{0}, got {1}x{2}".format(Q.n, R.m, R.n))
        self.Q = Q
        self.R = R

    @property
    def precision(self):
        return self.Q.precision

    def diagonal(self):
        return [self.R.entry(k, k) for k in range(self.R.n)]

    def bitwise_equal(self, other):
        return self.Q.bitwise_equal(other.Q) and self.R.bitwise_equal(other.R)

    def __iter__(self):
        return iter((self.Q, self.R))


class LsqSolution(object):
    """
    Least squares solution of ``Ax = b``.

    Attributes
    ----------
    x : Complex
        CVector of length n
    residual_norm : real
        The minimal ``||b - Ax||``, zero when b lies in the range of A
    factors : QRFactors
        Factors of the augmented matrix ``[A b]``
    """

    def __init__(self, x, residual_norm, factors=None):
        self.x = x
        self.residual_norm = residual_norm
        self.factors = factors


def _format_entry(z):
    return '{} {}'.format(xreal.to_hex(z.re), xreal.to_hex(z.im))


def write_atomic(path, text):
    """Write `text` to a temporary file next to `path`, then rename it over `path`."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix='.' + os.path.basename(path), dir=directory)
    try:
        with os.fdopen(fd, 'w') as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_matrix(A):
    lines = ['{} {} {}'.format(A.m, A.n, A.precision.tag)]
    for column in A.columns:
        lines.extend(_format_entry(column[i]) for i in range(A.m))
    return '\n'.join(lines) + '\n'


def write_matrix(path, A):
    """Write `A` to `path`, atomically."""
    write_atomic(path, format_matrix(A))
    logger.debug("Wrote {} to {}".format(A, path))


def write_vector(path, v):
    write_matrix(path, ColMatrix.from_columns([v]))


def parse_matrix(text, path=None):
    """
    Parse the matrix file format.

    Raises
    ------
    MatrixFormatError
        With the line number of the offending line
    """
    lines = [(number, line.strip()) for number, line in enumerate(text.splitlines(), 1)]
    lines = [(number, line) for number, line in lines if line and not line.startswith('#')]
    if not lines:
        raise MatrixFormatError("empty matrix file", path)
    number, header = lines[0]
    fields = header.split()
    if len(fields) != 3:
        raise MatrixFormatError("header must be 'm n precision', got {!r}".format(header), path, number)
    try:
        m, n = int(fields[0]), int(fields[1])
        precision = EPrecision.parse(fields[2])
    except ValueError as e:
        raise MatrixFormatError(str(e), path, number) from None
    if m < 1 or n < 1 or not precision.is_complex:
        raise MatrixFormatError("invalid header {!r}".format(header), path, number)
    entries = lines[1:]
    if len(entries) != m * n:
        raise MatrixFormatError("expected {} entries, found {}".format(m * n, len(entries)), path,
                                entries[-1][0] if entries else number)
    width = precision.components
    re = np.empty((width, m * n))
    im = np.empty((width, m * n))
    for index, (number, line) in enumerate(entries):
        fields = line.split()
        if len(fields) != 2 * width:
            raise MatrixFormatError("expected {} hex floats, got {}".format(2 * width, len(fields)), path, number)
        try:
            values = [float.fromhex(f) for f in fields]
        except ValueError:
            raise MatrixFormatError("malformed hex float in {!r}".format(line), path, number) from None
        if not all(np.isfinite(values)):
            raise MatrixFormatError("non-finite entry {!r}".format(line), path, number)
        re[:, index] = values[:width]
        im[:, index] = values[width:]
    return ColMatrix(Complex(_real(precision, re, m, n), _real(precision, im, m, n)), precision)


def _real(precision, rows, m, n):
    # entry i of column j is at j * m + i
    rows = [np.ascontiguousarray(row.reshape(n, m).T) for row in rows]
    if precision.real_type is None:
        return rows[0]
    return precision.real_type.from_components(rows)


def read_matrix(path):
    with open(path) as handle:
        text = handle.read()
    A = parse_matrix(text, path)
    logger.debug("Read {} from {}".format(A, path))
    return A


def read_vector(path):
    A = read_matrix(path)
    if A.n != 1:
        raise MatrixFormatError("expected a single column, got {} columns".format(A.n), path, 1)
    return A.column(0).copy()
