"""
Modified Gram-Schmidt QR and least squares, sequential reference path.

The column kernels `normalize_column` and `remove_projection` are shared with `qdorth.parexec`. Here a round updates
all columns j > k with one element-wise operation on the block of columns; the parallel executor applies the same
kernel to one column per task. Element by element both perform the very same operations, so they agree bitwise.
"""
import logging

import numpy as np

from . import xreal
from .cfield import Complex, cdiv, czeros
from .exceptions import Breakdown, DimensionMismatchError, ZeroDivisorError
from .matrix import ColMatrix, LsqSolution, QRFactors
from .reduction import conj_products, tree_reduce, tree_reduce_dot
from .xreal import arithmetic_guard

logger = logging.getLogger(__name__)


def column_norms(columns):
    """2-norm of a CVector, or of every column of a block, in its own precision."""
    return xreal.sqrt(tree_reduce(conj_products(columns, columns)).re)


def breakdown_thresholds(A, augmented=False):
    """
    Breakdown threshold of every column of `A`: ``m * eps * max_k ||a_k||``.

    For an augmented ``[A b]`` the maximum runs over the columns of A only, and the last column is compared with
    ``m * eps * ||b||``: a breakdown there means b lies in the range of A.

    Returns
    -------
    list of float
    """
    norms = xreal.leading(column_norms(A.data))
    scale = A.m * A.precision.eps
    if not augmented:
        return [scale * float(np.max(norms))] * A.n
    return [scale * float(np.max(norms[:-1]))] * (A.n - 1) + [scale * float(norms[-1])]


def is_breakdown(pivot_norm, threshold):
    return pivot_norm < threshold or pivot_norm == 0


def normalize_column(column, k, threshold, tolerate=False):
    """
    Pivot norm ``r_kk = sqrt(Re(a_k^H a_k))`` and the normalized column ``a_k / r_kk``.

    Parameters
    ----------
    column : Complex
        The reduced column a_k
    k : int
        0-based column index, reported 1-based on breakdown
    threshold : float
    tolerate : bool
        Return a zero column instead of raising `Breakdown`; used for the last column of an augmented system

    Returns
    -------
    r_kk : Complex
    q_k : Complex
    """
    norm = column_norms(column)
    lead = float(xreal.leading(norm))
    if is_breakdown(lead, threshold):
        if tolerate:
            return Complex(norm), czeros(len(column), column.precision)
        raise Breakdown(k + 1, lead, threshold)
    return Complex(norm), Complex(column.re / norm, column.im / norm)


def remove_projection(q, target):
    """
    ``r = q^H a`` and the updated ``a - q r``, for one column a or for every column of a block.
    """
    if target.ndim == 2:
        q = q[:, None]
    r = tree_reduce(conj_products(q, target))
    return r, target - q * r


def mgs_qr(A, overwrite=False):
    """
    QR factorization of `A` by modified Gram-Schmidt.

    Parameters
    ----------
    A : ColMatrix
        m-by-n with m >= n
    overwrite : bool
        Store Q in the columns of `A`

    Returns
    -------
    QRFactors

    Raises
    ------
    Breakdown
        A pivot norm falls below its `breakdown_thresholds` entry
    """
    if A.m < A.n:
        raise DimensionMismatchError("mgs_qr needs m >= n, got {}x{}".format(A.m, A.n))
    with arithmetic_guard():
        return _mgs(A, overwrite)[0]


def _mgs(A, overwrite=False, tolerate_last=False):
    Q = A if overwrite else A.copy()
    n = Q.n
    R = ColMatrix.zeros(n, n, Q.precision)
    thresholds = breakdown_thresholds(Q, augmented=tolerate_last)
    for k in range(n):
        r_kk, q = normalize_column(Q.column(k), k, thresholds[k], tolerate_last and k == n - 1)
        Q.set_column(k, q)
        R.set_entry(k, k, r_kk)
        if k + 1 < n:
            r, updated = remove_projection(q, Q.block(k + 1))
            Q.set_block(k + 1, n, updated)
            R.data[k, k + 1:] = r
    return QRFactors(Q, R), thresholds[-1]


def check_triangular(R, y):
    if R.m != R.n:
        raise DimensionMismatchError("R must be square, got {}x{}".format(R.m, R.n))
    if len(y) != R.n:
        raise DimensionMismatchError("right-hand side of length {} for order {}".format(len(y), R.n))
    diagonal = R.data[np.arange(R.n), np.arange(R.n)]
    zero = (xreal.leading(diagonal.re) == 0) & (xreal.leading(diagonal.im) == 0)
    if np.any(zero):
        raise ZeroDivisorError("zero diagonal entry r[{0},{0}]".format(int(np.argmax(zero)) + 1))


def divide_pivot(y_k, r_kk):
    return cdiv(y_k, r_kk)


def eliminate(y_head, r_head, x_k):
    """``y_j - r_jk x_k`` for a block of rows j."""
    return y_head - r_head * x_k


def back_substitute(R, y):
    """
    Solve the upper triangular ``Rx = y`` column by column.

    For k from n down to 1, ``x_k = y_k / r_kk`` and every ``y_j`` with j < k loses ``r_jk x_k``.

    Raises
    ------
    ZeroDivisorError
        A diagonal entry of `R` is zero
    """
    check_triangular(R, y)
    with arithmetic_guard():
        y = y.copy()
        x = czeros(R.n, R.precision)
        for k in range(R.n - 1, -1, -1):
            x[k] = divide_pivot(y[k], R.entry(k, k))
            if k:
                y[:k] = eliminate(y[:k], R.data[:k, k], x[k])
    return x


def solution_from_factors(factors, n, final_breakdown, back_substitute_fn):
    R = factors.R
    y = R.data[:n, n].copy()
    z = R.entry(n, n).re
    if final_breakdown:
        z = z * 0.0
    x = back_substitute_fn(R.leading_block(n, n), y)
    return LsqSolution(x, z, factors)


def lsq_solve(A, b):
    """
    Least squares solution of ``Ax = b`` from the QR factorization of ``[A b]``.

    The first n entries of the last column of R are ``y = Q^H b``, its last entry is the residual norm z and
    ``x = R^-1 y``. A breakdown on the last column means b lies in the range of A: the residual norm is zero.

    Returns
    -------
    LsqSolution

    Raises
    ------
    Breakdown
        On a column of A
    """
    if A.m < A.n:
        raise DimensionMismatchError("lsq_solve needs m >= n, got {}x{}".format(A.m, A.n))
    augmented = A.augmented(b)
    with arithmetic_guard():
        factors, threshold = _mgs(augmented, overwrite=True, tolerate_last=True)
    final_breakdown = is_breakdown(float(xreal.leading(factors.R.entry(A.n, A.n).re)), threshold)
    if final_breakdown:
        logger.debug("right-hand side lies in the range of A, residual norm is zero")
    return solution_from_factors(factors, A.n, final_breakdown, back_substitute)


def _modulus_max(values):
    """Largest modulus of the entries of a complex vector or block, as a float."""
    moduli = xreal.sqrt(values.cabs2())
    return float(np.max(xreal.leading(moduli)))


def residual_max_entry(A, Q, R, check_precision='working'):
    """
    ``max_ij |a_ij - sum_{l <= min(j, n)} q_il r_lj|``, the largest entry of ``A - QR`` in modulus.

    Parameters
    ----------
    A, Q, R : ColMatrix
    check_precision : {'working', 'next'}
        Accumulate in the precision of the factors, or one precision up

    Returns
    -------
    float
    """
    if Q.shape != A.shape or R.shape != (A.n, A.n):
        raise DimensionMismatchError("shapes {}, {} and {} do not form A = QR".format(A.shape, Q.shape, R.shape))
    if check_precision == 'next':
        precision = A.precision.next
        A, Q, R = A.astype(precision), Q.astype(precision), R.astype(precision)
    elif check_precision != 'working':
        raise ValueError("check_precision must be 'working' or 'next', got {!r}".format(check_precision))
    with arithmetic_guard():
        difference = A.data.copy()
        for k in range(A.n):
            # column j >= k loses q_k r_kj
            difference[:, k:] = difference[:, k:] - Q.data[:, k:k + 1] * R.data[k, k:]
        return _modulus_max(difference)


def orthogonality_defect(Q):
    """``max_ij |q_i^H q_j - delta_ij|``, as a float."""
    with arithmetic_guard():
        largest = 0.0
        for i in range(Q.n):
            gram = tree_reduce(conj_products(Q.data[:, i:i + 1], Q.block(i)))
            gram[0] = gram[0] - 1.0
            largest = max(largest, _modulus_max(gram))
    return largest


def pythagoras_defect(A, b, solution):
    """
    Relative defect of ``||b - Ax||^2 = ||Rx - y||^2 + z^2`` for a least squares solution.

    Returns
    -------
    float
    """
    n = A.n
    R = solution.factors.R
    x = solution.x
    with arithmetic_guard():
        residual = b
        reduced = -R.data[:n, n]
        for k in range(n):
            residual = residual - A.column(k) * x[k]
            reduced = reduced + R.data[:n, k] * x[k]
        lhs = tree_reduce(residual.cabs2())
        rhs = tree_reduce(reduced.cabs2()) + solution.residual_norm * solution.residual_norm
        scale = max(float(xreal.leading(lhs)), float(xreal.leading(rhs)))
        if scale == 0:
            return 0.0
        return abs(float(xreal.to_double(lhs - rhs))) / scale


def real_mgs_qr(A):
    """
    Modified Gram-Schmidt on a real float64 array, the baseline of the timing benchmarks.

    Returns
    -------
    Q, R : numpy.ndarray
    """
    Q = np.array(A, dtype=np.float64)
    m, n = Q.shape
    if m < n:
        raise DimensionMismatchError("real_mgs_qr needs m >= n, got {}x{}".format(m, n))
    R = np.zeros((n, n))
    with arithmetic_guard():
        for k in range(n):
            column = Q[:, k]
            R[k, k] = np.sqrt(tree_reduce_dot(column, column))
            if R[k, k] == 0:
                raise Breakdown(k + 1)
            Q[:, k] = column / R[k, k]
            if k + 1 < n:
                R[k, k + 1:] = tree_reduce_dot(Q[:, k:k + 1], Q[:, k + 1:])
                Q[:, k + 1:] = Q[:, k + 1:] - Q[:, k:k + 1] * R[k, k + 1:]
    return Q, R
