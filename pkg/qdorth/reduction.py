"""
Fixed-order tree reduction.

The pairing schedule depends on the number of leaves only, so every caller (sequential or parallel) adds the same
numbers in the same order and obtains the same bits.
"""
import functools

from . import xreal
from .exceptions import DimensionMismatchError


class ReductionTree(object):
    """
    Reduction schedule for `leaves` values.

    The leaves are padded with exact zeros to the next power of two; each level then adds the upper half of the
    current vector to the lower half, ``v[:h] + v[h:2h]``, until one value is left.
    """

    def __init__(self, leaves):
        if leaves < 1:
            raise ValueError("a reduction tree needs at least one leaf")
        self.leaves = leaves
        self.size = 1 << (leaves - 1).bit_length()

    @classmethod
    @functools.lru_cache(maxsize=None)
    def for_leaves(cls, leaves):
        return cls(leaves)

    @property
    def levels(self):
        return self.size.bit_length() - 1

    def schedule(self):
        """Widths of the additions performed at each level, from the leaves up."""
        return [self.size >> (level + 1) for level in range(self.levels)]

    def reduce(self, values):
        if len(values) != self.leaves:
            raise DimensionMismatchError("expected {} values, got {}".format(self.leaves, len(values)))
        if self.size != self.leaves:
            values = pad(values, self.size)
        for half in self.schedule():
            values = values[:half] + values[half:2 * half]
        return values[0]

    def __repr__(self):
        return 'ReductionTree(leaves={}, levels={})'.format(self.leaves, self.levels)


def pad(values, size):
    """Extend a real or complex vector with exact zeros."""
    if hasattr(values, 're'):
        return type(values)(xreal.padded(values.re, size), xreal.padded(values.im, size))
    return xreal.padded(values, size)


def tree_reduce(values):
    return ReductionTree.for_leaves(len(values)).reduce(values)


def conj_products(x, y):
    """Element-wise ``conj(x_l) * y_l``, the leaves of an inner product."""
    if len(x) != len(y):
        raise DimensionMismatchError("inner product of vectors of lengths {} and {}".format(len(x), len(y)))
    return x.conj() * y


def tree_reduce_inner_product(x, y):
    """
    Conjugated inner product ``sum(conj(x_l) * y_l)`` of two complex vectors.

    All products are formed first, element-wise, then folded by the `ReductionTree` of their length.
    """
    return tree_reduce(conj_products(x, y))


def tree_reduce_dot(x, y):
    """Real counterpart of `tree_reduce_inner_product`."""
    if len(x) != len(y):
        raise DimensionMismatchError("dot product of vectors of lengths {} and {}".format(len(x), len(y)))
    return tree_reduce(x * y)
