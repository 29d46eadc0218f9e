import numpy as np


def as_component(value):
    """Coerce `value` to a float64 numpy scalar or array."""
    if isinstance(value, np.ndarray):
        if value.ndim == 0:
            return np.float64(value[()])
        return value.astype(np.float64, copy=False)
    if isinstance(value, (list, tuple)):
        return np.asarray(value, dtype=np.float64)
    return np.float64(value)


class ExtendedReal(object):
    """
    A real number, or a vector of them, carried as an unevaluated sum of doubles ordered by decreasing magnitude.

    Subclasses fix the number of components and implement the arithmetic. Every component is either a numpy float64
    scalar or a float64 array; all components of one value share the same shape.
    """

    __slots__ = ('_c',)

    COMPONENTS = 0
    """Number of double components"""

    def __init__(self, *components):
        if not 1 <= len(components) <= self.COMPONENTS:
            raise TypeError("{} takes 1 to {} components".format(type(self).__name__, self.COMPONENTS))
        head = as_component(components[0])
        tail = [as_component(c) for c in components[1:]]
        while len(tail) < self.COMPONENTS - 1:
            tail.append(head * 0.0)
        shape = np.shape(head)
        tail = [np.broadcast_to(c, shape).copy() if np.shape(c) != shape else c for c in tail]
        self._c = (head,) + tuple(tail)

    @classmethod
    def from_components(cls, components):
        obj = cls.__new__(cls)
        obj._c = tuple(components)
        return obj

    @classmethod
    def zeros(cls, shape=()):
        if shape == ():
            return cls.from_components([np.float64(0.0)] * cls.COMPONENTS)
        return cls.from_components([np.zeros(shape) for _ in range(cls.COMPONENTS)])

    @classmethod
    def promote(cls, value):
        if isinstance(value, cls):
            return value
        if isinstance(value, ExtendedReal):
            raise TypeError("cannot mix {} and {}".format(cls.__name__, type(value).__name__))
        return cls(value)

    @classmethod
    def where(cls, mask, a, b):
        a, b = cls.promote(a), cls.promote(b)
        return cls.from_components([np.where(mask, x, y) for x, y in zip(a._c, b._c)])

    @property
    def components(self):
        return self._c

    @property
    def leading(self):
        """The leading component, a double approximation of the value"""
        return self._c[0]

    @property
    def shape(self):
        return np.shape(self._c[0])

    def __len__(self):
        return len(self._c[0])

    def __getitem__(self, key):
        return self.from_components([c[key] for c in self._c])

    def __setitem__(self, key, value):
        value = self.promote(value)
        for mine, theirs in zip(self._c, value._c):
            mine[key] = theirs

    def copy(self):
        return self.from_components([np.copy(c) if isinstance(c, np.ndarray) else c for c in self._c])

    def padded(self, size):
        """A copy extended along the first axis with exact zeros up to `size` rows."""
        extra = size - len(self)
        return self.from_components([np.concatenate((c, np.zeros((extra,) + c.shape[1:]))) for c in self._c])

    def __neg__(self):
        return self.from_components([-c for c in self._c])

    def __abs__(self):
        return self.where(self._c[0] < 0, -self, self)

    def scale(self, power_of_two):
        """Multiply by a power of two; exact barring underflow."""
        return self.from_components([c * power_of_two for c in self._c])

    def bitwise_equal(self, other):
        if type(other) is not type(self):
            return False
        return all(np.array_equal(np.asarray(a).view(np.uint64), np.asarray(b).view(np.uint64))
                   for a, b in zip(self._c, other._c))

    def __add__(self, other):
        return self._add(self._c, self.promote(other)._c)

    def __radd__(self, other):
        return self._add(self.promote(other)._c, self._c)

    def __sub__(self, other):
        return self._add(self._c, (-self.promote(other))._c)

    def __rsub__(self, other):
        return self._add(self.promote(other)._c, (-self)._c)

    def __mul__(self, other):
        return self._mul(self._c, self.promote(other)._c)

    def __rmul__(self, other):
        return self._mul(self.promote(other)._c, self._c)

    def __truediv__(self, other):
        return self._div(self._c, self.promote(other)._c)

    def __rtruediv__(self, other):
        return self._div(self.promote(other)._c, self._c)

    def sqrt(self):
        return self._sqrt(self._c)

    def __repr__(self):
        return '{}({})'.format(type(self).__name__, ', '.join(repr(c) for c in self._c))

    @classmethod
    def _add(cls, a, b):
        raise NotImplementedError

    @classmethod
    def _mul(cls, a, b):
        raise NotImplementedError

    @classmethod
    def _div(cls, a, b):
        raise NotImplementedError

    @classmethod
    def _sqrt(cls, a):
        raise NotImplementedError
