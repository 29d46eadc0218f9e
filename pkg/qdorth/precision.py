from enum import Enum, unique

import numpy as np

from . import xreal
from .xreal import DoubleDouble, QuadDouble


@unique
class EPrecision(Enum):
    """
    Working precisions, selected at runtime by their tag.

    The real double ``d`` is only the baseline of the timing benchmarks; the factorizations run over the complex
    precisions ``cd``, ``cdd`` and ``cqd``.
    """

    D = ('d', 'real double', 53, None)
    CD = ('cd', 'complex double', 53, None)
    CDD = ('cdd', 'complex double double', 106, DoubleDouble)
    CQD = ('cqd', 'complex quad double', 212, QuadDouble)

    def __new__(cls, tag, label, bits, real_type):
        obj = object.__new__(cls)
        obj._value_ = tag
        obj.label = label
        obj.bits = bits
        obj.real_type = real_type
        return obj

    @classmethod
    def choices(cls):
        return tuple((p.value, p.label) for p in cls)

    @classmethod
    def complex_precisions(cls):
        return cls.CD, cls.CDD, cls.CQD

    @classmethod
    def parse(cls, tag):
        try:
            return cls(tag)
        except ValueError:
            raise ValueError("unknown precision {!r}, expected one of {}".format(
                tag, ', '.join(p.value for p in cls))) from None

    @classmethod
    def of(cls, value):
        """Complex precision of a real value or vector."""
        if isinstance(value, QuadDouble):
            return cls.CQD
        if isinstance(value, DoubleDouble):
            return cls.CDD
        return cls.CD

    @property
    def tag(self):
        return self.value

    @property
    def is_complex(self):
        return self is not EPrecision.D

    @property
    def digits(self):
        """Whole decimal digits carried, floor(bits * log10(2))"""
        return int(self.bits * np.log10(2.0))

    @property
    def eps(self):
        """Unit roundoff"""
        return 2.0 ** -self.bits

    @property
    def components(self):
        return 1 if self.real_type is None else self.real_type.COMPONENTS

    @property
    def next(self):
        """The next precision up; quad double is the last."""
        return {EPrecision.D: EPrecision.CD, EPrecision.CD: EPrecision.CDD}.get(self, EPrecision.CQD)

    def zeros(self, shape=()):
        if self.real_type is None:
            return np.zeros(shape) if shape != () else np.float64(0.0)
        return self.real_type.zeros(shape)

    def from_float(self, x):
        """Exact widening of doubles to this precision."""
        if self.real_type is None:
            return np.asarray(x, dtype=np.float64) if isinstance(x, np.ndarray) else np.float64(x)
        return self.real_type(x)

    def convert(self, x):
        """`x` in this precision: exact when widening, rounded when narrowing."""
        if self.real_type is None:
            return xreal.to_double(x)
        if self.real_type is DoubleDouble:
            return xreal.to_dd(x)
        return xreal.to_qd(x)

    def __str__(self):
        return self.value
