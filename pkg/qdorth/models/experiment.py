import dataclasses
from enum import unique
from typing import Optional, Tuple

from .. import settings
from ..exceptions import ImproperlyConfigured
from ..precision import EPrecision
from .job import ELabelled

TABLE_G_GRID = {
    EPrecision.CD: (1, 4, 8, 12, 16),
    EPrecision.CDD: (1, 4, 8, 12, 16, 17, 20, 24, 28, 32),
    EPrecision.CQD: (17, 20, 24, 28, 32),
}
"""
Magnitude ranges of the accuracy tables, per precision.
"""


@unique
class EKind(ELabelled):
    ACCURACY = ('accuracy', 'Accuracy sweep')
    PRECISION_RULE = ('precision-rule', 'Smallest precision with 2g digits')
    OVERHEAD = ('overhead', 'Precision overhead benchmark')
    SCALING = ('scaling', 'Dimension scaling benchmark')
    SPEEDUP = ('speedup', 'Multi-worker speedup benchmark')


@dataclasses.dataclass(frozen=True)
class ExperimentConfig(object):
    """
    What to run.

    `n` is the single dimension of accuracy and overhead runs, `n_grid` the dimensions of the scaling and speedup
    benchmarks. `m` defaults to n (square matrices). Accuracy sweeps without `g` or `g_grid` cover the
    table grid of each precision. With `distribute` the trials of accuracy cells run as Celery tasks.
    """

    kind: EKind
    precisions: Tuple[EPrecision, ...] = (EPrecision.CD,)
    m: Optional[int] = None
    n: int = 32
    n_grid: Tuple[int, ...] = ()
    g: Optional[float] = None
    g_grid: Tuple[float, ...] = ()
    trials: int = settings.TRIALS
    repetitions: int = 1000
    seed: int = settings.SEED
    workers: int = settings.WORKERS
    distribution: str = 'log'
    check_precision: str = 'working'
    redundant: bool = False
    distribute: bool = False

    EKind = EKind

    def __post_init__(self):
        self.validate()

    @property
    def rows(self):
        return self.m if self.m is not None else self.n

    def rows_for(self, n):
        return max(self.m, n) if self.m is not None else n

    def grid(self, default=(1.0,)):
        """Magnitude ranges to sweep: `g_grid`, else the single `g`, else `default`."""
        if self.g_grid:
            return self.g_grid
        if self.g is not None:
            return (self.g,)
        return default

    def dimensions(self):
        return self.n_grid or (self.n,)

    def validate(self):
        if not isinstance(self.kind, EKind):
            raise ImproperlyConfigured("kind must be an EKind, got {!r}".format(self.kind))
        if not self.precisions:
            raise ImproperlyConfigured("at least one precision is required")
        if self.trials < 1:
            raise ImproperlyConfigured("trials must be at least 1, got {}".format(self.trials))
        if self.repetitions < 0:
            raise ImproperlyConfigured("repetitions must not be negative, got {}".format(self.repetitions))
        if self.workers < 1:
            raise ImproperlyConfigured("workers must be positive, got {}".format(self.workers))
        if self.n < 1:
            raise ImproperlyConfigured("n must be positive, got {}".format(self.n))
        if any(b <= a for a, b in zip(self.n_grid, self.n_grid[1:])) or any(n < 1 for n in self.n_grid):
            raise ImproperlyConfigured("n grid must be positive and strictly increasing, got {}".format(self.n_grid))
        if self.m is not None and self.m < max(self.dimensions()):
            raise ImproperlyConfigured("m = {} is smaller than n = {}".format(self.m, max(self.dimensions())))
        if any(g < 0 for g in self.grid()):
            raise ImproperlyConfigured("magnitude ranges must be non-negative, got {}".format(self.grid()))
        if self.distribution not in ('log', 'linear'):
            raise ImproperlyConfigured("distribution must be log or linear, got {!r}".format(self.distribution))
        if self.check_precision not in ('working', 'next'):
            raise ImproperlyConfigured("check precision must be working or next, got {!r}".format(
                self.check_precision))

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


@dataclasses.dataclass
class ExperimentRecord(object):
    """
    One row of a result table.

    Accuracy rows carry ``m_e = min log10(e)``, ``M_e = max log10(e)`` and ``D_e = m_e - M_e`` over the trials that
    did not break down, along with the per-trial values. Benchmark rows carry the total wall time of `reps` runs.
    """

    kind: EKind
    precision: EPrecision
    m: int
    n: int
    g: Optional[float] = None
    trials: Optional[int] = None
    exclusions: Optional[int] = None
    m_e: Optional[float] = None
    M_e: Optional[float] = None
    D_e: Optional[float] = None
    hits: Optional[int] = None
    hit_rate: Optional[float] = None
    reps: Optional[int] = None
    workers: Optional[int] = None
    wall_seconds: Optional[float] = None
    factor_vs_baseline: Optional[float] = None
    speedup: Optional[float] = None
    log_errors: Tuple[float, ...] = dataclasses.field(default=(), compare=False)

    def __post_init__(self):
        if self.m_e is not None and self.M_e is not None and self.m_e > self.M_e:
            raise ValueError("m_e = {} exceeds M_e = {}".format(self.m_e, self.M_e))
