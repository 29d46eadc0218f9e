"""
Experiments: random test instances, accuracy sweeps over the magnitude range g, timing benchmarks and their CSV tables.

Every random instance is drawn from its own generator, ``trial_rng(seed, round(1000 g), trial)``, so a cell gives the
same matrices whether its trials run here, on Celery workers or in any order, and the same matrices in every
precision.
"""
import csv
import io
import logging
import math
import time

import numpy as np

from . import settings
from .cfield import random_ranged_complex, trial_rng
from .exceptions import Breakdown, ImproperlyConfigured, PrecisionOverflowError
from .matrix import ColMatrix
from .models import EKind, ExperimentRecord, TABLE_G_GRID
from .parexec import par_lsq_solve
from .precision import EPrecision
from .qrls import mgs_qr, real_mgs_qr, residual_max_entry

logger = logging.getLogger(__name__)

PRECISION_RULE_G_GRID = (4.0, 8.0, 14.0)
SCALING_N_GRID = (16, 32, 64, 128, 256)
TABLE_FACTORS = (('cd', 7.2), ('cdd', 78.8), ('cqd', 788.3))
"""
Overhead factors of complex double, double double and quad double over real double measured on the reference machine.
"""

CSV_COLUMNS = {
    EKind.ACCURACY: ('kind', 'precision', 'm', 'n', 'g', 'trials', 'exclusions', 'm_e', 'M_e', 'D_e', 'wall_seconds'),
    EKind.PRECISION_RULE: ('kind', 'precision', 'm', 'n', 'g', 'trials', 'exclusions', 'hits', 'hit_rate',
                           'wall_seconds'),
    EKind.OVERHEAD: ('kind', 'precision', 'm', 'n', 'reps', 'wall_seconds', 'factor_vs_baseline'),
    EKind.SCALING: ('kind', 'precision', 'm', 'n', 'reps', 'wall_seconds', 'factor_vs_baseline'),
    EKind.SPEEDUP: ('kind', 'precision', 'm', 'n', 'reps', 'workers', 'wall_seconds', 'speedup'),
}
RECALIBRATION_COLUMNS = ('precision', 'factor', 'cube_root', 'dimension')

_INTEGER_FIELDS = {'m', 'n', 'trials', 'exclusions', 'hits', 'reps', 'workers'}


# ==================================================
#   INSTANCES
# ==================================================

def gen_matrix(rng, m, n, g, precision=EPrecision.CD, distribution='log'):
    """
    m-by-n matrix of `random_ranged_complex` entries, drawn row by row.

    Returns
    -------
    ColMatrix
    """
    return ColMatrix(random_ranged_complex(rng, g, (m, n), precision, distribution), precision)


def gen_rhs(rng, m, g, precision=EPrecision.CD, distribution='log'):
    """Right-hand side CVector of length `m`."""
    return random_ranged_complex(rng, g, (m,), precision, distribution)


def instance_rng(seed, g, trial):
    return trial_rng(seed, int(round(g * 1000)), trial)


# ==================================================
#   ACCURACY
# ==================================================

def trial_log_error(config, precision, g, trial):
    """
    ``log10(e)`` of one factorization, e the largest entry of ``A - QR``.

    Returns
    -------
    float or None
        None when the factorization broke down or overflowed; ``-inf`` for an exact factorization
    """
    rng = instance_rng(config.seed, g, trial)
    A = gen_matrix(rng, config.rows, config.n, g, precision, config.distribution)
    try:
        Q, R = mgs_qr(A)
        e = residual_max_entry(A, Q, R, config.check_precision)
    except (Breakdown, PrecisionOverflowError) as exc:
        logger.info("trial {} at g = {} in {} excluded: {}".format(trial, g, precision, exc))
        return None
    return math.log10(e) if e > 0 else -math.inf


def _cell_log_errors(config, precision, g):
    if not config.distribute:
        return [trial_log_error(config, precision, g, trial) for trial in range(config.trials)]
    from celery import group
    from .tasks import run_trial
    result = group(run_trial.s(config, precision, g, trial) for trial in range(config.trials)).apply_async()
    return [r.get(disable_sync_subtasks=False) for r in result.results]


def _accuracy_cell(config, precision, g):
    started = time.perf_counter()
    log_errors = _cell_log_errors(config, precision, g)
    wall = time.perf_counter() - started
    kept = tuple(v for v in log_errors if v is not None)
    record = ExperimentRecord(EKind.ACCURACY, precision, config.rows, config.n, g=g, trials=len(kept),
                              exclusions=len(log_errors) - len(kept), wall_seconds=wall, log_errors=kept)
    if kept:
        record.m_e, record.M_e = min(kept), max(kept)
        record.D_e = record.m_e - record.M_e
    logger.debug("accuracy {} g = {}: m_e = {}, M_e = {}, {} excluded".format(
        precision, g, record.m_e, record.M_e, record.exclusions))
    return record


def run_accuracy_sweep(config):
    """
    `config.trials` factorizations for every precision and magnitude range.

    Returns
    -------
    list of ExperimentRecord
        One per (precision, g), trials that broke down counted in `exclusions`
    """
    return [_accuracy_cell(config, precision, g)
            for precision in config.precisions
            for g in config.grid(TABLE_G_GRID.get(precision, (1.0,)))]


def smallest_precision(g):
    """
    The complex precision with the fewest digits that still carries at least 2g of them.

    Raises
    ------
    ImproperlyConfigured
        No precision carries 2g digits
    """
    for precision in sorted(EPrecision.complex_precisions(), key=lambda p: p.digits):
        if precision.digits >= 2 * g:
            return precision
    raise ImproperlyConfigured("no precision carries {} decimal digits".format(2 * g))


def run_precision_rule(config):
    """
    For every g, the share of trials in `smallest_precision(g)` with ``log10(e) <= -g``.

    Exclusions count as misses.
    """
    records = []
    for g in config.grid(PRECISION_RULE_G_GRID):
        precision = smallest_precision(g)
        cell = _accuracy_cell(config, precision, g)
        hits = sum(1 for v in cell.log_errors if v <= -g)
        records.append(ExperimentRecord(EKind.PRECISION_RULE, precision, cell.m, cell.n, g=g, trials=cell.trials,
                                        exclusions=cell.exclusions, hits=hits, hit_rate=hits / config.trials,
                                        wall_seconds=cell.wall_seconds, log_errors=cell.log_errors))
    return records


def accuracy_slope(records):
    """
    Least squares slope of the median ``log10(e)`` against g, per precision.

    Returns
    -------
    dict
        EPrecision to slope, for precisions with at least two magnitude ranges
    """
    points = {}
    for record in records:
        finite = [v for v in record.log_errors if math.isfinite(v)]
        if finite:
            points.setdefault(record.precision, []).append((record.g, float(np.median(finite))))
    slopes = {}
    for precision, pairs in points.items():
        if len({g for g, _ in pairs}) >= 2:
            g, medians = zip(*pairs)
            slopes[precision] = float(np.polyfit(g, medians, 1)[0])
    return slopes


# ==================================================
#   TIMINGS
# ==================================================

def time_runs(func, repetitions, warmup=None):
    """
    Wall clock seconds of `repetitions` calls of `func`, after `warmup` untimed ones.
    """
    warmup = settings.WARMUP if warmup is None else warmup
    for _ in range(warmup):
        func()
    started = time.perf_counter()
    for _ in range(repetitions):
        func()
    return time.perf_counter() - started


def _instance(config, precision, m, n):
    rng = instance_rng(config.seed, config.grid()[0], 0)
    return gen_matrix(rng, m, n, config.grid()[0], precision, config.distribution)


def run_overhead_bench(config):
    """
    `config.repetitions` factorizations of one m-by-n matrix per precision, against real double.

    The real double baseline (``d``) is always timed first, on the real parts of the complex double instance.
    No repetitions give no records.
    """
    if config.repetitions == 0:
        return []
    m, n = config.rows, config.n
    baseline = _instance(config, EPrecision.CD, m, n).to_array().real
    wall = time_runs(lambda: real_mgs_qr(baseline), config.repetitions)
    records = [ExperimentRecord(EKind.OVERHEAD, EPrecision.D, m, n, reps=config.repetitions, wall_seconds=wall,
                                factor_vs_baseline=1.0)]
    for precision in config.precisions:
        if precision is EPrecision.D:
            continue
        A = _instance(config, precision, m, n)
        seconds = time_runs(lambda: mgs_qr(A), config.repetitions)
        records.append(ExperimentRecord(EKind.OVERHEAD, precision, m, n, reps=config.repetitions,
                                        wall_seconds=seconds, factor_vs_baseline=seconds / wall))
        logger.debug("overhead of {}: {:.1f}".format(precision, seconds / wall))
    return records


def run_scaling_bench(config):
    """
    Factorization times over the dimension grid.

    `factor_vs_baseline` of the row of n is ``t(n) / t(n / 2)`` when n / 2 is on the grid too, which is about 8 for
    the cubic cost of the factorization.
    """
    records = []
    if config.repetitions == 0:
        return records
    for precision in config.precisions:
        times = {}
        for n in config.dimensions():
            m = config.rows_for(n)
            if precision is EPrecision.D:
                array = _instance(config, EPrecision.CD, m, n).to_array().real
                seconds = time_runs(lambda: real_mgs_qr(array), config.repetitions)
            else:
                A = _instance(config, precision, m, n)
                seconds = time_runs(lambda: mgs_qr(A), config.repetitions)
            times[n] = seconds
            ratio = seconds / times[n // 2] if n % 2 == 0 and n // 2 in times else None
            records.append(ExperimentRecord(EKind.SCALING, precision, m, n, reps=config.repetitions,
                                            wall_seconds=seconds, factor_vs_baseline=ratio))
    return records


def scaling_ratios(records):
    """``(precision, n, t(n) / t(n / 2))`` for the rows of a scaling run that have a ratio."""
    return [(r.precision, r.n, r.factor_vs_baseline) for r in records if r.factor_vs_baseline is not None]


def run_speedup_bench(config):
    """
    Least squares solves (one factorization of ``[A b]`` and one back substitution each) with one worker and with
    `config.workers`.

    Returns
    -------
    list of ExperimentRecord
        Pairs of rows per precision and dimension; `speedup` is ``t(1) / t(workers)``
    """
    records = []
    if config.repetitions == 0:
        return records
    for precision in config.precisions:
        for n in config.dimensions():
            m = config.rows_for(n)
            rng = instance_rng(config.seed, config.grid()[0], 0)
            A = gen_matrix(rng, m, n, config.grid()[0], precision, config.distribution)
            b = gen_rhs(rng, m, config.grid()[0], precision, config.distribution)
            single = None
            for workers in sorted({1, config.workers}):
                seconds = time_runs(lambda: par_lsq_solve(A, b, workers, config.redundant), config.repetitions)
                single = seconds if single is None else single
                records.append(ExperimentRecord(EKind.SPEEDUP, precision, m, n, reps=config.repetitions,
                                                workers=workers, wall_seconds=seconds, speedup=single / seconds))
    for n, low, high, ratio in quality_up(records):
        logger.info("quality up at n = {}: {} with {} workers costs {:.2f} times {} with one".format(
            n, high, config.workers, ratio, low))
    return records


def quality_up(records):
    """
    ``t(higher precision, most workers) / t(lower precision, one worker)`` for consecutive precisions of a speedup
    run: below one, the extra workers pay for the extra precision.

    Returns
    -------
    list of tuple
        ``(n, lower, higher, ratio)``
    """
    by_key = {(r.precision, r.n, r.workers): r.wall_seconds for r in records}
    most = max((r.workers for r in records), default=1)
    precisions = sorted({r.precision for r in records}, key=lambda p: p.bits)
    dimensions = sorted({r.n for r in records})
    ratios = []
    for low, high in zip(precisions, precisions[1:]):
        for n in dimensions:
            if (low, n, 1) in by_key and (high, n, most) in by_key:
                ratios.append((n, low, high, by_key[(high, n, most)] / by_key[(low, n, 1)]))
    return ratios


def recalibrated_dimension(factor, n=32):
    """
    The dimension at which double precision costs what precision with overhead `factor` costs at `n`.

    The cost of the factorization is cubic in the dimension, so this is ``n * factor ** (1 / 3)``.
    """
    if factor <= 0:
        raise ValueError("overhead factor must be positive, got {}".format(factor))
    return n * factor ** (1.0 / 3.0)


def overhead_factors(records):
    return [(r.precision.tag, r.factor_vs_baseline) for r in records
            if r.kind is EKind.OVERHEAD and r.precision is not EPrecision.D]


def recalibration_table(factors=TABLE_FACTORS, n=32):
    """
    Rows ``(precision, factor, cube_root, dimension)`` for ``(precision, factor)`` pairs, the dimension rounded.
    """
    return [(label, factor, factor ** (1.0 / 3.0), int(round(recalibrated_dimension(factor, n))))
            for label, factor in factors]


# ==================================================
#   TABLES
# ==================================================

def _cell(value):
    if value is None:
        return ''
    if isinstance(value, (EKind, EPrecision)):
        return value.value
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def _write_csv(header, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    writer.writerows([_cell(v) for v in row] for row in rows)
    return buffer.getvalue()


def summarize(records, kind=None):
    """
    CSV table of `records`, header first.

    Parameters
    ----------
    records : list of ExperimentRecord
    kind : EKind, optional
        Chooses the columns; deduced from the first record by default

    Returns
    -------
    str
    """
    kind = kind or (records[0].kind if records else EKind.ACCURACY)
    header = CSV_COLUMNS[kind]
    return _write_csv(header, ([getattr(record, column) for column in header] for record in records))


def summarize_recalibration(rows):
    return _write_csv(RECALIBRATION_COLUMNS, rows)


def _parse_cell(column, text):
    if text == '':
        return None
    if column == 'kind':
        return EKind(text)
    if column == 'precision':
        return EPrecision.parse(text)
    if column in _INTEGER_FIELDS:
        return int(text)
    return float(text)


def parse_csv(text):
    """
    Records from a table written by `summarize`.

    Raises
    ------
    ValueError
        Unknown column or malformed value
    """
    reader = csv.DictReader(io.StringIO(text))
    fields = {f.name for f in ExperimentRecord.__dataclass_fields__.values()}
    unknown = set(reader.fieldnames or ()) - fields
    if unknown:
        raise ValueError("unknown columns {}".format(', '.join(sorted(unknown))))
    return [ExperimentRecord(**{column: _parse_cell(column, value) for column, value in row.items()})
            for row in reader]


RUNNERS = {
    EKind.ACCURACY: run_accuracy_sweep,
    EKind.PRECISION_RULE: run_precision_rule,
    EKind.OVERHEAD: run_overhead_bench,
    EKind.SCALING: run_scaling_bench,
    EKind.SPEEDUP: run_speedup_bench,
}


def run(config):
    """Run the experiment of kind `config.kind`."""
    logger.debug("running {}".format(config))
    return RUNNERS[config.kind](config)
