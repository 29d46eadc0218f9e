import os

from .exceptions import ImproperlyConfigured

PREFIX = 'QDORTH'


def _setting(name, default, coerce=str):
    raw = os.environ.get('{}_{}'.format(PREFIX, name))
    if raw is None or raw == '':
        return default
    try:
        return coerce(raw)
    except (TypeError, ValueError) as e:
        raise ImproperlyConfigured("{}_{}={!r}: {}".format(PREFIX, name, raw, e)) from None


def _flag(raw):
    lowered = raw.strip().lower()
    if lowered in ('1', 'true', 'yes', 'on'):
        return True
    if lowered in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError("expected a boolean")


def _positive(raw):
    value = int(raw)
    if value < 1:
        raise ValueError("must be positive")
    return value


def _non_negative(raw):
    value = int(raw)
    if value < 0:
        raise ValueError("must not be negative")
    return value


def _one_of(*options):
    def coerce(raw):
        if raw not in options:
            raise ValueError("expected one of {}".format(', '.join(options)))
        return raw
    return coerce


WORKERS = _setting('WORKERS', os.cpu_count() or 1, _positive)
"""
Default size of the worker pool of the parallel executor.
"""

TWO_PROD = _setting('TWO_PROD', 'auto', _one_of('auto', 'fma', 'dekker'))
"""
Error-free product: fused multiply-add (requires pyfma), Dekker splitting, or whichever is available.
"""

TRIALS = _setting('TRIALS', 100, _positive)
"""
Desk scale number of trials per accuracy cell.
"""

PAPER_SCALE_FACTOR = 10
"""
`--paper-scale` multiplies trials and repetitions by this factor (100 -> 1,000 trials, 1,000 -> 10,000 runs).
"""

WARMUP = _setting('WARMUP', 3, _non_negative)
"""
Warm-up runs excluded from timings.
"""

SEED = _setting('SEED', 0, int)
"""
Base seed of the experiment generators when `--seed` is not given.
"""

BROKER_URL = _setting('BROKER_URL', '')
"""
Celery broker for experiment jobs. Without a broker, tasks run eagerly in the calling process.
"""

ALWAYS_EAGER = _setting('ALWAYS_EAGER', not BROKER_URL, _flag)
"""
Run Celery tasks in the calling process; the default when no broker is set.
"""

TTL = max(0, _setting('TTL', 0, int))
"""
Time to live in seconds. After that time, finished jobs are dropped from the job registry. With 0, jobs leave the
registry as soon as they complete.
"""

RESULT_BACKEND = _setting('RESULT_BACKEND', '')
"""
Celery result backend, required to collect distributed trials when a broker is set.
"""
