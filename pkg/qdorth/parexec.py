"""
Parallel modified Gram-Schmidt and back substitution.

The outer loop of the factorization runs as barrier-separated rounds. Round k normalizes the pivot column, then
launches one `BlockTask` per remaining column j > k; each task owns its column for the round and only reads the
pivot. A last round normalizes the last column. Every task performs exactly the operations of the sequential kernels
in `qdorth.qrls`, so the factors are bitwise identical to `qrls.mgs_qr` whatever the number of workers or the order
in which tasks run.
"""
import collections
import functools
import itertools
import logging
import threading
from concurrent.futures import ThreadPoolExecutor

from . import settings
from .cfield import czeros
from .exceptions import DimensionMismatchError, ExecutionError, QDOrthError
from .matrix import ColMatrix, QRFactors
from .qrls import (breakdown_thresholds, check_triangular, divide_pivot, eliminate, is_breakdown, normalize_column,
                   solution_from_factors)
from .reduction import conj_products, tree_reduce
from .xreal import arithmetic_guard, leading

logger = logging.getLogger(__name__)

NORMALIZE = 'normalize'
REMOVE = 'remove'
DIVIDE = 'divide'
UPDATE = 'update'


class ExecutionTrace(object):
    """
    Event log of one parallel run.

    Every barrier opens a new epoch. A task starting while a task of an earlier epoch is still running violates the
    barrier discipline and fails the run with an `ExecutionError`.
    """

    Event = collections.namedtuple('Event', 'epoch round kind column start end')

    def __init__(self):
        self._lock = threading.Lock()
        self._clock = itertools.count()
        self._running = collections.Counter()
        self.epoch = 0
        self.events = []

    def next_epoch(self):
        with self._lock:
            self.epoch += 1

    def begin(self, epoch):
        with self._lock:
            if any(count for e, count in self._running.items() if e < epoch):
                raise ExecutionError("task of epoch {} started before the barrier released".format(epoch))
            self._running[epoch] += 1
            return next(self._clock)

    def end(self, epoch, round, kind, column, start):
        with self._lock:
            self._running[epoch] -= 1
            self.events.append(self.Event(epoch, round, kind, column, start, next(self._clock)))

    def tasks(self, round=None, kind=None):
        return [e for e in self.events
                if (round is None or e.round == round) and (kind is None or e.kind == kind)]

    def barrier_respected(self):
        """Every event of an epoch ended before any event of a later epoch started."""
        by_epoch = collections.defaultdict(list)
        for event in self.events:
            by_epoch[event.epoch].append(event)
        epochs = sorted(by_epoch)
        for earlier, later in zip(epochs, epochs[1:]):
            if max(e.end for e in by_epoch[earlier]) > min(e.start for e in by_epoch[later]):
                return False
        return True


class Dispatcher(object):
    """
    Launches tasks and waits for them at barriers.

    Tasks run inline with a single worker and on a thread pool otherwise. Numerical errors raised by a task
    (`QDOrthError` subclasses such as `Breakdown`) propagate unchanged, anything else becomes an `ExecutionError`.
    """

    def __init__(self, workers=None, trace=None, delay=None):
        self.workers = settings.WORKERS if workers is None else workers
        if self.workers < 1:
            raise ValueError("workers must be positive, got {}".format(self.workers))
        self.trace = trace if trace is not None else ExecutionTrace()
        self.delay = delay
        self._pool = ThreadPoolExecutor(max_workers=self.workers, thread_name_prefix='qdorth') \
            if self.workers > 1 else None
        self._pending = []

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        self.close()

    def close(self):
        if self._pool is not None:
            self._pool.shutdown(wait=True)
            self._pool = None

    def launch(self, func, round, kind, column):
        task = functools.partial(self._run, func, self.trace.epoch, round, kind, column)
        if self._pool is None:
            self._pending.append(_Done(task))
        else:
            self._pending.append(self._pool.submit(task))

    def barrier(self):
        pending, self._pending = self._pending, []
        failure = None
        for future in pending:
            try:
                future.result()
            except Exception as exc:
                failure = failure or exc
        self.trace.next_epoch()
        if failure is None:
            return
        if isinstance(failure, QDOrthError):
            raise failure
        raise ExecutionError("worker task failed: {}".format(failure)) from failure

    def _run(self, func, epoch, round, kind, column):
        start = self.trace.begin(epoch)
        try:
            if self.delay is not None:
                self.delay(round, column)
            with arithmetic_guard():
                return func()
        finally:
            self.trace.end(epoch, round, kind, column, start)


class _Done(object):
    """Inline stand-in for a future: runs the task at once and keeps its outcome."""

    def __init__(self, task):
        self._value, self._error = None, None
        try:
            self._value = task()
        except Exception as exc:
            self._error = exc

    def result(self):
        if self._error is not None:
            raise self._error
        return self._value


class BlockTask(object):
    """
    One block of round k: removes the component along q_k from column j.

    The working set is three length-m vectors, the pivot q_k, the target a_j and the conjugated products
    ``conj(q_k) * a_j`` that the reduction tree folds into ``r_kj``. With `redundant` the task normalizes the raw
    pivot itself instead of reading the normalized column; the designated task (j == k + 1) publishes it.
    """

    def __init__(self, state, k, j, pivot, redundant=False):
        self.state = state
        self.k = k
        self.j = j
        self.pivot = pivot
        self.redundant = redundant
        self.target = None
        self.products = None

    def working_set(self):
        return [v for v in (self.pivot, self.target, self.products) if v is not None]

    def __call__(self):
        Q, R = self.state.Q, self.state.R
        q = self.pivot
        if self.redundant:
            r_kk, q = normalize_column(self.pivot, self.k, self.state.thresholds[self.k])
            self.pivot = q
            if self.j == self.k + 1:
                Q.set_column(self.k, q)
                R.set_entry(self.k, self.k, r_kk)
        self.target = Q.column(self.j)
        self.products = conj_products(q, self.target)
        r_kj = tree_reduce(self.products)
        Q.set_column(self.j, self.target - q * r_kj)
        R.set_entry(self.k, self.j, r_kj)


class _Factorization(object):
    def __init__(self, Q, R, thresholds):
        self.Q = Q
        self.R = R
        self.thresholds = thresholds


def _normalize_task(state, k, tolerate):
    def task():
        r_kk, q = normalize_column(state.Q.column(k), k, state.thresholds[k], tolerate)
        state.Q.set_column(k, q)
        state.R.set_entry(k, k, r_kk)
    return task


def _par_mgs(A, dispatcher, redundant=False, overwrite=False, tolerate_last=False):
    Q = A if overwrite else A.copy()
    n = Q.n
    with arithmetic_guard():
        thresholds = breakdown_thresholds(Q, augmented=tolerate_last)
        state = _Factorization(Q, ColMatrix.zeros(n, n, Q.precision), thresholds)
    for k in range(n - 1):
        logger.debug("round {} of {}: {} block tasks".format(k + 1, n, n - k - 1))
        if not redundant:
            dispatcher.launch(_normalize_task(state, k, False), k, NORMALIZE, k)
            dispatcher.barrier()
        # the designated task overwrites column k during a redundant round
        pivot = Q.column(k).copy() if redundant else Q.column(k)
        for j in range(k + 1, n):
            dispatcher.launch(BlockTask(state, k, j, pivot, redundant), k, REMOVE, j)
        dispatcher.barrier()
    dispatcher.launch(_normalize_task(state, n - 1, tolerate_last), n - 1, NORMALIZE, n - 1)
    dispatcher.barrier()
    return QRFactors(state.Q, state.R), state.thresholds[-1]


def par_mgs_qr(A, workers=None, redundant=False, overwrite=False, trace=None, delay=None):
    """
    Parallel QR factorization by modified Gram-Schmidt, bitwise equal to `qrls.mgs_qr`.

    Parameters
    ----------
    A : ColMatrix
    workers : int, optional
        Pool size, `settings.WORKERS` by default
    redundant : bool
        Normalize the pivot inside every block task rather than once per round
    overwrite : bool
    trace : ExecutionTrace, optional
        Receives the task events of the run
    delay : callable, optional
        Called as ``delay(round, column)`` at the start of every task

    Returns
    -------
    QRFactors
    """
    if A.m < A.n:
        raise DimensionMismatchError("par_mgs_qr needs m >= n, got {}x{}".format(A.m, A.n))
    with Dispatcher(workers, trace, delay) as dispatcher:
        return _par_mgs(A, dispatcher, redundant, overwrite)[0]


def _chunks(count, parts):
    size, extra = divmod(count, parts)
    start = 0
    for part in range(min(parts, count)):
        stop = start + size + (1 if part < extra else 0)
        yield start, stop
        start = stop


def par_back_substitute(R, y, workers=None, trace=None, delay=None):
    """
    Parallel column-oriented back substitution, bitwise equal to `qrls.back_substitute`.

    Each step divides by the pivot in a single task, then updates the rows above it in `workers` contiguous blocks.
    """
    check_triangular(R, y)
    y = y.copy()
    x = czeros(R.n, R.precision)

    def divide(k):
        x[k] = divide_pivot(y[k], R.entry(k, k))

    def update(k, start, stop):
        y[start:stop] = eliminate(y[start:stop], R.data[start:stop, k], x[k])

    with Dispatcher(workers, trace, delay) as dispatcher:
        for k in range(R.n - 1, -1, -1):
            dispatcher.launch(functools.partial(divide, k), k, DIVIDE, k)
            dispatcher.barrier()
            for start, stop in _chunks(k, dispatcher.workers):
                dispatcher.launch(functools.partial(update, k, start, stop), k, UPDATE, start)
            dispatcher.barrier()
    return x


def par_lsq_solve(A, b, workers=None, redundant=False):
    """Parallel counterpart of `qrls.lsq_solve`."""
    if A.m < A.n:
        raise DimensionMismatchError("par_lsq_solve needs m >= n, got {}x{}".format(A.m, A.n))
    augmented = A.augmented(b)
    with Dispatcher(workers) as dispatcher:
        factors, threshold = _par_mgs(augmented, dispatcher, redundant, overwrite=True, tolerate_last=True)
    final_breakdown = is_breakdown(float(leading(factors.R.entry(A.n, A.n).re)), threshold)
    return solution_from_factors(factors, A.n, final_breakdown,
                                 functools.partial(par_back_substitute, workers=workers))
