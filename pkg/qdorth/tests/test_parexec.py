import random
import threading
import time
import unittest

import numpy as np

from .oracles import scaled
from .. import xreal
from ..cfield import cvector, random_ranged_complex, trial_rng
from ..exceptions import Breakdown, DimensionMismatchError, ExecutionError, ZeroDivisorError
from ..matrix import ColMatrix
from ..parexec import (DIVIDE, NORMALIZE, REMOVE, UPDATE, BlockTask, Dispatcher, ExecutionTrace, _chunks, _par_mgs,
                       par_back_substitute, par_lsq_solve, par_mgs_qr)
from ..precision import EPrecision
from ..qrls import back_substitute, lsq_solve, mgs_qr

PRECISIONS = EPrecision.complex_precisions()
WORKERS = (1, 2, 4, 8)
# quad double runs smaller orders; m = n + 3 still pads the reduction tree
ORDERS = {EPrecision.CD: (8, 32, 33, 64), EPrecision.CDD: (8, 32, 33, 64), EPrecision.CQD: (8, 12)}
EQUIVALENCE_WORKERS = {EPrecision.CD: WORKERS, EPrecision.CDD: (2, 8), EPrecision.CQD: (4,)}


def random_matrix(m, n, precision=EPrecision.CD, g=2.0, seed=0):
    return ColMatrix(random_ranged_complex(trial_rng(seed, m, n), g, (m, n), precision), precision)


def random_vector(m, precision=EPrecision.CD, g=2.0, seed=0):
    return random_ranged_complex(trial_rng(seed, m), g, m, precision)


def jitter(seed):
    generator = random.Random(seed)
    lock = threading.Lock()

    def delay(round, column):
        with lock:
            pause = generator.uniform(0, 0.002)
        time.sleep(pause)
    return delay


class ParallelQRTestCase(unittest.TestCase):
    def test_bitwise_equal_to_sequential(self):
        for precision in PRECISIONS:
            for n in ORDERS[precision]:
                for seed in range(scaled(20)):
                    A = random_matrix(n + 3, n, precision, seed=seed)
                    expected = mgs_qr(A)
                    for workers in EQUIVALENCE_WORKERS[precision]:
                        self.assertTrue(par_mgs_qr(A, workers).bitwise_equal(expected),
                                        msg="{} n={} seed={} workers={}".format(precision, n, seed, workers))

    def test_redundant_normalization(self):
        for precision in PRECISIONS:
            A = random_matrix(12, 9, precision, seed=3)
            expected = mgs_qr(A)
            for workers in (1, 4):
                self.assertTrue(par_mgs_qr(A, workers, redundant=True).bitwise_equal(expected))

    def test_overwrite(self):
        A = random_matrix(6, 5)
        expected = mgs_qr(A)
        factors = par_mgs_qr(A, 2, overwrite=True)
        self.assertIs(factors.Q, A)
        self.assertTrue(factors.bitwise_equal(expected))

    def test_single_column(self):
        A = ColMatrix.from_array([[3.0], [4.0]], EPrecision.CDD)
        self.assertTrue(par_mgs_qr(A, 3).bitwise_equal(mgs_qr(A)))

    def test_barrier_under_random_delays(self):
        A = random_matrix(10, 7, EPrecision.CDD, seed=5)
        expected = mgs_qr(A)
        for seed in range(scaled(3)):
            trace = ExecutionTrace()
            factors = par_mgs_qr(A, 4, trace=trace, delay=jitter(seed))
            self.assertTrue(factors.bitwise_equal(expected))
            self.assertTrue(trace.barrier_respected())

    def test_round_structure(self):
        n = 6
        trace = ExecutionTrace()
        par_mgs_qr(random_matrix(8, n), 3, trace=trace)
        for k in range(n - 1):
            self.assertEqual([e.column for e in trace.tasks(round=k, kind=NORMALIZE)], [k])
            self.assertEqual(sorted(e.column for e in trace.tasks(round=k, kind=REMOVE)), list(range(k + 1, n)))
        self.assertEqual([e.column for e in trace.tasks(round=n - 1)], [n - 1])
        self.assertEqual(len(trace.events), (n - 1) + n * (n - 1) // 2 + 1)

        trace = ExecutionTrace()
        par_mgs_qr(random_matrix(8, n), 3, redundant=True, trace=trace)
        self.assertEqual(trace.tasks(kind=NORMALIZE)[0].round, n - 1)
        # one barrier per round
        self.assertEqual(len({e.epoch for e in trace.events}), n)

    def test_breakdown(self):
        a = np.array([1.0, 1j, -1.0, 1.0])
        A = ColMatrix.from_array(np.stack([a, np.array([1.0, 2.0, 3.0, 4.0]), 2 * a], axis=1), EPrecision.CDD)
        for workers in (1, 4):
            for redundant in (False, True):
                with self.assertRaises(Breakdown) as context:
                    par_mgs_qr(A, workers, redundant=redundant)
                self.assertEqual(context.exception.k, 3)

    def test_worker_failure(self):
        def delay(round, column):
            if round == 2 and column == 4:
                raise MemoryError("worker lost")

        for workers in (1, 3):
            with self.assertRaises(ExecutionError):
                par_mgs_qr(random_matrix(7, 6), workers, delay=delay)

    def test_invalid_arguments(self):
        with self.assertRaises(ValueError):
            par_mgs_qr(random_matrix(4, 3), 0)
        with self.assertRaises(DimensionMismatchError):
            par_mgs_qr(random_matrix(3, 4), 2)


class BlockTaskTestCase(unittest.TestCase):
    def test_working_set(self):
        A = random_matrix(9, 3)
        trace = ExecutionTrace()
        tasks = []

        class Recording(Dispatcher):
            def launch(self, func, round, kind, column):
                if isinstance(func, BlockTask):
                    tasks.append(func)
                super(Recording, self).launch(func, round, kind, column)

        with Recording(2, trace) as dispatcher:
            _par_mgs(A, dispatcher)
        self.assertEqual(len(tasks), 3)
        for task in tasks:
            self.assertEqual(len(task.working_set()), 3)
            self.assertTrue(all(len(v) == 9 for v in task.working_set()))
            self.assertLess(task.k, task.j)


class ExecutionTraceTestCase(unittest.TestCase):
    def test_barrier_violation(self):
        trace = ExecutionTrace()
        trace.begin(0)
        trace.next_epoch()
        with self.assertRaises(ExecutionError):
            trace.begin(1)

    def test_barrier_respected(self):
        trace = ExecutionTrace()
        start = trace.begin(0)
        trace.end(0, 0, NORMALIZE, 0, start)
        trace.next_epoch()
        start = trace.begin(1)
        trace.end(1, 0, REMOVE, 1, start)
        self.assertTrue(trace.barrier_respected())
        trace.events.append(ExecutionTrace.Event(0, 0, REMOVE, 2, 0, 10))
        self.assertFalse(trace.barrier_respected())


class ParallelBackSubstitutionTestCase(unittest.TestCase):
    def test_bitwise_equal_to_sequential(self):
        for precision in PRECISIONS:
            for n in (8, 32, 33, 64):
                for seed in range(scaled(20)):
                    array = np.triu(random_matrix(n, n, EPrecision.CD, seed=seed).to_array())
                    R = ColMatrix.from_array(array + n * np.eye(n), precision)
                    y = random_vector(n, precision, seed=seed)
                    expected = back_substitute(R, y)
                    for workers in EQUIVALENCE_WORKERS[precision]:
                        self.assertTrue(par_back_substitute(R, y, workers).bitwise_equal(expected),
                                        msg="{} n={} seed={} workers={}".format(precision, n, seed, workers))

    def test_chunks(self):
        self.assertEqual(list(_chunks(7, 3)), [(0, 3), (3, 5), (5, 7)])
        self.assertEqual(list(_chunks(2, 4)), [(0, 1), (1, 2)])
        self.assertEqual(list(_chunks(0, 4)), [])

    def test_round_structure(self):
        n = 5
        trace = ExecutionTrace()
        par_back_substitute(ColMatrix.identity(n), random_vector(n), 2, trace=trace)
        self.assertEqual(sorted(e.column for e in trace.tasks(kind=DIVIDE)), list(range(n)))
        self.assertEqual(trace.tasks(round=0, kind=UPDATE), [])
        self.assertEqual(sorted(e.column for e in trace.tasks(round=3, kind=UPDATE)), [0, 2])
        self.assertTrue(trace.barrier_respected())

    def test_zero_diagonal(self):
        R = ColMatrix.from_array([[1.0, 2.0], [0.0, 0.0]])
        with self.assertRaises(ZeroDivisorError):
            par_back_substitute(R, random_vector(2), 2)


class ParallelLeastSquaresTestCase(unittest.TestCase):
    def test_bitwise_equal_to_sequential(self):
        for precision in PRECISIONS:
            A = random_matrix(11, 6, precision, seed=9)
            b = random_vector(11, precision, seed=9)
            expected = lsq_solve(A, b)
            for workers in (1, 3):
                for redundant in (False, True):
                    solution = par_lsq_solve(A, b, workers, redundant)
                    self.assertTrue(solution.x.bitwise_equal(expected.x))
                    self.assertTrue(solution.factors.bitwise_equal(expected.factors))
                    self.assertTrue(xreal.bitwise_equal(solution.residual_norm, expected.residual_norm))

    def test_large_right_hand_side(self):
        A = ColMatrix.from_array(np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, -1.0]]) / 2, EPrecision.CDD)
        b = np.array([1e15, 2e15, 3e15, 4e15])
        expected = lsq_solve(A, cvector(b, EPrecision.CDD))
        for redundant in (False, True):
            solution = par_lsq_solve(A, cvector(b, EPrecision.CDD), 3, redundant)
            self.assertTrue(solution.x.bitwise_equal(expected.x))
            self.assertTrue(xreal.bitwise_equal(solution.residual_norm, expected.residual_norm))

    def test_rhs_in_range(self):
        A = ColMatrix.identity(2, EPrecision.CQD, m=4)
        b = ColMatrix.identity(2, EPrecision.CQD, m=4).column(1).copy()
        solution = par_lsq_solve(A, b, 2)
        self.assertEqual(float(solution.residual_norm.leading), 0.0)
        np.testing.assert_array_equal(solution.x.to_complex128(), [0.0, 1.0])
