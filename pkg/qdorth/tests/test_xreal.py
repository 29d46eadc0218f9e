import unittest

import mpmath
import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from .oracles import ExactDyadic, exact_components, mp_value, scaled
from .. import xreal
from ..exceptions import NegativeSqrtError, PrecisionOverflowError, ZeroDivisorError
from ..xreal import DoubleDouble, QuadDouble, arithmetic_guard
from ..xreal.eft import distill, pyfma, quick_two_sum, split, two_prod_dekker, two_prod_fma, two_sum

finite = st.floats(min_value=-1e300, max_value=1e300, allow_nan=False, allow_infinity=False)
moderate = st.floats(min_value=-1e100, max_value=1e100, allow_nan=False, allow_infinity=False).filter(
    lambda x: x == 0 or abs(x) > 1e-100)


def random_doubles(rng, size, spread=20):
    return rng.standard_normal(size) * 2.0 ** rng.integers(-spread, spread, size)


def random_dd(rng, size):
    hi = random_doubles(rng, size)
    lo = hi * rng.uniform(-1.0, 1.0, size) * 2.0 ** -53
    return DoubleDouble.from_components(quick_two_sum(hi, lo))


def random_qd(rng, size):
    c0 = random_doubles(rng, size)
    tail = [c0 * rng.uniform(-1.0, 1.0, size) * 2.0 ** (-53 * k) for k in (1, 2, 3)]
    return QuadDouble.from_components(distill([c0] + tail, 4))


class ErrorFreeTransformTestCase(unittest.TestCase):
    def test_two_sum_examples(self):
        self.assertEqual(two_sum(np.float64(1.0), np.float64(2.0 ** -60)), (1.0, 2.0 ** -60))
        self.assertEqual(two_sum(np.float64(1.0), np.float64(1.0)), (2.0, 0.0))
        s, err = two_sum(np.float64(0.1), np.float64(0.2))
        self.assertEqual(s, 0.1 + 0.2)
        self.assertEqual(ExactDyadic.sum_of([s, err]), ExactDyadic.sum_of([0.1, 0.2]))

    @given(finite, finite)
    @settings(max_examples=500)
    def test_two_sum_exact(self, a, b):
        s, err = two_sum(np.float64(a), np.float64(b))
        self.assertEqual(s, np.float64(a) + np.float64(b))
        self.assertEqual(ExactDyadic.sum_of([s, err]), ExactDyadic.sum_of([a, b]))

    def _check_two_prod(self, two_prod):
        rng = np.random.default_rng(1)
        a, b = random_doubles(rng, scaled(5000), 200), random_doubles(rng, scaled(5000), 200)
        with arithmetic_guard():
            p, err = two_prod(a, b)
        for i in range(len(a)):
            exact = ExactDyadic.from_float(a[i]) * ExactDyadic.from_float(b[i])
            self.assertEqual(ExactDyadic.sum_of([p[i], err[i]]), exact, msg="{!r} * {!r}".format(a[i], b[i]))

    def test_two_prod_dekker_exact(self):
        self._check_two_prod(two_prod_dekker)

    @unittest.skipIf(pyfma is None, "pyfma is not installed")
    def test_two_prod_fma_exact(self):
        self._check_two_prod(two_prod_fma)

    @given(moderate, moderate)
    @settings(max_examples=500)
    def test_two_prod_exact_property(self, a, b):
        p, err = xreal.two_prod(np.float64(a), np.float64(b))
        self.assertEqual(p, np.float64(a) * np.float64(b))
        exact = ExactDyadic.from_float(a) * ExactDyadic.from_float(b)
        self.assertEqual(ExactDyadic.sum_of([p, err]), exact)

    def test_two_prod_examples(self):
        x = np.float64(0.7)
        self.assertEqual(xreal.two_prod(np.float64(1.0), x), (x, 0.0))
        a = np.float64(2.0 ** 27 + 1)
        p, err = xreal.two_prod(a, a)
        self.assertEqual(ExactDyadic.sum_of([p, err]), ExactDyadic((2 ** 27 + 1) ** 2))
        self.assertNotEqual(err, 0.0)
        p, err = xreal.two_prod(np.float64(0.1), np.float64(0.1))
        self.assertEqual(ExactDyadic.sum_of([p, err]), ExactDyadic.from_float(0.1) * ExactDyadic.from_float(0.1))

    def test_split_of_huge_values(self):
        a = np.array([1e300, -3e305, 1.5])
        with arithmetic_guard():
            hi, lo = split(a)
            p, err = two_prod_dekker(a, np.array([1e-10, 2e-9, 3.0]))
        np.testing.assert_array_equal(hi + lo, a)
        for i in range(3):
            exact = ExactDyadic.from_float(a[i]) * ExactDyadic.from_float([1e-10, 2e-9, 3.0][i])
            self.assertEqual(ExactDyadic.sum_of([p[i], err[i]]), exact)

    def test_split_is_element_wise(self):
        a = np.array([1e300, 0.1, -7.25e-3])
        hi, lo = split(a)
        for i in range(3):
            hi_i, lo_i = split(a[i:i + 1])
            self.assertEqual((hi[i], lo[i]), (hi_i[0], lo_i[0]))

    def test_overflow_is_an_error(self):
        with self.assertRaises(PrecisionOverflowError):
            xreal.dd_mul(DoubleDouble(1e200), DoubleDouble(1e200))
        with self.assertRaises(PrecisionOverflowError):
            xreal.qd_add(QuadDouble(1.7e308), QuadDouble(1.7e308))


class DoubleDoubleTestCase(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(2)

    def test_trivial(self):
        one = xreal.dd_add(DoubleDouble(1.0), DoubleDouble(0.0))
        self.assertEqual((one.hi, one.lo), (1.0, 0.0))
        two = xreal.dd_sqrt(DoubleDouble(4.0))
        self.assertEqual((two.hi, two.lo), (2.0, 0.0))
        zero = xreal.dd_sqrt(DoubleDouble(0.0))
        self.assertEqual((zero.hi, zero.lo), (0.0, 0.0))

    def test_add_and_mul_against_exact(self):
        size = scaled(2000)
        a, b = random_dd(self.rng, size), random_dd(self.rng, size)
        b = DoubleDouble.where(self.rng.uniform(size=size) < 0.1, -a, b)  # exact cancellations too
        total, product = xreal.dd_add(a, b), xreal.dd_mul(a, b)
        worst_add = worst_mul = 0.0
        for i in range(size):
            x, y = exact_components(a, i), exact_components(b, i)
            worst_add = max(worst_add, (x + y).relative_error(exact_components(total, i)))
            worst_mul = max(worst_mul, (x * y).relative_error(exact_components(product, i)))
        self.assertLessEqual(worst_add, 2.0 ** -104)
        self.assertLessEqual(worst_mul, 2.0 ** -104)

    def test_results_are_normalized(self):
        a, b = random_dd(self.rng, 500), random_dd(self.rng, 500)
        for value in (a + b, a * b, a / b, abs(a).sqrt()):
            np.testing.assert_array_equal(value.hi + value.lo, value.hi)

    def test_division_and_sqrt(self):
        third = xreal.dd_div(DoubleDouble(1.0), DoubleDouble(3.0))
        back = xreal.dd_mul(third, DoubleDouble(3.0))
        self.assertLessEqual(ExactDyadic(1).relative_error(exact_components(back)), 2.0 ** -100)
        a, b = random_dd(self.rng, 300), random_dd(self.rng, 300)
        quotient, root = a / b, abs(a).sqrt()
        with mpmath.workprec(400):
            for i in range(300):
                exact = mp_value(a, i) / mp_value(b, i)
                self.assertLessEqual(abs(mp_value(quotient, i) / exact - 1), 2.0 ** -103)
                x = abs(mp_value(a, i))
                self.assertLessEqual(abs(mp_value(root, i) ** 2 / x - 1), 2.0 ** -102)

    def test_identities(self):
        x = random_dd(self.rng, 200)
        zero = x + (-x)
        np.testing.assert_array_equal(zero.hi, 0.0)
        np.testing.assert_array_equal(zero.lo, 0.0)
        same = DoubleDouble(1.0) * x
        np.testing.assert_array_equal(same.hi, x.hi)
        np.testing.assert_array_equal(same.lo, x.lo)

    def test_renormalize_idempotent(self):
        x = random_dd(self.rng, 1000) / random_dd(self.rng, 1000)
        once = xreal.renormalize(x)
        self.assertTrue(xreal.renormalize(once).bitwise_equal(once))

    def test_errors(self):
        with self.assertRaises(ZeroDivisorError):
            xreal.dd_div(DoubleDouble(1.0), DoubleDouble(0.0))
        with self.assertRaises(NegativeSqrtError):
            xreal.dd_sqrt(DoubleDouble(-2.0))

    def test_vector_matches_scalars(self):
        a, b = random_dd(self.rng, 16), random_dd(self.rng, 16)
        vector = [a + b, a * b, a / b, abs(a).sqrt()]
        for i in (0, 7, 15):
            scalar = [a[i] + b[i], a[i] * b[i], a[i] / b[i], abs(a[i]).sqrt()]
            for v, s in zip(vector, scalar):
                self.assertTrue(v[i].bitwise_equal(s))


class QuadDoubleTestCase(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(3)

    def test_trivial(self):
        self.assertEqual(xreal.qd_sqrt(QuadDouble(4.0)).components, (2.0, 0.0, 0.0, 0.0))
        self.assertEqual(xreal.qd_sqrt(QuadDouble(0.0)).components, (0.0, 0.0, 0.0, 0.0))
        self.assertEqual(xreal.qd_add(QuadDouble(1.0), QuadDouble(0.0)).components, (1.0, 0.0, 0.0, 0.0))

    def test_add_and_mul_against_exact(self):
        size = scaled(500)
        a, b = random_qd(self.rng, size), random_qd(self.rng, size)
        total, product = xreal.qd_add(a, b), xreal.qd_mul(a, b)
        worst_add = worst_mul = 0.0
        for i in range(size):
            x, y = exact_components(a, i), exact_components(b, i)
            worst_add = max(worst_add, (x + y).relative_error(exact_components(total, i)))
            worst_mul = max(worst_mul, (x * y).relative_error(exact_components(product, i)))
        self.assertLessEqual(worst_add, 2.0 ** -212)
        self.assertLessEqual(worst_mul, 2.0 ** -212)

    def test_division_and_sqrt(self):
        a, b = random_qd(self.rng, 100), random_qd(self.rng, 100)
        quotient, root = xreal.qd_div(a, b), xreal.qd_sqrt(abs(a))
        with mpmath.workprec(500):
            for i in range(100):
                exact = mp_value(a, i) / mp_value(b, i)
                self.assertLessEqual(abs(mp_value(quotient, i) / exact - 1), 2.0 ** -208)
                x = abs(mp_value(a, i))
                self.assertLessEqual(abs(mp_value(root, i) ** 2 / x - 1), 2.0 ** -208)

    def test_renormalize_idempotent(self):
        x = random_qd(self.rng, 64) * random_qd(self.rng, 64)
        once = xreal.renormalize(x)
        self.assertTrue(xreal.renormalize(once).bitwise_equal(once))

    def test_conversions(self):
        x = random_dd(self.rng, 10)
        self.assertTrue(xreal.to_dd(xreal.to_qd(x)).bitwise_equal(x))
        q = random_qd(self.rng, 10)
        np.testing.assert_array_equal(xreal.to_double(q), q.c0)

    def test_vector_matches_scalars(self):
        a, b = random_qd(self.rng, 8), random_qd(self.rng, 8)
        vector = [a + b, a * b, a / b, abs(a).sqrt()]
        for i in (0, 5):
            scalar = [a[i] + b[i], a[i] * b[i], a[i] / b[i], abs(a[i]).sqrt()]
            for v, s in zip(vector, scalar):
                self.assertTrue(v[i].bitwise_equal(s))


class SerializationTestCase(unittest.TestCase):
    def test_decimal_of_a_third(self):
        third = xreal.dd_div(DoubleDouble(1.0), DoubleDouble(3.0))
        text = xreal.to_decimal_string(third)
        self.assertTrue(text.startswith('3.33333333333333333333333333333'), text)
        self.assertTrue(text.endswith('e-1'), text)
        back = xreal.parse_decimal(text, DoubleDouble)
        self.assertLessEqual(exact_components(third).relative_error(exact_components(back)), 2.0 ** -104)

    def test_decimal_round_trip(self):
        rng = np.random.default_rng(4)
        for kind, make, digits in ((DoubleDouble, random_dd, 34), (QuadDouble, random_qd, 66)):
            values = make(rng, 20)
            for i in range(20):
                x = values[i]
                back = xreal.parse_decimal(xreal.to_decimal_string(x, digits), kind)
                bound = 2.0 ** -104 if kind is DoubleDouble else 2.0 ** -208
                self.assertLessEqual(exact_components(x).relative_error(exact_components(back)), bound)

    def test_zero_and_one(self):
        self.assertEqual(xreal.to_decimal_string(DoubleDouble(0.0)), '0.0e+0')
        self.assertEqual(xreal.parse_decimal('1e0', QuadDouble).components, (1.0, 0.0, 0.0, 0.0))
        with self.assertRaises(ValueError):
            xreal.parse_decimal('one', DoubleDouble)

    def test_hex(self):
        third = xreal.qd_div(QuadDouble(1.0), QuadDouble(3.0))
        self.assertTrue(xreal.from_hex(xreal.to_hex(third), QuadDouble).bitwise_equal(third))
        self.assertEqual(xreal.to_hex(DoubleDouble(1.0)), '0x1.0000000000000p+0 0x0.0p+0')
        with self.assertRaises(ValueError):
            xreal.from_hex('0x1p+0', DoubleDouble)


if __name__ == '__main__':
    unittest.main()
