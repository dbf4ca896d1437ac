import math
from fractions import Fraction as F

from django.test import SimpleTestCase
from hypothesis import given, settings

from hill.exceptions import DegenerateFit, InsufficientData, InvalidSpec
from hill.floquet import TongueRecord
from hill.hillseries import CouplingSpec, compose_G, diagonal_G, leading_coefficient_fast
from hill.lindstedt import OscillatorSpec, expand
from hill.tongues import (
    ChartRow,
    ShapeClassification,
    asymptotic_order,
    branch_pairs,
    classify_shape,
    coexistence_check,
    example1_closed_form,
    example2_B_series,
    example2_energy,
    expected_open_tongues,
    ince_index,
    second_tongue_sign,
    series_boundaries,
    trumpet_count_scenario,
)

from . import nonzero_rationals, small_rationals

T, H = ShapeClassification.TRUMPET, ShapeClassification.HORN


def specs(alpha, gamma, order):
    return OscillatorSpec(alpha=alpha, order=order), CouplingSpec(gamma=gamma, order=order)


def pairs_for(alpha, gamma, order, n_max):
    osc, coupling = specs(alpha, gamma, order)
    return branch_pairs(compose_G(coupling, expand(osc)), n_max)


def synthetic_record(N, q, length, floor=1e-10):
    centre = float(N * N)
    return TongueRecord(N=N, q=q, beta_even=centre - length / 2, beta_odd=centre + length / 2,
                        residual_even=0.0, residual_odd=0.0, bracket_width=0.1, zero_length_floor=floor)


class ShapeTests(SimpleTestCase):
    def test_mathieu_shapes(self):
        verdicts = [classify_shape(*pair) for pair in pairs_for({}, {1: 1}, 6, 4).values()]
        self.assertEqual([v.classification for v in verdicts], [T, T, H, H])
        self.assertEqual(verdicts[0].leading_orders, (1, 1))
        self.assertEqual(verdicts[0].leading_signs, (-1, 1))

    def test_collapsed_without_coupling(self):
        verdict = classify_shape(*pairs_for({2: 1}, {}, 3, 1)[1])
        self.assertEqual(verdict.classification, ShapeClassification.COLLAPSED)

    @settings(max_examples=25, deadline=None)
    @given(small_rationals, nonzero_rationals, small_rationals)
    def test_second_tongue_sign(self, a, c1, c2):
        plus, minus = pairs_for({2: a}, {1: c1, 2: c2}, 2, 2)[2]
        self.assertEqual(plus.B[2] - minus.B[2], second_tongue_sign(a, c1, c2))

    def test_example1_second_tongue(self):
        for gamma, expected in ((F(-2), T), (F(-1, 2), H), (F(3, 4), T), (F(3, 2), H), (F(3), T)):
            plus, minus = pairs_for({2: 1}, {1: 2 * gamma}, 2, 2)[2]
            self.assertEqual(classify_shape(plus, minus).classification, expected, gamma)

    def test_trumpet_count(self):
        verdicts = trumpet_count_scenario(3, 1, 1)
        for verdict in verdicts:
            if verdict.N % 2:
                self.assertEqual(verdict.classification, T)
                self.assertEqual(verdict.leading_orders, (3, 3))
        with self.assertRaises(InvalidSpec):
            trumpet_count_scenario(2, 1, 1)
        with self.assertRaises(InvalidSpec):
            trumpet_count_scenario(3, 1, 0)


class ClosedFormTests(SimpleTestCase):
    @settings(max_examples=20, deadline=None)
    @given(nonzero_rationals, small_rationals)
    def test_example1_closed_form(self, alpha, gamma_tilde):
        diagonal = diagonal_G(*specs({2: alpha}, {1: 2 * gamma_tilde * alpha}, 6))
        for N in range(1, 7):
            self.assertEqual(leading_coefficient_fast(diagonal, N), example1_closed_form(alpha, gamma_tilde, N))

    def test_closed_form_zeros(self):
        # gamma~ = n(n+1)/12 closes every tongue beyond n
        for n in (1, 2, 3):
            gamma_tilde = F(n * (n + 1), 12)
            for N in range(n + 1, n + 4):
                self.assertEqual(example1_closed_form(1, gamma_tilde, N), 0)
            self.assertNotEqual(example1_closed_form(1, gamma_tilde, n), 0)
        with self.assertRaises(InvalidSpec):
            example1_closed_form(1, 1, 0)

    def test_example2_helpers(self):
        self.assertEqual(example2_energy(1, F(1, 2)), F(1, 2) + F(1, 64))
        self.assertEqual(example2_B_series(2, 4), (0, 0, -16, 0, -4))
        self.assertEqual(example2_B_series(1, 1), (0, 0))


class CoexistenceTests(SimpleTestCase):
    def test_example1(self):
        osc, coupling = specs({2: 1}, {1: 1}, 6)
        report = coexistence_check(osc, coupling, expand(osc))
        self.assertTrue(report.detected)
        self.assertEqual(report.n_ince, 2)
        self.assertEqual(report.A, 4)
        self.assertEqual(report.scale, 3)
        self.assertEqual(report.residual, 0)
        self.assertFalse(any(report.B))

    def test_example2(self):
        osc, coupling = specs({3: 1}, {2: 1}, 6)
        report = coexistence_check(osc, coupling, expand(osc))
        self.assertTrue(report.detected)
        self.assertEqual(report.n_ince, 1)
        self.assertEqual(report.A, 16)
        self.assertEqual(report.B, example2_B_series(1, 6)[1:])

    def test_example4(self):
        osc, coupling = specs({2: 1, 3: F(1, 18)}, {1: F(2, 3), 2: F(1, 18)}, 5)
        report = coexistence_check(osc, coupling, expand(osc))
        self.assertTrue(report.detected)
        self.assertEqual(report.n_ince, 1)
        self.assertEqual(report.A, 4)

    def test_mathieu_is_not_lame(self):
        osc, coupling = specs({}, {1: 1}, 4)
        report = coexistence_check(osc, coupling, expand(osc))
        self.assertFalse(report.detected)
        self.assertEqual(report.quadratic, 0)
        self.assertIsNone(report.n_ince)

    def test_generic_coupling_fails_at_some_order(self):
        osc, coupling = specs({2: 1}, {1: 1, 2: 5}, 5)
        report = coexistence_check(osc, coupling, expand(osc))
        self.assertFalse(report.detected)
        self.assertIsNotNone(report.failing_order)

    def test_zero_coupling(self):
        osc, coupling = specs({2: 1}, {}, 3)
        with self.assertRaises(DegenerateFit):
            coexistence_check(osc, coupling, expand(osc))

    def test_ince_index(self):
        self.assertEqual(ince_index(F(1)), 1)
        self.assertEqual(ince_index(F(3)), 2)
        self.assertEqual(ince_index(F(6)), 3)
        self.assertIsNone(ince_index(F(5, 2)))
        self.assertIsNone(ince_index(F(-1)))
        self.assertIsNone(ince_index(F(1, 3)))

    def test_expected_open_tongues(self):
        self.assertEqual(expected_open_tongues(2), (1, 2))
        self.assertEqual(expected_open_tongues(2, half_period=True), (2, 4))


class AsymptoticOrderTests(SimpleTestCase):
    grid = tuple(0.02 * (0.15 / 0.02) ** (i / 5) for i in range(6))

    def test_power_law_with_correction(self):
        for N, C in ((1, 1.0), (2, 0.125), (3, 0.0078125)):
            records = [synthetic_record(N, q, C * q ** N * (1 + q)) for q in self.grid]
            fit = asymptotic_order(records)
            self.assertAlmostEqual(fit.slope, N, delta=0.1)
            self.assertAlmostEqual(fit.coefficient, C, delta=0.01 * C)
            self.assertEqual(fit.points, 6)
            self.assertFalse(fit.collapsed)
            self.assertAlmostEqual(fit.intercept_coefficient, math.exp(fit.intercept))

    def test_collapsed(self):
        fit = asymptotic_order([synthetic_record(2, q, 1e-13) for q in self.grid])
        self.assertTrue(fit.collapsed)
        self.assertTrue(math.isnan(fit.slope))

    def test_insufficient_data(self):
        records = [synthetic_record(1, q, q) for q in self.grid[:3]]
        with self.assertRaises(InsufficientData):
            asymptotic_order(records)
        with self.assertRaises(InsufficientData):
            asymptotic_order([])

    def test_mixed_indices(self):
        with self.assertRaises(ValueError):
            asymptotic_order([synthetic_record(1, 0.1, 0.1), synthetic_record(2, 0.1, 0.01)])


class ChartTests(SimpleTestCase):
    def test_ordering(self):
        records = (synthetic_record(1, 0.1, 0.1), synthetic_record(2, 0.1, 0.01))
        self.assertTrue(ChartRow(q=0.1, beta0=-0.001, records=records).is_ordered())
        self.assertEqual(len(ChartRow(q=0.1, beta0=-0.001, records=records).boundaries()), 5)
        self.assertFalse(ChartRow(q=0.1, beta0=1.0, records=records).is_ordered())

    def test_series_boundaries(self):
        plus, minus = pairs_for({}, {1: 1}, 2, 1)[1]
        self.assertEqual(series_boundaries(plus, minus, 0.1), (plus.beta(0.1), minus.beta(0.1)))
        self.assertAlmostEqual(plus.beta(0.1), 1 - 0.05 - 0.01 / 32)
