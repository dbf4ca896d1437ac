import dataclasses
import math
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase, override_settings, tag

from hill.exceptions import BracketNotFound, InadmissibleAmplitude
from hill.floquet import (
    NumericProblem,
    OracleSettings,
    TongueRecord,
    _eigenvalue,
    boundary0,
    discriminant,
    energy_drift,
    half_period_solutions,
    monodromy,
    return_map_period,
    scan_window,
    tongue_boundaries,
)
from hill.hillseries import CouplingSpec, Parity, compose_G, eigen_series
from hill.lindstedt import OscillatorSpec, expand


class OracleSettingsTests(SimpleTestCase):
    def test_defaults_and_overrides(self):
        settings = OracleSettings.from_settings(root_tolerance=1e-10)
        self.assertEqual(settings.method, "DOP853")
        self.assertEqual(settings.root_tolerance, 1e-10)
        self.assertEqual(settings.rtol, 1e-12)

    @override_settings(HILL={"INTEGRATOR_RTOL": 1e-10, "SCAN_POINTS": 17})
    def test_django_settings(self):
        settings = OracleSettings.from_settings()
        self.assertEqual(settings.rtol, 1e-10)
        self.assertEqual(settings.scan_points, 17)

    @override_settings(HILL={"SCAN_POINTS": 17.0})
    def test_integral_float_counts(self):
        self.assertIs(type(OracleSettings.from_settings().scan_points), int)
        settings = OracleSettings.from_settings(scan_points=33.0, quadrature_max_nodes=64.0)
        self.assertEqual((settings.scan_points, settings.quadrature_max_nodes), (33, 64))
        self.assertIs(type(settings.quadrature_max_nodes), int)
        with self.assertRaises(TypeError):
            OracleSettings.from_settings(scan_points=17.5)

    def test_unknown_override(self):
        with self.assertRaises(TypeError):
            OracleSettings.from_settings(colour="blue")

    def test_refined(self):
        settings = OracleSettings.from_settings()
        refined = settings.refined()
        self.assertEqual(refined.rtol, settings.rtol / settings.refinement_factor)
        self.assertEqual(refined.atol, settings.atol / settings.refinement_factor)
        self.assertEqual(dataclasses.replace(refined, rtol=settings.rtol, atol=settings.atol), settings)


class NumericProblemTests(SimpleTestCase):
    def test_amplitude_bounds(self):
        with self.assertRaises(InadmissibleAmplitude):
            NumericProblem({}, {1: 1}, 0.0)
        with self.assertRaises(InadmissibleAmplitude):
            NumericProblem({}, {1: 1}, 1.5)

    def test_restoring_force_must_stay_positive(self):
        with self.assertRaises(InadmissibleAmplitude):
            NumericProblem({2: -10}, {1: 1}, 0.5)

    def test_linear_period(self):
        problem = NumericProblem({}, {1: 1}, 0.2)
        self.assertAlmostEqual(problem.period, math.pi, places=12)
        self.assertAlmostEqual(problem.omega2, 1.0, places=12)
        x_minus, x_plus = problem.turning_points
        self.assertAlmostEqual(x_minus, -0.2, places=12)
        self.assertEqual(x_plus, 0.2)

    def test_scan_window(self):
        problem = NumericProblem({}, {1: 1}, 0.1)
        lo, hi = scan_window(problem, 3)
        self.assertAlmostEqual((lo + hi) / 2, 9.0, places=10)
        self.assertLess(hi, 16.0)
        self.assertGreater(lo, 4.0)

    def test_record_properties(self):
        record = TongueRecord(N=1, q=0.1, beta_even=0.94, beta_odd=1.05, residual_even=0.0,
                              residual_odd=0.0, bracket_width=0.2)
        self.assertEqual(record.beta_minus, 0.94)
        self.assertEqual(record.beta_plus, 1.05)
        self.assertAlmostEqual(record.signed_length, -0.11)
        self.assertAlmostEqual(record.length, 0.11)
        self.assertFalse(record.numerically_zero)


@tag("slow")
class OracleTests(SimpleTestCase):
    def test_period_cross_checks(self):
        problem = NumericProblem({3: 1}, {}, 0.3)
        # omega**2 = 1 + 3 q**2 / 16 + O(q**4)
        self.assertAlmostEqual(problem.omega2, 1 + 3 * 0.09 / 16, places=3)
        self.assertAlmostEqual(return_map_period(problem), problem.period, places=9)
        self.assertLess(energy_drift(problem), 1e-10)

    def test_free_limit(self):
        problem = NumericProblem({}, {1: 1}, 0.1).with_coupling_scale(0.0)
        for beta in (0.5, 2.0, 5.0):
            delta = half_period_solutions(problem, beta).discriminant()
            self.assertAlmostEqual(delta, 2 * math.cos(math.sqrt(beta) * math.pi), places=8)
            result = discriminant(problem, beta)
            self.assertAlmostEqual(result.discriminant, delta, places=8)
            self.assertAlmostEqual(result.determinant, 1.0, places=9)

    def test_mathieu_first_tongue_matches_series(self):
        q = 0.1
        record = tongue_boundaries(NumericProblem({}, {1: 1}, q), 1)
        series = compose_G(CouplingSpec(gamma={1: 1}, order=6), expand(OscillatorSpec(order=6)))
        plus, minus = eigen_series(series, 1, Parity.EVEN), eigen_series(series, 1, Parity.ODD)
        self.assertAlmostEqual(record.beta_even, plus.beta(q), places=9)
        self.assertAlmostEqual(record.beta_odd, minus.beta(q), places=9)
        self.assertLess(record.beta_even, record.beta_odd)
        self.assertLess(record.residual_even, 1e-8)
        self.assertLess(record.residual_odd, 1e-8)

    def test_monodromy_is_unimodular(self):
        problem = NumericProblem({2: 1}, {1: 2}, 0.1)
        matrix = monodromy(problem, 3.7)
        self.assertAlmostEqual(float(np.linalg.det(matrix)), 1.0, places=9)

    def test_ground_boundary(self):
        beta0 = boundary0(NumericProblem({}, {1: 1}, 0.1))
        self.assertAlmostEqual(beta0, -0.01 / 8 + 7e-4 / 2048, places=8)

    def test_coexistence_closes_second_tongue(self):
        # g = x / 3 with f = x**2 leaves only the first tongue open
        problem = NumericProblem({2: 1}, {1: Fraction(1, 3)}, 0.1)
        self.assertGreater(tongue_boundaries(problem, 1).length, 1e-6)
        self.assertLess(tongue_boundaries(problem, 2).length, 1e-8)

    def test_missing_bracket(self):
        problem = NumericProblem({}, {1: 1}, 0.1)
        with self.assertRaises(BracketNotFound) as ctx:
            _eigenvalue(problem, 1, Parity.EVEN, (1.5, 2.5))
        self.assertEqual(ctx.exception.N, 1)
