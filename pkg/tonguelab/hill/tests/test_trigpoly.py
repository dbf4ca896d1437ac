import math
from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from hill.exceptions import CoefficientOverflow, ResonantRHS
from hill.trigpoly import (
    CosPoly,
    as_fraction,
    cauchy_product,
    check_bits,
    compose,
    mul,
    project,
    second_derivative,
    solve_harmonic,
)

from . import small_rationals

cos_polys = st.lists(small_rationals, max_size=5).map(lambda coeffs: CosPoly(tuple(coeffs)))


class CosPolyTests(SimpleTestCase):
    def test_trailing_zeros_are_dropped(self):
        self.assertEqual(CosPoly((1, 0, 0)), CosPoly.constant(1))
        self.assertTrue(CosPoly((0, 0)).is_zero())
        self.assertEqual(CosPoly.zero().degree, 0)

    def test_floats_are_refused(self):
        with self.assertRaises(TypeError):
            as_fraction(0.5)
        self.assertEqual(as_fraction("3/4"), Fraction(3, 4))

    def test_square_of_first_harmonic(self):
        square = CosPoly.harmonic(1) * CosPoly.harmonic(1)
        self.assertEqual(square, CosPoly((Fraction(1, 2), 0, Fraction(1, 2))))

    def test_second_derivative(self):
        p = CosPoly((3, 1, 2))
        self.assertEqual(second_derivative(p), CosPoly((0, -4, -32)))

    def test_project_and_origin(self):
        p = CosPoly((Fraction(1, 2), -1, Fraction(3, 2)))
        self.assertEqual(project(p, 2), Fraction(3, 2))
        self.assertEqual(project(p, 7), 0)
        self.assertEqual(p.at_origin(), 1)
        self.assertAlmostEqual(p(0.3), 0.5 - math.cos(0.6) + 1.5 * math.cos(1.2))

    def test_str(self):
        self.assertEqual(str(CosPoly((1, 0, -2))), "1 + -2*cos(4t)")
        self.assertEqual(str(CosPoly.zero()), "0")

    @given(cos_polys, cos_polys)
    def test_product_commutes(self, a, b):
        self.assertEqual(a * b, b * a)

    @given(cos_polys, cos_polys, cos_polys)
    def test_product_distributes(self, a, b, c):
        self.assertEqual(a * (b + c), a * b + a * c)

    @given(cos_polys, cos_polys)
    def test_value_at_origin_is_multiplicative(self, a, b):
        self.assertEqual(mul(a, b).at_origin(), a.at_origin() * b.at_origin())

    @given(cos_polys, cos_polys, cos_polys)
    def test_product_associates(self, a, b, c):
        self.assertEqual((a * b) * c, a * (b * c))

    @given(cos_polys, cos_polys)
    def test_degree_adds(self, a, b):
        if a and b:
            self.assertEqual((a * b).degree, a.degree + b.degree)

    @given(cos_polys, cos_polys)
    def test_product_matches_pointwise_values(self, a, b):
        if not (a and b):
            return
        points = 2 * (a.degree + b.degree) + 1
        product = a * b
        for j in range(points):
            tau = math.pi * j / points
            self.assertAlmostEqual(product(tau), a(tau) * b(tau), places=9)


class SolveHarmonicTests(SimpleTestCase):
    def test_resonant_right_hand_side(self):
        with self.assertRaises(ResonantRHS):
            solve_harmonic(CosPoly((0, 1)))

    @given(small_rationals, small_rationals, small_rationals)
    def test_solution_satisfies_equation(self, c0, c2, c3):
        rhs = CosPoly((c0, 0, c2, c3))
        w = solve_harmonic(rhs)
        self.assertEqual(second_derivative(w) + 4 * w, rhs)
        self.assertEqual(w.at_origin(), 0)

    def test_quadratic_source(self):
        w = solve_harmonic(CosPoly((Fraction(-1, 2), 0, Fraction(-1, 2))))
        self.assertEqual(w, CosPoly((Fraction(-1, 8), Fraction(1, 12), Fraction(1, 24))))

    def test_constant_source(self):
        w = solve_harmonic(CosPoly.constant(1))
        self.assertEqual(w, CosPoly((Fraction(1, 4), Fraction(-1, 4))))
        self.assertEqual(w.at_origin(), 0)
        self.assertEqual(second_derivative(w) + 4 * w, CosPoly.constant(1))

    @given(small_rationals)
    def test_constant_source_vanishes_at_origin(self, c0):
        w = solve_harmonic(CosPoly.constant(c0))
        self.assertEqual(w.at_origin(), 0)
        self.assertEqual(second_derivative(w) + 4 * w, CosPoly.constant(c0))


class SeriesHelperTests(SimpleTestCase):
    def test_cauchy_product_truncates(self):
        self.assertEqual(cauchy_product((1, 1), (1, 1), 3, 0), (1, 2, 1, 0))
        self.assertEqual(cauchy_product((1, 2, 3), (1,), 1, 0), (1, 2))

    @settings(max_examples=30)
    @given(small_rationals, small_rationals, small_rationals)
    def test_compose_with_polynomial(self, a1, a2, s1):
        taylor = {1: a1, 2: a2}
        series = (Fraction(0), s1, Fraction(1))
        result = compose(lambda k: taylor.get(k, Fraction(0)), 2, series, 3, Fraction(0))
        # a1 (s1 q + q**2) + a2 (s1 q + q**2)**2
        self.assertEqual(result, (0, a1 * s1, a1 + a2 * s1 * s1, 2 * a2 * s1))

    def test_compose_pads_short_series(self):
        result = compose(lambda k: Fraction(1), 3, (Fraction(0), Fraction(1)), 4, Fraction(0))
        self.assertEqual(result, (0, 1, 1, 1, 0))

    def test_bit_limit(self):
        check_bits([Fraction(255, 7)], limit=8)
        with self.assertRaises(CoefficientOverflow) as ctx:
            check_bits([Fraction(256, 7)], limit=8)
        self.assertEqual(ctx.exception.bits, 9)
