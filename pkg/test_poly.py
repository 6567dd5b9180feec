"""
Unit tests for weighted rings and sparse polynomials
"""
import random
import unittest
from fractions import Fraction

from errors import MixedFieldsError, NotHomogeneousError, WeightsInvalidError, ZeroPolynomialError
from jacobian import hilbert_series_oracle
from poly import (
    WeightedRing,
    determinant,
    euler_defect,
    format_poly,
    hessian_det,
    homogeneous_degree,
    monomials_of_degree,
    partial_derivative,
    substitute_powers,
    weighted_degree,
)
from scalars import FieldId


class TestWeightedRing(unittest.TestCase):
    """Test cases for WeightedRing"""

    def setUp(self):
        """Set up a weighted ring"""
        self.ring = WeightedRing(FieldId.rationals(), ('x0', 'x1', 'x2'), (1, 1, 2))

    def test_validation(self):
        """Test rejected ring shapes"""
        Q = FieldId.rationals()
        with self.assertRaises(WeightsInvalidError):
            WeightedRing(Q, ('x', 'y'), (1,))
        with self.assertRaises(WeightsInvalidError):
            WeightedRing(Q, ('x', 'x'), (1, 1))
        with self.assertRaises(WeightsInvalidError):
            WeightedRing(Q, ('x', 'y'), (1, 0))
        with self.assertRaises(WeightsInvalidError):
            WeightedRing(FieldId.rational_functions(), ('x', 't'), (1, 1))

    def test_monomials_of_degree(self):
        """Test enumeration order: x0-heaviest first"""
        monomials = monomials_of_degree(self.ring, 2)
        self.assertEqual(monomials, [(2, 0, 0), (1, 1, 0), (0, 2, 0), (0, 0, 1)])
        self.assertEqual(monomials_of_degree(self.ring, -1), [])
        self.assertEqual(len(monomials_of_degree(self.ring, 4)), 9)

    def test_extend(self):
        """Test appending a fresh variable"""
        bigger = self.ring.extend('x3', 1)
        self.assertEqual(bigger.variables, ('x0', 'x1', 'x2', 'x3'))
        self.assertEqual(bigger.weights, (1, 1, 2, 1))
        self.assertEqual(self.ring.format_monomial((2, 0, 1)), 'x0^2*x2')
        self.assertEqual(self.ring.format_monomial((0, 0, 0)), '1')


class TestPoly(unittest.TestCase):
    """Test cases for Poly arithmetic and formatting"""

    def setUp(self):
        """Set up generators over Q"""
        self.ring = WeightedRing(FieldId.rationals(), ('x', 'y', 'z'), (1, 1, 1))
        self.x, self.y, self.z = (self.ring.gen(i) for i in range(3))

    def test_arithmetic(self):
        """Test ring operations"""
        x, y = self.x, self.y
        self.assertEqual((x + y) ** 2, x ** 2 + x * y * 2 + y ** 2)
        self.assertTrue((x - x).is_zero())
        self.assertEqual((x * 3).coefficient((1, 0, 0)), Fraction(3))

    def test_format(self):
        """Test canonical text in graded-lex order"""
        x, y, z = self.x, self.y, self.z
        f = z ** 3 * Fraction(-1, 2) + x ** 2 * y * 3
        self.assertEqual(format_poly(f), '3*x^2*y - 1/2*z^3')
        self.assertEqual(format_poly(self.ring.zero()), '0')

    def test_mixed_fields(self):
        """Test that polynomials over different fields do not combine"""
        other = WeightedRing(FieldId.prime_field(7), ('x', 'y', 'z'), (1, 1, 1))
        with self.assertRaises(MixedFieldsError):
            self.x + other.gen(0)

    def test_degrees(self):
        """Test weighted degree and homogeneity"""
        x, y = self.x, self.y
        self.assertEqual(homogeneous_degree(x ** 3 + y ** 3), 3)
        self.assertIsNone(weighted_degree(x ** 3 + y))
        with self.assertRaises(NotHomogeneousError):
            homogeneous_degree(x ** 3 + y)
        with self.assertRaises(ZeroPolynomialError):
            weighted_degree(self.ring.zero())

    def test_partial_derivative(self):
        """Test formal partial derivatives"""
        x, y = self.x, self.y
        self.assertEqual(partial_derivative(x ** 3 * y, 0), x ** 2 * y * 3)
        self.assertTrue(partial_derivative(x ** 3, 1).is_zero())

    def test_euler_relation(self):
        """Test that homogeneous polynomials have zero Euler defect"""
        ring = WeightedRing(FieldId.rationals(), ('x0', 'x1', 'x2'), (1, 1, 2))
        x0, x1, x2 = (ring.gen(i) for i in range(3))
        self.assertTrue(euler_defect(x0 ** 4 + x1 ** 4 + x2 ** 2).is_zero())
        self.assertFalse(euler_defect(x0 ** 4 + x2).is_zero())

    def test_substitute_powers(self):
        """Test the pull-back Y_i -> X_i^a_i"""
        ring = WeightedRing(FieldId.rationals(), ('x0', 'x1'), (1, 2))
        x0, x1 = ring.gen(0), ring.gen(1)
        G = substitute_powers(x0 ** 4 + x1 ** 2)
        self.assertEqual(G.ring.weights, (1, 1))
        self.assertEqual(G.terms, {(4, 0): Fraction(1), (0, 4): Fraction(1)})


class TestDeterminant(unittest.TestCase):
    """Test cases for polynomial determinants"""

    def setUp(self):
        """Set up generators over Q"""
        self.ring = WeightedRing(FieldId.rationals(), ('x', 'y', 'z'), (1, 1, 1))
        self.x, self.y, self.z = (self.ring.gen(i) for i in range(3))

    def test_two_by_two(self):
        """Test ad - bc"""
        x, y = self.x, self.y
        det = determinant([[x, y], [y, x]], self.ring)
        self.assertEqual(det, x ** 2 - y ** 2)

    def test_diagonal_hessian(self):
        """Test the Hessian of the Fermat cubic: 216 xyz"""
        x, y, z = self.x, self.y, self.z
        self.assertEqual(hessian_det(x ** 3 + y ** 3 + z ** 3), x * y * z * 216)

    def test_empty_matrix(self):
        """Test that the empty determinant is 1"""
        self.assertEqual(determinant([], self.ring), self.ring.one())


class TestRandomPolynomials(unittest.TestCase):
    """Seeded random checks of enumeration counts, the chain rule and the Euler relation"""

    def setUp(self):
        """Seed the generator"""
        self.rng = random.Random(20240111)
        self.Q = FieldId.rationals()

    def random_poly(self, ring, degrees):
        f = ring.zero()
        for _ in range(self.rng.randint(1, 5)):
            m = self.rng.choice(degrees)
            monomials = monomials_of_degree(ring, m)
            if monomials:
                f = f + ring.monomial(self.rng.choice(monomials), Fraction(self.rng.randint(1, 9), self.rng.randint(1, 4)))
        return f

    def test_monomial_counts_match_series(self):
        """Test #monomials of degree m = [T^m] prod 1 / (1 - T^a_i) for m <= 40"""
        for weights in ((1, 1), (1, 1, 2), (1, 2, 3), (1, 1, 1, 1)):
            ring = WeightedRing(self.Q, tuple(f'x{i}' for i in range(len(weights))), weights)
            # numerator terms T^(e - a) lie beyond T^40 for e = 100
            series = hilbert_series_oracle(weights, 100, 40)
            counts = [len(monomials_of_degree(ring, m)) for m in range(41)]
            self.assertEqual(counts, series, weights)

    def test_substitute_powers_chain_rule(self):
        """Test dG/dX_i = a_i X_i^(a_i - 1) pi^*(dF/dY_i)"""
        for weights in ((1, 2), (1, 1, 3), (2, 3, 1)):
            ring = WeightedRing(self.Q, tuple(f'x{i}' for i in range(len(weights))), weights)
            for _ in range(10):
                F = self.random_poly(ring, list(range(0, 7)))
                G = substitute_powers(F)
                for i, a in enumerate(weights):
                    exps = tuple(a - 1 if j == i else 0 for j in range(len(weights)))
                    expected = G.ring.monomial(exps, a) * substitute_powers(partial_derivative(F, i))
                    self.assertEqual(partial_derivative(G, i), expected, (str(F), i))

    def test_euler_defect_random(self):
        """Test zero defect for random weighted-homogeneous F and nonzero after a lower-degree term"""
        for weights in ((1, 1), (1, 1, 2), (1, 2, 3)):
            ring = WeightedRing(self.Q, tuple(f'x{i}' for i in range(len(weights))), weights)
            for _ in range(10):
                e = self.rng.randint(2, 6)
                F = self.random_poly(ring, [e])
                if F.is_zero():
                    continue
                self.assertTrue(euler_defect(F).is_zero(), str(F))
                perturbed = F + ring.monomial(monomials_of_degree(ring, 1)[0], 1)
                self.assertFalse(euler_defect(perturbed).is_zero(), str(perturbed))


if __name__ == '__main__':
    unittest.main(verbosity=2)
