"""
Unit tests for Grothendieck-Witt classes, diagonalization and invariants
"""
import random
import unittest
from fractions import Fraction

from sympy.ntheory import primefactors

from errors import (
    DegenerateFormError,
    MixedFieldsError,
    UnsupportedFieldError,
    UserInputError,
    ZeroScalarError,
)
from gw import (
    INFINITY,
    GWClass,
    check_certificate,
    diagonalize,
    diagonalize_with_certificate,
    gw_add,
    gw_equal,
    gw_scale,
    gw_sign_power,
    hilbert_symbol,
    invariants,
    specialize,
)
from scalars import FieldId, ModP


class TestGWClass(unittest.TestCase):
    """Test cases for canonical GW classes"""

    def setUp(self):
        """Set up the rationals"""
        self.Q = FieldId.rationals()

    def test_hyperbolic_folding(self):
        """Test that <u> + <-u> is stored as H"""
        q = GWClass.from_diagonal(self.Q, [3, -3, 5])
        self.assertEqual(q.hyperbolic, 1)
        self.assertEqual(q.rank, 3)
        self.assertEqual(str(q), '<5> + H')

    def test_square_classes_merge(self):
        """Test that entries in the same square class merge"""
        q = GWClass.from_diagonal(self.Q, [2, 8, Fraction(1, 2)])
        self.assertEqual(str(q), '3<2>')
        self.assertEqual(q.rank, 3)

    def test_subtraction_and_zero(self):
        """Test that q - q is the zero class"""
        q = GWClass.from_diagonal(self.Q, [1, 3]) + GWClass.hyperbolic_form(self.Q, 2)
        self.assertEqual(q - q, GWClass.zero(self.Q))
        self.assertEqual(str(GWClass.zero(self.Q)), '0')
        self.assertEqual(str(GWClass.rank_one(Fraction(3)) - GWClass.one(self.Q)), '-<1> + <3>')

    def test_product(self):
        """Test multiplication: <a><b> = <ab> and <u> H = H"""
        q = GWClass.rank_one(Fraction(2)) * GWClass.rank_one(Fraction(3))
        self.assertEqual(q, GWClass.rank_one(Fraction(6)))
        h = GWClass.rank_one(Fraction(7)) * GWClass.hyperbolic_form(self.Q)
        self.assertEqual(h, GWClass.hyperbolic_form(self.Q))

    def test_scaling(self):
        """Test <u> q and the signed power (-<e>)^n q"""
        q = GWClass.from_diagonal(self.Q, [1, 2])
        self.assertEqual(gw_scale(Fraction(2), q), GWClass.from_diagonal(self.Q, [2, 1]))
        self.assertEqual(gw_sign_power(Fraction(3), 1, q), -GWClass.from_diagonal(self.Q, [3, 6]))
        self.assertEqual(gw_sign_power(Fraction(3), 2, q), q)
        with self.assertRaises(ZeroScalarError):
            gw_scale(Fraction(0), q)

    def test_prime_field_folding(self):
        """Test that <u> + <u> = H when -1 is a square"""
        F5 = FieldId.prime_field(5)
        q = GWClass.from_diagonal(F5, [ModP(2, 5), ModP(3, 5)])
        self.assertTrue(q.is_hyperbolic_multiple())
        self.assertEqual(q.rank, 2)

    def test_mixed_fields(self):
        """Test that classes over different fields do not add"""
        with self.assertRaises(MixedFieldsError):
            gw_add(GWClass.one(self.Q), GWClass.one(FieldId.prime_field(7)))

    def test_dict_round_trip(self):
        """Test the JSON form carries invariants and rebuilds the class"""
        q = GWClass.from_diagonal(self.Q, [3]) + GWClass.hyperbolic_form(self.Q, 4)
        data = q.to_dict()
        self.assertEqual(data['rank'], 9)
        self.assertEqual(data['signature'], 1)
        self.assertEqual(data['entries'], [{'class': '3', 'mult': 1}])
        self.assertEqual(GWClass.from_dict(data), q)


class TestDiagonalization(unittest.TestCase):
    """Test cases for symmetric Gaussian elimination"""

    def setUp(self):
        """Set up the rationals"""
        self.Q = FieldId.rationals()

    def test_hyperbolic_plane(self):
        """Test that [[0,1],[1,0]] needs a pivot repair and gives H"""
        result = diagonalize_with_certificate([[0, 1], [1, 0]], self.Q)
        self.assertEqual(result.pivot_repairs, 1)
        self.assertEqual(result.gw_class, GWClass.hyperbolic_form(self.Q))
        self.assertTrue(result.verify([[0, 1], [1, 0]]))

    def test_certificate(self):
        """Test the congruence certificate on a full matrix"""
        gram = [[2, 1, 0], [1, 2, 1], [0, 1, 2]]
        result = diagonalize_with_certificate(gram, self.Q)
        check_certificate(gram, result)
        self.assertEqual(result.diagonal, [Fraction(2), Fraction(3, 2), Fraction(4, 3)])
        self.assertEqual(result.gw_class.rank, 3)

    def test_pivot_order_invariance(self):
        """Test that both pivot orders give the same class"""
        gram = [[1, 2, 3], [2, 5, 7], [3, 7, 1]]
        first = diagonalize(gram, self.Q, 'first')
        last = diagonalize(gram, self.Q, 'last')
        self.assertTrue(gw_equal(first, last).equal)

    def test_degenerate(self):
        """Test that singular matrices are refused"""
        with self.assertRaises(DegenerateFormError):
            diagonalize([[1, 1], [1, 1]], self.Q)

    def test_not_symmetric(self):
        """Test that asymmetric matrices are refused"""
        with self.assertRaises(UserInputError):
            diagonalize([[1, 2], [3, 1]], self.Q)

    def test_function_field_entries(self):
        """Test diagonalization over Q(t)"""
        Qt = FieldId.rational_functions()
        t = Qt.t()
        q = diagonalize([[Qt.one(), t], [t, Qt.zero()]], Qt)
        self.assertEqual(q, GWClass.hyperbolic_form(Qt))

    def test_random_symmetric_matrices(self):
        """Test certificates and pivot-order invariance on seeded random forms"""
        rng = random.Random(20240107)
        checked = 0
        while checked < 25:
            n = rng.randint(2, 5)
            gram = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(i, n):
                    gram[i][j] = gram[j][i] = rng.randint(-4, 4)
            try:
                first = diagonalize_with_certificate(gram, self.Q, 'first')
            except DegenerateFormError:
                continue
            self.assertTrue(first.verify(gram))
            self.assertEqual(first.gw_class.rank, n)
            last = diagonalize(gram, self.Q, 'last')
            self.assertTrue(gw_equal(first.gw_class, last).equal)
            checked += 1

    def test_random_certificates_up_to_eight(self):
        """Test congruence certificates on 100 seeded random matrices of size at most 8"""
        rng = random.Random(20240109)
        checked = 0
        while checked < 100:
            n = rng.randint(1, 8)
            gram = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(i, n):
                    gram[i][j] = gram[j][i] = rng.randint(-3, 3)
            try:
                result = diagonalize_with_certificate(gram, self.Q, rng.choice(('first', 'last')))
            except DegenerateFormError:
                continue
            check_certificate(gram, result)
            self.assertTrue(result.verify(gram))
            self.assertEqual(result.gw_class.rank, n)
            checked += 1


class TestHilbertSymbols(unittest.TestCase):
    """Test cases for Hilbert symbols over Q"""

    def test_real_place(self):
        """Test (a, b)_inf"""
        self.assertEqual(hilbert_symbol(-1, -1, INFINITY), -1)
        self.assertEqual(hilbert_symbol(-1, 2, INFINITY), 1)

    def test_odd_primes(self):
        """Test (a, b)_p for odd p"""
        self.assertEqual(hilbert_symbol(2, 3, 3), -1)
        self.assertEqual(hilbert_symbol(3, 3, 3), -1)
        self.assertEqual(hilbert_symbol(2, 5, 3), 1)

    def test_prime_two(self):
        """Test (a, b)_2"""
        self.assertEqual(hilbert_symbol(-1, -1, 2), -1)
        self.assertEqual(hilbert_symbol(2, 3, 2), -1)
        self.assertEqual(hilbert_symbol(2, 7, 2), 1)

    def test_product_formula(self):
        """Test that the symbols of (a, b) over all places multiply to 1"""
        for a, b in [(2, 3), (-1, -1), (5, -7), (6, 10)]:
            product = hilbert_symbol(a, b, INFINITY)
            for p in (2, 3, 5, 7):
                product *= hilbert_symbol(a, b, p)
            self.assertEqual(product, 1, (a, b))

    def test_product_formula_random_pairs(self):
        """Test the product formula on seeded random pairs, places dividing 2ab and infinity"""
        rng = random.Random(20240108)
        values = [v for v in range(-50, 51) if v != 0]
        for _ in range(200):
            a, b = rng.choice(values), rng.choice(values)
            product = hilbert_symbol(a, b, INFINITY)
            for p in primefactors(2 * a * b):
                product *= hilbert_symbol(a, b, p)
            self.assertEqual(product, 1, (a, b))


class TestEquality(unittest.TestCase):
    """Test cases for gw_equal"""

    def setUp(self):
        """Set up the rationals"""
        self.Q = FieldId.rationals()

    def test_isometric_rational_forms(self):
        """Test <1,1> = <2,2> and <1,1> != <3,3>"""
        self.assertTrue(gw_equal(GWClass.from_diagonal(self.Q, [1, 1]), GWClass.from_diagonal(self.Q, [2, 2])))
        verdict = gw_equal(GWClass.from_diagonal(self.Q, [1, 1]), GWClass.from_diagonal(self.Q, [3, 3]))
        self.assertFalse(verdict.equal)
        self.assertEqual(verdict.method, 'hasse-minkowski')
        self.assertIn('hasse@3', verdict.mismatches)

    def test_virtual_classes(self):
        """Test equality of differences: <3> - <1> + 4H = <3> + <-1> + 3H"""
        lhs = GWClass.rank_one(Fraction(3)) - GWClass.one(self.Q) + GWClass.hyperbolic_form(self.Q, 4)
        rhs = GWClass.from_diagonal(self.Q, [3, -1]) + GWClass.hyperbolic_form(self.Q, 3)
        self.assertTrue(gw_equal(lhs, rhs).equal)

    def test_signature_mismatch(self):
        """Test that <1> and <-1> differ by signature"""
        verdict = gw_equal(GWClass.one(self.Q), GWClass.rank_one(Fraction(-1)))
        self.assertIn('signature', verdict.mismatches)

    def test_prime_field(self):
        """Test rank and discriminant over F_7"""
        F7 = FieldId.prime_field(7)
        verdict = gw_equal(GWClass.from_diagonal(F7, [1, 1]), GWClass.from_diagonal(F7, [3, 3]))
        self.assertTrue(verdict.equal)
        self.assertEqual(verdict.method, 'rank+discriminant')
        self.assertFalse(gw_equal(GWClass.from_diagonal(F7, [1]), GWClass.from_diagonal(F7, [3])).equal)

    def test_function_field_refused(self):
        """Test that equality over Q(t) is not decided"""
        Qt = FieldId.rational_functions()
        with self.assertRaises(UnsupportedFieldError):
            gw_equal(GWClass.one(Qt), GWClass.one(Qt))

    def test_invariants(self):
        """Test reported invariants of 4H + <3>"""
        inv = invariants(GWClass.rank_one(Fraction(3)) + GWClass.hyperbolic_form(self.Q, 4))
        self.assertEqual(inv.rank, 9)
        self.assertEqual(inv.signature, 1)
        self.assertIn(3, inv.hasse)

    def test_characteristic_two_refused(self):
        """Test that there is no characteristic 2 field to diagonalize over"""
        with self.assertRaises(UserInputError):
            FieldId.prime_field(2)


class TestSpecialization(unittest.TestCase):
    """Test cases for sp_t"""

    def test_leading_units(self):
        """Test sp_t(<t> + <-6t>) = <1> + <-6>"""
        Qt = FieldId.rational_functions()
        t = Qt.t()
        q = specialize(GWClass.from_diagonal(Qt, [t, t * -6]))
        Q = FieldId.rationals()
        self.assertEqual(q, GWClass.from_diagonal(Q, [1, -6]))

    def test_hyperbolic_survives(self):
        """Test sp_t(H) = H"""
        Qt = FieldId.rational_functions()
        self.assertEqual(specialize(GWClass.hyperbolic_form(Qt, 2)), GWClass.hyperbolic_form(FieldId.rationals(), 2))

    def test_needs_function_field(self):
        """Test that constant classes cannot be specialized"""
        with self.assertRaises(UnsupportedFieldError):
            specialize(GWClass.one(FieldId.rationals()))


if __name__ == '__main__':
    unittest.main(verbosity=2)
