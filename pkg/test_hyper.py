"""
Unit tests for quadratic Euler characteristics of smooth hypersurfaces
"""
import unittest

from errors import NotSmoothError, WeightsInvalidError
from expr_parser import parse_poly
from gw import GWClass
from hyper import (
    chi_c_cone,
    chi_smooth,
    hodge_rank_oracle,
    hypersurface_report,
    make_hypersurface,
    primitive_dimensions,
    weighted_smoothness_warnings,
)
from poly import WeightedRing
from scalars import FieldId


def hypersurface(source, nvars, weights=None, field=None, n=None):
    field = field or FieldId.rationals()
    ring = WeightedRing(field, tuple(f'x{i}' for i in range(nvars)), weights or (1,) * nvars)
    return make_hypersurface(parse_poly(source, ring), n)


class TestChiSmooth(unittest.TestCase):
    """Test cases for chi of Fermat hypersurfaces over Q"""

    def setUp(self):
        """Set up the rationals"""
        self.Q = FieldId.rationals()

    def test_cubic_surface(self):
        """Test chi = <3> + 4H for the Fermat cubic surface"""
        H = hypersurface("x0^3 + x1^3 + x2^3 + x3^3", 4)
        chi = chi_smooth(H)
        self.assertEqual(chi, GWClass.rank_one(self.Q.coerce(3)) + GWClass.hyperbolic_form(self.Q, 4))
        self.assertEqual(chi.rank, 9)
        self.assertEqual(hodge_rank_oracle(H), 9)

    def test_quartic_surface(self):
        """Test the Fermat quartic surface: primitive dimensions 1, 19, 1 and rank 24"""
        H = hypersurface("x0^4 + x1^4 + x2^4 + x3^4", 4)
        self.assertEqual(primitive_dimensions(H), [1, 19, 1])
        chi = chi_smooth(H)
        self.assertEqual(chi.rank, 24)
        self.assertEqual(hodge_rank_oracle(H), 24)
        self.assertEqual(chi, GWClass.hyperbolic_form(self.Q, 12))
        # no real points
        self.assertEqual(chi.to_dict()['signature'], 0)

    def test_plane_cubic(self):
        """Test chi = 0 for a smooth plane cubic"""
        H = hypersurface("x0^3 + x1^3 + x2^3", 3)
        self.assertEqual(chi_smooth(H), GWClass.zero(self.Q))
        self.assertEqual(hodge_rank_oracle(H), 0)

    def test_plane_quartic(self):
        """Test chi = -2H for a smooth plane quartic"""
        H = hypersurface("x0^4 + x1^4 + x2^4", 3)
        self.assertEqual(chi_smooth(H), GWClass.hyperbolic_form(self.Q, -2))
        self.assertEqual(primitive_dimensions(H), [3, 3])
        self.assertEqual(hodge_rank_oracle(H), -4)

    def test_four_points(self):
        """Test chi = 2H for the four points x0^4 + x1^4 = 0"""
        H = hypersurface("x0^4 + x1^4", 2)
        self.assertEqual(chi_smooth(H), GWClass.hyperbolic_form(self.Q, 2))

    def test_rank_matches_hodge_oracle(self):
        """Test rank chi against the Hilbert-function prediction"""
        for source, nvars in [("x0^2 + x1^2 + x2^2", 3),
                              ("x0^3 + x1^3 + x2^3 + x0^2*x1", 3),
                              ("2*x0^3 + 3*x1^3 + 5*x2^3 + 7*x3^3", 4),
                              ("x0^5 + x1^5 + x2^5", 3)]:
            H = hypersurface(source, nvars)
            self.assertEqual(chi_smooth(H).rank, hodge_rank_oracle(H), source)

    def test_prime_field(self):
        """Test the cubic surface over F_7"""
        F7 = FieldId.prime_field(7)
        H = hypersurface("x0^3 + x1^3 + x2^3 + x3^3", 4, field=F7)
        self.assertEqual(chi_smooth(H).rank, 9)


class TestCone(unittest.TestCase):
    """Test cases for the compactly supported chi of a cone"""

    def test_cone_over_plane_cubic(self):
        """Test chi_c = <1> + <-1> * chi(base) = <1>"""
        Q = FieldId.rationals()
        H = hypersurface("x0^3 + x1^3 + x2^3", 3)
        self.assertEqual(chi_c_cone(H), GWClass.one(Q))

    def test_cone_over_points(self):
        """Test chi_c of the cone over four points: <1> + 2H"""
        Q = FieldId.rationals()
        H = hypersurface("x0^4 + x1^4", 2)
        self.assertEqual(chi_c_cone(H), GWClass.one(Q) + GWClass.hyperbolic_form(Q, 2))


class TestWeighted(unittest.TestCase):
    """Test cases for weighted hypersurfaces"""

    def test_weighted_curve(self):
        """Test the (1, 1, 2) quartic curve"""
        H = hypersurface("x0^4 + x1^4 + x2^2", 3, weights=(1, 1, 2))
        self.assertTrue(H.is_weighted)
        self.assertEqual(H.weight_product, 2)
        self.assertEqual(chi_smooth(H).rank, hodge_rank_oracle(H))
        self.assertEqual(weighted_smoothness_warnings(H), [])

    def test_missing_pure_power_warns(self):
        """Test a warning when no pure power of a weighted variable appears"""
        H = hypersurface("x0^4 + x1*x2", 3, weights=(1, 2, 2))
        with self.assertLogs('hyper', level='WARNING'):
            warnings = weighted_smoothness_warnings(H)
        self.assertEqual(warnings, ["no pure power x1^2 in F", "no pure power x2^2 in F"])

    def test_weights_must_be_coprime(self):
        """Test gcd(a_i) = 1"""
        with self.assertRaises(WeightsInvalidError):
            hypersurface("x0^2 + x1^2 + x2^2", 3, weights=(2, 2, 2))

    def test_degree_divisible_by_lcm(self):
        """Test lcm(a_i) | e"""
        with self.assertRaises(WeightsInvalidError):
            hypersurface("x0^3 + x1^3 + x0*x2", 3, weights=(1, 1, 2))


class TestValidation(unittest.TestCase):
    """Test cases for refused hypersurfaces"""

    def test_dimension_mismatch(self):
        """Test that n must equal the number of variables minus 2"""
        with self.assertRaises(WeightsInvalidError):
            hypersurface("x0^3 + x1^3 + x2^3", 3, n=2)

    def test_singular(self):
        """Test that a singular cubic is refused"""
        with self.assertRaises(NotSmoothError):
            hypersurface("x0^3 + x1^3", 3)

    def test_report(self):
        """Test the JSON report of a plane quartic"""
        H = hypersurface("x0^4 + x1^4 + x2^4", 3)
        report = hypersurface_report(H, cone=True)
        self.assertEqual(report['dim'], 1)
        self.assertEqual(report['primitive_degrees'], [1, 5])
        self.assertEqual(report['hodge_rank'], -4)
        self.assertEqual(report['chi']['hyperbolic'], -2)
        self.assertIn('chi_c_cone', report)


if __name__ == '__main__':
    unittest.main(verbosity=2)
