"""
Jacobian - Graded Jacobian rings J(F), the Scheja-Storch socle generator and B_Jac
"""
import logging
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from errors import (
    BadCharacteristicError,
    EulerRelationError,
    InvariantBreachError,
    NotFiniteDimensionalError,
    OddRankPrimitiveError,
    UserInputError,
    WeightsInvalidError,
    ZeroSocleGeneratorError,
)
from gw import GWClass, diagonalize
from poly import (
    Monomial,
    Poly,
    WeightedRing,
    determinant,
    euler_defect,
    format_poly,
    hessian_matrix,
    homogeneous_degree,
    monomial_mul,
    monomials_of_degree,
    partial_derivative,
    substitute_powers,
)
from scalars import format_scalar

logger = logging.getLogger(__name__)

STRATEGY_ALIASES = {
    'lowest': 'lowest',
    'lowest_var': 'lowest',
    'highest': 'highest',
    'highest_var': 'highest',
    'hessian': 'hessian',
}


@dataclass
class GradedPiece:
    """Degree-m slice of J(F): quotient basis and normal forms of every monomial"""
    degree: int
    all_monomials: List[Monomial]
    quotient_basis: List[Monomial]
    reduction: Dict[Monomial, Dict[Monomial, Any]] = dc_field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.quotient_basis)

    def reduce_monomial(self, monomial: Monomial) -> Dict[Monomial, Any]:
        """Normal form of a monomial of this degree as {basis monomial: coefficient}"""
        if monomial in self.reduction:
            return self.reduction[monomial]
        raise UserInputError(f"monomial {monomial} is not of degree {self.degree}")

    def reduce(self, f: Poly) -> Dict[Monomial, Any]:
        """Normal form of a polynomial whose terms all have this degree"""
        zero = f.ring.field.zero()
        result: Dict[Monomial, Any] = {}
        for m, c in f.terms.items():
            for b, v in self.reduce_monomial(m).items():
                result[b] = result.get(b, zero) + c * v
        return {b: v for b, v in result.items() if v}

    def vector(self, f: Poly) -> List:
        """Coordinates of f in the quotient basis"""
        reduced = self.reduce(f)
        zero = f.ring.field.zero()
        return [reduced.get(b, zero) for b in self.quotient_basis]

    def reduction_matrix(self) -> List[List]:
        """Rows: every monomial of this degree, columns: the quotient basis"""
        rows = []
        for m in self.all_monomials:
            nf = self.reduction[m]
            rows.append([nf.get(b, 0) for b in self.quotient_basis])
        return rows


@dataclass
class SchejaStorchElement:
    """e_F: image of det(a_ij) in the socle of J(F)"""
    degree: int
    basis: List[Monomial]
    vector: List
    determinant: Poly
    strategy: str

    @property
    def coefficient(self):
        """Socle coordinate (the socle is one-dimensional for smooth F)"""
        return self.vector[0]

    def is_zero(self) -> bool:
        return not any(self.vector)

    def to_dict(self) -> Dict[str, Any]:
        ring = self.determinant.ring
        return {
            'degree': self.degree,
            'strategy': self.strategy,
            'basis': [ring.format_monomial(m) for m in self.basis],
            'vector': [format_scalar(c) for c in self.vector],
        }


class JacobianRing:
    """k[X_0..X_N] / (dF/dX_0, ..., dF/dX_N) for a weighted-homogeneous F"""

    def __init__(self, F: Poly, e: int, partials: List[Poly]):
        self.ring: WeightedRing = F.ring
        self.F = F
        self.e = e
        self.partials = partials
        self.socle_degree = self.ring.nvars * e - 2 * sum(self.ring.weights)
        self._pieces: Dict[int, GradedPiece] = {}
        self._smooth: Optional[bool] = None
        self._socle_generators: Dict[str, SchejaStorchElement] = {}

    @property
    def field(self):
        return self.ring.field

    def graded_piece(self, m: int) -> GradedPiece:
        return graded_piece(self, m)

    def reduce(self, f: Poly) -> Dict[Monomial, Any]:
        """Normal form of a homogeneous polynomial (zero maps to {})"""
        if f.is_zero():
            return {}
        return self.graded_piece(homogeneous_degree(f)).reduce(f)

    def hilbert_function(self, up_to: Optional[int] = None) -> List[int]:
        return hilbert_function(self, self.socle_degree if up_to is None else up_to)

    def is_smooth(self) -> bool:
        if self._smooth is None:
            self._smooth = is_smooth_quotient(self)
        return self._smooth

    def dimension(self) -> int:
        """dim_k J(F), finite case only"""
        require_finite(self)
        return sum(self.hilbert_function())

    def socle_generator(self, strategy: Optional[str] = None) -> SchejaStorchElement:
        """Cached e_F for the given (or configured) strategy"""
        if strategy is None:
            from config import get_settings
            strategy = get_settings().strategy
            if strategy == 'hessian' and any(a != 1 for a in self.ring.weights):
                strategy = 'lowest'
        strategy = _strategy_name(strategy)
        if strategy not in self._socle_generators:
            self._socle_generators[strategy] = scheja_storch_element(self, strategy)
        return self._socle_generators[strategy]

    def to_dict(self) -> Dict[str, Any]:
        """JSON dump: field, weights, F, socle degree, Hilbert function, socle generator"""
        smooth = self.is_smooth()
        data: Dict[str, Any] = {
            'field': str(self.field),
            'vars': list(self.ring.variables),
            'weights': list(self.ring.weights),
            'poly': format_poly(self.F),
            'degree': self.e,
            'socle_degree': self.socle_degree,
            'smooth': smooth,
        }
        if smooth:
            data['hilbert_function'] = self.hilbert_function()
            data['dimension'] = sum(data['hilbert_function'])
            data['socle_generator'] = self.socle_generator().to_dict()
        return data


def _strategy_name(strategy: str) -> str:
    try:
        return STRATEGY_ALIASES[strategy]
    except KeyError:
        raise UserInputError(f"unknown Scheja-Storch strategy {strategy!r}")


def build_jacobian(F: Poly) -> JacobianRing:
    """
    Jacobian ring of a weighted-homogeneous polynomial

    Args:
        F: weighted-homogeneous polynomial of degree e

    Returns:
        JacobianRing: partials computed, graded pieces built on demand
    """
    e = homogeneous_degree(F)
    ring = F.ring
    p = ring.field.characteristic
    if p:
        product = e
        for a in ring.weights:
            product *= a
        if product % p == 0:
            raise BadCharacteristicError(
                f"characteristic {p} divides e * prod(a_i) = {product}")
    if not euler_defect(F).is_zero():
        raise EulerRelationError("F does not satisfy the weighted Euler relation")
    partials = [partial_derivative(F, i) for i in range(ring.nvars)]
    return JacobianRing(F, e, partials)


def graded_piece(J: JacobianRing, m: int) -> GradedPiece:
    """
    Degree-m piece of J(F) by row reduction of the relation slice {F_i * mu}

    Columns are the monomials of degree m in graded-lex order; pivots are taken
    at the first nonzero entry of each row, so the non-pivot monomials form the
    quotient basis.

    Args:
        J: Jacobian ring
        m: degree (negative degrees give the zero piece)
    """
    cached = J._pieces.get(m)
    if cached is not None:
        return cached
    monomials = monomials_of_degree(J.ring, m)
    index = {mono: k for k, mono in enumerate(monomials)}
    field = J.field
    pivots: Dict[int, Dict[int, Any]] = {}

    for i, Fi in enumerate(J.partials):
        if Fi.is_zero():
            continue
        for mu in monomials_of_degree(J.ring, m - (J.e - J.ring.weights[i])):
            row = {index[monomial_mul(nu, mu)]: c for nu, c in Fi.terms.items()}
            _insert_row(pivots, row)

    zero, one = field.zero(), field.one()
    basis = [mono for k, mono in enumerate(monomials) if k not in pivots]
    reduction: Dict[Monomial, Dict[Monomial, Any]] = {b: {b: one} for b in basis}
    for col, row in pivots.items():
        reduction[monomials[col]] = {monomials[k]: -v for k, v in row.items() if k != col and v != zero}
    piece = GradedPiece(m, monomials, basis, reduction)
    J._pieces[m] = piece
    logger.debug("J_%d: %d monomials, %d relations, dim %d", m, len(monomials), len(pivots), piece.dim)
    return piece


def _insert_row(pivots: Dict[int, Dict[int, Any]], row: Dict[int, Any]) -> None:
    # pivot rows are kept fully reduced: no pivot row has an entry in another pivot column
    row = {k: v for k, v in row.items() if v}
    for col in [k for k in row if k in pivots]:
        c = row.get(col)
        if not c:
            continue
        for k, v in pivots[col].items():
            w = row.get(k)
            w = -(c * v) if w is None else w - c * v
            if w:
                row[k] = w
            else:
                row.pop(k, None)
    if not row:
        return
    lead = min(row)
    inv = row[lead]
    row = {k: v / inv for k, v in row.items()}
    for other in pivots.values():
        c = other.get(lead)
        if not c:
            continue
        for k, v in row.items():
            w = other.get(k)
            w = -(c * v) if w is None else w - c * v
            if w:
                other[k] = w
            else:
                other.pop(k, None)
    pivots[lead] = row


def hilbert_function(J: JacobianRing, up_to: int) -> List[int]:
    """[dim J_0, ..., dim J_up_to]"""
    return [graded_piece(J, m).dim for m in range(up_to + 1)]


def is_smooth_quotient(J: JacobianRing) -> bool:
    """
    Whether J(F) is finite-dimensional (the hypersurface is quasi-smooth)

    True iff the socle piece is one-dimensional and J vanishes on the next
    max(a_i) degrees, after which every degree vanishes.
    """
    s = J.socle_degree
    if s < 0:
        return False
    if graded_piece(J, s).dim != 1:
        return False
    return all(graded_piece(J, m).dim == 0 for m in range(s + 1, s + max(J.ring.weights) + 1))


def require_finite(J: JacobianRing) -> None:
    if not J.is_smooth():
        raise NotFiniteDimensionalError(
            f"J(F) is not finite-dimensional for F = {format_poly(J.F)}; the hypersurface is singular")


def splitting_matrix(J: JacobianRing, strategy: str) -> List[List[Poly]]:
    """
    Matrix a_ij with F_i = sum_j a_ij X_j

    'lowest' and 'highest' divide each monomial of F_i by its lowest or highest
    index variable; 'hessian' uses F_ij / (e - 1) and needs weights 1.
    """
    strategy = _strategy_name(strategy)
    ring = J.ring
    n = ring.nvars
    if strategy == 'hessian':
        if any(a != 1 for a in ring.weights):
            raise WeightsInvalidError("the Hessian splitting needs all weights equal to 1")
        denom = ring.field.coerce(J.e - 1)
        if not denom:
            raise BadCharacteristicError(f"e - 1 = {J.e - 1} is not invertible in {ring.field}")
        inv = ring.field.one() / denom
        return [[entry.scale(inv) for entry in row] for row in hessian_matrix(J.F)]

    matrix = [[ring.zero() for _ in range(n)] for _ in range(n)]
    for i, Fi in enumerate(J.partials):
        cells: List[Dict[Monomial, Any]] = [{} for _ in range(n)]
        for mono, c in Fi.terms.items():
            support = [j for j, k in enumerate(mono) if k]
            if not support:
                raise NotFiniteDimensionalError(f"dF/d{ring.variables[i]} has a constant term")
            j = support[0] if strategy == 'lowest' else support[-1]
            reduced = mono[:j] + (mono[j] - 1,) + mono[j + 1:]
            cells[j][reduced] = c
        matrix[i] = [Poly(ring, cell) for cell in cells]
    return matrix


def scheja_storch_element(J: JacobianRing, strategy: str = 'lowest') -> SchejaStorchElement:
    """
    e_F = det(a_ij) reduced into the socle of J(F)

    Args:
        J: finite-dimensional Jacobian ring
        strategy: 'lowest', 'highest' (or the *_var aliases) or 'hessian'

    Returns:
        SchejaStorchElement: coordinates in the socle basis
    """
    require_finite(J)
    strategy = _strategy_name(strategy)
    det = determinant(splitting_matrix(J, strategy), J.ring)
    piece = graded_piece(J, J.socle_degree)
    vector = piece.vector(det) if not det.is_zero() else [J.field.zero()] * piece.dim
    return SchejaStorchElement(J.socle_degree, list(piece.quotient_basis), vector, det, strategy)


def socle_coefficient(J: JacobianRing, f: Poly, strategy: Optional[str] = None):
    """lambda with f = lambda * e_F in J(F), for f in the socle degree"""
    element = J.socle_generator(strategy)
    if element.is_zero():
        raise ZeroSocleGeneratorError("the Scheja-Storch element reduces to zero")
    if f.is_zero():
        return J.field.zero()
    vector = graded_piece(J, J.socle_degree).vector(f)
    return vector[0] / element.coefficient


def pairing_basis(J: JacobianRing, degrees: Iterable[int]) -> List[Tuple[int, Monomial]]:
    """Concatenated quotient bases of the requested degrees, in the given order"""
    basis = []
    for m in degrees:
        basis.extend((m, mono) for mono in graded_piece(J, m).quotient_basis)
    return basis


def gram_matrix(J: JacobianRing, degrees: Sequence[int], strategy: Optional[str] = None) -> List[List]:
    """
    Gram matrix of B_Jac on the span of J_m for m in degrees

    Entry (x, y) is lambda with x*y = lambda * e_F; it vanishes unless
    deg x + deg y is the socle degree.
    """
    require_finite(J)
    element = J.socle_generator(strategy)
    if element.is_zero():
        raise ZeroSocleGeneratorError("the Scheja-Storch element reduces to zero")
    s = J.socle_degree
    socle = graded_piece(J, s)
    socle_mono = socle.quotient_basis[0]
    zero = J.field.zero()
    inv = J.field.one() / element.coefficient
    basis = pairing_basis(J, degrees)
    size = len(basis)
    matrix = [[zero] * size for _ in range(size)]
    for r in range(size):
        mr, xr = basis[r]
        for c in range(r, size):
            mc, xc = basis[c]
            if mr + mc != s:
                continue
            nf = socle.reduce_monomial(monomial_mul(xr, xc))
            value = nf.get(socle_mono, zero) * inv
            matrix[r][c] = value
            matrix[c][r] = value
    return matrix


def jacobian_form(J: JacobianRing, degrees: Iterable[int], strategy: Optional[str] = None) -> GWClass:
    """
    GW class of B_Jac on the sum of the requested graded pieces

    J_m pairs with J_{s-m}; distinct paired degrees contribute dim J_m * H and
    only the self-paired degree s/2 is diagonalized.
    """
    require_finite(J)
    s = J.socle_degree
    requested = sorted({m for m in degrees if 0 <= m <= s and graded_piece(J, m).dim})
    present = set(requested)
    result = GWClass.zero(J.field)
    for m in requested:
        partner = s - m
        if partner == m:
            block = gram_matrix(J, [m], strategy)
            result = result + diagonalize(block, J.field)
        elif partner not in present:
            raise OddRankPrimitiveError(
                f"degree {m} is requested without its partner degree {partner}")
        elif m < partner:
            dim, other = graded_piece(J, m).dim, graded_piece(J, partner).dim
            if dim != other:
                raise InvariantBreachError(f"dim J_{m} = {dim} but dim J_{partner} = {other}")
            result = result + GWClass.hyperbolic_form(J.field, dim)
    return result


def jacobian_form_full(J: JacobianRing, strategy: Optional[str] = None) -> GWClass:
    """q_J on all of J(F); rank dim_k J(F)"""
    return jacobian_form(J, range(J.socle_degree + 1), strategy)


def primitive_degrees(J: JacobianRing, n: int) -> List[int]:
    """Degrees (q+1)e - |a| for q = 0..n, negative ones dropped"""
    total = sum(J.ring.weights)
    return [(q + 1) * J.e - total for q in range(n + 1) if (q + 1) * J.e - total >= 0]


def jacobian_form_primitive(J: JacobianRing, n: int, strategy: Optional[str] = None) -> GWClass:
    """
    B_Jac restricted to the primitive Hodge degrees of an n-dimensional hypersurface

    Args:
        J: Jacobian ring of F in n+2 variables
        n: dimension of the hypersurface {F = 0}
    """
    return jacobian_form(J, primitive_degrees(J, n), strategy)


# --- weighted cover ------------------------------------------------------------

def check_cover_identity(J: JacobianRing) -> bool:
    """
    e_G = (prod a_i) * (prod X_i^(a_i - 1))^2 * pi^*(e_F) in J(G), G = F(X_0^a_0, ..., X_N^a_N)

    The unreduced det(a_ij) of F represents pi^*(e_F).
    """
    require_finite(J)
    G = substitute_powers(J.F)
    J_G = build_jacobian(G)
    require_finite(J_G)
    ring = G.ring
    twist = ring.monomial(tuple(2 * (a - 1) for a in J.ring.weights), math.prod(J.ring.weights))
    candidate = twist * substitute_powers(J.socle_generator('lowest').determinant)
    predicted = graded_piece(J_G, J_G.socle_degree).vector(candidate)
    return predicted == J_G.socle_generator('lowest').vector


# --- independent oracles -----------------------------------------------------

def hilbert_series_oracle(weights: Sequence[int], e: int, up_to: int) -> List[int]:
    """
    Coefficients of prod_i (1 - T^(e - a_i)) / (1 - T^(a_i)) up to T^up_to

    Args:
        weights: a_0..a_N
        e: degree
        up_to: last coefficient index
    """
    if any(a < 1 or a > e for a in weights):
        raise WeightsInvalidError(f"weights {tuple(weights)} must lie in [1, {e}]")
    series = [1] + [0] * up_to
    for a in weights:
        shift = e - a
        series = [series[k] - (series[k - shift] if k >= shift else 0) for k in range(up_to + 1)]
        for k in range(a, up_to + 1):
            series[k] += series[k - a]
    return series


def milnor_number(weights: Sequence[int], e: int) -> Fraction:
    """prod_i (e - a_i) / a_i"""
    result = Fraction(1)
    for a in weights:
        result *= Fraction(e - a, a)
    return result


if __name__ == "__main__":
    from scalars import FieldId
    ring = WeightedRing(FieldId.rationals(), ('x', 'y', 'z'), (1, 1, 1))
    x, y, z = (ring.gen(i) for i in range(3))
    J = build_jacobian(x ** 3 + y ** 3 + z ** 3)
    print(f"socle degree: {J.socle_degree}")
    print(f"Hilbert function: {J.hilbert_function()}  oracle: {hilbert_series_oracle((1, 1, 1), 3, 3)}")
    e_F = J.socle_generator('lowest')
    print(f"e_F = {format_scalar(e_F.coefficient)} * {ring.format_monomial(e_F.basis[0])}")
    print(f"B_Jac on degrees [0, 3]: {[[format_scalar(c) for c in row] for row in gram_matrix(J, [0, 3])]}")
    print(f"q_J = {jacobian_form_full(J)}")
