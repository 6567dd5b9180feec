"""
Poly - Sparse multivariate polynomials over a weighted polynomial ring
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from errors import (
    MixedFieldsError,
    NotHomogeneousError,
    UserInputError,
    WeightsInvalidError,
    ZeroPolynomialError,
)
from scalars import FieldId, RATIONALS, format_scalar, is_zero

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]


@dataclass(frozen=True)
class WeightedRing:
    """k[X_0..X_N] with deg(X_i) = a_i"""
    field: FieldId
    variables: Tuple[str, ...]
    weights: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'variables', tuple(self.variables))
        object.__setattr__(self, 'weights', tuple(int(a) for a in self.weights))
        if not self.variables:
            raise WeightsInvalidError("a ring needs at least one variable")
        if len(self.variables) != len(self.weights):
            raise WeightsInvalidError(
                f"{len(self.variables)} variables but {len(self.weights)} weights")
        if len(set(self.variables)) != len(self.variables):
            raise WeightsInvalidError(f"duplicate variable names in {self.variables}")
        if any(a < 1 for a in self.weights):
            raise WeightsInvalidError(f"weights must be positive, got {self.weights}")
        if self.field.is_function_field and 't' in self.variables:
            raise WeightsInvalidError("`t` is reserved for the parameter of the function field")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def degree(self, monomial: Monomial) -> int:
        return sum(a * k for a, k in zip(self.weights, monomial))

    def sort_key(self, monomial: Monomial) -> Tuple:
        """Graded-lex: higher weighted degree first, then lexicographically larger first"""
        return (-self.degree(monomial), tuple(-k for k in monomial))

    def unweighted(self) -> 'WeightedRing':
        return WeightedRing(self.field, self.variables, (1,) * self.nvars)

    def with_field(self, field: FieldId) -> 'WeightedRing':
        return WeightedRing(field, self.variables, self.weights)

    def extend(self, name: str, weight: int = 1) -> 'WeightedRing':
        """Ring with one more variable appended"""
        return WeightedRing(self.field, self.variables + (name,), self.weights + (weight,))

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise UserInputError(f"{name!r} is not a variable of this ring")

    def zero(self) -> 'Poly':
        return Poly(self, {})

    def one(self) -> 'Poly':
        return self.constant(1)

    def constant(self, c) -> 'Poly':
        return Poly(self, {(0,) * self.nvars: self.field.coerce(c)})

    def gen(self, i: int) -> 'Poly':
        exps = [0] * self.nvars
        exps[i] = 1
        return Poly(self, {tuple(exps): self.field.one()})

    def monomial(self, exponents: Sequence[int], c=1) -> 'Poly':
        return Poly(self, {tuple(exponents): self.field.coerce(c)})

    def format_monomial(self, monomial: Monomial) -> str:
        factors = []
        for name, k in zip(self.variables, monomial):
            if k == 1:
                factors.append(name)
            elif k > 1:
                factors.append(f"{name}^{k}")
        return '*'.join(factors) or '1'


def monomial_mul(m1: Monomial, m2: Monomial) -> Monomial:
    return tuple(a + b for a, b in zip(m1, m2))


def monomial_divides(m1: Monomial, m2: Monomial) -> bool:
    return all(a <= b for a, b in zip(m1, m2))


@lru_cache(maxsize=4096)
def _monomials(weights: Tuple[int, ...], m: int) -> Tuple[Monomial, ...]:
    if m < 0:
        return ()
    if len(weights) == 1:
        a = weights[0]
        return ((m // a,),) if m % a == 0 else ()
    a, rest = weights[0], weights[1:]
    result = []
    for k in range(m // a, -1, -1):
        for tail in _monomials(rest, m - a * k):
            result.append((k,) + tail)
    return tuple(result)


def monomials_of_degree(ring: WeightedRing, m: int) -> List[Monomial]:
    """
    All exponent vectors of weighted degree m, in graded-lex order

    Args:
        ring: the weighted ring
        m: target weighted degree

    Returns:
        List[Monomial]: deterministic list, x0-heaviest first
    """
    return list(_monomials(ring.weights, m))


class Poly:
    """Sparse polynomial: map from exponent vectors to nonzero scalars"""

    __slots__ = ('ring', 'terms')

    def __init__(self, ring: WeightedRing, terms: Optional[Dict[Monomial, object]] = None):
        self.ring = ring
        self.terms = {m: c for m, c in (terms or {}).items() if not is_zero(c)}

    @classmethod
    def from_terms(cls, ring: WeightedRing, terms: Iterable[Tuple[Sequence[int], object]]) -> 'Poly':
        """Build from (exponents, coefficient) pairs, coercing coefficients and merging repeats"""
        acc: Dict[Monomial, object] = {}
        for exps, c in terms:
            key = tuple(exps)
            if len(key) != ring.nvars:
                raise UserInputError(f"exponent vector {key} does not match {ring.nvars} variables")
            acc[key] = acc.get(key, ring.field.zero()) + ring.field.coerce(c)
        return cls(ring, acc)

    def _check(self, other: 'Poly') -> None:
        if other.ring.field != self.ring.field:
            raise MixedFieldsError(f"polynomials over {self.ring.field} and {other.ring.field}")
        if other.ring.variables != self.ring.variables:
            raise UserInputError("polynomials live in different rings")

    def _lift(self, other) -> Optional['Poly']:
        if isinstance(other, Poly):
            self._check(other)
            return other
        try:
            return self.ring.constant(other)
        except MixedFieldsError:
            return None

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        terms = dict(self.terms)
        for m, c in o.terms.items():
            terms[m] = terms[m] + c if m in terms else c
        return Poly(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else o - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            try:
                c = self.ring.field.coerce(other)
            except MixedFieldsError:
                return NotImplemented
            return self.scale(c)
        self._check(other)
        terms: Dict[Monomial, object] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = monomial_mul(m1, m2)
                terms[m] = terms[m] + c1 * c2 if m in terms else c1 * c2
        return Poly(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise UserInputError("negative powers of polynomials are not defined")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        o = self._lift(other) if not isinstance(other, Poly) else other
        if not isinstance(o, Poly):
            return False
        return self.ring == o.ring and self.terms == o.terms

    __hash__ = None

    def scale(self, c) -> 'Poly':
        return Poly(self.ring, {m: c * v for m, v in self.terms.items()})

    def coefficient(self, monomial: Monomial):
        return self.terms.get(tuple(monomial), self.ring.field.zero())

    def sorted_terms(self) -> List[Tuple[Monomial, object]]:
        return sorted(self.terms.items(), key=lambda item: self.ring.sort_key(item[0]))

    def variables_used(self) -> List[int]:
        return sorted({i for m in self.terms for i, k in enumerate(m) if k})

    def change_ring(self, ring: WeightedRing, pad: int = 0) -> 'Poly':
        """
        Same polynomial in another ring: coefficients coerced, exponent vectors padded

        Args:
            ring: target ring (same leading variables, possibly more of them, possibly a larger field)
            pad: number of trailing variables added
        """
        extra = (0,) * pad
        return Poly(ring, {m + extra: ring.field.coerce(c) for m, c in self.terms.items()})

    def partial_derivative(self, i: int) -> 'Poly':
        return partial_derivative(self, i)

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return format_poly(self)


def format_poly(f: Poly) -> str:
    """Canonical text, terms in graded-lex order: `3*x0^2*x1 - 1/2*x2^3`"""
    ring = f.ring
    pieces: List[Tuple[str, str]] = []
    for m, c in f.sorted_terms():
        sign, body = _format_coefficient(ring.field, c)
        mono = ring.format_monomial(m) if any(m) else ''
        if not mono:
            text = body
        elif body == '1':
            text = mono
        else:
            text = f"{body}*{mono}"
        pieces.append((sign, text))
    if not pieces:
        return '0'
    out = ('-' if pieces[0][0] == '-' else '') + pieces[0][1]
    for sign, text in pieces[1:]:
        out += f" {sign} {text}"
    return out


def _format_coefficient(field: FieldId, c) -> Tuple[str, str]:
    if field.kind == RATIONALS:
        return ('-' if c < 0 else '+'), format_scalar(abs(c))
    if field.is_function_field:
        if c.is_constant():
            return _format_coefficient(field.base, c.constant_value())
        return '+', f"({c})"
    return '+', format_scalar(c)


def partial_derivative(f: Poly, i: int) -> Poly:
    """
    Formal partial derivative with respect to the i-th variable

    Args:
        f: polynomial
        i: variable index

    Returns:
        Poly: d f / d X_i
    """
    terms = {}
    for m, c in f.terms.items():
        k = m[i]
        if k:
            dm = m[:i] + (k - 1,) + m[i + 1:]
            terms[dm] = c * k
    return Poly(f.ring, terms)


def weighted_degree(f: Poly) -> Optional[int]:
    """
    Common weighted degree of all terms

    Returns:
        Optional[int]: the degree, or None when f is not weighted-homogeneous
    """
    if f.is_zero():
        raise ZeroPolynomialError("the zero polynomial has no degree")
    degrees = {f.ring.degree(m) for m in f.terms}
    return degrees.pop() if len(degrees) == 1 else None


def homogeneous_degree(f: Poly) -> int:
    """Weighted degree of a weighted-homogeneous polynomial, raising otherwise"""
    e = weighted_degree(f)
    if e is None:
        raise NotHomogeneousError(f"{f} is not weighted-homogeneous for weights {f.ring.weights}")
    return e


def substitute_powers(f: Poly) -> Poly:
    """
    Pull back along Y_i -> X_i^{a_i} into the unweighted ring on the same names

    Args:
        f: polynomial over a weighted ring

    Returns:
        Poly: G = pi^*(F), homogeneous of the same degree when F is weighted-homogeneous
    """
    ring = f.ring.unweighted()
    weights = f.ring.weights
    return Poly(ring, {tuple(k * a for k, a in zip(m, weights)): c for m, c in f.terms.items()})


def determinant(matrix: List[List[Poly]], ring: WeightedRing) -> Poly:
    """
    Determinant of a square matrix of polynomials by memoised cofactor expansion

    Args:
        matrix: square list of rows
        ring: ring of the entries

    Returns:
        Poly: the determinant
    """
    n = len(matrix)
    if n == 0:
        return ring.one()
    from config import get_settings
    if n > get_settings().max_variables:
        raise UserInputError(f"cofactor determinant of size {n} exceeds the configured cap")
    memo: Dict[Tuple[int, int], Poly] = {}

    def minor(row: int, cols: int) -> Poly:
        if row == n:
            return ring.one()
        key = (row, cols)
        if key in memo:
            return memo[key]
        total = ring.zero()
        sign = 1
        for j in range(n):
            if not cols & (1 << j):
                continue
            entry = matrix[row][j]
            if entry:
                term = entry * minor(row + 1, cols & ~(1 << j))
                total = total + term if sign > 0 else total - term
            sign = -sign
        memo[key] = total
        return total

    return minor(0, (1 << n) - 1)


def hessian_matrix(f: Poly) -> List[List[Poly]]:
    firsts = [partial_derivative(f, i) for i in range(f.ring.nvars)]
    return [[partial_derivative(fi, j) for j in range(f.ring.nvars)] for fi in firsts]


def hessian_det(f: Poly) -> Poly:
    """det(d^2 f / dX_i dX_j)"""
    return determinant(hessian_matrix(f), f.ring)


def euler_defect(f: Poly) -> Poly:
    """
    e*f - sum_i a_i X_i df/dX_i, zero exactly for weighted-homogeneous f

    e is the largest weighted degree occurring in f.
    """
    if f.is_zero():
        return f
    ring = f.ring
    e = max(ring.degree(m) for m in f.terms)
    defect = f * e
    for i, a in enumerate(ring.weights):
        defect = defect - ring.gen(i) * partial_derivative(f, i) * a
    return defect


if __name__ == "__main__":
    ring = WeightedRing(FieldId.rationals(), ('x0', 'x1', 'x2'), (1, 1, 3))
    x0, x1, x2 = (ring.gen(i) for i in range(3))
    F = x0 ** 6 + x1 ** 6 + x2 ** 2
    print(f"F = {F}, weighted degree {weighted_degree(F)}")
    print(f"dF/dx2 = {partial_derivative(F, 2)}")
    print(f"pi^*F = {substitute_powers(F)}")
    print(f"Euler defect = {euler_defect(F)}")
    print(f"monomials of degree 3: {[ring.format_monomial(m) for m in monomials_of_degree(ring, 3)]}")
