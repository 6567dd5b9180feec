"""
Scalars - Exact coefficient fields (Q, F_p, Q(t), F_p(t)) and square classes
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, List, Optional, Tuple, Union

import sympy
from sympy.ntheory import factorint

try:
    from sympy.functions.combinatorial.numbers import legendre_symbol as _legendre_symbol
except ImportError:  # sympy < 1.13
    from sympy.ntheory import legendre_symbol as _legendre_symbol

from errors import (
    DivisionByZeroError,
    FactorizationBoundExceeded,
    FieldSpecError,
    MixedFieldsError,
    ZeroInputError,
)

logger = logging.getLogger(__name__)

T = sympy.Symbol('t')
MAX_PRIME = 2 ** 31

RATIONALS = 'Q'
PRIME_FIELD = 'Fp'
RATIONAL_FUNCTIONS = 'Qt'
PRIME_RATIONAL_FUNCTIONS = 'Fpt'


@dataclass(frozen=True)
class FieldId:
    """Tag of a coefficient field: Q, F_p, Q(t) or F_p(t)"""
    kind: str
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind not in (RATIONALS, PRIME_FIELD, RATIONAL_FUNCTIONS, PRIME_RATIONAL_FUNCTIONS):
            raise FieldSpecError(f"unknown field kind {self.kind!r}")
        if self.kind in (PRIME_FIELD, PRIME_RATIONAL_FUNCTIONS):
            _check_odd_prime(self.p)
        elif self.p is not None:
            raise FieldSpecError(f"field {self.kind} takes no characteristic")

    @classmethod
    def rationals(cls) -> 'FieldId':
        return cls(RATIONALS)

    @classmethod
    def prime_field(cls, p: int) -> 'FieldId':
        return cls(PRIME_FIELD, p)

    @classmethod
    def rational_functions(cls, p: Optional[int] = None) -> 'FieldId':
        """Q(t), or F_p(t) when p is given"""
        if p is None:
            return cls(RATIONAL_FUNCTIONS)
        return cls(PRIME_RATIONAL_FUNCTIONS, p)

    @classmethod
    def parse(cls, text: str) -> 'FieldId':
        """
        Parse a field label: Q, Fp:<p>, Qt or Fpt:<p>

        Args:
            text: Field label as used on the command line

        Returns:
            FieldId: the parsed field
        """
        label = text.strip()
        if label in (RATIONALS, RATIONAL_FUNCTIONS):
            return cls(label)
        head, sep, tail = label.partition(':')
        if sep and head in (PRIME_FIELD, PRIME_RATIONAL_FUNCTIONS):
            try:
                p = int(tail)
            except ValueError:
                raise FieldSpecError(f"bad characteristic in field label {text!r}")
            return cls(head, p)
        raise FieldSpecError(f"unknown field label {text!r}; expected Q, Fp:<p>, Qt or Fpt:<p>")

    def __str__(self) -> str:
        if self.p is None:
            return self.kind
        return f"{self.kind}:{self.p}"

    @property
    def characteristic(self) -> int:
        return self.p or 0

    @property
    def is_function_field(self) -> bool:
        return self.kind in (RATIONAL_FUNCTIONS, PRIME_RATIONAL_FUNCTIONS)

    @property
    def base(self) -> 'FieldId':
        """Field of constants (the residue field of t = 0 for function fields)"""
        if self.kind == RATIONAL_FUNCTIONS:
            return FieldId(RATIONALS)
        if self.kind == PRIME_RATIONAL_FUNCTIONS:
            return FieldId(PRIME_FIELD, self.p)
        return self

    def function_field(self) -> 'FieldId':
        """k(t) over this constant field"""
        if self.is_function_field:
            return self
        return FieldId.rational_functions(self.p)

    def zero(self):
        return self.coerce(0)

    def one(self):
        return self.coerce(1)

    def t(self) -> 'RationalFunction':
        """The parameter t of a function field"""
        if not self.is_function_field:
            raise FieldSpecError(f"`t` is not an element of {self}")
        return RationalFunction.from_coefficients(self, [self.base.zero(), self.base.one()])

    def coerce(self, value: Any):
        """
        Bring an int, Fraction or scalar of a subfield into this field

        Args:
            value: int, Fraction, ModP or RationalFunction

        Returns:
            The canonical scalar of this field
        """
        if self.kind == RATIONALS:
            if isinstance(value, bool):
                value = int(value)
            if isinstance(value, (int, Fraction)):
                return Fraction(value)
        elif self.kind == PRIME_FIELD:
            if isinstance(value, ModP):
                if value.p != self.p:
                    raise MixedFieldsError(f"cannot coerce an element of F_{value.p} into {self}")
                return value
            if isinstance(value, int):
                return ModP(value, self.p)
            if isinstance(value, Fraction):
                return ModP(value.numerator, self.p) / ModP(value.denominator, self.p)
        else:
            if isinstance(value, RationalFunction):
                if value.field != self:
                    raise MixedFieldsError(f"cannot coerce an element of {value.field} into {self}")
                return value
            return RationalFunction.constant(self, self.base.coerce(value))
        raise MixedFieldsError(f"cannot coerce {value!r} into {self}")


def _check_odd_prime(p: Optional[int]) -> None:
    if not isinstance(p, int) or p < 3 or p >= MAX_PRIME or not sympy.isprime(p):
        raise FieldSpecError(f"characteristic must be an odd prime below 2^31, got {p!r}")


class ModP:
    """Residue class modulo an odd prime p"""

    __slots__ = ('value', 'p')

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _other(self, other) -> Optional[int]:
        if isinstance(other, ModP):
            if other.p != self.p:
                raise MixedFieldsError(f"F_{self.p} and F_{other.p} elements cannot be combined")
            return other.value
        if isinstance(other, int):
            return other % self.p
        if isinstance(other, Fraction):
            return (ModP(other.numerator, self.p) / ModP(other.denominator, self.p)).value
        return None

    def __add__(self, other):
        v = self._other(other)
        return NotImplemented if v is None else ModP(self.value + v, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._other(other)
        return NotImplemented if v is None else ModP(self.value - v, self.p)

    def __rsub__(self, other):
        v = self._other(other)
        return NotImplemented if v is None else ModP(v - self.value, self.p)

    def __mul__(self, other):
        v = self._other(other)
        return NotImplemented if v is None else ModP(self.value * v, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._other(other)
        if v is None:
            return NotImplemented
        if v == 0:
            raise DivisionByZeroError(f"division by zero in F_{self.p}")
        return ModP(self.value * pow(v, -1, self.p), self.p)

    def __rtruediv__(self, other):
        v = self._other(other)
        return NotImplemented if v is None else ModP(v, self.p) / self

    def __neg__(self):
        return ModP(-self.value, self.p)

    def __pow__(self, n: int):
        if n < 0:
            return ModP(1, self.p) / ModP(pow(self.value, -n, self.p), self.p)
        return ModP(pow(self.value, n, self.p), self.p)

    def __eq__(self, other):
        try:
            v = self._other(other)
        except MixedFieldsError:
            return False
        return v is not None and v == self.value

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"ModP({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


@lru_cache(maxsize=None)
def _domain(p: Optional[int]):
    return sympy.QQ if p is None else sympy.GF(p)


def _from_sympy(field: FieldId, c):
    """Convert a sympy coefficient into a scalar of the base field"""
    if field.p is None:
        c = sympy.Rational(c)
        return Fraction(int(c.p), int(c.q))
    return ModP(int(c), field.p)


def _to_sympy(field: FieldId, c):
    if field.p is None:
        c = Fraction(c)
        return sympy.Rational(c.numerator, c.denominator)
    return int(c.value if isinstance(c, ModP) else c) % field.p


class RationalFunction:
    """Element of k(t) as a reduced fraction of polynomials with monic denominator"""

    __slots__ = ('field', 'num', 'den', '_key')

    def __init__(self, field: FieldId, num: sympy.Poly, den: sympy.Poly, reduced: bool = False):
        self.field = field
        if den.is_zero:
            raise DivisionByZeroError("zero denominator in a rational function")
        if not reduced:
            if num.is_zero:
                den = sympy.Poly.from_list([1], T, domain=num.domain)
            else:
                if not den.is_one:
                    g = num.gcd(den)
                    if not g.is_one:
                        num = num.exquo(g)
                        den = den.exquo(g)
                lc = den.LC()
                if lc != 1:
                    num = num.quo_ground(lc)
                    den = den.quo_ground(lc)
        self.num = num
        self.den = den
        self._key = None

    @classmethod
    def from_coefficients(cls, field: FieldId, num: List, den: Optional[List] = None) -> 'RationalFunction':
        """
        Build from coefficient lists, lowest degree first

        Args:
            field: Q(t) or F_p(t)
            num: numerator coefficients (constant term first)
            den: denominator coefficients, defaults to [1]
        """
        dom = _domain(field.p)
        den = den if den is not None else [1]
        n = sympy.Poly.from_list([_to_sympy(field, c) for c in reversed(num)] or [0], T, domain=dom)
        d = sympy.Poly.from_list([_to_sympy(field, c) for c in reversed(den)], T, domain=dom)
        return cls(field, n, d)

    @classmethod
    def constant(cls, field: FieldId, c) -> 'RationalFunction':
        dom = _domain(field.p)
        one = sympy.Poly.from_list([1], T, domain=dom)
        return cls(field, sympy.Poly.from_list([_to_sympy(field, c)], T, domain=dom), one, reduced=True)

    def _lift(self, other) -> Optional['RationalFunction']:
        if isinstance(other, RationalFunction):
            if other.field != self.field:
                raise MixedFieldsError(f"{self.field} and {other.field} elements cannot be combined")
            return other
        if isinstance(other, (int, Fraction, ModP)):
            return RationalFunction.constant(self.field, self.field.base.coerce(other))
        return None

    def numerator_coefficients(self) -> List:
        """Numerator coefficients, constant term first"""
        return [_from_sympy(self.field, c) for c in reversed(self.num.all_coeffs())]

    def denominator_coefficients(self) -> List:
        return [_from_sympy(self.field, c) for c in reversed(self.den.all_coeffs())]

    def is_zero(self) -> bool:
        return self.num.is_zero

    def is_constant(self) -> bool:
        return self.den.is_one and self.num.degree() <= 0

    def constant_value(self):
        """Value of a constant element in the base field"""
        return self.numerator_coefficients()[0]

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RationalFunction(self.field, self.num + o.num, self.den, reduced=self.den.is_one)
        return RationalFunction(self.field, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(self.field, -self.num, self.den, reduced=True)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.den.is_one and o.den.is_one:
            return RationalFunction(self.field, self.num * o.num, self.den, reduced=True)
        return RationalFunction(self.field, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise DivisionByZeroError(f"division by zero in {self.field}")
        return RationalFunction(self.field, self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else o / self

    def __pow__(self, n: int):
        if n < 0:
            return self.field.one() / (self ** -n)
        return RationalFunction(self.field, self.num ** n, self.den ** n, reduced=True)

    def key(self) -> Tuple:
        if self._key is None:
            self._key = (str(self.field), tuple(self.numerator_coefficients()), tuple(self.denominator_coefficients()))
        return self._key

    def __eq__(self, other):
        try:
            o = self._lift(other)
        except MixedFieldsError:
            return False
        return o is not None and self.key() == o.key()

    def __hash__(self):
        return hash(self.key())

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"RationalFunction({self.field}, {self})"

    def __str__(self):
        num = format_univariate(self.field.base, self.numerator_coefficients())
        if self.den.is_one:
            return num
        den = format_univariate(self.field.base, self.denominator_coefficients())
        return f"({num})/({den})"


Scalar = Union[Fraction, ModP, RationalFunction]


def field_of(a) -> FieldId:
    """Field an exact scalar belongs to"""
    if isinstance(a, RationalFunction):
        return a.field
    if isinstance(a, ModP):
        return FieldId.prime_field(a.p)
    if isinstance(a, (int, Fraction)):
        return FieldId.rationals()
    raise MixedFieldsError(f"{a!r} is not an exact scalar")


def is_zero(a) -> bool:
    return not a


def field_arith(a, b, op: str):
    """
    Exact field operation on two scalars of the same field

    Args:
        a: left operand
        b: right operand
        op: one of 'add', 'sub', 'mul', 'div'

    Returns:
        Scalar: canonical result
    """
    fa, fb = field_of(a), field_of(b)
    if fa != fb:
        raise MixedFieldsError(f"operands live in {fa} and {fb}")
    if op == 'add':
        return fa.coerce(a + b)
    if op == 'sub':
        return fa.coerce(a - b)
    if op == 'mul':
        return fa.coerce(a * b)
    if op == 'div':
        if is_zero(b):
            raise DivisionByZeroError("division by zero")
        return fa.coerce(a / b)
    raise ValueError(f"unknown operation {op!r}")


def format_rational(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_scalar(a) -> str:
    """Text form of a scalar, re-parseable by the expression parser"""
    if isinstance(a, (int, Fraction)):
        return format_rational(a)
    return str(a)


def format_univariate(base: FieldId, coefficients: List, var: str = 't') -> str:
    """Render c_0 + c_1 t + ... highest degree first, e.g. `t^2 + 2*t - 1`"""
    parts: List[Tuple[str, str]] = []
    for k in range(len(coefficients) - 1, -1, -1):
        c = coefficients[k]
        if not c:
            continue
        if base.kind == RATIONALS:
            sign = '-' if c < 0 else '+'
            mag = abs(Fraction(c))
        else:
            sign, mag = '+', c
        power = '' if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not power:
            body = format_scalar(mag)
        elif mag == 1:
            body = power
        else:
            body = f"{format_scalar(mag)}*{power}"
        parts.append((sign, body))
    if not parts:
        return '0'
    first_sign, first = parts[0]
    text = ('-' if first_sign == '-' else '') + first
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


# --- square classes ---------------------------------------------------------

def squarefree_part(n: int, bound: Optional[int] = None) -> int:
    """
    Square-free part of a nonzero integer, sign kept

    Args:
        n: nonzero integer
        bound: trial-division bound; cofactors beyond it must be prime or square

    Returns:
        int: s with n = s * m^2 and s square-free
    """
    if n == 0:
        raise ZeroInputError("square-free part of zero")
    if bound is None:
        from config import get_settings
        bound = get_settings().factor_bound
    sign = -1 if n < 0 else 1
    result = 1
    for q, k in factorint(abs(n), limit=bound).items():
        if q > bound and not sympy.isprime(q):
            r = math.isqrt(q)
            if r * r != q:
                raise FactorizationBoundExceeded(
                    f"cofactor {q} of {n} is beyond the trial-division bound {bound}")
            continue
        if k % 2:
            result *= q
    return sign * result


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p, as a plain int"""
    return int(_legendre_symbol(a % p, p))


@lru_cache(maxsize=None)
def nonresidue(p: int) -> int:
    """Smallest quadratic non-residue modulo p"""
    for a in range(2, p):
        if legendre(a, p) == -1:
            return a
    raise FieldSpecError(f"no non-residue modulo {p}")


def is_square(a) -> bool:
    """Whether a nonzero scalar of Q or F_p is a square"""
    if isinstance(a, ModP):
        return a.value != 0 and legendre(a.value, a.p) == 1
    a = Fraction(a)
    if a <= 0:
        return False
    n, d = a.numerator, a.denominator
    return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d


@dataclass(frozen=True)
class SquareClass:
    """Class of a nonzero scalar modulo nonzero squares, by canonical representative"""
    field: FieldId
    rep: Any

    def __mul__(self, other: 'SquareClass') -> 'SquareClass':
        if other.field != self.field:
            raise MixedFieldsError(f"square classes over {self.field} and {other.field}")
        if self.field.kind == RATIONALS:
            a, b = int(self.rep), int(other.rep)
            g = math.gcd(a, b)
            return SquareClass(self.field, Fraction((a // g) * (b // g)))
        return square_class(self.rep * other.rep)

    def negate(self) -> 'SquareClass':
        """Class of -u"""
        if self.field.kind == RATIONALS:
            return SquareClass(self.field, -self.rep)
        return square_class(-self.rep)

    def is_one(self) -> bool:
        return self.rep == 1

    def sort_key(self) -> Tuple:
        if self.field.kind == RATIONALS:
            return (0, abs(self.rep), self.rep < 0)
        if self.field.kind == PRIME_FIELD:
            return (0, self.rep.value, False)
        return (1, str(self.rep), False)

    def __str__(self):
        return format_scalar(self.rep)


def square_class(a, bound: Optional[int] = None) -> SquareClass:
    """
    Canonical square class of a nonzero scalar

    Over Q the representative is a signed square-free integer; over F_p it is 1
    or the smallest non-residue; over k(t) it is the product of the odd-multiplicity
    square-free factors of numerator * denominator times the class of the constant.

    Args:
        a: nonzero scalar
        bound: trial-division bound for Q (defaults to the configured bound)
    """
    if is_zero(a):
        raise ZeroInputError("square class of zero")
    field = field_of(a)
    if field.kind == RATIONALS:
        a = Fraction(a)
        return SquareClass(field, Fraction(squarefree_part(a.numerator * a.denominator, bound)))
    if field.kind == PRIME_FIELD:
        rep = 1 if legendre(a.value, a.p) == 1 else nonresidue(a.p)
        return SquareClass(field, ModP(rep, a.p))
    return SquareClass(field, _function_square_class(a, bound))


def _function_square_class(a: RationalFunction, bound: Optional[int]) -> RationalFunction:
    field = a.field
    product = a.num * a.den
    content, factors = product.sqf_list()
    constant = _from_sympy(field, content)
    odd = sympy.Poly.from_list([1], T, domain=product.domain)
    for factor, multiplicity in factors:
        lc = factor.LC()
        if lc != 1:
            constant = constant * _from_sympy(field, lc) ** multiplicity
            factor = factor.monic()
        if multiplicity % 2:
            odd = odd * factor
    constant_class = square_class(field.base.coerce(constant), bound).rep
    rep = RationalFunction(field, odd, sympy.Poly.from_list([1], T, domain=product.domain), reduced=True)
    return rep * constant_class


def t_order_and_unit(f: RationalFunction) -> Tuple[int, Any]:
    """
    t-adic valuation and unit value: f = t^ord * u(t) with u(0) = u0 != 0

    Args:
        f: nonzero element of k(t)

    Returns:
        Tuple[int, scalar]: (ord, u0) with u0 in the constant field
    """
    if not isinstance(f, RationalFunction):
        f = FieldId.rational_functions().coerce(f)
    if f.is_zero():
        raise ZeroInputError("t-adic order of zero")
    num = f.numerator_coefficients()
    den = f.denominator_coefficients()
    vn = next(i for i, c in enumerate(num) if c)
    vd = next(i for i, c in enumerate(den) if c)
    return vn - vd, num[vn] / den[vd]


if __name__ == "__main__":
    Q = FieldId.rationals()
    Qt = FieldId.rational_functions()
    t = Qt.t()
    print(f"1/2 + 1/3 = {format_scalar(field_arith(Fraction(1, 2), Fraction(1, 3), 'add'))}")
    print(f"(t/(1+t))*(1+t) = {(t / (1 + t)) * (1 + t)}")
    print(f"2*4 in F_7 = {ModP(2, 7) * 4}")
    print(f"square class of 18 = {square_class(Q.coerce(18))}")
    print(f"t-order of (2t+t^3)/(1-t) = {t_order_and_unit((2 * t + t ** 3) / (1 - t))}")
