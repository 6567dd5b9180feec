"""
GW - Grothendieck-Witt classes over Q, F_p and k(t): diagonalization, invariants,
equality by Hasse-Minkowski, and the specialization map sp_t
"""
import logging
from dataclasses import dataclass, field as dc_field, asdict
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from sympy.ntheory import factorint

from errors import (
    CertificateError,
    CharacteristicTwoError,
    DegenerateFormError,
    MixedFieldsError,
    UnsupportedFieldError,
    UserInputError,
    ZeroEntryError,
    ZeroScalarError,
)
from scalars import (
    FieldId,
    RATIONALS,
    SquareClass,
    field_of,
    is_zero,
    legendre,
    square_class,
    t_order_and_unit,
)

logger = logging.getLogger(__name__)

INFINITY = 'inf'
Place = Union[int, str]


class GWClass:
    """Virtual form: signed multiset of rank-one classes <u> plus a signed count of H"""

    __slots__ = ('field', 'entries', 'hyperbolic')

    def __init__(self, field: FieldId, entries: Optional[Dict[SquareClass, int]] = None, hyperbolic: int = 0):
        self.field = field
        merged: Dict[SquareClass, int] = {}
        for cls, mult in (entries or {}).items():
            if cls.field != field:
                raise MixedFieldsError(f"class {cls} over {cls.field} in a form over {field}")
            merged[cls] = merged.get(cls, 0) + mult
        self.entries, self.hyperbolic = _fold_hyperbolic(merged, hyperbolic)

    # --- construction -------------------------------------------------------

    @classmethod
    def zero(cls, field: FieldId) -> 'GWClass':
        return cls(field)

    @classmethod
    def one(cls, field: FieldId) -> 'GWClass':
        return cls.rank_one(field.one())

    @classmethod
    def rank_one(cls, u) -> 'GWClass':
        """<u>"""
        if is_zero(u):
            raise ZeroScalarError("<0> is not a form")
        c = square_class(u)
        return cls(c.field, {c: 1})

    @classmethod
    def hyperbolic_form(cls, field: FieldId, count: int = 1) -> 'GWClass':
        """count * H"""
        return cls(field, {}, count)

    @classmethod
    def from_diagonal(cls, field: FieldId, diagonal: Iterable) -> 'GWClass':
        """<d_1> + ... + <d_r>"""
        entries: Dict[SquareClass, int] = {}
        for d in diagonal:
            d = field.coerce(d)
            if is_zero(d):
                raise DegenerateFormError("zero diagonal entry in a nondegenerate form")
            c = square_class(d)
            entries[c] = entries.get(c, 0) + 1
        return cls(field, entries)

    # --- structure ------------------------------------------------------------

    @property
    def rank(self) -> int:
        return sum(self.entries.values()) + 2 * self.hyperbolic

    def is_hyperbolic_multiple(self) -> bool:
        return not self.entries

    def is_effective(self) -> bool:
        """Class of an actual form (no negative multiplicities)"""
        return self.hyperbolic >= 0 and all(m > 0 for m in self.entries.values())

    def sorted_entries(self) -> List[Tuple[SquareClass, int]]:
        return sorted(self.entries.items(), key=lambda item: item[0].sort_key())

    def positive_diagonal(self) -> List:
        """Diagonal entries of the positive part, H expanded as <1>, <-1>"""
        diag = []
        for cls, mult in self.sorted_entries():
            if mult > 0:
                diag.extend([cls.rep] * mult)
        if self.hyperbolic > 0:
            diag.extend([self.field.one(), -self.field.one()] * self.hyperbolic)
        return diag

    def negative_diagonal(self) -> List:
        """Diagonal entries of the part that is subtracted"""
        diag = []
        for cls, mult in self.sorted_entries():
            if mult < 0:
                diag.extend([cls.rep] * (-mult))
        if self.hyperbolic < 0:
            diag.extend([self.field.one(), -self.field.one()] * (-self.hyperbolic))
        return diag

    # --- ring operations ---------------------------------------------------

    def _check(self, other: 'GWClass') -> None:
        if other.field != self.field:
            raise MixedFieldsError(f"GW classes over {self.field} and {other.field}")

    def __add__(self, other: 'GWClass') -> 'GWClass':
        self._check(other)
        entries = dict(self.entries)
        for cls, mult in other.entries.items():
            entries[cls] = entries.get(cls, 0) + mult
        return GWClass(self.field, entries, self.hyperbolic + other.hyperbolic)

    def __neg__(self) -> 'GWClass':
        return GWClass(self.field, {c: -m for c, m in self.entries.items()}, -self.hyperbolic)

    def __sub__(self, other: 'GWClass') -> 'GWClass':
        return self + (-other)

    def __mul__(self, other: 'GWClass') -> 'GWClass':
        """Product in GW(k); H absorbs every rank-one factor"""
        self._check(other)
        entries: Dict[SquareClass, int] = {}
        for c1, m1 in self.entries.items():
            for c2, m2 in other.entries.items():
                c = c1 * c2
                entries[c] = entries.get(c, 0) + m1 * m2
        hyperbolic = (self.hyperbolic * other.rank + other.hyperbolic * sum(self.entries.values()))
        return GWClass(self.field, entries, hyperbolic)

    def times(self, n: int) -> 'GWClass':
        return GWClass(self.field, {c: n * m for c, m in self.entries.items()}, n * self.hyperbolic)

    def scale(self, u) -> 'GWClass':
        return gw_scale(u, self)

    def __eq__(self, other) -> bool:
        """Equality of canonical representations (use gw_equal for isometry)"""
        if not isinstance(other, GWClass):
            return NotImplemented
        return self.field == other.field and self.entries == other.entries and self.hyperbolic == other.hyperbolic

    __hash__ = None

    def __repr__(self):
        return f"GWClass({self.field}: {self})"

    def __str__(self):
        parts = []
        for cls, mult in self.sorted_entries():
            sign = '-' if mult < 0 else '+'
            body = f"<{cls}>" if abs(mult) == 1 else f"{abs(mult)}<{cls}>"
            parts.append((sign, body))
        if self.hyperbolic:
            sign = '-' if self.hyperbolic < 0 else '+'
            count = abs(self.hyperbolic)
            parts.append((sign, 'H' if count == 1 else f"{count}H"))
        if not parts:
            return '0'
        text = ('-' if parts[0][0] == '-' else '') + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    # --- serialization -------------------------------------------------------

    def to_dict(self, with_invariants: bool = True) -> Dict[str, Any]:
        """JSON form; invariant fields only where they are defined"""
        data: Dict[str, Any] = {
            'field': str(self.field),
            'entries': [{'class': str(c), 'mult': m} for c, m in self.sorted_entries()],
            'hyperbolic': self.hyperbolic,
            'rank': self.rank,
        }
        if with_invariants and not self.field.is_function_field:
            inv = invariants(self)
            if inv.signature is not None:
                data['signature'] = inv.signature
            data['disc'] = str(inv.signed_discriminant)
            if self.field.kind == RATIONALS:
                if self.is_effective():
                    data['hasse'] = {str(p): s for p, s in inv.hasse.items()}
                else:
                    data['hasse_positive'] = {str(p): s for p, s in inv.positive.hasse.items()}
                    data['hasse_negative'] = {str(p): s for p, s in inv.negative.hasse.items()}
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'GWClass':
        """Rebuild from the JSON form (invariant fields are ignored)"""
        from expr_parser import parse_scalar
        field = FieldId.parse(data['field'])
        entries: Dict[SquareClass, int] = {}
        for item in data.get('entries', []):
            c = square_class(parse_scalar(item['class'], field))
            entries[c] = entries.get(c, 0) + int(item['mult'])
        return cls(field, entries, int(data.get('hyperbolic', 0)))


def _fold_hyperbolic(entries: Dict[SquareClass, int], hyperbolic: int) -> Tuple[Dict[SquareClass, int], int]:
    """Drop zero multiplicities and rewrite <u> + <-u> as H"""
    entries = {c: m for c, m in entries.items() if m}
    for cls in sorted(entries, key=lambda c: c.sort_key()):
        mult = entries.get(cls, 0)
        if not mult:
            continue
        neg = cls.negate()
        if neg == cls:
            pairs = abs(mult) // 2
            step = 1 if mult > 0 else -1
            hyperbolic += step * pairs
            entries[cls] = mult - step * 2 * pairs
        else:
            other = entries.get(neg, 0)
            if other and (other > 0) == (mult > 0):
                pairs = min(abs(mult), abs(other))
                step = 1 if mult > 0 else -1
                hyperbolic += step * pairs
                entries[cls] = mult - step * pairs
                entries[neg] = other - step * pairs
    return {c: m for c, m in entries.items() if m}, hyperbolic


# --- scaling --------------------------------------------------------------------

def gw_add(q1: GWClass, q2: GWClass) -> GWClass:
    return q1 + q2


def gw_sub(q1: GWClass, q2: GWClass) -> GWClass:
    return q1 - q2


def gw_negate(q: GWClass) -> GWClass:
    return -q


def gw_scale(u, q: GWClass) -> GWClass:
    """
    <u> * q, entrywise; <u> * H = H

    Args:
        u: nonzero scalar of the field of q
        q: GW class
    """
    if is_zero(u):
        raise ZeroScalarError("cannot scale a form by zero")
    c = square_class(q.field.coerce(u))
    return GWClass(q.field, {cls * c: m for cls, m in q.entries.items()}, q.hyperbolic)


def gw_sign_power(e, n: int, q: GWClass) -> GWClass:
    """
    (-<e>)^n * q, where -x is the additive inverse in GW(k)

    Args:
        e: nonzero scalar
        n: non-negative exponent
        q: GW class
    """
    if n < 0:
        raise UserInputError("negative exponent in (-<e>)^n")
    scaled = gw_scale(e, q) if n % 2 else q
    return -scaled if n % 2 else scaled


# --- diagonalization ---------------------------------------------------------

@dataclass
class Diagonalization:
    """Congruence certificate: P^T G P = diag(diagonal)"""
    field: FieldId
    diagonal: List
    transform: List[List]
    gw_class: GWClass
    pivot_repairs: int = 0

    def verify(self, gram: Sequence[Sequence]) -> bool:
        """Whether P^T G P equals the recorded diagonal exactly"""
        n = len(gram)
        P = self.transform
        zero = self.field.zero()
        GP = [[sum((self.field.coerce(gram[i][k]) * P[k][j] for k in range(n)), zero) for j in range(n)]
              for i in range(n)]
        for i in range(n):
            for j in range(n):
                v = sum((P[k][i] * GP[k][j] for k in range(n)), zero)
                expected = self.diagonal[i] if i == j else zero
                if v != expected:
                    return False
        return True


def _infer_field(gram: Sequence[Sequence]) -> FieldId:
    for row in gram:
        for x in row:
            if not isinstance(x, int):
                return field_of(x)
    return FieldId.rationals()


def diagonalize_with_certificate(gram: Sequence[Sequence], field: Optional[FieldId] = None,
                                 pivot_order: str = 'first') -> Diagonalization:
    """
    Symmetric Gaussian elimination with a recorded congruence transform

    Args:
        gram: symmetric nondegenerate matrix
        field: coefficient field (inferred from the entries when omitted)
        pivot_order: 'first' or 'last' nonzero diagonal entry is used as pivot

    Returns:
        Diagonalization: diagonal entries, transform P and the canonical GW class
    """
    field = field or _infer_field(gram)
    if field.characteristic == 2:
        raise CharacteristicTwoError("quadratic forms in characteristic 2 are not supported")
    n = len(gram)
    A = [[field.coerce(x) for x in row] for row in gram]
    if any(len(row) != n for row in A):
        raise UserInputError("Gram matrix must be square")
    for i in range(n):
        for j in range(i + 1, n):
            if A[i][j] != A[j][i]:
                raise UserInputError(f"Gram matrix is not symmetric at ({i}, {j})")
    zero, one = field.zero(), field.one()
    P = [[one if i == j else zero for j in range(n)] for i in range(n)]
    repairs = 0

    def add_basis_vector(target: int, source: int, c) -> None:
        # v_target <- v_target + c * v_source
        for r in range(n):
            A[r][target] = A[r][target] + c * A[r][source]
        for r in range(n):
            A[target][r] = A[target][r] + c * A[source][r]
        for r in range(n):
            P[r][target] = P[r][target] + c * P[r][source]

    def swap(i: int, j: int) -> None:
        A[i], A[j] = A[j], A[i]
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in P:
            row[i], row[j] = row[j], row[i]

    for k in range(n):
        candidates = [i for i in range(k, n) if A[i][i]]
        if candidates:
            pivot = candidates[0] if pivot_order == 'first' else candidates[-1]
        else:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if A[i][j]), None)
            if pair is None:
                raise DegenerateFormError(f"form is degenerate (rank {k} < {n})")
            i, j = pair
            add_basis_vector(i, j, one)
            repairs += 1
            logger.debug("pivot repair at step %d using pair (%d, %d)", k, i, j)
            pivot = i
        if pivot != k:
            swap(pivot, k)
        d = A[k][k]
        for j in range(k + 1, n):
            if A[k][j]:
                add_basis_vector(j, k, -(A[k][j] / d))

    diagonal = [A[i][i] for i in range(n)]
    return Diagonalization(field, diagonal, P, GWClass.from_diagonal(field, diagonal), repairs)


def diagonalize(gram: Sequence[Sequence], field: Optional[FieldId] = None, pivot_order: str = 'first') -> GWClass:
    """GW class of a symmetric nondegenerate Gram matrix"""
    return diagonalize_with_certificate(gram, field, pivot_order).gw_class


def check_certificate(gram: Sequence[Sequence], result: Diagonalization) -> None:
    if not result.verify(gram):
        raise CertificateError("congruence certificate P^T G P = D does not hold")


# --- local symbols and invariants -----------------------------------------

def _integral(a) -> int:
    """Integer in the square class of a nonzero rational"""
    a = Fraction(a)
    if a == 0:
        raise ZeroScalarError("Hilbert symbol of zero")
    return a.numerator * a.denominator


def _split(n: int, p: int) -> Tuple[int, int]:
    alpha = 0
    while n % p == 0:
        n //= p
        alpha += 1
    return alpha, n


def hilbert_symbol(a, b, place: Place) -> int:
    """
    Hilbert symbol (a, b)_v over Q at a prime or at infinity

    Args:
        a: nonzero rational
        b: nonzero rational
        place: a prime, or 'inf'

    Returns:
        int: 1 if z^2 = a x^2 + b y^2 has a nontrivial solution over Q_v, else -1
    """
    a, b = _integral(a), _integral(b)
    if place == INFINITY:
        return -1 if a < 0 and b < 0 else 1
    p = int(place)
    alpha, u = _split(a, p)
    beta, v = _split(b, p)
    if p == 2:
        eps = lambda x: ((x - 1) // 2) % 2
        omega = lambda x: ((x * x - 1) // 8) % 2
        exponent = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if exponent % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    lu = legendre(u, p) ** beta
    lv = legendre(v, p) ** alpha
    return sign * lu * lv


def _prime_support(values: Iterable) -> Set[int]:
    primes: Set[int] = {2}
    for x in values:
        n = abs(_integral(x))
        primes.update(factorint(n).keys())
    return primes


@dataclass
class FormInvariants:
    """Classical invariants of a genuine diagonal form"""
    rank: int
    signature: Optional[int]
    determinant: SquareClass
    signed_discriminant: SquareClass
    hasse: Dict[int, int] = dc_field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'rank': self.rank,
            'signature': self.signature,
            'det': str(self.determinant),
            'disc': str(self.signed_discriminant),
            'hasse': {str(p): s for p, s in sorted(self.hasse.items())},
        }


def form_invariants(field: FieldId, diagonal: Sequence, primes: Optional[Iterable[int]] = None) -> FormInvariants:
    """
    Rank, signature, determinant, signed discriminant and Hasse invariants of <d_1,...,d_r>

    Args:
        field: Q or F_p
        diagonal: nonzero diagonal entries
        primes: primes at which Hasse invariants are reported (Q only); 2 and
            the primes dividing the entries are always included
    """
    if field.is_function_field:
        raise UnsupportedFieldError(f"invariants are not available over {field}")
    r = len(diagonal)
    det = field.one()
    for d in diagonal:
        det = det * d
    sign = -1 if (r * (r - 1) // 2) % 2 else 1
    signature = None
    hasse: Dict[int, int] = {}
    if field.kind == RATIONALS:
        signature = sum(1 if d > 0 else -1 for d in diagonal)
        places = set(primes or ()) | _prime_support(diagonal)
        for p in sorted(places):
            s = 1
            for i in range(r):
                for j in range(i + 1, r):
                    s *= hilbert_symbol(diagonal[i], diagonal[j], p)
            hasse[p] = s
    return FormInvariants(r, signature, square_class(det), square_class(det * sign), hasse)


@dataclass
class GWInvariants:
    """Invariants of a virtual class P - N"""
    rank: int
    signature: Optional[int]
    signed_discriminant: SquareClass
    hasse: Dict[int, int]
    positive: FormInvariants
    negative: FormInvariants

    def to_dict(self) -> Dict[str, Any]:
        return {
            'rank': self.rank,
            'signature': self.signature,
            'disc': str(self.signed_discriminant),
            'hasse': {str(p): s for p, s in sorted(self.hasse.items())},
            'positive': self.positive.to_dict(),
            'negative': self.negative.to_dict(),
        }


def invariants(q: GWClass, primes: Optional[Iterable[int]] = None) -> GWInvariants:
    """
    Invariants of a GW class over Q or F_p

    Signature is defined over Q only. For a virtual class the Hasse invariants
    are reported per part; `hasse` holds those of the positive part.
    """
    if q.field.is_function_field:
        raise UnsupportedFieldError(f"invariants are not available over {q.field}")
    pos_diag, neg_diag = q.positive_diagonal(), q.negative_diagonal()
    places = set(primes or ())
    if q.field.kind == RATIONALS:
        places |= _prime_support(pos_diag + neg_diag)
    pos = form_invariants(q.field, pos_diag, places)
    neg = form_invariants(q.field, neg_diag, places)
    r = pos.rank - neg.rank
    det = pos.determinant * neg.determinant
    if (r * (r - 1) // 2) % 2:
        det = det.negate()
    signature = None if pos.signature is None else pos.signature - neg.signature
    return GWInvariants(r, signature, det, pos.hasse, pos, neg)


@dataclass
class GWEquality:
    """Verdict of gw_equal with the compared invariants"""
    equal: bool
    method: str
    field: str
    lhs: Dict[str, Any]
    rhs: Dict[str, Any]
    mismatches: List[str] = dc_field(default_factory=list)

    def __bool__(self):
        return self.equal

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def gw_equal(q1: GWClass, q2: GWClass) -> GWEquality:
    """
    Decide q1 = q2 in GW(k) for k = Q or F_p

    q1 = P1 - N1 and q2 = P2 - N2 are equal iff the genuine forms P1 + N2 and
    P2 + N1 are isometric. Over Q these are compared by rank, signature, signed
    discriminant and Hasse invariants at 2 and every prime dividing an entry;
    over F_p by rank and discriminant.
    """
    if q1.field != q2.field:
        raise MixedFieldsError(f"cannot compare classes over {q1.field} and {q2.field}")
    field = q1.field
    if field.is_function_field:
        raise UnsupportedFieldError(f"GW equality over {field} is not decided; specialize first")
    lhs_diag = q1.positive_diagonal() + q2.negative_diagonal()
    rhs_diag = q2.positive_diagonal() + q1.negative_diagonal()
    places: Set[int] = set()
    if field.kind == RATIONALS:
        places = _prime_support(lhs_diag + rhs_diag)
    lhs = form_invariants(field, lhs_diag, places)
    rhs = form_invariants(field, rhs_diag, places)
    mismatches = []
    if lhs.rank != rhs.rank:
        mismatches.append('rank')
    if lhs.signed_discriminant != rhs.signed_discriminant:
        mismatches.append('disc')
    method = 'rank+discriminant'
    if field.kind == RATIONALS:
        method = 'hasse-minkowski'
        if lhs.signature != rhs.signature:
            mismatches.append('signature')
        for p in sorted(places):
            if lhs.hasse.get(p) != rhs.hasse.get(p):
                mismatches.append(f"hasse@{p}")
    return GWEquality(not mismatches, method, str(field), lhs.to_dict(), rhs.to_dict(), mismatches)


# --- specialization ------------------------------------------------------------

def specialize(q: GWClass) -> GWClass:
    """
    sp_t: GW(k(t)) -> GW(k), <t^n u> -> <u(0)>, H -> H

    Args:
        q: class over Q(t) or F_p(t)
    """
    if not q.field.is_function_field:
        raise UnsupportedFieldError(f"specialization needs a class over k(t), got {q.field}")
    base = q.field.base
    entries: Dict[SquareClass, int] = {}
    for cls, mult in q.entries.items():
        if is_zero(cls.rep):
            raise ZeroEntryError("zero entry cannot be specialized")
        _, u0 = t_order_and_unit(cls.rep)
        c = square_class(base.coerce(u0))
        entries[c] = entries.get(c, 0) + mult
    return GWClass(base, entries, q.hyperbolic)


if __name__ == "__main__":
    Q = FieldId.rationals()
    print(f"[[0,1],[1,0]] -> {diagonalize([[0, 1], [1, 0]], Q)}")
    q = diagonalize([[0, 1, 0], [1, 0, 0], [0, 0, 5]], Q)
    print(f"[[0,1,0],[1,0,0],[0,0,5]] -> {q}")
    print(f"(2,3)_3 = {hilbert_symbol(2, 3, 3)}")
    verdict = gw_equal(GWClass.from_diagonal(Q, [2, 2]), GWClass.from_diagonal(Q, [1, 1]))
    print(f"<2,2> == <1,1>: {verdict.equal} via {verdict.method}")
    Qt = FieldId.rational_functions()
    t = Qt.t()
    print(f"sp_t(<t> + <-6t>) = {specialize(GWClass.from_diagonal(Qt, [t, -6 * t]))}")
