"""
Expression parser - Polynomials and scalars from text, with byte offsets in errors

Grammar:
    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := primary ('^' nat)*
    primary:= nat | ident | '(' expr ')'

Division is only by nonzero constants and `t` is only known over Q(t) or F_p(t).
"""
import re
from fractions import Fraction
from typing import Callable, List, NamedTuple, Optional

from errors import DivisionByZeroError, PolySyntaxError, UnknownVariableError
from poly import Poly, WeightedRing
from scalars import FieldId, is_zero

_TOKEN = re.compile(r'\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>\*\*|[-+*/^()]))')
_SPACE = re.compile(r'\s*')


class Token(NamedTuple):
    kind: str
    text: str
    offset: int


def _byte_offset(src: str, index: int) -> int:
    return len(src[:index].encode('utf-8'))


def tokenize(src: str) -> List[Token]:
    """Split into number, identifier and operator tokens; '**' is read as '^'"""
    tokens = []
    pos = 0
    while True:
        pos = _SPACE.match(src, pos).end()
        if pos >= len(src):
            break
        m = _TOKEN.match(src, pos)
        if not m:
            raise PolySyntaxError(f"unexpected character {src[pos]!r}", _byte_offset(src, pos), src)
        kind = m.lastgroup
        text = m.group(kind)
        start = m.start(kind)
        tokens.append(Token(kind, '^' if text == '**' else text, _byte_offset(src, start)))
        pos = m.end()
    tokens.append(Token('end', '', len(src.encode('utf-8'))))
    return tokens


class _Parser:
    """Recursive descent over tokens; values are built by the supplied callbacks"""

    def __init__(self, src: str, constant: Callable, variable: Callable, divide: Callable):
        self.src = src
        self.tokens = tokenize(src)
        self.pos = 0
        self.constant = constant
        self.variable = variable
        self.divide = divide

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str, token: Optional[Token] = None) -> PolySyntaxError:
        token = token or self.current
        found = 'end of input' if token.kind == 'end' else repr(token.text)
        return PolySyntaxError(f"{message}, found {found}", token.offset, self.src)

    def accept(self, *ops: str) -> Optional[Token]:
        token = self.current
        if token.kind == 'op' and token.text in ops:
            self.pos += 1
            return token
        return None

    def parse(self):
        value = self.expr()
        if self.current.kind != 'end':
            raise self.error("unexpected token")
        return value

    def expr(self):
        sign = self.accept('+', '-')
        value = self.term()
        if sign is not None and sign.text == '-':
            value = -value
        while True:
            op = self.accept('+', '-')
            if op is None:
                return value
            rhs = self.term()
            value = value + rhs if op.text == '+' else value - rhs

    def term(self):
        value = self.factor()
        while True:
            op = self.accept('*', '/')
            if op is None:
                return value
            token = self.current
            rhs = self.factor()
            value = value * rhs if op.text == '*' else self.divide(value, rhs, token)

    def factor(self):
        value = self.primary()
        while self.accept('^'):
            token = self.current
            if token.kind != 'num':
                raise self.error("expected a natural exponent after '^'")
            self.pos += 1
            value = value ** int(token.text)
        return value

    def primary(self):
        token = self.current
        if token.kind == 'num':
            self.pos += 1
            return self.constant(int(token.text))
        if token.kind == 'ident':
            self.pos += 1
            return self.variable(token)
        if self.accept('('):
            value = self.expr()
            if not self.accept(')'):
                raise self.error("expected ')'")
            return value
        raise self.error("expected a number, a variable or '('")


def parse_poly(src: str, ring: WeightedRing) -> Poly:
    """
    Parse a polynomial over the given ring

    Args:
        src: expression text, e.g. "x0^3 + x1^3 - t*x2^3"
        ring: ring supplying variable names and the coefficient field

    Returns:
        Poly: the parsed polynomial
    """
    field = ring.field

    def variable(token: Token) -> Poly:
        if token.text in ring.variables:
            return ring.gen(ring.variables.index(token.text))
        if token.text == 't' and field.is_function_field:
            return ring.constant(field.t())
        raise UnknownVariableError(token.text, token.offset)

    def divide(num: Poly, den: Poly, token: Token) -> Poly:
        constant_key = (0,) * ring.nvars
        if any(m != constant_key for m in den.terms):
            raise PolySyntaxError("division by a non-constant polynomial", token.offset, src)
        c = den.coefficient(constant_key)
        if is_zero(c):
            raise DivisionByZeroError(f"division by zero at offset {token.offset}")
        return num.scale(field.one() / c)

    return _Parser(src, ring.constant, variable, divide).parse()


def parse_scalar(src: str, field: FieldId):
    """
    Parse a scalar: a rational, an element of F_p, or a rational function of t

    Args:
        src: expression text, e.g. "(2*t + t^2)/(1 - t)"
        field: target field

    Returns:
        Scalar: canonical element of the field
    """

    def variable(token: Token):
        if token.text == 't' and field.is_function_field:
            return field.t()
        raise UnknownVariableError(token.text, token.offset)

    def divide(num, den, token: Token):
        if is_zero(den):
            raise DivisionByZeroError(f"division by zero at offset {token.offset}")
        return num / den

    return field.coerce(_Parser(src, field.coerce, variable, divide).parse())


def parse_scalar_list(src: str, field: FieldId) -> List:
    """Comma-separated scalars; error offsets refer to the whole string"""
    values = []
    start = 0
    for piece in src.split(','):
        try:
            values.append(parse_scalar(piece, field))
        except PolySyntaxError as e:
            raise PolySyntaxError(str(e).rsplit(' at offset', 1)[0],
                                  e.offset + _byte_offset(src, start), src) from e
        except UnknownVariableError as e:
            raise UnknownVariableError(e.name, e.offset + _byte_offset(src, start)) from e
        start += len(piece) + 1
    return values


def parse_weights(src: str) -> List[int]:
    """'1,1,2' -> [1, 1, 2]"""
    try:
        return [int(part) for part in src.split(',') if part.strip()]
    except ValueError:
        raise PolySyntaxError(f"weights must be comma-separated integers: {src!r}", 0, src)


if __name__ == "__main__":
    Qt = FieldId.rational_functions()
    ring = WeightedRing(Qt, ('x0', 'x1', 'x2', 'x3'), (1, 1, 1, 1))
    print(parse_poly("x0^3 + x1^3 + x2^3 - t*x3^3", ring))
    print(parse_scalar("(2*t+t^2)/(1-t)", Qt))
    print(parse_scalar_list("t, -6*t, 2+t", Qt))
    print(Fraction(1, 2) == parse_scalar("1/2", FieldId.rationals()))
    try:
        parse_poly("x0 + + x1", ring)
    except PolySyntaxError as e:
        print(f"error: {e} (offset {e.offset})")
