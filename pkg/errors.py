"""
Errors - Typed exception hierarchy for quadcond and its exit-code mapping
"""
from typing import Optional


class QuadCondError(Exception):
    """Base class for every error raised by quadcond"""

    exit_code = 3
    kind = "internal"


class UserInputError(QuadCondError):
    """Malformed input: bad syntax, unknown names, inconsistent flags"""

    exit_code = 1
    kind = "user_input"


class MathPreconditionError(QuadCondError):
    """A mathematical precondition of an operation does not hold"""

    exit_code = 2
    kind = "precondition"


class InvariantBreachError(QuadCondError):
    """An internal consistency check failed"""

    exit_code = 3
    kind = "invariant"


# --- user input -----------------------------------------------------------

class PolySyntaxError(UserInputError):
    """Syntax error in a polynomial expression, with the byte offset"""

    def __init__(self, message: str, offset: int, source: Optional[str] = None):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
        self.source = source


class UnknownVariableError(UserInputError):
    """An identifier that is neither a declared variable nor `t`"""

    def __init__(self, name: str, offset: Optional[int] = None):
        where = f" at offset {offset}" if offset is not None else ""
        super().__init__(f"unknown variable '{name}'{where}")
        self.name = name
        self.offset = offset


class MixedFieldsError(UserInputError):
    pass


class FieldSpecError(UserInputError):
    pass


class WeightsInvalidError(UserInputError):
    pass


# --- mathematical preconditions -------------------------------------------

class DivisionByZeroError(MathPreconditionError, ZeroDivisionError):
    pass


class ZeroInputError(MathPreconditionError):
    pass


class ZeroScalarError(MathPreconditionError):
    pass


class ZeroEntryError(MathPreconditionError):
    pass


class ZeroPolynomialError(MathPreconditionError):
    pass


class NotHomogeneousError(MathPreconditionError):
    pass


class BadCharacteristicError(MathPreconditionError):
    pass


class CharacteristicTwoError(MathPreconditionError):
    pass


class NotFiniteDimensionalError(MathPreconditionError):
    pass


class ZeroSocleGeneratorError(MathPreconditionError):
    pass


class DegenerateFormError(MathPreconditionError):
    pass


class NotSmoothError(MathPreconditionError):
    pass


class NotSmoothGenericFiberError(NotSmoothError):
    pass


class UnsupportedFieldError(MathPreconditionError):
    pass


class FactorizationBoundExceeded(MathPreconditionError):
    pass


# --- internal invariants ---------------------------------------------------

class OddRankPrimitiveError(InvariantBreachError):
    pass


class CertificateError(InvariantBreachError):
    pass


class EulerRelationError(InvariantBreachError):
    pass


def exit_code_for(exc: BaseException) -> int:
    """
    Map an exception to the CLI exit code

    Args:
        exc: Exception raised while running a command

    Returns:
        int: 1 for user errors, 2 for violated preconditions, 3 otherwise
    """
    if isinstance(exc, QuadCondError):
        return exc.exit_code
    return 3


def http_status_for(exc: BaseException) -> int:
    """HTTP status used by the JSON API for an exception"""
    return {1: 400, 2: 422}.get(exit_code_for(exc), 500)
