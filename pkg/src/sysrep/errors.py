"""Exception hierarchy shared by every module of the package."""


class SysrepError(Exception):
    """Base class for all errors raised by sysrep."""


class DivisionByZero(SysrepError, ZeroDivisionError):
    pass


class FieldMismatch(SysrepError, ValueError):
    pass


class NoSquareRoot(SysrepError, ValueError):
    pass


class UnsupportedCharacteristic(SysrepError, ValueError):
    pass


class BothZero(SysrepError, ValueError):
    pass


class ZeroPolynomial(SysrepError, ValueError):
    pass


class DimensionMismatch(SysrepError, ValueError):
    pass


class WrongTimeGroup(SysrepError, ValueError):
    pass


class UnsupportedGroup(SysrepError, ValueError):
    pass


class InvalidDocument(SysrepError, ValueError):
    """Input document failed parsing or schema validation."""


# Mathematical preconditions (CLI exit code 4).

class MathPreconditionError(SysrepError):
    pass


class SingularMatrix(MathPreconditionError, ValueError):
    pass


class NotPeriodic(MathPreconditionError, ValueError):
    pass


class InfiniteOrder(MathPreconditionError, ValueError):
    pass


class NegativeTimeForSemigroup(MathPreconditionError, ValueError):
    pass


class RationalFieldUnsupported(MathPreconditionError, ValueError):
    pass


class CharacteristicTwo(MathPreconditionError, ValueError):
    pass


# Size guards (CLI exit code 3).

class GuardError(SysrepError):
    guard = "Guard"


class DegreeTooLarge(GuardError, ValueError):
    guard = "DegreeTooLarge"


class StateSpaceTooLarge(GuardError, ValueError):
    guard = "StateSpaceTooLarge"


class ExtensionTooLarge(GuardError, ValueError):
    guard = "ExtensionTooLarge"
