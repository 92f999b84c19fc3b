"""Exception hierarchy shared by every module."""


class MahlerError(Exception):
    """Base class for all library errors."""


class ZeroDenominator(MahlerError, ZeroDivisionError):
    pass


class ZeroInput(MahlerError, ValueError):
    pass


class NonUniformClass(MahlerError):
    """A class polynomial only partially divides the function being valued."""


class ModuliNotCoprime(MahlerError, ValueError):
    pass


class TargetHasPole(MahlerError, ValueError):
    pass


class AllCoefficientsZero(MahlerError, ValueError):
    pass


class HorizonUncertified(MahlerError):
    """An orbit horizon hit its cap before the modulus certificate fired."""


class ZeroAction(MahlerError, ValueError):
    pass


class NotPrecalm(MahlerError):
    pass


class NotCalm(MahlerError):
    pass


class Undecided(MahlerError):
    pass


class RadixMismatch(MahlerError, ValueError):
    pass


class ConstructionFailed(MahlerError, AssertionError):
    """An internal verification of a constructed object failed (a bug)."""


class Inconsistent(MahlerError):
    pass


class TruncationTooShort(MahlerError, ValueError):
    pass


class ConstantTermNotOne(MahlerError, ValueError):
    pass


class ConstraintViolated(MahlerError, ValueError):
    pass


class FieldMismatch(MahlerError, ValueError):
    pass


class RadixInconsistent(MahlerError, ValueError):
    pass


class ParseError(MahlerError, SyntaxError):
    def __init__(self, msg, pos=None):
        self.pos = pos
        if pos is not None:
            msg = f"{msg} (at position {pos})"
        super().__init__(msg)
