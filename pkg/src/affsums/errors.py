"""Exception hierarchy. Every error raised by the library derives from AffsumsError."""


class AffsumsError(Exception):
    pass


class NotPrime(AffsumsError, ValueError):
    pass


class CapExceeded(AffsumsError, ValueError):
    pass


class ZeroArgument(AffsumsError, ZeroDivisionError):
    pass


class FieldMismatch(AffsumsError, ValueError):
    pass


class NotDivisible(AffsumsError, ValueError):
    pass


class TrivialCharacter(AffsumsError, ValueError):
    pass


class RankDeficient(AffsumsError, ValueError):
    pass


class NotAHyperplane(AffsumsError, ValueError):
    pass


class NotInPosition(AffsumsError, ValueError):
    pass


class DegreeMismatch(AffsumsError, ArithmeticError):
    pass


class NonConvergence(AffsumsError, ArithmeticError):
    def __init__(self, msg, residuals=None):
        super().__init__(msg)
        self.residuals = residuals


class BoundViolated(AffsumsError, AssertionError):
    def __init__(self, msg, instance=None):
        super().__init__(msg)
        self.instance = instance


class ConfigInvalid(AffsumsError, ValueError):
    pass
