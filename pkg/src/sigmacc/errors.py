"""Exception hierarchy shared by the library and the CLI."""


class SigmaCCError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for it."""

    exit_code = 1


class CapExceeded(SigmaCCError):
    pass


class InvalidCondition(SigmaCCError):
    """A condition violates a representation invariant.

    ``code`` is one of ``LimitWithoutRay``, ``RayLimitNotDeclared``,
    ``ExplicitEqualsLimit``, ``CapExceeded``.
    """

    def __init__(self, code, detail=""):
        super().__init__(f"{code}: {detail}" if detail else code)
        self.code = code
        self.detail = detail


class ParseError(SigmaCCError):
    pass


class InvalidParams(SigmaCCError):
    exit_code = 2


class Incompatible(SigmaCCError):
    exit_code = 2

    def __init__(self, witness):
        super().__init__(f"conditions are orthogonal, witness {witness!r}")
        self.witness = witness


class SignatureMismatch(SigmaCCError):
    exit_code = 2


class NoWitness(SigmaCCError):
    exit_code = 2


class NoLimits(SigmaCCError):
    exit_code = 2


class OracleViolation(SigmaCCError):
    exit_code = 3


class BudgetExhausted(SigmaCCError):
    exit_code = 4

    def __init__(self, message, deepest=None):
        super().__init__(message)
        self.deepest = deepest
