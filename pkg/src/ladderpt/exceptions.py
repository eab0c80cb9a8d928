"""Exception types raised by ladderpt."""


class LadderPTError(Exception):
    """Base class for all errors raised by this package."""


class BasisMismatch(LadderPTError, ValueError):
    """Operands live on different bases."""


class IndexOutOfRange(LadderPTError, IndexError):
    pass


class NotOrthogonal(LadderPTError, ValueError):
    """The inverse derivation was asked to act outside the orthogonal subspace."""


class DegenerateTransition(LadderPTError, ValueError):
    """A nonzero off-diagonal entry connects two levels of equal energy.

    Raised in strict projection mode; kernel mode handles such entries.
    """


class InvalidOrder(LadderPTError, ValueError):
    pass


class MissingGenerator(LadderPTError, KeyError):
    pass


class ResidualTooLarge(LadderPTError, ArithmeticError):
    """The commutator equation of some order is not satisfied by the solve.

    Usually means the truncated basis is too small for the requested order.
    """


class ExponentialNotConverged(LadderPTError, ArithmeticError):
    pass


class NotHermitian(LadderPTError, ValueError):
    pass


class Degenerate(LadderPTError, ValueError):
    """Textbook non-degenerate perturbation theory is undefined for this spectrum."""


class ParseError(LadderPTError, ValueError):
    def __init__(self, lineno, reason):
        self.lineno = lineno
        self.reason = reason
        where = f"line {lineno}" if lineno else "end of input"
        super().__init__(f"{where}: {reason}")


class ValidationError(LadderPTError, ValueError):
    pass
