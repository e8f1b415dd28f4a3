"""Exception hierarchy shared across the package."""

from __future__ import annotations


class NilmatchError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(NilmatchError, ValueError):
    """Input outside the supported domain (e.g. residue characteristic 2)."""


class InversionOfZero(NilmatchError, ZeroDivisionError):
    pass


class PrecisionLoss(NilmatchError, ArithmeticError):
    """Truncated arithmetic cannot decide a value (e.g. certify zero)."""


class ZeroInput(DomainError):
    pass


class DegenerateForm(DomainError):
    pass


class ZeroArgument(DegenerateForm):
    """A Hilbert symbol with a zero entry."""


class NotAdmissible(DomainError):
    pass


class InvalidTuple(DomainError):
    pass


class NotRegular(DomainError):
    pass


class EmptySubspace(DomainError):
    pass


class InternalInvariantError(NilmatchError, AssertionError):
    """A state the theory says is unreachable. Always a bug."""


class NoMatch(InternalInvariantError):
    pass


class NotInLattice(InternalInvariantError):
    def __init__(self, coordinate, valuation, bound):
        self.coordinate = coordinate
        self.valuation = valuation
        self.bound = bound
        super().__init__(
            f"coordinate {coordinate} has valuation {valuation} < lattice bound {bound}"
        )


class InvalidDivisor(DomainError):
    pass


class FormulaError(NilmatchError):
    """Base class for Denef-Pas front-end errors."""


class DPSyntaxError(FormulaError, SyntaxError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text_input = text
        super().__init__(f"{message} at position {position}")


class SortError(FormulaError, TypeError):
    pass


class UnassignedVariable(FormulaError, KeyError):
    def __str__(self):
        return f"unassigned variable {self.args[0]!r}"
