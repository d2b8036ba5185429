"""Exception hierarchy shared by every module.

Input problems derive from :class:`KleinInputError` (CLI exit code 2),
numerical breakdowns from :class:`NumericFailure` (exit code 3).
"""

from __future__ import annotations


class KleinError(Exception):
    """Base class for all library errors."""


class KleinInputError(KleinError, ValueError):
    """The caller supplied something outside an operation's contract."""


class ContractViolation(KleinInputError):
    pass


class DimensionMismatch(KleinInputError):
    pass


class SingularInput(KleinInputError):
    pass


class MembershipError(KleinInputError):
    """A matrix does not satisfy the defining equations of a group."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class UnsupportedGroup(KleinInputError):
    pass


class UnknownEmbedding(KleinInputError):
    pass


class EmpiricalConeError(KleinInputError):
    """An exact-only predicate was handed an empirically sampled cone."""


class GeneratorLimitExceeded(KleinInputError):
    pass


class UnsupportedSet(KleinInputError):
    pass


class SameOrbitError(KleinInputError):
    pass


class NumericFailure(KleinError, ArithmeticError):
    pass


class CatalogValidationError(KleinError):
    """The catalog file failed validation and was refused."""


class CatalogInconsistency(KleinError):
    """Catalog data makes two mutually exclusive theorems fire at once."""
