"""Domain errors.

Every error carries a stable ``code`` plus a ``context`` dict so that the CLI
can render it as a structured error document.
"""
from typing import Any


class MinCrystalError(Exception):
    """Base class for all domain errors."""

    code = "mincrystal_error"

    def __init__(self, message: str, **context: Any) -> None:
        super().__init__(message)
        self.message = message
        self.context = context

    def to_dict(self) -> dict[str, Any]:
        return {"code": self.code, "message": self.message, "context": self.context}


class InvalidInputError(MinCrystalError):
    code = "invalid_input"


class MultiplicityError(MinCrystalError):
    code = "multiplicity_not_divisible"


class NotMinimalError(MinCrystalError):
    code = "not_minimal"


class NotIsoclinicError(MinCrystalError):
    code = "not_isoclinic"


class SlopeOrderError(MinCrystalError):
    code = "slope_order"


class SummandCountError(MinCrystalError):
    code = "too_few_summands"


class GcdError(MinCrystalError):
    code = "gcd_not_one"


class HypothesisViolation(MinCrystalError):
    code = "hypothesis_violation"


class InvalidProfileError(MinCrystalError):
    code = "invalid_profile"


class NotPrimeError(MinCrystalError):
    code = "not_prime"


class ReducibleModulusError(MinCrystalError):
    code = "reducible_modulus"


class SpecMismatchError(MinCrystalError):
    code = "spec_mismatch"


class PrecisionExhausted(MinCrystalError):
    code = "precision_exhausted"


class RankDeficiencyError(MinCrystalError):
    code = "rank_deficient"


class NotStableError(MinCrystalError):
    code = "not_stable"


class SearchBoundExceeded(MinCrystalError):
    code = "search_bound_exceeded"


class ContainmentError(MinCrystalError):
    code = "containment_violation"


class OracleMismatch(MinCrystalError):
    """A closed formula disagreed with its brute-force oracle."""

    code = "oracle_mismatch"
