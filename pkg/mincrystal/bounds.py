"""Isomorphism-number and minimal-height bounds for isosimple F-crystals.

All floors and ceilings are taken of exact Fractions.
"""
import logging
from fractions import Fraction
from math import ceil, floor, gcd

from pydantic import BaseModel, ConfigDict, StrictInt, model_validator

from mincrystal.crystal import Rational
from mincrystal.errors import InvalidProfileError
from mincrystal.semigroup import (
    Method,
    SemigroupGenerators,
    crystal_generators,
    frobenius_dp,
    frobenius_for_crystal,
)

logger = logging.getLogger(__name__)

# Comparison value for the (0, 1, 3) Hodge example, taken from the general
# isoclinic bound in the literature; it is cited, never recomputed here.
HODGE_013_CITED_BOUND = 4


class IsosimpleProfile(BaseModel):
    """Newton slope s/r (reduced, r = rank) and maximal Hodge slope e."""

    model_config = ConfigDict(frozen=True)

    s: StrictInt
    r: StrictInt
    e: StrictInt

    @model_validator(mode="after")
    def validate_profile(self) -> "IsosimpleProfile":
        if min(self.s, self.r, self.e) < 1:
            raise InvalidProfileError(
                "s, r and e must be positive", s=self.s, r=self.r, e=self.e
            )
        if gcd(self.s, self.r) != 1:
            raise InvalidProfileError(
                f"Slope {self.s}/{self.r} is not in reduced form", s=self.s, r=self.r, e=self.e
            )
        if self.r * self.e < self.s:
            raise InvalidProfileError(
                "The maximal Hodge slope e needs re >= s", s=self.s, r=self.r, e=self.e
            )
        return self

    @property
    def slope(self) -> Fraction:
        return Fraction(self.s, self.r)


class BoundReport(BaseModel):
    """Bounds of one profile; every field is computed on its own."""

    theorem_b: int
    lambda_restated: int
    q_bound: int
    q_based_bound: int
    frobenius_value: int | None
    frobenius_method: Method
    dieudonne_optimal: int | None = None
    minimal_crystal_bound: int | None = None


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def theorem_b_bound(p: IsosimpleProfile) -> int:
    """2 max{floor((r - ceil(s/e)) s/r), floor(floor(s/e)(e - s/r))} + 1."""
    s, r, e = p.s, p.r, p.e
    first = floor((r - _ceil_div(s, e)) * Fraction(s, r))
    second = floor((s // e) * (e - Fraction(s, r)))
    return 2 * max(first, second) + 1


def lambda_restated_bound(p: IsosimpleProfile) -> int:
    """The same bound written in terms of lambda = s/r."""
    lam = p.slope
    ceil_s_e = ceil(Fraction(p.s, p.e))
    floor_s_e = floor(Fraction(p.s, p.e))
    return 2 * max(floor((p.r - ceil_s_e) * lam), floor(floor_s_e * (p.e - lam))) + 1


def _frobenius_or_minus_one(value: int | None) -> int:
    # A semigroup containing 1 has no gaps; every valuation >= 0 is attained.
    return -1 if value is None else value


def q_bound(p: IsosimpleProfile) -> int:
    """floor(g(s, re - s, r) / r) + 1, bounding the minimal height."""
    g = _frobenius_or_minus_one(frobenius_for_crystal(p.s, p.r, p.e).value)
    return g // p.r + 1


def isom_bound_from_q(q: int) -> int:
    """n <= 1 + 2q."""
    if q < 0:
        raise ValueError(f"Minimal height must be non-negative, got {q}")
    return 1 + 2 * q


def isogeny_transfer_bound(n_prime: int, q: int) -> int:
    """n <= n' + 2q for crystals joined by an isogeny of height q."""
    if n_prime < 0 or q < 0:
        raise ValueError("Isomorphism number and height must be non-negative")
    return n_prime + 2 * q


def frobenius_chain_bound(p: IsosimpleProfile) -> int:
    """2 floor(g/r) + 3 with g from the DP oracle."""
    generators = crystal_generators(p.s, p.r, p.e)
    g = _frobenius_or_minus_one(frobenius_dp(SemigroupGenerators(generators=generators)))
    return 2 * (g // p.r) + 3


def dieudonne_optimal_bound(c: int, d: int) -> int:
    """floor(2cd / (c + d)) for dimension d and codimension c."""
    if c < 1 or d < 1:
        raise ValueError("Dimension and codimension must be positive")
    return (2 * c * d) // (c + d)


def profile_from_hodge(hodge: list[int]) -> IsosimpleProfile:
    """Profile of an isosimple crystal with the given Hodge slopes."""
    if not hodge or min(hodge) < 0:
        raise InvalidProfileError("Hodge slopes must be a non-empty list of non-negative integers",
                                  hodge=hodge)
    return IsosimpleProfile(s=sum(hodge), r=len(hodge), e=max(hodge))


def bound_report(p: IsosimpleProfile, compare: bool = False) -> BoundReport:
    frobenius = frobenius_for_crystal(p.s, p.r, p.e)
    q = _frobenius_or_minus_one(frobenius.value) // p.r + 1
    report = BoundReport(
        theorem_b=theorem_b_bound(p),
        lambda_restated=lambda_restated_bound(p),
        q_bound=q,
        q_based_bound=isom_bound_from_q(q),
        frobenius_value=frobenius.value,
        frobenius_method=frobenius.method,
    )
    if compare:
        report.minimal_crystal_bound = isom_bound_from_q(0)
        if p.e == 1:
            # Dieudonne modules: d = s, c = r - s.
            report.dieudonne_optimal = dieudonne_optimal_bound(p.r - p.s, p.s)
    logger.debug("bounds for %s: %s", p, report)
    return report


class HodgeExampleRow(BaseModel):
    hodge: list[int]
    theorem_b: int
    expected: int
    cited_bound: int
    relation: str
    passed: bool


class DieudonneRow(BaseModel):
    c: int
    d: int
    theorem_b: int
    closed_form: int
    optimal: int
    equal: bool
    fractional_part: Rational
    criterion: bool
    passed: bool


class RankTwoRow(BaseModel):
    e: int
    theorem_b: int
    expected: int
    passed: bool


class ExamplesTable(BaseModel):
    hodge_example: list[HodgeExampleRow]
    dieudonne: list[DieudonneRow]
    rank_two: list[RankTwoRow]

    @property
    def all_passed(self) -> bool:
        rows: list[HodgeExampleRow | DieudonneRow | RankTwoRow] = [
            *self.hodge_example, *self.dieudonne, *self.rank_two
        ]
        return all(row.passed for row in rows)


def _hodge_row() -> HodgeExampleRow:
    hodge = [0, 1, 3]
    computed = theorem_b_bound(profile_from_hodge(hodge))
    relation = "computed < fixture" if computed < HODGE_013_CITED_BOUND else "computed >= fixture"
    return HodgeExampleRow(
        hodge=hodge,
        theorem_b=computed,
        expected=3,
        cited_bound=HODGE_013_CITED_BOUND,
        relation=relation,
        passed=computed == 3 and computed < HODGE_013_CITED_BOUND,
    )


def _dieudonne_row(c: int, d: int) -> DieudonneRow:
    computed = theorem_b_bound(IsosimpleProfile(s=d, r=c + d, e=1))
    ratio = Fraction(c * d, c + d)
    closed_form = 2 * floor(ratio) + 1
    optimal = dieudonne_optimal_bound(c, d)
    fractional = ratio - floor(ratio)
    criterion = fractional >= Fraction(1, 2)
    equal = closed_form == optimal
    return DieudonneRow(
        c=c,
        d=d,
        theorem_b=computed,
        closed_form=closed_form,
        optimal=optimal,
        equal=equal,
        fractional_part=Rational.of(fractional),
        criterion=criterion,
        passed=computed == closed_form and equal == criterion,
    )


def _rank_two_row(e: int) -> RankTwoRow:
    computed = theorem_b_bound(IsosimpleProfile(s=e, r=2, e=e))
    return RankTwoRow(e=e, theorem_b=computed, expected=e, passed=computed == e)


def worked_examples(grid: int = 20, max_e: int = 21) -> ExamplesTable:
    """
    The three worked examples as checked tables.

    Args:
        grid: Coprime (c, d) with 1 <= c, d <= grid for the Dieudonne comparison
        max_e: Largest odd e in the rank-two family

    Returns:
        ExamplesTable with PASS/FAIL per row
    """
    return ExamplesTable(
        hodge_example=[_hodge_row()],
        dieudonne=[
            _dieudonne_row(c, d)
            for c in range(1, grid + 1)
            for d in range(1, grid + 1)
            if gcd(c, d) == 1
        ],
        rank_two=[_rank_two_row(e) for e in range(1, max_e + 1, 2)],
    )
