"""Permutation-form (cyclic) F-crystals.

A cyclic F-crystal is given by disjoint cycles of basis vectors; on a cycle of
length r with exponents (e_1, ..., e_r) the Frobenius acts as
phi(v_i) = p^{e_i} v_{i+1}, indices taken mod r. Everything here is exact
integer or Fraction arithmetic.
"""
import logging
from collections import Counter
from fractions import Fraction
from math import lcm

from pydantic import BaseModel, ConfigDict, RootModel, StrictInt, field_validator, model_validator

from mincrystal.errors import MultiplicityError, NotMinimalError

logger = logging.getLogger(__name__)


class ExponentCycle(RootModel[tuple[StrictInt, ...]]):
    """Hodge exponents (e_1, ..., e_r) of one cycle; serializes as a JSON list."""

    model_config = ConfigDict(frozen=True)

    @field_validator("root")
    @classmethod
    def validate_exponents(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if not v:
            raise ValueError("A cycle needs at least one exponent")
        if any(e < 0 for e in v):
            raise ValueError("Exponents must be non-negative")
        return v

    @property
    def exponents(self) -> tuple[int, ...]:
        return self.root

    @property
    def length(self) -> int:
        return len(self.root)

    @property
    def total(self) -> int:
        return sum(self.root)

    @property
    def slope(self) -> Fraction:
        return Fraction(self.total, self.length)


class CyclicFCrystal(BaseModel):
    """A direct sum of cycles: the JSON document {"cycles": [[e_1, ...], ...]}."""

    model_config = ConfigDict(frozen=True)

    cycles: tuple[ExponentCycle, ...]

    @field_validator("cycles")
    @classmethod
    def validate_cycles(cls, v: tuple[ExponentCycle, ...]) -> tuple[ExponentCycle, ...]:
        if not v:
            raise ValueError("A crystal needs at least one cycle")
        return v

    @classmethod
    def of(cls, *cycles: tuple[int, ...] | list[int]) -> "CyclicFCrystal":
        return cls(cycles=tuple(ExponentCycle(tuple(c)) for c in cycles))

    @property
    def rank(self) -> int:
        return sum(c.length for c in self.cycles)

    def canonical(self) -> "CyclicFCrystal":
        """Cycles ordered by (slope, length, exponents)."""
        ordered = sorted(self.cycles, key=lambda c: (c.slope, c.length, c.exponents))
        return CyclicFCrystal(cycles=tuple(ordered))


class Rational(BaseModel):
    """Exact rational as a reduced {num, den} pair."""

    model_config = ConfigDict(frozen=True)

    num: StrictInt
    den: StrictInt

    @model_validator(mode="after")
    def validate_reduced(self) -> "Rational":
        if self.den < 1 or Fraction(self.num, self.den).denominator != self.den:
            raise ValueError(f"{self.num}/{self.den} is not a reduced fraction")
        return self

    @classmethod
    def of(cls, value: Fraction) -> "Rational":
        return cls(num=value.numerator, den=value.denominator)

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


class NewtonSlope(BaseModel):
    """One Newton slope num/den with its rank multiplicity."""

    model_config = ConfigDict(frozen=True)

    num: StrictInt
    den: StrictInt
    mult: StrictInt

    @model_validator(mode="after")
    def validate_reduced(self) -> "NewtonSlope":
        if self.num < 0 or self.den < 1 or self.mult < 1:
            raise ValueError("Slope needs num >= 0, den >= 1 and mult >= 1")
        if Fraction(self.num, self.den).denominator != self.den:
            raise ValueError(f"Slope {self.num}/{self.den} is not in reduced form")
        return self

    @property
    def slope(self) -> Fraction:
        return Fraction(self.num, self.den)


class NewtonPolygon(BaseModel):
    """Newton slopes with rank multiplicities: {"slopes": [{num, den, mult}, ...]}."""

    model_config = ConfigDict(frozen=True)

    slopes: tuple[NewtonSlope, ...]

    @field_validator("slopes")
    @classmethod
    def validate_increasing(cls, v: tuple[NewtonSlope, ...]) -> tuple[NewtonSlope, ...]:
        if not v:
            raise ValueError("A Newton polygon needs at least one slope")
        values = [s.slope for s in v]
        if any(a >= b for a, b in zip(values, values[1:], strict=False)):
            raise ValueError("Slopes must be strictly increasing")
        return v

    @classmethod
    def from_counts(cls, counts: dict[Fraction, int]) -> "NewtonPolygon":
        return cls(slopes=tuple(
            NewtonSlope(num=lam.numerator, den=lam.denominator, mult=m)
            for lam, m in sorted(counts.items())
        ))

    @property
    def rank(self) -> int:
        return sum(s.mult for s in self.slopes)


class MinimalityWitness(BaseModel):
    """Offending (cycle, i, q) with its epsilon value; cycle is 0-based, i and q 1-based."""

    model_config = ConfigDict(frozen=True)

    cycle: int
    i: int
    q: int
    epsilon: int


class MinimalityReport(BaseModel):
    """Result of the condition (*) test."""

    model_config = ConfigDict(frozen=True)

    is_minimal: bool
    witness: MinimalityWitness | None = None

    @model_validator(mode="after")
    def validate_witness(self) -> "MinimalityReport":
        if self.is_minimal != (self.witness is None):
            raise ValueError("A witness is present exactly when the crystal is not minimal")
        if self.witness is not None and self.witness.epsilon in (0, 1):
            raise ValueError("A witness must have epsilon outside {0, 1}")
        return self


def crystal_slope(cycle: ExponentCycle) -> Fraction:
    """Newton slope of one cycle: the mean of its exponents."""
    return cycle.slope


def rotate(cycle: ExponentCycle, k: int) -> ExponentCycle:
    """Reindex the cycle's basis so that v_{1+k} becomes v_1."""
    k %= cycle.length
    return ExponentCycle(cycle.exponents[k:] + cycle.exponents[:k])


def shifted_cycle(cycle: ExponentCycle, k: int) -> ExponentCycle:
    """The cycle of (M, p^k phi)."""
    return ExponentCycle(tuple(e + k for e in cycle.exponents))


def newton_slopes(c: CyclicFCrystal) -> NewtonPolygon:
    counts: Counter[Fraction] = Counter()
    for cycle in c.cycles:
        counts[cycle.slope] += cycle.length
    return NewtonPolygon.from_counts(dict(counts))


def hodge_slopes(c: CyclicFCrystal) -> list[int]:
    return sorted(e for cycle in c.cycles for e in cycle.exponents)


def phi_power_exponent(cycle: ExponentCycle, i: int, q: int) -> int:
    """
    Exponent of p in phi^q(v_i) = p^? v_{i+q}.

    This is the cyclic window sum e_i + e_{i+1} + ... + e_{i+q-1}.

    Args:
        cycle: The exponent cycle
        i: Starting basis index, 1 <= i <= r
        q: Number of Frobenius iterations, q >= 1

    Returns:
        The exact window sum
    """
    r = cycle.length
    if not 1 <= i <= r or q < 1:
        raise ValueError(f"Need 1 <= i <= {r} and q >= 1, got i={i}, q={q}")
    full, rest = divmod(q, r)
    exps = cycle.exponents
    start = i - 1
    partial = sum(exps[(start + t) % r] for t in range(rest))
    return full * cycle.total + partial


def _window_sums(cycle: ExponentCycle, q: int) -> list[int]:
    return [phi_power_exponent(cycle, i, q) for i in range(1, cycle.length + 1)]


def alpha_beta_delta(c: CyclicFCrystal, q: int) -> tuple[int, int, int]:
    """
    alpha(q), beta(q) and delta(q) = beta(q) - alpha(q).

    phi^q(M) is contained in p^alpha M and contains p^beta M.
    """
    if q < 1:
        raise ValueError(f"q must be positive, got {q}")
    sums = [w for cycle in c.cycles for w in _window_sums(cycle, q)]
    alpha, beta = min(sums), max(sums)
    return alpha, beta, beta - alpha


def _first_violation(cycle: ExponentCycle) -> tuple[int, int, int] | None:
    r, total = cycle.length, cycle.total
    for q in range(1, r + 1):
        floor_q = (q * total) // r
        for i in range(1, r + 1):
            epsilon = phi_power_exponent(cycle, i, q) - floor_q
            if epsilon not in (0, 1):
                return i, q, epsilon
    return None


def is_minimal(c: CyclicFCrystal) -> MinimalityReport:
    """
    Condition (*) on every cycle, each with its own slope.

    A direct sum of minimal cycles is minimal and every summand of a minimal
    crystal is minimal, so no cross-cycle condition is checked.
    """
    for index, cycle in enumerate(c.cycles):
        violation = _first_violation(cycle)
        if violation is not None:
            i, q, epsilon = violation
            logger.debug("cycle %d fails condition (*) at i=%d, q=%d", index, i, q)
            return MinimalityReport(
                is_minimal=False,
                witness=MinimalityWitness(cycle=index, i=i, q=q, epsilon=epsilon),
            )
    return MinimalityReport(is_minimal=True)


def is_ordinary(c: CyclicFCrystal) -> bool:
    """True iff every cycle has constant exponents (Newton polygon = Hodge polygon)."""
    return all(len(set(cycle.exponents)) == 1 for cycle in c.cycles)


def minimal_eta(lam: Fraction) -> ExponentCycle:
    """Exponents e_i = floor(i*lam) - floor((i-1)*lam) of the isosimple minimal crystal."""
    if lam < 0:
        raise ValueError(f"Slope must be non-negative, got {lam}")
    s, r = lam.numerator, lam.denominator
    return ExponentCycle(tuple((i * s) // r - ((i - 1) * s) // r for i in range(1, r + 1)))


def minimal_crystal(nu: NewtonPolygon) -> CyclicFCrystal:
    """
    The minimal F-crystal of Newton polygon nu.

    Raises:
        MultiplicityError: If a slope's rank multiplicity is not divisible by
            its reduced denominator
    """
    cycles: list[ExponentCycle] = []
    for entry in nu.slopes:
        copies, rest = divmod(entry.mult, entry.den)
        if rest:
            raise MultiplicityError(
                f"Multiplicity {entry.mult} of slope {entry.num}/{entry.den} "
                f"is not divisible by {entry.den}",
                slope={"num": entry.num, "den": entry.den},
                mult=entry.mult,
            )
        cycles.extend([minimal_eta(entry.slope)] * copies)
    return CyclicFCrystal(cycles=tuple(cycles)).canonical()


def check_periodicity(cycle: ExponentCycle) -> bool:
    """
    True iff the exponents of a minimal cycle are r'-periodic, lam = s/r' reduced.

    Raises:
        NotMinimalError: If the cycle does not satisfy condition (*)
    """
    report = is_minimal(CyclicFCrystal(cycles=(cycle,)))
    if not report.is_minimal:
        raise NotMinimalError(
            "Periodicity is only asserted for minimal cycles",
            cycle=list(cycle.exponents),
            witness=report.witness.model_dump() if report.witness else None,
        )
    period = cycle.slope.denominator
    exps = cycle.exponents
    r = len(exps)
    return all(exps[i] == exps[(i + period) % r] for i in range(r))


def window_period(c: CyclicFCrystal) -> int:
    """lcm of the cycle lengths; for isoclinic crystals delta has this period."""
    return lcm(*(cycle.length for cycle in c.cycles))
