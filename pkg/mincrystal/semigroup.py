"""Frobenius numbers of numerical semigroups.

The oracle is the residue-class shortest path: for the smallest generator a,
dist[c] is the least representable integer congruent to c mod a, and the
Frobenius number is max(dist) - a. A boolean table up to the Schur bound is
kept as a second, independent oracle.
"""
import heapq
import logging
from enum import StrEnum
from functools import reduce
from itertools import combinations
from math import gcd

from pydantic import BaseModel, ConfigDict, StrictInt, field_validator, model_validator

from mincrystal.config import settings
from mincrystal.errors import GcdError, HypothesisViolation, InvalidProfileError, OracleMismatch

logger = logging.getLogger(__name__)


class Method(StrEnum):
    FORMULA = "formula"
    DP = "dp"


class SemigroupGenerators(BaseModel):
    """At least two positive generators with gcd 1."""

    model_config = ConfigDict(frozen=True)

    generators: tuple[StrictInt, ...]

    @field_validator("generators")
    @classmethod
    def validate_generators(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if len(v) < 2:
            raise ValueError("Need at least two generators")
        if any(g < 1 for g in v):
            raise ValueError("Generators must be positive")
        return v

    @model_validator(mode="after")
    def validate_gcd(self) -> "SemigroupGenerators":
        d = reduce(gcd, self.generators)
        if d != 1:
            raise GcdError(
                f"Generators have gcd {d}; the Frobenius number is undefined",
                generators=list(self.generators),
                gcd=d,
            )
        return self

    @classmethod
    def of(cls, *generators: int) -> "SemigroupGenerators":
        return cls(generators=tuple(generators))


class FrobeniusResult(BaseModel):
    """Frobenius number (None when nothing is missing) and the path that produced it."""

    model_config = ConfigDict(frozen=True)

    value: int | None
    method: Method


def _residue_distances(g: SemigroupGenerators) -> list[int]:
    """Dijkstra over residues mod the smallest generator."""
    a = min(g.generators)
    dist = [-1] * a
    dist[0] = 0
    heap = [(0, 0)]
    settled = [False] * a
    while heap:
        d, residue = heapq.heappop(heap)
        if settled[residue]:
            continue
        settled[residue] = True
        for step in g.generators:
            target = (residue + step) % a
            candidate = d + step
            if dist[target] < 0 or candidate < dist[target]:
                dist[target] = candidate
                heapq.heappush(heap, (candidate, target))
    return dist


def frobenius_dp(g: SemigroupGenerators) -> int | None:
    """Largest non-representable positive integer, or None if there is none."""
    if 1 in g.generators:
        return None
    dist = _residue_distances(g)
    return max(dist) - min(g.generators)


def schur_bound(g: SemigroupGenerators) -> int:
    """(min - 1)(max - 1) - 1, an upper bound for the Frobenius number."""
    return (min(g.generators) - 1) * (max(g.generators) - 1) - 1


def representable_table(g: SemigroupGenerators, limit: int) -> list[bool]:
    """table[n] tells whether n is representable, for 0 <= n <= limit."""
    table = [False] * (limit + 1)
    table[0] = True
    for n in range(1, limit + 1):
        table[n] = any(step <= n and table[n - step] for step in g.generators)
    return table


def frobenius_table(g: SemigroupGenerators) -> int | None:
    """Frobenius number from the boolean table up to the Schur bound."""
    bound = schur_bound(g)
    if bound < 1:
        return None
    table = representable_table(g, bound)
    missing = [n for n in range(1, bound + 1) if not table[n]]
    return missing[-1] if missing else None


def is_representable(g: SemigroupGenerators, n: int) -> bool:
    if n < 0:
        return False
    dist = _residue_distances(g)
    return n >= dist[n % min(g.generators)]


def gaps(g: SemigroupGenerators) -> list[int]:
    """Sorted non-representable positive integers."""
    if 1 in g.generators:
        return []
    a = min(g.generators)
    dist = _residue_distances(g)
    return [n for n in range(1, max(dist)) if n < dist[n % a]]


def frobenius_pair(a: int, b: int) -> int:
    """Sylvester's ab - a - b for coprime a, b."""
    if gcd(a, b) != 1:
        raise GcdError(f"{a} and {b} are not coprime", generators=[a, b], gcd=gcd(a, b))
    return a * b - a - b


def _pairwise_coprime_failure(values: tuple[int, ...]) -> tuple[int, int] | None:
    for u, v in combinations(values, 2):
        if gcd(u, v) != 1:
            return u, v
    return None


def brauer_shockley(x: int, y: int, z: int) -> int:
    """
    Closed Frobenius number of x, y, z.

    Valid when x, y, z are pairwise coprime and y + z = 0 mod x. A value of -1
    means every positive integer is representable.

    Raises:
        HypothesisViolation: Naming the condition that fails
    """
    if min(x, y, z) < 1:
        raise HypothesisViolation(
            "Generators must be positive", condition="positive", triple=[x, y, z]
        )
    pair = _pairwise_coprime_failure((x, y, z))
    if pair is not None:
        raise HypothesisViolation(
            f"{pair[0]} and {pair[1]} are not coprime",
            condition="pairwise_coprime",
            pair=list(pair),
            triple=[x, y, z],
        )
    if (y + z) % x:
        raise HypothesisViolation(
            f"y + z = {y + z} is not divisible by x = {x}",
            condition="y_plus_z_divisible_by_x",
            triple=[x, y, z],
        )
    return max((x * z) // (y + z) * y, (x * y) // (y + z) * z) - x


def crystal_generators(s: int, r: int, e: int) -> tuple[int, int, int]:
    """(s, re - s, r), after checking gcd(s, r) = 1 and re - s >= 1."""
    if min(s, r, e) < 1:
        raise InvalidProfileError(
            "s, r and e must be positive", s=s, r=r, e=e
        )
    if gcd(s, r) != 1:
        raise GcdError(f"gcd(s, r) = {gcd(s, r)}, slope {s}/{r} is not reduced",
                       s=s, r=r, gcd=gcd(s, r))
    if r * e - s < 1:
        raise InvalidProfileError(
            f"re - s = {r * e - s} must be at least 1", s=s, r=r, e=e
        )
    return s, r * e - s, r


def frobenius_for_crystal(s: int, r: int, e: int) -> FrobeniusResult:
    """
    g(s, re - s, r) by the specialized closed formula when it applies, else by DP.

    The formula path needs the three generators pairwise coprime, which fails
    exactly when gcd(s, e) > 1. It is checked against the Brauer-Shockley
    formula, and against the DP oracle while every generator is at most
    settings.dp_verify_limit.

    Raises:
        GcdError: If gcd(s, r) != 1
        InvalidProfileError: If re - s < 1
        OracleMismatch: If the closed formula disagrees with an oracle
    """
    generators = crystal_generators(s, r, e)
    semigroup = SemigroupGenerators(generators=generators)
    if _pairwise_coprime_failure(generators) is not None:
        logger.debug("generators %s not pairwise coprime, using DP", generators)
        return FrobeniusResult(value=frobenius_dp(semigroup), method=Method.DP)

    formula = max((r * e - s) // e * s, (s // e) * (r * e - s)) - r
    general = brauer_shockley(r, s, r * e - s)
    if formula != general:
        raise OracleMismatch(
            "Specialized formula disagrees with Brauer-Shockley",
            s=s, r=r, e=e, formula=formula, brauer_shockley=general,
        )
    value = formula if formula >= 0 else None
    if max(generators) <= settings.dp_verify_limit:
        oracle = frobenius_dp(semigroup)
        if oracle != value:
            raise OracleMismatch(
                "Closed formula disagrees with the DP oracle",
                s=s, r=r, e=e, formula=value, dp=oracle,
            )
    return FrobeniusResult(value=value, method=Method.FORMULA)
