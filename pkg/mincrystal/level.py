"""Level torsion of cyclic F-crystals.

For an isoclinic crystal the level torsion is the supremum of delta(q); for a
direct sum it is the maximum of the Hom drifts l(j1, j2) over ordered pairs
with non-decreasing slope.
"""
import logging
from fractions import Fraction
from itertools import combinations, permutations
from math import lcm

from pydantic import BaseModel, ConfigDict

from mincrystal.crystal import (
    CyclicFCrystal,
    ExponentCycle,
    MinimalityReport,
    NewtonPolygon,
    alpha_beta_delta,
    hodge_slopes,
    is_minimal,
    is_ordinary,
    newton_slopes,
    phi_power_exponent,
    window_period,
)
from mincrystal.errors import NotIsoclinicError, SlopeOrderError, SummandCountError

logger = logging.getLogger(__name__)


class HomDrift(BaseModel):
    """l(j1, j2) with a witness (q, a, b) realizing the minimum of D_q(a, b)."""

    model_config = ConfigDict(frozen=True)

    source: int
    target: int
    value: int
    q: int
    a: int
    b: int


class CrystalInfo(BaseModel):
    """Invariants reported by `crystal info`."""

    rank: int
    newton: NewtonPolygon
    hodge_slopes: list[int]
    minimality: MinimalityReport
    ordinary: bool
    level_torsion: int


def level_torsion_isoclinic(c: CyclicFCrystal) -> int:
    """
    max delta(q) over q in 1..lcm of cycle lengths.

    Raises:
        NotIsoclinicError: If the cycles do not all have the same slope
    """
    slopes = sorted({cycle.slope for cycle in c.cycles})
    if len(slopes) > 1:
        raise NotIsoclinicError(
            "Crystal is not isoclinic",
            slopes=[{"num": s.numerator, "den": s.denominator} for s in slopes],
        )
    return max(alpha_beta_delta(c, q)[2] for q in range(1, window_period(c) + 1))


def _drift(c1: ExponentCycle, c2: ExponentCycle, q: int, a: int, b: int) -> int:
    if q == 0:
        return 0
    return phi_power_exponent(c2, b, q) - phi_power_exponent(c1, a, q)


def hom_level(
    c1: ExponentCycle,
    c2: ExponentCycle,
    source: int = 0,
    target: int = 0,
) -> HomDrift:
    """
    Hom drift l(c1, c2) for slope(c1) <= slope(c2).

    D_q(a, b) = sum_{t<q} (f_{b+t} - e_{a+t}) is the p-exponent picked up by
    phi^q on the Hom basis vector v_{a+q} -> w_b. Since D_{q+L} = D_q + L(l2 - l1)
    with L = lcm of the lengths, q in 0..L reaches the minimum. q = 0 gives
    D = 0, so the value is never negative.

    Raises:
        SlopeOrderError: If slope(c1) > slope(c2)
    """
    if c1.slope > c2.slope:
        raise SlopeOrderError(
            "Hom drift needs slope(source) <= slope(target)",
            source_slope=str(c1.slope),
            target_slope=str(c2.slope),
        )
    best = (0, 0, 1, 1)
    for q in range(1, lcm(c1.length, c2.length) + 1):
        for a in range(1, c1.length + 1):
            for b in range(1, c2.length + 1):
                d = _drift(c1, c2, q, a, b)
                if d < best[0] or (best[1] == 0 and d == best[0]):
                    best = (d, q, a, b)
    d, q, a, b = best
    return HomDrift(source=source, target=target, value=max(0, -d), q=q, a=a, b=b)


def level_torsion(c: CyclicFCrystal) -> int:
    """Maximum of hom_level over ordered cycle pairs with slope(j1) <= slope(j2)."""
    if len(c.cycles) == 1:
        return level_torsion_isoclinic(c)
    drifts = [
        hom_level(c.cycles[j1], c.cycles[j2], j1, j2).value
        for j1 in range(len(c.cycles))
        for j2 in range(len(c.cycles))
        if c.cycles[j1].slope <= c.cycles[j2].slope
    ]
    return max(drifts)


def level_torsion_by_blocks(c: CyclicFCrystal) -> int:
    """Level torsion with same-slope cycles merged into isoclinic blocks first."""
    blocks: dict[Fraction, list[ExponentCycle]] = {}
    for cycle in c.cycles:
        blocks.setdefault(cycle.slope, []).append(cycle)
    values = [
        level_torsion_isoclinic(CyclicFCrystal(cycles=tuple(block)))
        for block in blocks.values()
    ]
    for low, high in combinations(sorted(blocks), 2):
        for c1 in blocks[low]:
            for c2 in blocks[high]:
                values.append(hom_level(c1, c2).value)
    return max(values)


def n_bound_direct_sum(n_values: list[int]) -> int:
    """
    Isomorphism-number estimate of a direct sum from those of its summands.

    Raises:
        SummandCountError: If fewer than two summands are given
    """
    if len(n_values) < 2:
        raise SummandCountError(
            "The direct-sum estimate needs at least two summands", count=len(n_values)
        )
    pairs = (n1 + n2 - 1 for n1, n2 in permutations(n_values, 2))
    return max(1, *n_values, *pairs)


def crystal_info(c: CyclicFCrystal) -> CrystalInfo:
    info = CrystalInfo(
        rank=c.rank,
        newton=newton_slopes(c),
        hodge_slopes=hodge_slopes(c),
        minimality=is_minimal(c),
        ordinary=is_ordinary(c),
        level_torsion=level_torsion(c),
    )
    logger.debug("crystal info: rank=%d level_torsion=%d", info.rank, info.level_torsion)
    return info
