"""Tests for Frobenius numbers: the DP oracle, Brauer-Shockley and the crystal formula."""
import random
from itertools import product
from math import gcd

import pytest
from pydantic import ValidationError

from mincrystal.errors import GcdError, HypothesisViolation, InvalidProfileError
from mincrystal.semigroup import (
    Method,
    SemigroupGenerators,
    brauer_shockley,
    crystal_generators,
    frobenius_dp,
    frobenius_for_crystal,
    frobenius_pair,
    frobenius_table,
    gaps,
    is_representable,
)


@pytest.mark.parametrize("generators,expected", [
    ((2, 3), 1),
    ((3, 5, 7), 4),
    ((1, 9), None),
    ((6, 9, 20), 43),
])
def test_frobenius_dp(generators: tuple[int, ...], expected: int | None) -> None:
    assert frobenius_dp(SemigroupGenerators(generators=generators)) == expected


@pytest.mark.parametrize("generators,valid", [
    ((3, 5), True),  # Baseline
    ((4, 6), False),
    ((6, 10, 15, 30), True),
])
def test_generators_need_gcd_one(generators: tuple[int, ...], valid: bool) -> None:
    if valid:
        assert SemigroupGenerators(generators=generators).generators == generators
    else:
        with pytest.raises(GcdError) as exc_info:
            SemigroupGenerators(generators=generators)
        assert exc_info.value.context["gcd"] == 2


@pytest.mark.parametrize("generators", [(3.0, 5), (3, True), ("3", 5)])
def test_generators_must_be_exact_integers(generators: tuple[object, ...]) -> None:
    assert SemigroupGenerators.model_validate({"generators": [3, 5]}).generators == (3, 5)
    with pytest.raises(ValidationError):
        SemigroupGenerators.model_validate({"generators": list(generators)})


@pytest.mark.parametrize("n,expected", [
    (4, False),
    (8, True),
    (0, True),
    (-1, False),
    (5, True),
])
def test_is_representable(n: int, expected: bool) -> None:
    assert is_representable(SemigroupGenerators.of(3, 5, 7), n) is expected


def test_gaps() -> None:
    assert gaps(SemigroupGenerators.of(3, 5, 7)) == [1, 2, 4]
    assert gaps(SemigroupGenerators.of(1, 4)) == []
    assert gaps(SemigroupGenerators.of(4, 7))[-1] == 17


def test_sylvester_pair_matches_oracle() -> None:
    for a, b in product(range(2, 25), repeat=2):
        if gcd(a, b) == 1:
            assert frobenius_pair(a, b) == frobenius_dp(SemigroupGenerators.of(a, b))


def test_table_oracle_matches_residue_oracle() -> None:
    rng = random.Random(5)
    checked = 0
    while checked < 200:
        generators = tuple(rng.randint(2, 30) for _ in range(rng.randint(2, 4)))
        try:
            semigroup = SemigroupGenerators(generators=generators)
        except GcdError:
            continue
        assert frobenius_table(semigroup) == frobenius_dp(semigroup)
        checked += 1


@pytest.mark.parametrize("triple,expected", [
    ((5, 3, 7), 4),
    ((3, 4, 5), 2),
    ((2, 3, 5), 1),
])
def test_brauer_shockley(triple: tuple[int, int, int], expected: int) -> None:
    assert brauer_shockley(*triple) == expected


@pytest.mark.parametrize("triple,condition", [
    ((5, 3, 7), None),  # Baseline
    ((4, 6, 5), "pairwise_coprime"),
    ((3, 4, 7), "y_plus_z_divisible_by_x"),
    ((0, 1, 1), "positive"),
])
def test_brauer_shockley_hypotheses(triple: tuple[int, int, int], condition: str | None) -> None:
    if condition is None:
        assert brauer_shockley(*triple) == 4
    else:
        with pytest.raises(HypothesisViolation) as exc_info:
            brauer_shockley(*triple)
        assert exc_info.value.context["condition"] == condition


def test_brauer_shockley_matches_oracle_exhaustively() -> None:
    """Every qualifying triple with entries at most 60."""
    checked = 0
    for x, y, z in product(range(1, 61), repeat=3):
        if (y + z) % x or gcd(x, y) != 1 or gcd(x, z) != 1 or gcd(y, z) != 1:
            continue
        closed = brauer_shockley(x, y, z)
        expected = frobenius_dp(SemigroupGenerators.of(x, y, z))
        assert (closed if closed >= 0 else None) == expected, (x, y, z)
        checked += 1
    assert checked > 1000


@pytest.mark.parametrize("s,r,e,expected", [
    (4, 3, 3, (2, Method.FORMULA)),
    (4, 7, 1, (5, Method.FORMULA)),
    (4, 3, 2, (1, Method.DP)),
    (1, 2, 1, (None, Method.FORMULA)),
])
def test_frobenius_for_crystal(s: int, r: int, e: int, expected: tuple[int | None, Method]) -> None:
    result = frobenius_for_crystal(s, r, e)
    assert (result.value, result.method) == expected


def test_frobenius_for_crystal_dieudonne_family() -> None:
    """With e = 1 and coprime (c, d) the value is g(c, d) = cd - c - d, None when negative."""
    for c, d in product(range(1, 21), repeat=2):
        if gcd(c, d) != 1:
            continue
        expected = c * d - c - d
        assert frobenius_for_crystal(d, c + d, 1).value == (expected if expected >= 0 else None)


@pytest.mark.parametrize("s,r,e,error", [
    (4, 3, 3, None),  # Baseline
    (2, 4, 1, GcdError),
    (5, 2, 2, InvalidProfileError),
    (0, 3, 1, InvalidProfileError),
])
def test_crystal_generators(s: int, r: int, e: int, error: type[Exception] | None) -> None:
    if error is None:
        assert crystal_generators(s, r, e) == (4, 5, 3)
    else:
        with pytest.raises(error):
            crystal_generators(s, r, e)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
