"""Tests for the truncated Witt ring and its Frobenius."""
import random

import pytest

from mincrystal import witt
from mincrystal.config import settings
from mincrystal.errors import (
    HypothesisViolation,
    InvalidInputError,
    NotPrimeError,
    ReducibleModulusError,
    SpecMismatchError,
)
from mincrystal.witt import INFINITY_AT_PRECISION, Op, WittRingSpec
from tests.conftest import random_unit, random_witt

RINGS = [(2, 3, 6), (3, 2, 4), (5, 2, 3), (2, 5, 8), (7, 3, 3)]


@pytest.fixture(params=RINGS, ids=[f"p{p}-m{m}-N{n}" for p, m, n in RINGS])
def ring(request: pytest.FixtureRequest) -> WittRingSpec:
    p, m, n = request.param
    return witt.make_ring(p, m, n)


@pytest.mark.parametrize("p,m,n,modulus,error", [
    (3, 2, 4, [1, 0, 1], None),  # Baseline: x^2 + 1 is irreducible mod 3
    (5, 2, 3, [-1, 0, 1], ReducibleModulusError),
    (4, 2, 3, None, NotPrimeError),
    (3, 2, 0, None, InvalidInputError),
    (3, 2, 4, [1, 0, 2], InvalidInputError),
    (3, 2, 4, [1, 1], InvalidInputError),
])
def test_make_ring_validation(
    p: int, m: int, n: int, modulus: list[int] | None, error: type[Exception] | None
) -> None:
    if error is None:
        spec = witt.make_ring(p, m, n, modulus)
        assert spec.characteristic == 81
        assert spec.modulus == (1, 0, 1)
    else:
        with pytest.raises(error):
            witt.make_ring(p, m, n, modulus)


def test_prime_field_ring() -> None:
    spec = witt.make_ring(2, 1, 8)
    assert spec.characteristic == 256
    assert len(spec.modulus) == 2


def test_shipped_moduli_are_irreducible() -> None:
    for p, m in [(2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (3, 1), (3, 2), (3, 3), (3, 4),
                 (3, 5), (5, 1), (5, 2), (5, 3), (5, 4), (5, 5), (7, 1), (7, 2), (7, 3)]:
        spec = witt.make_ring(p, m, 2)
        assert spec.modulus == witt.default_modulus(p, m)


def test_default_modulus_search() -> None:
    modulus = witt.default_modulus(11, 2)
    assert len(modulus) == 3
    assert modulus[-1] == 1
    witt.make_ring(11, 2, 2, modulus)


def test_default_precision_from_settings() -> None:
    assert witt.make_ring(3, 2).N == settings.default_precision


def test_arith_examples() -> None:
    spec = witt.make_ring(3, 2, 2, [1, 0, 1])
    t = witt.theta(spec)
    assert witt.arith(t, t, Op.MUL).coords == (8, 0)

    a = witt.element(spec, [4, 7])
    assert witt.arith(a, witt.zero(spec), Op.ADD) == a
    assert witt.arith(a, a, Op.SUB) == witt.zero(spec)

    top = witt.from_int(spec, 3 ** (spec.N - 1))
    assert witt.is_zero(witt.mul(top, witt.from_int(spec, 3)))


def test_ring_axioms(ring: WittRingSpec, rng: random.Random) -> None:
    for _ in range(30):
        a, b, c = (random_witt(ring, rng) for _ in range(3))
        assert witt.mul(a, witt.add(b, c)) == witt.add(witt.mul(a, b), witt.mul(a, c))
        assert witt.mul(witt.mul(a, b), c) == witt.mul(a, witt.mul(b, c))
        assert witt.add(a, witt.neg(a)) == witt.zero(ring)
        assert witt.scale(a, 3) == witt.add(a, witt.add(a, a))


def test_spec_mismatch() -> None:
    left = witt.one(witt.make_ring(3, 2, 4))
    right = witt.one(witt.make_ring(3, 2, 5))
    assert witt.add(left, left) == witt.from_int(left.spec, 2)  # Baseline
    with pytest.raises(SpecMismatchError):
        witt.add(left, right)


def test_element_length() -> None:
    spec = witt.make_ring(3, 2, 4)
    assert witt.element(spec, [1]).coords == (1, 0)  # Baseline
    with pytest.raises(InvalidInputError):
        witt.element(spec, [1, 2, 3])


def test_sigma_of_theta() -> None:
    spec = witt.make_ring(3, 2, 5, [1, 0, 1])
    assert witt.sigma(witt.theta(spec)).coords == (0, 3**5 - 1)


def test_sigma_on_prime_field() -> None:
    spec = witt.make_ring(5, 1, 4)
    a = witt.from_int(spec, 123)
    assert witt.sigma(a) == a


def test_sigma_has_order_m(ring: WittRingSpec, rng: random.Random) -> None:
    for _ in range(50):
        a = random_witt(ring, rng)
        assert witt.sigma(a, ring.m) == a
        assert witt.sigma(witt.sigma(a, -1)) == a


def test_sigma_is_ring_homomorphism(ring: WittRingSpec, rng: random.Random) -> None:
    for _ in range(30):
        a, b = random_witt(ring, rng), random_witt(ring, rng)
        assert witt.sigma(witt.mul(a, b)) == witt.mul(witt.sigma(a), witt.sigma(b))
        assert witt.sigma(witt.add(a, b)) == witt.add(witt.sigma(a), witt.sigma(b))
        assert witt.ord_p(witt.sigma(a)) == witt.ord_p(a)


def test_sigma_reduces_to_p_power(ring: WittRingSpec) -> None:
    for j in range(ring.m):
        basis = witt.element(ring, [0] * j + [1])
        expected = witt.residue_coords(witt.power(basis, ring.p))
        assert witt.residue_coords(witt.sigma(basis)) == expected


def test_residue_coords(ring: WittRingSpec) -> None:
    p = ring.p
    assert witt.residue_coords(witt.from_int(ring, p + 1)) == (1,) + (0,) * (ring.m - 1)
    assert witt.residue_coords(witt.from_int(ring, p)) == (0,) * ring.m
    coords = [p + 1] * ring.m
    assert witt.residue_coords(witt.element(ring, coords)) == (1,) * ring.m


def test_ord_p() -> None:
    spec = witt.make_ring(3, 2, 4)
    assert witt.ord_p(witt.scale(witt.theta(spec), 3)) == 1
    assert witt.ord_p(witt.one(spec)) == 0
    assert witt.ord_p(witt.zero(spec)) is INFINITY_AT_PRECISION
    assert witt.ord_p(witt.from_int(spec, 27)) == 3


def test_inverse(ring: WittRingSpec, rng: random.Random) -> None:
    for _ in range(20):
        a = random_unit(ring, rng)
        assert witt.mul(a, witt.inverse(a)) == witt.one(ring)


@pytest.mark.parametrize("value,is_unit", [
    (1, True),  # Baseline
    (3, False),
    (0, False),
])
def test_inverse_requires_unit(value: int, is_unit: bool) -> None:
    spec = witt.make_ring(3, 2, 4)
    a = witt.from_int(spec, value)
    if is_unit:
        assert witt.inverse(a) == witt.one(spec)
    else:
        with pytest.raises(HypothesisViolation) as exc_info:
            witt.inverse(a)
        assert exc_info.value.context["condition"] == "unit"


def test_divide_by_p_power(ring: WittRingSpec, rng: random.Random) -> None:
    q = ring.p ** (ring.N - 2)
    for _ in range(20):
        a = random_witt(ring, rng)
        quotient = witt.divide_by_p_power(witt.scale(a, ring.p**2), 2)
        assert all((u - v) % q == 0 for u, v in zip(quotient.coords, a.coords, strict=True))


def test_divide_by_p_power_requires_divisibility() -> None:
    spec = witt.make_ring(3, 2, 4)
    assert witt.divide_by_p_power(witt.from_int(spec, 9), 2) == witt.one(spec)  # Baseline
    with pytest.raises(HypothesisViolation):
        witt.divide_by_p_power(witt.from_int(spec, 3), 2)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
