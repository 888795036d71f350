"""Truncated unramified Witt ring W(F_{p^m}) / p^N.

W(F_{p^m}) / p^N is the Galois ring (Z/p^N)[x]/(f) for any monic f that is
irreducible mod p. Elements are stored as power-basis coordinates
(a_0, ..., a_{m-1}) over Z/p^N, meaning sum a_j theta^j with theta the class
of x. Because the extension is unramified, ord_p of an element is the minimum
valuation of its coordinates.
"""
import json
import logging
from dataclasses import dataclass
from enum import Enum, StrEnum
from functools import lru_cache
from importlib import resources
from itertools import product

import sympy
from pydantic import BaseModel, ConfigDict, StrictInt, model_validator

from mincrystal.config import settings
from mincrystal.errors import (
    HypothesisViolation,
    InvalidInputError,
    NotPrimeError,
    ReducibleModulusError,
    SpecMismatchError,
)

logger = logging.getLogger(__name__)


class Infinity(Enum):
    """Valuation of an element that is zero at the working precision."""

    AT_PRECISION = "infinity_at_precision"


INFINITY_AT_PRECISION = Infinity.AT_PRECISION

Valuation = int | Infinity


class Op(StrEnum):
    ADD = "add"
    SUB = "sub"
    MUL = "mul"


def _is_irreducible_mod_p(coeffs: tuple[int, ...], p: int) -> bool:
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(coeffs)), x, modulus=p)
    return bool(poly.degree() == len(coeffs) - 1 and poly.is_irreducible)


class WittRingSpec(BaseModel):
    """
    The ring W(F_{p^m}) / p^N together with its defining modulus.

    Serializes as {"p": ..., "m": ..., "N": ..., "modulus": [c_0, ..., c_m]}.
    """

    model_config = ConfigDict(frozen=True)

    p: StrictInt
    m: StrictInt
    N: StrictInt
    modulus: tuple[StrictInt, ...]

    @model_validator(mode="after")
    def validate_ring(self) -> "WittRingSpec":
        if not sympy.isprime(self.p):
            raise NotPrimeError(f"p = {self.p} is not prime", p=self.p)
        if self.m < 1 or self.N < 1:
            raise InvalidInputError("Need m >= 1 and N >= 1", m=self.m, N=self.N)
        if len(self.modulus) != self.m + 1 or self.modulus[-1] != 1:
            raise InvalidInputError(
                f"Modulus must be monic of degree {self.m}", modulus=list(self.modulus)
            )
        if any(not 0 <= c < self.characteristic for c in self.modulus):
            raise InvalidInputError(
                "Modulus coefficients must be reduced mod p^N", modulus=list(self.modulus)
            )
        if not _is_irreducible_mod_p(self.modulus, self.p):
            raise ReducibleModulusError(
                f"Modulus is reducible mod {self.p}", p=self.p, modulus=list(self.modulus)
            )
        return self

    @property
    def characteristic(self) -> int:
        """p^N."""
        return int(self.p**self.N)


class FrobeniusTable(BaseModel):
    """sigma in the power basis: columns[j] holds the coordinates of sigma(theta^j)."""

    model_config = ConfigDict(frozen=True)

    columns: tuple[tuple[int, ...], ...]


@dataclass(frozen=True, slots=True)
class WittElement:
    spec: WittRingSpec
    coords: tuple[int, ...]


@lru_cache(maxsize=1)
def _shipped_moduli() -> dict[str, dict[str, list[int]]]:
    text = resources.files("mincrystal").joinpath("moduli.json").read_text(encoding="utf-8")
    table: dict[str, dict[str, list[int]]] = json.loads(text)
    return table


def default_modulus(p: int, m: int) -> tuple[int, ...]:
    """
    Deterministic monic irreducible modulus of degree m over F_p.

    Small (p, m) come from the shipped table; otherwise the first irreducible
    polynomial in lexicographic order of (c_0, ..., c_{m-1}) is used.
    """
    shipped = _shipped_moduli().get(str(p), {}).get(str(m))
    if shipped is not None:
        return tuple(shipped)
    logger.info("no shipped modulus for p=%d, m=%d; searching", p, m)
    for lower in product(range(p), repeat=m):
        candidate = (*lower, 1)
        if _is_irreducible_mod_p(candidate, p):
            return candidate
    raise ReducibleModulusError(f"No irreducible polynomial of degree {m} mod {p}", p=p, m=m)


def make_ring(
    p: int, m: int, N: int | None = None, modulus: list[int] | tuple[int, ...] | None = None
) -> WittRingSpec:
    """
    Validated ring spec; N defaults to settings.default_precision.

    Raises:
        NotPrimeError: If p is not prime
        ReducibleModulusError: If the modulus is reducible mod p
        InvalidInputError: If m, N or the modulus shape is invalid
    """
    if not sympy.isprime(p):
        raise NotPrimeError(f"p = {p} is not prime", p=p)
    precision = settings.default_precision if N is None else N
    if m < 1 or precision < 1:
        raise InvalidInputError("Need m >= 1 and N >= 1", m=m, N=precision)
    coeffs = default_modulus(p, m) if modulus is None else tuple(modulus)
    q = p**precision
    return WittRingSpec(p=p, m=m, N=precision, modulus=tuple(c % q for c in coeffs))


def _reduce(spec: WittRingSpec, poly: list[int]) -> tuple[int, ...]:
    q, m, f = spec.characteristic, spec.m, spec.modulus
    poly = poly + [0] * max(0, m - len(poly))
    for d in range(len(poly) - 1, m - 1, -1):
        c = poly[d] % q
        if c:
            for j in range(m + 1):
                poly[d - m + j] -= c * f[j]
    return tuple(c % q for c in poly[:m])


def element(spec: WittRingSpec, coords: list[int] | tuple[int, ...]) -> WittElement:
    """Element from at most m coordinates, reduced mod p^N."""
    if len(coords) > spec.m:
        raise InvalidInputError(
            f"Expected at most {spec.m} coordinates, got {len(coords)}", coords=list(coords)
        )
    return WittElement(spec, _reduce(spec, list(coords)))


def from_int(spec: WittRingSpec, n: int) -> WittElement:
    return element(spec, [n])


def zero(spec: WittRingSpec) -> WittElement:
    return from_int(spec, 0)


def one(spec: WittRingSpec) -> WittElement:
    return from_int(spec, 1)


def theta(spec: WittRingSpec) -> WittElement:
    """The class of x in the power basis."""
    return WittElement(spec, _reduce(spec, [0, 1]))


def is_zero(a: WittElement) -> bool:
    return not any(a.coords)


def _same_spec(a: WittElement, b: WittElement) -> None:
    if a.spec != b.spec:
        raise SpecMismatchError(
            "Operands belong to different rings",
            left=a.spec.model_dump(),
            right=b.spec.model_dump(),
        )


def arith(a: WittElement, b: WittElement, op: Op) -> WittElement:
    """
    Ring operation in (Z/p^N)[x]/(modulus).

    Raises:
        SpecMismatchError: If a and b live in different rings
    """
    _same_spec(a, b)
    spec = a.spec
    q = spec.characteristic
    if op is Op.ADD:
        return WittElement(spec, tuple((u + v) % q for u, v in zip(a.coords, b.coords, strict=True)))
    if op is Op.SUB:
        return WittElement(spec, tuple((u - v) % q for u, v in zip(a.coords, b.coords, strict=True)))
    product_coeffs = [0] * (2 * spec.m - 1)
    for i, u in enumerate(a.coords):
        if u:
            for j, v in enumerate(b.coords):
                product_coeffs[i + j] += u * v
    return WittElement(spec, _reduce(spec, product_coeffs))


def add(a: WittElement, b: WittElement) -> WittElement:
    return arith(a, b, Op.ADD)


def sub(a: WittElement, b: WittElement) -> WittElement:
    return arith(a, b, Op.SUB)


def mul(a: WittElement, b: WittElement) -> WittElement:
    return arith(a, b, Op.MUL)


def neg(a: WittElement) -> WittElement:
    q = a.spec.characteristic
    return WittElement(a.spec, tuple(-c % q for c in a.coords))


def scale(a: WittElement, n: int) -> WittElement:
    """Multiplication by the integer n."""
    q = a.spec.characteristic
    return WittElement(a.spec, tuple(c * n % q for c in a.coords))


def power(a: WittElement, n: int) -> WittElement:
    if n < 0:
        raise ValueError(f"Exponent must be non-negative, got {n}")
    result = one(a.spec)
    base = a
    while n:
        if n & 1:
            result = mul(result, base)
        base = mul(base, base)
        n >>= 1
    return result


def ord_p(a: WittElement) -> Valuation:
    """Minimum p-adic valuation of the coordinates, or INFINITY_AT_PRECISION for 0."""
    nonzero = [c for c in a.coords if c]
    if not nonzero:
        return INFINITY_AT_PRECISION
    return min(int(sympy.multiplicity(a.spec.p, c)) for c in nonzero)


def divide_by_p_power(a: WittElement, k: int) -> WittElement:
    """
    a / p^k for a divisible by p^k.

    The quotient is only determined mod p^{N-k}; its top k digits are set to 0.
    """
    d = a.spec.p**k
    if any(c % d for c in a.coords):
        raise HypothesisViolation(
            f"Element is not divisible by p^{k}", condition="divisible", coords=list(a.coords)
        )
    return WittElement(a.spec, tuple(c // d for c in a.coords))


def inverse(a: WittElement) -> WittElement:
    """
    Inverse of a unit.

    Starts from a^(p^m - 2), the inverse in the residue field, and lifts it
    with v <- v (2 - a v), which doubles the p-adic precision per step.

    Raises:
        HypothesisViolation: If a is not a unit
    """
    if ord_p(a) != 0:
        raise HypothesisViolation(
            "Element is not a unit", condition="unit", coords=list(a.coords)
        )
    spec = a.spec
    v = power(a, spec.p**spec.m - 2)
    two = from_int(spec, 2)
    precision = 1
    while precision < spec.N:
        v = mul(v, sub(two, mul(a, v)))
        precision *= 2
    if mul(a, v) != one(spec):
        raise HypothesisViolation("Newton lifting of the inverse failed", condition="unit")
    return v


def _evaluate(coeffs: list[int] | tuple[int, ...], y: WittElement) -> WittElement:
    acc = from_int(y.spec, coeffs[-1])
    for c in reversed(coeffs[:-1]):
        acc = add(mul(acc, y), from_int(y.spec, c))
    return acc


def _hensel_root(spec: WittRingSpec) -> WittElement:
    """The root of the modulus congruent to theta^p mod p."""
    f = spec.modulus
    derivative = [j * f[j] for j in range(1, spec.m + 1)]
    y = power(theta(spec), spec.p)
    for _ in range(spec.N + 1):
        value = _evaluate(f, y)
        if is_zero(value):
            return y
        y = sub(y, mul(value, inverse(_evaluate(derivative, y))))
    raise HypothesisViolation(
        "Hensel lifting of the Frobenius did not converge",
        condition="separable_modulus",
        modulus=list(f),
    )


@lru_cache(maxsize=64)
def frobenius_table(spec: WittRingSpec) -> FrobeniusTable:
    root = _hensel_root(spec)
    columns = tuple(power(root, j).coords for j in range(spec.m))
    logger.debug("frobenius table for p=%d m=%d N=%d: %s", spec.p, spec.m, spec.N, columns)
    return FrobeniusTable(columns=columns)


def _apply_table(table: FrobeniusTable, a: WittElement) -> WittElement:
    spec = a.spec
    out = [0] * spec.m
    for j, c in enumerate(a.coords):
        if c:
            for i, entry in enumerate(table.columns[j]):
                out[i] += c * entry
    q = spec.characteristic
    return WittElement(spec, tuple(c % q for c in out))


def sigma(a: WittElement, exponent: int = 1) -> WittElement:
    """
    sigma^exponent(a); negative powers use sigma^{-1} = sigma^{m-1}.

    sigma fixes Z/p^N and sends theta to the Hensel lift of theta^p.
    """
    table = frobenius_table(a.spec)
    result = a
    for _ in range(exponent % a.spec.m):
        result = _apply_table(table, result)
    return result


def residue_coords(a: WittElement) -> tuple[int, ...]:
    """Reduction mod p: the F_p-coordinates of the residue in F_{p^m}."""
    return tuple(c % a.spec.p for c in a.coords)

