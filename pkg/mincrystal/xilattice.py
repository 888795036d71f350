"""Lattices in the isosimple isocrystal of slope s/r.

The isocrystal is K_lambda (x) B(k) with K_lambda generated by xi, xi^r = p,
and phi(xi^i (x) b) = xi^{i+s} (x) sigma(b). An element is stored as

    p^frame * sum_{i<r} xi^i (x) b_i,   b_i in W(F_{p^m}) / p^N,

so every element is a frame plus r Witt coordinates. Multiplying by xi^t moves
the frame by t // r and rotates the coordinates by t % r; a coordinate that
wraps past xi^{r-1} picks up a factor p. The valuation is

    w(x) = min_i (r * frame + i + r * ord_p(b_i)) / r.

Lattices are W-spans of finitely many elements. reduce_basis brings them to a
w-orthogonal basis with one pivot per residue class of w-numerators mod r;
membership is decided by eliminating pivots in order.
"""
import logging
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
from math import gcd

from pydantic import BaseModel, ConfigDict, StrictInt, model_validator

from mincrystal import witt
from mincrystal.bounds import IsosimpleProfile, q_bound
from mincrystal.config import settings
from mincrystal.errors import (
    ContainmentError,
    GcdError,
    InvalidInputError,
    InvalidProfileError,
    NotStableError,
    PrecisionExhausted,
    RankDeficiencyError,
    SearchBoundExceeded,
)
from mincrystal.witt import INFINITY_AT_PRECISION, Infinity, WittElement, WittRingSpec

logger = logging.getLogger(__name__)


class XiOp(StrEnum):
    PHI = "phi"
    THETA = "theta"
    P = "p"
    XI = "xi"


def extended_euclid_pair(r: int, s: int) -> tuple[int, int]:
    """(m, n) with m*r - n*s = 1 and n >= 0 minimal."""
    if r < 1 or gcd(r, s) != 1:
        raise GcdError(f"Need r >= 1 and gcd(r, s) = 1, got r={r}, s={s}", r=r, s=s)
    if r == 1:
        return 1, 0
    n = -pow(s, -1, r) % r
    return (1 + n * s) // r, n


class XiModuleSpec(BaseModel):
    """Witt ring, slope s/r and the Verschiebung exponent e."""

    model_config = ConfigDict(frozen=True)

    witt: WittRingSpec
    r: StrictInt
    s: StrictInt
    e: StrictInt

    @model_validator(mode="after")
    def validate_module(self) -> "XiModuleSpec":
        if self.r < 1 or self.s < 0 or self.e < 1:
            raise InvalidProfileError(
                "Need r >= 1, s >= 0 and e >= 1", r=self.r, s=self.s, e=self.e
            )
        if self.witt.m % self.r:
            raise InvalidInputError(
                f"r = {self.r} must divide m = {self.witt.m}", r=self.r, m=self.witt.m
            )
        if gcd(self.s, self.r) != 1:
            raise GcdError(
                f"Slope {self.s}/{self.r} is not in reduced form",
                s=self.s, r=self.r, gcd=gcd(self.s, self.r),
            )
        if self.r * self.e < self.s:
            raise InvalidProfileError(
                "Verschiebung exponent needs re >= s", r=self.r, s=self.s, e=self.e
            )
        return self

    @property
    def slope(self) -> Fraction:
        return Fraction(self.s, self.r)

    @property
    def theta_shift(self) -> int:
        return self.r * self.e - self.s

    @property
    def euclid_pair(self) -> tuple[int, int]:
        return extended_euclid_pair(self.r, self.s)


def make_xi_spec(
    p: int,
    r: int,
    s: int,
    e: int,
    N: int | None = None,
    m: int | None = None,
    modulus: list[int] | None = None,
) -> XiModuleSpec:
    """Module spec over W(F_{p^m}) / p^N; m defaults to r."""
    ring = witt.make_ring(p, r if m is None else m, N, modulus)
    return XiModuleSpec(witt=ring, r=r, s=s, e=e)


@dataclass(frozen=True, slots=True)
class XiElement:
    spec: XiModuleSpec
    frame: int
    coeffs: tuple[WittElement, ...]


@dataclass(frozen=True, slots=True)
class FValuation:
    """w = numerator / denominator, with denominator the rank r."""

    numerator: int | Infinity
    denominator: int

    @property
    def is_infinite(self) -> bool:
        return self.numerator is INFINITY_AT_PRECISION

    @property
    def value(self) -> Fraction:
        if isinstance(self.numerator, Infinity):
            raise PrecisionExhausted("Valuation of an element that vanished at precision")
        return Fraction(self.numerator, self.denominator)

    def shifted(self, k: int) -> "FValuation":
        if isinstance(self.numerator, Infinity):
            return self
        return FValuation(self.numerator + k, self.denominator)


def xi_element(
    spec: XiModuleSpec, coeffs: Sequence[WittElement | Sequence[int]], shift: int = 0
) -> XiElement:
    """xi^shift * sum_i xi^i (x) b_i from r coefficients (elements or coordinate lists)."""
    if len(coeffs) != spec.r:
        raise InvalidInputError(
            f"Expected {spec.r} coefficients, got {len(coeffs)}", count=len(coeffs)
        )
    values = tuple(
        c if isinstance(c, WittElement) else witt.element(spec.witt, list(c)) for c in coeffs
    )
    return _shift(XiElement(spec, 0, values), shift)


def xi_monomial(spec: XiModuleSpec, t: int, b: WittElement | None = None) -> XiElement:
    """xi^t (x) b, with b = 1 by default."""
    coeffs: list[WittElement] = [witt.zero(spec.witt)] * spec.r
    coeffs[0] = witt.one(spec.witt) if b is None else b
    return xi_element(spec, coeffs, t)


def _shift(x: XiElement, t: int) -> XiElement:
    r, p = x.spec.r, x.spec.witt.p
    carry, u = divmod(t, r)
    out = [witt.zero(x.spec.witt)] * r
    for i, b in enumerate(x.coeffs):
        j = i + u
        if j >= r:
            out[j - r] = witt.scale(b, p)
        else:
            out[j] = b
    return XiElement(x.spec, x.frame + carry, tuple(out))


def valuation(x: XiElement) -> FValuation:
    r = x.spec.r
    numerators: list[int] = []
    for i, b in enumerate(x.coeffs):
        order = witt.ord_p(b)
        if not isinstance(order, Infinity):
            numerators.append(r * (x.frame + order) + i)
    if not numerators:
        return FValuation(INFINITY_AT_PRECISION, r)
    return FValuation(min(numerators), r)


def _operator_shift(spec: XiModuleSpec, op: XiOp) -> int:
    return {XiOp.PHI: spec.s, XiOp.THETA: spec.theta_shift, XiOp.P: spec.r, XiOp.XI: 1}[op]


def apply(x: XiElement, op: XiOp) -> XiElement:
    """
    phi, the Verschiebung, multiplication by p or by xi.

    Raises:
        PrecisionExhausted: If the result lost the digits carrying its valuation
    """
    spec = x.spec
    if op is XiOp.P:
        y = XiElement(spec, x.frame + 1, x.coeffs)
    elif op is XiOp.XI:
        y = _shift(x, 1)
    else:
        power = 1 if op is XiOp.PHI else -1
        twisted = XiElement(spec, x.frame, tuple(witt.sigma(b, power) for b in x.coeffs))
        y = _shift(twisted, _operator_shift(spec, op))
    before = valuation(x)
    if not before.is_infinite and valuation(y) != before.shifted(_operator_shift(spec, op)):
        raise PrecisionExhausted(
            f"Applying {op} lost the leading digits at precision N={spec.witt.N}",
            op=str(op),
            frame=x.frame,
        )
    return y


def _coords_in_frame(x: XiElement, frame: int) -> tuple[WittElement, ...] | None:
    """Coordinates of x relative to p^frame, or None if x is not in p^frame F_0."""
    d = x.frame - frame
    p = x.spec.witt.p
    if d >= 0:
        return tuple(witt.scale(b, p**d) for b in x.coeffs)
    for b in x.coeffs:
        order = witt.ord_p(b)
        if not isinstance(order, Infinity) and order < -d:
            return None
    return tuple(witt.divide_by_p_power(b, -d) for b in x.coeffs)


def _aligned(x: XiElement, y: XiElement) -> tuple[int, tuple[WittElement, ...], tuple[WittElement, ...]]:
    frame = min(x.frame, y.frame)
    left, right = _coords_in_frame(x, frame), _coords_in_frame(y, frame)
    assert left is not None and right is not None
    return frame, left, right


def xi_add(x: XiElement, y: XiElement) -> XiElement:
    frame, left, right = _aligned(x, y)
    return XiElement(x.spec, frame, tuple(witt.add(a, b) for a, b in zip(left, right, strict=True)))


def xi_sub(x: XiElement, y: XiElement) -> XiElement:
    frame, left, right = _aligned(x, y)
    return XiElement(x.spec, frame, tuple(witt.sub(a, b) for a, b in zip(left, right, strict=True)))


def xi_scale(x: XiElement, a: WittElement) -> XiElement:
    """Right action of a Witt-ring scalar."""
    return XiElement(x.spec, x.frame, tuple(witt.mul(b, a) for b in x.coeffs))


def congruent(x: XiElement, y: XiElement) -> bool:
    """True iff x and y agree at their common precision."""
    return valuation(xi_sub(x, y)).is_infinite


@dataclass(frozen=True)
class ReducedBasis:
    """
    w-orthogonal basis in a common frame.

    pivots[j] = (column, order): rows[j] has coordinate p^order at column and
    zeros at the pivot columns of earlier rows. exponent is the smallest t with
    p^t * p^frame F_0 inside the lattice.
    """

    frame: int
    rows: tuple[XiElement, ...]
    pivots: tuple[tuple[int, int], ...]
    exponent: int


@dataclass(frozen=True)
class XiLattice:
    spec: XiModuleSpec
    generators: tuple[XiElement, ...]
    reduced: ReducedBasis | None = None

    @property
    def basis(self) -> tuple[XiElement, ...]:
        return _reduced(self).rows


def _reduced(lattice: XiLattice) -> ReducedBasis:
    if lattice.reduced is not None:
        return lattice.reduced
    reduced = reduce_basis(lattice).reduced
    assert reduced is not None
    return reduced


def _eliminate(reduced: ReducedBasis, vector: Sequence[WittElement]) -> list[WittElement] | None:
    """Coefficients of vector (frame coordinates) in the reduced basis, or None."""
    current = list(vector)
    coefficients: list[WittElement] = []
    for row, (column, order) in zip(reduced.rows, reduced.pivots, strict=True):
        entry = current[column]
        entry_order = witt.ord_p(entry)
        if isinstance(entry_order, Infinity):
            coefficients.append(entry)
            continue
        if entry_order < order:
            return None
        factor = witt.divide_by_p_power(entry, order)
        current = [witt.sub(v, witt.mul(factor, b)) for v, b in zip(current, row.coeffs, strict=True)]
        coefficients.append(factor)
    return coefficients


def _vector_for(reduced: ReducedBasis, x: XiElement) -> tuple[WittElement, ...] | None:
    d = reduced.frame - x.frame
    if d > 0 and reduced.exponent > x.spec.witt.N - d:
        # Without the p^N headroom the quotient by p^d would be ambiguous.
        if _coords_in_frame(x, reduced.frame) is not None:
            raise PrecisionExhausted(
                "Membership would depend on digits beyond the working precision",
                frame=x.frame,
                lattice_frame=reduced.frame,
                exponent=reduced.exponent,
            )
        return None
    return _coords_in_frame(x, reduced.frame)


def _membership_exponent(spec: XiModuleSpec, frame: int, rows: list[XiElement],
                         pivots: list[tuple[int, int]]) -> int:
    trial = ReducedBasis(frame, tuple(rows), tuple(pivots), exponent=0)
    ring = spec.witt
    for t in range(ring.N):
        unit = witt.from_int(ring, ring.p**t)
        vectors = [
            [unit if i == c else witt.zero(ring) for i in range(spec.r)] for c in range(spec.r)
        ]
        if all(_eliminate(trial, v) is not None for v in vectors):
            return t
    raise PrecisionExhausted(
        f"Lattice does not contain p^{ring.N - 1} times its ambient standard lattice",
        N=ring.N,
    )


def reduce_basis(lattice: XiLattice) -> XiLattice:
    """
    w-orthogonal basis by pivoting on the coordinate of least w-numerator.

    Raises:
        RankDeficiencyError: If fewer than r independent pivots exist
        PrecisionExhausted: If the lattice is not exact at precision N
    """
    spec = lattice.spec
    r = spec.r
    nonzero = [g for g in lattice.generators if not valuation(g).is_infinite]
    if not nonzero:
        raise RankDeficiencyError("Lattice has no nonzero generator", rank=0, r=r)
    frame = min(g.frame for g in nonzero)
    remaining: list[list[WittElement]] = []
    for g in nonzero:
        coords = _coords_in_frame(g, frame)
        assert coords is not None
        remaining.append(list(coords))

    rows: list[XiElement] = []
    pivots: list[tuple[int, int]] = []
    free = set(range(r))
    while free and remaining:
        best: tuple[tuple[int, int, int], int] | None = None
        for index, row in enumerate(remaining):
            for column in free:
                order = witt.ord_p(row[column])
                if isinstance(order, Infinity):
                    continue
                key = (column + r * order, column, index)
                if best is None or key < best[0]:
                    best = (key, order)
        if best is None:
            break
        (_, column, index), order = best
        pivot_row = remaining.pop(index)
        unit_inverse = witt.inverse(witt.divide_by_p_power(pivot_row[column], order))
        pivot_row = [witt.mul(b, unit_inverse) for b in pivot_row]
        for row in remaining:
            if not witt.is_zero(row[column]):
                factor = witt.divide_by_p_power(row[column], order)
                row[:] = [witt.sub(a, witt.mul(factor, b)) for a, b in zip(row, pivot_row, strict=True)]
        rows.append(XiElement(spec, frame, tuple(pivot_row)))
        pivots.append((column, order))
        free.discard(column)

    if len(pivots) < r:
        raise RankDeficiencyError(
            f"Generators span rank {len(pivots)} < {r}", rank=len(pivots), r=r
        )
    exponent = _membership_exponent(spec, frame, rows, pivots)
    reduced = ReducedBasis(frame, tuple(rows), tuple(pivots), exponent)
    result = XiLattice(spec, tuple(rows), reduced)
    for g in lattice.generators:
        if not member(g, result):
            raise PrecisionExhausted("Reduced basis lost a generator at precision N", N=spec.witt.N)
    logger.debug("reduced lattice: frame=%d pivots=%s exponent=%d", frame, pivots, exponent)
    return result


def make_lattice(spec: XiModuleSpec, generators: Sequence[XiElement]) -> XiLattice:
    return reduce_basis(XiLattice(spec, tuple(generators)))


def member(x: XiElement, lattice: XiLattice) -> bool:
    """
    True iff x is a W-combination of the lattice basis.

    Raises:
        PrecisionExhausted: If the answer depends on digits beyond p^N
    """
    if valuation(x).is_infinite:
        return True
    reduced = _reduced(lattice)
    vector = _vector_for(reduced, x)
    return vector is not None and _eliminate(reduced, vector) is not None


def pivot_numerators(lattice: XiLattice) -> list[int]:
    """w-numerators of the reduced basis, one per residue class mod r."""
    reduced = _reduced(lattice)
    r = lattice.spec.r
    return [r * (reduced.frame + order) + column for column, order in reduced.pivots]


def min_numerator(lattice: XiLattice) -> int:
    """n0, with n0 / r the least valuation on the lattice."""
    return min(pivot_numerators(lattice))


def _require_contained(inner: XiLattice, outer: XiLattice) -> None:
    for index, b in enumerate(inner.basis):
        if not member(b, outer):
            raise ContainmentError(
                "Lattice is not contained in the other", basis_index=index
            )


def _standard_lattice(spec: XiModuleSpec, start: int) -> XiLattice:
    """xi^start F_0, the lattice of all elements with w >= start / r."""
    return make_lattice(spec, [xi_monomial(spec, start + i) for i in range(spec.r)])


def m_plus(lattice: XiLattice) -> XiLattice:
    """xi^{n0} F_0, the smallest standard lattice containing the given one."""
    plus = _standard_lattice(lattice.spec, min_numerator(lattice))
    _require_contained(lattice, plus)
    return plus


def check_stable(lattice: XiLattice) -> None:
    """
    Raises:
        NotStableError: If phi or the Verschiebung maps a basis vector outside
    """
    for index, b in enumerate(lattice.basis):
        for op in (XiOp.PHI, XiOp.THETA):
            if not member(apply(b, op), lattice):
                raise NotStableError(
                    f"Lattice is not stable under {op}", op=str(op), basis_index=index
                )


def height_search_bound(spec: XiModuleSpec) -> int:
    if spec.s == 0:
        return 0
    return spec.r * q_bound(IsosimpleProfile(s=spec.s, r=spec.r, e=spec.e))


def minimal_height(lattice: XiLattice) -> tuple[int, int]:
    """
    (q, m_alpha): m_alpha is the least t with xi^{n0+t} F_0 inside the lattice,
    q = ceil(m_alpha / r).

    Raises:
        NotStableError: If the lattice is not an F-crystal with Verschiebung
        PrecisionExhausted: If N is too small for the search window
        SearchBoundExceeded: If no t up to r * q_bound works
    """
    check_stable(lattice)
    spec = lattice.spec
    r = spec.r
    bound = height_search_bound(spec)
    required = -(-(bound + r) // r) + 2
    if spec.witt.N < required:
        raise PrecisionExhausted(
            f"Precision N={spec.witt.N} below the required {required}",
            N=spec.witt.N, required=required,
        )
    n0 = min_numerator(lattice)
    for t in range(bound + 1):
        if all(member(xi_monomial(spec, n0 + t + i), lattice) for i in range(r)):
            return -(-t // r), t
    raise SearchBoundExceeded(
        f"No standard sublattice found within m_alpha <= {bound}", bound=bound
    )


def m_minus(lattice: XiLattice) -> XiLattice:
    """xi^{n0 + m_alpha} F_0, the largest standard lattice inside the given one."""
    _, m_alpha = minimal_height(lattice)
    return _standard_lattice(lattice.spec, min_numerator(lattice) + m_alpha)


def p_exponent_quotient(a: XiLattice, b: XiLattice) -> int:
    """
    Least m with p^m B inside A, for A inside B.

    Raises:
        ContainmentError: If A is not contained in B
    """
    _require_contained(a, b)
    ra, rb = _reduced(a), _reduced(b)
    limit = ra.frame + ra.exponent - rb.frame
    for m in range(max(limit, 0) + 1):
        if all(member(XiElement(x.spec, x.frame + m, x.coeffs), a) for x in rb.rows):
            return m
    raise PrecisionExhausted("p-exponent exceeds the lattice exponent bound", limit=limit)


def attained_valuations(lattice: XiLattice, limit: int) -> set[int]:
    """
    Numerators n - n0 <= limit reached from a least-valuation basis vector by
    words in phi, the Verschiebung and p.
    """
    check_stable(lattice)
    spec = lattice.spec
    numerators = pivot_numerators(lattice)
    n0 = min(numerators)
    start = lattice.basis[numerators.index(n0)]
    attained = {0}
    frontier = deque([start])
    while frontier:
        x = frontier.popleft()
        for op in (XiOp.PHI, XiOp.THETA, XiOp.P):
            y = apply(x, op)
            numerator = valuation(y).numerator
            assert not isinstance(numerator, Infinity)
            n = numerator - n0
            if n <= limit and n not in attained:
                attained.add(n)
                frontier.append(y)
    return attained


def lattice_valuations(lattice: XiLattice, limit: int) -> set[int]:
    """w(L) - n0 up to limit, read off the w-orthogonal basis."""
    r = lattice.spec.r
    numerators = pivot_numerators(lattice)
    n0 = min(numerators)
    return {n - n0 for start in numerators for n in range(start, n0 + limit + 1, r)}


def _smith_valuations(matrix: list[list[WittElement]]) -> list[int | Infinity]:
    rows = [list(row) for row in matrix]
    size = len(rows)
    result: list[int | Infinity] = []
    for k in range(size):
        best: tuple[int, int, int] | None = None
        for i in range(k, size):
            for j in range(k, size):
                order = witt.ord_p(rows[i][j])
                if not isinstance(order, Infinity) and (best is None or order < best[0]):
                    best = (order, i, j)
        if best is None:
            result.extend([INFINITY_AT_PRECISION] * (size - k))
            break
        order, i, j = best
        rows[k], rows[i] = rows[i], rows[k]
        for row in rows:
            row[k], row[j] = row[j], row[k]
        unit_inverse = witt.inverse(witt.divide_by_p_power(rows[k][k], order))
        for below in range(k + 1, size):
            if witt.is_zero(rows[below][k]):
                continue
            factor = witt.mul(witt.divide_by_p_power(rows[below][k], order), unit_inverse)
            rows[below] = [
                witt.sub(a, witt.mul(factor, b)) for a, b in zip(rows[below], rows[k], strict=True)
            ]
        # Row k right of the pivot clears by column operations that leave the rest untouched.
        result.append(order)
    return result


def hodge_slopes(lattice: XiLattice) -> list[int]:
    """
    Hodge slopes of phi on the lattice: valuations of the elementary divisors
    of the matrix of phi in a lattice basis.

    Raises:
        NotStableError: If phi leaves the lattice
        PrecisionExhausted: If a divisor is not resolved at precision N
    """
    reduced = _reduced(lattice)
    columns: list[list[WittElement]] = []
    for index, b in enumerate(reduced.rows):
        image = apply(b, XiOp.PHI)
        vector = _vector_for(reduced, image)
        coefficients = None if vector is None else _eliminate(reduced, vector)
        if coefficients is None:
            raise NotStableError("Lattice is not stable under phi", op="phi", basis_index=index)
        columns.append(coefficients)
    valuations = _smith_valuations(columns)
    reliable = lattice.spec.witt.N - max(order for _, order in reduced.pivots)
    finite = [v for v in valuations if not isinstance(v, Infinity) and v < reliable]
    if len(finite) < len(valuations):
        raise PrecisionExhausted(
            "Elementary divisors are not resolved at this precision", N=lattice.spec.witt.N
        )
    return sorted(finite)


def stable_closure(spec: XiModuleSpec, generators: Sequence[XiElement]) -> XiLattice:
    """
    The smallest phi- and Verschiebung-stable lattice containing the generators.

    Raises:
        SearchBoundExceeded: If the closure does not settle within
            settings.max_lattice_steps rounds
    """
    if not generators:
        raise RankDeficiencyError("Closure of an empty generating set", rank=0, r=spec.r)
    orbit = list(generators)
    frontier = list(generators)
    for step in range(settings.max_lattice_steps):
        images = [apply(x, op) for x in frontier for op in (XiOp.PHI, XiOp.THETA)]
        try:
            lattice: XiLattice | None = make_lattice(spec, orbit)
        except RankDeficiencyError:
            lattice = None
        fresh = images if lattice is None else [y for y in images if not member(y, lattice)]
        if lattice is not None and not fresh:
            logger.debug("closure settled after %d rounds with %d generators", step, len(orbit))
            return lattice
        orbit.extend(fresh)
        frontier = fresh
    raise SearchBoundExceeded(
        "Closure did not settle", bound=settings.max_lattice_steps
    )


def orbit_lattice(x: XiElement) -> XiLattice:
    return stable_closure(x.spec, [x])


class LatticeInfo(BaseModel):
    """Report of `lattice info`."""

    n0: int
    m_alpha: int
    q: int
    q_bound: int
    hodge_slopes: list[int]
    p_exponents: dict[str, int]


def lattice_info(lattice: XiLattice) -> LatticeInfo:
    q, m_alpha = minimal_height(lattice)
    plus = m_plus(lattice)
    minus = _standard_lattice(lattice.spec, min_numerator(lattice) + m_alpha)
    return LatticeInfo(
        n0=min_numerator(lattice),
        m_alpha=m_alpha,
        q=q,
        q_bound=height_search_bound(lattice.spec) // lattice.spec.r,
        hodge_slopes=hodge_slopes(lattice),
        p_exponents={
            "m_minus_in_m_plus": p_exponent_quotient(minus, plus),
            "m_minus_in_lattice": p_exponent_quotient(minus, lattice),
            "lattice_in_m_plus": p_exponent_quotient(lattice, plus),
        },
    )
