"""Pydantic schemas for the JSON documents read and written by the CLI."""
from typing import Any

from pydantic import BaseModel, Field, StrictInt, field_validator

from mincrystal.xilattice import XiElement, XiLattice, XiModuleSpec, make_xi_spec, xi_element


class ErrorDocument(BaseModel):
    """Structured error written to stderr."""
    code: str
    message: str
    context: dict[str, Any] = Field(default_factory=dict)


class FrobeniusReport(BaseModel):
    """Output of `frobnum`."""
    value: int | None
    method: str
    agreement: bool | None = None
    formula_applicable: bool | None = None
    gaps: list[int] | None = None


class QMinReport(BaseModel):
    """Output of `lattice q-min`."""
    n0: int
    m_alpha: int
    q: int
    q_bound: int


class XiSpecDocument(BaseModel):
    """{"p", "m", "N", "r", "s", "e"} with optional m, N and modulus."""
    p: StrictInt
    r: StrictInt
    s: StrictInt
    e: StrictInt
    m: StrictInt | None = None
    N: StrictInt | None = None
    modulus: list[StrictInt] | None = None

    def to_spec(self) -> XiModuleSpec:
        return make_xi_spec(self.p, self.r, self.s, self.e, N=self.N, m=self.m, modulus=self.modulus)

    @classmethod
    def from_spec(cls, spec: XiModuleSpec) -> "XiSpecDocument":
        ring = spec.witt
        return cls(
            p=ring.p, r=spec.r, s=spec.s, e=spec.e, m=ring.m, N=ring.N,
            modulus=list(ring.modulus),
        )


class LatticeDocument(BaseModel):
    """
    Lattice file.

    Each generator is [[coords b_0], ..., [coords b_{r-1}], t] and stands for
    xi^t * sum_i xi^i (x) b_i.
    """
    spec: XiSpecDocument
    generators: list[list[list[StrictInt] | StrictInt]]

    @field_validator('generators')
    @classmethod
    def validate_generators(cls, v: list[list[list[int] | int]]) -> list[list[list[int] | int]]:
        if not v:
            raise ValueError('A lattice needs at least one generator')
        for generator in v:
            if len(generator) < 2 or not isinstance(generator[-1], int):
                raise ValueError('Each generator is [[coords], ..., shift]')
            if any(not isinstance(c, list) for c in generator[:-1]):
                raise ValueError('Generator coefficients must be coordinate lists')
        return v

    def to_lattice(self) -> XiLattice:
        spec = self.spec.to_spec()
        elements: list[XiElement] = []
        for generator in self.generators:
            *coeffs, shift = generator
            assert isinstance(shift, int)
            elements.append(xi_element(spec, [c for c in coeffs if isinstance(c, list)], shift))
        return XiLattice(spec, tuple(elements))

    @classmethod
    def from_lattice(cls, lattice: XiLattice) -> "LatticeDocument":
        """Serialize the reduced basis; frames become shifts r * frame."""
        generators: list[list[list[int] | int]] = []
        for x in lattice.basis:
            row: list[list[int] | int] = [list(b.coords) for b in x.coeffs]
            row.append(lattice.spec.r * x.frame)
            generators.append(row)
        return cls(spec=XiSpecDocument.from_spec(lattice.spec), generators=generators)
