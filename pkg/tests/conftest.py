"""Pytest fixtures and helpers shared by the mincrystal test suite.

Error tests follow the baseline pattern described in tests/README.md: every
parametrized table pairs a positive control (the computation succeeds on a
valid input) with the negative cases (the precondition error), so a broken
setup cannot make an error test pass.
"""
import json
import random
from pathlib import Path
from typing import Any

import pytest

from mincrystal import witt
from mincrystal.witt import WittElement, WittRingSpec
from mincrystal.xilattice import (
    XiElement,
    XiLattice,
    XiModuleSpec,
    make_lattice,
    make_xi_spec,
    stable_closure,
    xi_element,
    xi_monomial,
)

# (r, s, e) triples used by the operator-law and lattice property tests.
XI_PROFILES = [(2, 1, 1), (3, 2, 2), (5, 2, 1), (5, 7, 2)]

SEED = 20240601


@pytest.fixture
def rng() -> random.Random:
    """Seeded generator; every property test is reproducible."""
    return random.Random(SEED)


@pytest.fixture
def worked_spec() -> XiModuleSpec:
    """r=3, s=2, e=2 over W(F_8) / 2^6."""
    return make_xi_spec(p=2, r=3, s=2, e=2, N=6)


@pytest.fixture
def worked_lattice(worked_spec: XiModuleSpec) -> XiLattice:
    """Stable closure of 1 (x) 1: span{1, xi^2, p xi}."""
    return stable_closure(worked_spec, [xi_monomial(worked_spec, 0)])


def random_witt(ring: WittRingSpec, rng: random.Random) -> WittElement:
    q = ring.characteristic
    return witt.element(ring, [rng.randrange(q) for _ in range(ring.m)])


def random_unit(ring: WittRingSpec, rng: random.Random) -> WittElement:
    while True:
        a = random_witt(ring, rng)
        if witt.ord_p(a) == 0:
            return a


def random_xi_element(spec: XiModuleSpec, rng: random.Random, shift: int = 0) -> XiElement:
    """xi^shift times an element whose xi^0 coefficient is a unit."""
    coeffs = [random_unit(spec.witt, rng)] + [
        random_witt(spec.witt, rng) for _ in range(spec.r - 1)
    ]
    return xi_element(spec, coeffs, shift)


def standard_lattice(spec: XiModuleSpec, start: int = 0) -> XiLattice:
    """xi^start F_0."""
    return make_lattice(spec, [xi_monomial(spec, start + i) for i in range(spec.r)])


def write_json(directory: Path, name: str, document: dict[str, Any]) -> str:
    path = directory / name
    path.write_text(json.dumps(document), encoding="utf-8")
    return str(path)
