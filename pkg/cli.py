#!/usr/bin/env python3
"""
Command-line front end for mincrystal.

Every command prints one deterministic JSON document (or TSV with --tsv) on
stdout. Domain errors exit with status 1 and an error document on stderr;
usage errors exit with status 2.
"""
import argparse
import json
import logging
import sys
from collections.abc import Callable
from fractions import Fraction
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ValidationError

from mincrystal.bounds import ExamplesTable, IsosimpleProfile, bound_report, worked_examples
from mincrystal.config import settings
from mincrystal.crystal import CyclicFCrystal, NewtonPolygon, minimal_crystal
from mincrystal.errors import HypothesisViolation, InvalidInputError, MinCrystalError
from mincrystal.level import crystal_info
from mincrystal.schemas import ErrorDocument, FrobeniusReport, LatticeDocument, QMinReport
from mincrystal.semigroup import (
    Method,
    SemigroupGenerators,
    brauer_shockley,
    crystal_generators,
    frobenius_dp,
    frobenius_for_crystal,
    frobenius_pair,
    gaps,
)
from mincrystal.xilattice import (
    height_search_bound,
    lattice_info,
    min_numerator,
    minimal_height,
    reduce_basis,
    stable_closure,
)

logger = logging.getLogger("mincrystal.cli")

Report = BaseModel | dict[str, Any] | str


def read_document(path: str) -> Any:
    """Parse a JSON file; "-" reads stdin."""
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
        return json.loads(text)
    except OSError as e:
        raise InvalidInputError(f"Cannot read {path}: {e.strerror}", path=path) from e
    except json.JSONDecodeError as e:
        raise InvalidInputError(f"Invalid JSON in {path}: {e.msg}", path=path, line=e.lineno) from e


def parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as e:
        raise InvalidInputError(f"Expected comma-separated integers, got '{text}'") from e


def parse_newton(entries: list[str]) -> NewtonPolygon:
    """Newton polygon from 'num/den:mult' items, e.g. 1/3:3."""
    counts: dict[Fraction, int] = {}
    for entry in entries:
        for item in entry.split(","):
            if ":" not in item:
                raise InvalidInputError(f"Invalid slope '{item}'. Use num/den:mult", item=item)
            slope, mult = item.split(":", 1)
            try:
                value = Fraction(slope)
                counts[value] = counts.get(value, 0) + int(mult)
            except ValueError as e:
                raise InvalidInputError(f"Invalid slope '{item}'. Use num/den:mult", item=item) from e
    return NewtonPolygon.from_counts(counts)


def cmd_minimal_construct(args: argparse.Namespace) -> Report:
    """Construct the minimal F-crystal of a Newton polygon."""
    return minimal_crystal(parse_newton(args.newton))


def cmd_crystal_info(args: argparse.Namespace) -> Report:
    """Invariants of a cyclic F-crystal file."""
    crystal = CyclicFCrystal.model_validate(read_document(args.file))
    return crystal_info(crystal)


def _closed_form_value(generators: tuple[int, ...]) -> int | None:
    """Sylvester for pairs; Brauer-Shockley for triples under any choice of x."""
    if len(generators) == 2:
        value = frobenius_pair(*generators)
        return value if value >= 0 else None
    if len(generators) != 3:
        raise HypothesisViolation(
            "The closed formulas need two or three generators",
            condition="two_or_three_generators",
            generators=list(generators),
        )
    first_failure: HypothesisViolation | None = None
    for k, x in enumerate(generators):
        y, z = (g for j, g in enumerate(generators) if j != k)
        try:
            value = brauer_shockley(x, y, z)
        except HypothesisViolation as e:
            first_failure = first_failure or e
            continue
        return value if value >= 0 else None
    assert first_failure is not None
    raise first_failure


def cmd_frobnum(args: argparse.Namespace) -> Report:
    """Frobenius number of a generator set or of a crystal triple."""
    if args.crystal:
        s, r, e = _triple(parse_int_list(args.crystal))
        generators = crystal_generators(s, r, e)

        def formula() -> tuple[int | None, str]:
            result = frobenius_for_crystal(s, r, e)
            return result.value, str(result.method)
    else:
        generators = parse_int_list(args.gens)

        def formula() -> tuple[int | None, str]:
            return _closed_form_value(generators), str(Method.FORMULA)

    semigroup = SemigroupGenerators(generators=generators)
    if args.method == "dp":
        report = FrobeniusReport(value=frobenius_dp(semigroup), method=str(Method.DP))
    elif args.method == "formula":
        value, method = formula()
        report = FrobeniusReport(value=value, method=method)
    else:
        oracle = frobenius_dp(semigroup)
        try:
            value, _ = formula()
        except HypothesisViolation as e:
            logger.info("closed formula not applicable: %s", e.message)
            report = FrobeniusReport(value=oracle, method="both", formula_applicable=False)
        else:
            report = FrobeniusReport(
                value=oracle, method="both", agreement=value == oracle, formula_applicable=True
            )
    if args.gaps:
        report.gaps = gaps(semigroup)
    return report


def _triple(values: tuple[int, ...]) -> tuple[int, int, int]:
    if len(values) != 3:
        raise InvalidInputError("--crystal expects s,r,e", values=list(values))
    return values[0], values[1], values[2]


def cmd_bound(args: argparse.Namespace) -> Report:
    """Isomorphism-number bounds of an isosimple profile."""
    profile = IsosimpleProfile(s=args.s, r=args.r, e=args.e)
    return bound_report(profile, compare=args.compare)


def examples_tsv(table: ExamplesTable) -> str:
    lines = ["# hodge example", "hodge\tcomputed\tfixture\trelation\tstatus"]
    for row in table.hodge_example:
        lines.append(
            f"{','.join(map(str, row.hodge))}\t{row.theorem_b}\t{row.cited_bound}"
            f"\t{row.relation}\t{_status(row.passed)}"
        )
    lines += ["# dieudonne", "c\td\tcomputed\toptimal\tequal\tfractional\tcriterion\tstatus"]
    for d_row in table.dieudonne:
        lines.append(
            f"{d_row.c}\t{d_row.d}\t{d_row.theorem_b}\t{d_row.optimal}\t{str(d_row.equal).lower()}"
            f"\t{d_row.fractional_part}\t{str(d_row.criterion).lower()}\t{_status(d_row.passed)}"
        )
    lines += ["# rank two", "e\tcomputed\texpected\tstatus"]
    for r_row in table.rank_two:
        lines.append(f"{r_row.e}\t{r_row.theorem_b}\t{r_row.expected}\t{_status(r_row.passed)}")
    return "\n".join(lines)


def _status(passed: bool) -> str:
    return "PASS" if passed else "FAIL"


def cmd_examples(args: argparse.Namespace) -> Report:
    """The three worked examples as checked tables."""
    table = worked_examples()
    if not table.all_passed:
        logger.error("at least one example row failed")
        args.exit_status = 1
    if args.tsv:
        return examples_tsv(table)
    return {**table.model_dump(mode="json"), "all_passed": table.all_passed}


def cmd_lattice_qmin(args: argparse.Namespace) -> Report:
    """Minimal height of a lattice file."""
    lattice = reduce_basis(LatticeDocument.model_validate(read_document(args.file)).to_lattice())
    q, m_alpha = minimal_height(lattice)
    return QMinReport(
        n0=min_numerator(lattice),
        m_alpha=m_alpha,
        q=q,
        q_bound=height_search_bound(lattice.spec) // lattice.spec.r,
    )


def cmd_lattice_info(args: argparse.Namespace) -> Report:
    """n0, m_alpha, q, Hodge slopes and quotient p-exponents of a lattice file."""
    lattice = reduce_basis(LatticeDocument.model_validate(read_document(args.file)).to_lattice())
    return lattice_info(lattice)


def cmd_lattice_close(args: argparse.Namespace) -> Report:
    """phi- and Verschiebung-closure of the generators in a lattice file."""
    document = LatticeDocument.model_validate(read_document(args.file))
    lattice = document.to_lattice()
    return LatticeDocument.from_lattice(stable_closure(lattice.spec, lattice.generators))


def render(report: Report) -> str:
    if isinstance(report, str):
        return report
    if isinstance(report, BaseModel):
        # Defaulted fields appear once assigned; required nullable ones print as null.
        report = report.model_dump(mode="json", exclude_unset=True)
    return json.dumps(report, indent=2)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cli.py",
        description="mincrystal - minimal F-crystals, Frobenius numbers and xi-adic lattices",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Minimal F-crystal of slope 1/3 with multiplicity 3
  cli.py minimal construct --newton 1/3:3

  # Frobenius number with formula and DP oracle
  cli.py frobnum --gens 3,5,7 --method both

  # Isomorphism-number bounds
  cli.py bound --s 4 --r 3 --e 3 --compare

  # Minimal height of a lattice read from stdin
  cli.py lattice q-min - < lattice.json
        """
    )
    parser.add_argument('--verbose', action='store_true', help='Log debug records to stderr')

    subparsers = parser.add_subparsers(dest='command', required=True)

    minimal_parser = subparsers.add_parser('minimal', help='Minimal F-crystals')
    minimal_sub = minimal_parser.add_subparsers(dest='action', required=True)
    construct_parser = minimal_sub.add_parser('construct', help='Minimal crystal of a Newton polygon')
    construct_parser.add_argument(
        '--newton',
        action='append',
        required=True,
        help='Slope with rank multiplicity as num/den:mult (repeatable, comma-separated)'
    )
    construct_parser.set_defaults(handler=cmd_minimal_construct)

    crystal_parser = subparsers.add_parser('crystal', help='Cyclic F-crystals')
    crystal_sub = crystal_parser.add_subparsers(dest='action', required=True)
    info_parser = crystal_sub.add_parser('info', help='Invariants of a crystal file')
    info_parser.add_argument('file', help='Crystal JSON {"cycles": [[...], ...]}, or - for stdin')
    info_parser.set_defaults(handler=cmd_crystal_info)

    frobnum_parser = subparsers.add_parser('frobnum', help='Frobenius numbers')
    source = frobnum_parser.add_mutually_exclusive_group(required=True)
    source.add_argument('--gens', help='Comma-separated generators, e.g. 3,5,7')
    source.add_argument('--crystal', help='s,r,e: the semigroup <s, re - s, r>')
    frobnum_parser.add_argument(
        '--method', choices=['formula', 'dp', 'both'], default='dp', help='Computation path'
    )
    frobnum_parser.add_argument('--gaps', action='store_true', help='Include the gap list')
    frobnum_parser.set_defaults(handler=cmd_frobnum)

    bound_parser = subparsers.add_parser('bound', help='Isomorphism-number bounds')
    bound_parser.add_argument('--s', type=int, required=True, help='Newton slope numerator')
    bound_parser.add_argument('--r', type=int, required=True, help='Rank')
    bound_parser.add_argument('--e', type=int, required=True, help='Maximal Hodge slope')
    bound_parser.add_argument('--compare', action='store_true', help='Add comparison bounds')
    bound_parser.set_defaults(handler=cmd_bound)

    examples_parser = subparsers.add_parser('examples', help='Worked examples as checked tables')
    examples_parser.add_argument('--tsv', action='store_true', help='TSV instead of JSON')
    examples_parser.set_defaults(handler=cmd_examples)

    lattice_parser = subparsers.add_parser('lattice', help='xi-adic lattices')
    lattice_sub = lattice_parser.add_subparsers(dest='action', required=True)
    qmin_parser = lattice_sub.add_parser('q-min', help='Minimal height')
    qmin_parser.add_argument('file', help='Lattice JSON, or - for stdin')
    qmin_parser.set_defaults(handler=cmd_lattice_qmin)
    linfo_parser = lattice_sub.add_parser('info', help='Full lattice report')
    linfo_parser.add_argument('file', help='Lattice JSON, or - for stdin')
    linfo_parser.set_defaults(handler=cmd_lattice_info)
    close_parser = lattice_sub.add_parser('close', help='Stable closure of the generators')
    close_parser.add_argument('file', help='Lattice JSON, or - for stdin')
    close_parser.set_defaults(handler=cmd_lattice_close)

    return parser


def configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else getattr(logging, settings.log_level.upper(), logging.WARNING)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )


def run(argv: list[str]) -> int:
    """Run one command; returns the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else 2
    configure_logging(args.verbose)
    args.exit_status = 0
    handler: Callable[[argparse.Namespace], Report] = args.handler
    try:
        report = handler(args)
    except MinCrystalError as e:
        error = ErrorDocument(code=e.code, message=e.message, context=e.context)
        print(json.dumps(error.model_dump(mode="json"), default=str), file=sys.stderr)
        return 1
    except ValidationError as e:
        error = ErrorDocument(
            code=InvalidInputError.code,
            message="Invalid input document",
            context={
                "errors": [
                    {"loc": [str(part) for part in err["loc"]], "msg": err["msg"]}
                    for err in e.errors()
                ]
            },
        )
        print(json.dumps(error.model_dump(mode="json")), file=sys.stderr)
        return 1
    print(render(report))
    status: int = args.exit_status
    return status


def main() -> None:
    """Main CLI entry point."""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
