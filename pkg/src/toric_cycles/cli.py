"""Command-line front end.

Every subcommand reads JSON documents, runs one library operation and
writes a canonical JSON document to standard output (or ``--out``).  Exit
status is 0 on success, 1 when a mathematical precondition fails and 2 for
malformed input.
"""

from __future__ import annotations

import argparse
import random
import sys
from typing import Optional, Sequence

from . import io
from . import linalg as la
from .complements import Flag, InnerProduct, random_gram
from .divisors import Cycle, degree, polytope_of, polytope_volume
from .errors import SchemaError, ToricError
from .fan import Fan
from .intersection import (
    Evaluator,
    flag_closed_form,
    intersect,
    power,
    symbolic_flag_coefficient,
)
from .morphisms import (
    compatible_complements,
    is_proper_restricted,
    projection_formula_check,
    pushforward,
    simplicialize,
    star_subdivision,
)
from .polynomial import Polynomial
from .ring import CycleRing, RingPresentation, chern_cycle, lefschetz_injectivity, todd_cycle, total_chern_cycle


# -- input helpers -------------------------------------------------------------------

def _fan(args) -> Fan:
    if not args.fan:
        raise SchemaError("--fan is required")
    return io.fan_from_doc(io.load_file(args.fan))


def _divisors(args, fan: Fan, required: bool = True) -> list:
    if required and not args.divisor:
        raise SchemaError("at least one --divisor is required")
    return [io.divisor_from_doc(io.load_file(p), fan) for p in args.divisor or []]


def _complements(args, fan: Fan):
    if not args.complements:
        raise SchemaError("--complements is required")
    return io.complements_from_doc(io.load_file(args.complements), fan)


def _cycles(args, fan: Fan) -> list:
    return [io.cycle_from_doc(io.load_file(p), fan) for p in args.cycle or []]


def _cycle_or_unit(args, fan: Fan) -> Cycle:
    cycles = _cycles(args, fan)
    if len(cycles) > 1:
        raise SchemaError("expected at most one --cycle")
    return cycles[0] if cycles else Cycle.fundamental(fan)


def _morphism(args):
    if not args.morphism:
        raise SchemaError("--morphism is required")
    return io.morphism_from_doc(io.load_file(args.morphism))


def _int_list(text: str, flag: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise SchemaError(f"{flag} expects comma-separated integers") from None


def _rat_list(text: str, flag: str) -> list:
    return [la.parse_rational(x) for x in text.split(",") if x.strip()]


def _cone_arg(args, fan: Fan) -> frozenset:
    if args.cone is None:
        raise SchemaError("--cone is required")
    cone = frozenset(_int_list(args.cone, "--cone"))
    if cone not in fan:
        raise SchemaError(f"{sorted(cone)} is not a cone of the fan", "--cone")
    return cone


def _divisor_names(k: int) -> list:
    return [f"d{i + 1}" for i in range(k)]


def _ray_names(fan: Fan) -> list:
    return [f"y{i + 1}" for i in range(len(fan.rays))]


# -- subcommands ----------------------------------------------------------------------

def cmd_validate(args) -> dict:
    fan = _fan(args)
    _divisors(args, fan, required=False)
    if args.complements:
        _complements(args, fan)
    _cycles(args, fan)
    if args.morphism:
        _morphism(args)
    complete = fan.is_complete()
    return io.report_doc(
        "validate", ok=True, cones=len(fan.cones), simplicial=fan.is_simplicial(),
        smooth=fan.is_smooth(), complete="undecided" if complete is None else complete,
    )


def cmd_intersect(args) -> dict:
    fan = _fan(args)
    divisors = _divisors(args, fan)
    psi = _complements(args, fan)
    z = _cycle_or_unit(args, fan)
    for D in reversed(divisors):
        z = intersect(D, z, psi)
    return io.cycle_to_doc(z)


def cmd_power(args) -> dict:
    fan = _fan(args)
    divisors = _divisors(args, fan)
    if len(divisors) != 1:
        raise SchemaError("power takes exactly one --divisor")
    psi = _complements(args, fan)
    k = fan.rank if args.exponent is None else args.exponent
    return io.cycle_to_doc(power(divisors[0], k, _cycle_or_unit(args, fan), psi))


def _poly_in_divisors(args, count: int) -> Polynomial:
    if not args.poly:
        raise SchemaError("--poly is required")
    return Polynomial.parse(args.poly, _divisor_names(count))


def cmd_poly(args) -> dict:
    fan = _fan(args)
    divisors = _divisors(args, fan)
    psi = _complements(args, fan)
    p = _poly_in_divisors(args, len(divisors))
    return io.cycle_to_doc(Evaluator(divisors, psi, fan).evaluate(p, _cycle_or_unit(args, fan)))


def cmd_ring_product(args) -> dict:
    fan = _fan(args)
    psi = _complements(args, fan)
    cycles = _cycles(args, fan)
    if len(cycles) != 2:
        raise SchemaError("ring-product takes exactly two --cycle documents")
    return io.cycle_to_doc(CycleRing(fan, psi).product(*cycles))


def cmd_todd(args) -> dict:
    fan = _fan(args)
    return io.cycle_to_doc(todd_cycle(fan, _complements(args, fan)))


def cmd_chern(args) -> dict:
    fan = _fan(args)
    psi = _complements(args, fan)
    if args.index is None:
        return io.cycle_to_doc(total_chern_cycle(fan, psi))
    return io.cycle_to_doc(chern_cycle(fan, psi, args.index))


def cmd_degree(args) -> dict:
    fan = _fan(args)
    cycles = _cycles(args, fan)
    if len(cycles) != 1:
        raise SchemaError("degree takes exactly one --cycle")
    return io.rational_doc(degree(cycles[0]))


def _poly_default_power(args, count: int, k: int) -> Polynomial:
    if args.poly:
        return _poly_in_divisors(args, count)
    if count != 1:
        raise SchemaError("--poly is required with several divisors")
    return Polynomial.monomial([k])


def cmd_flag_coeff(args) -> dict:
    fan = _fan(args)
    divisors = _divisors(args, fan)
    psi = _complements(args, fan)
    if not isinstance(psi, Flag):
        raise SchemaError("flag-coeff needs flag complements", "type")
    cone = _cone_arg(args, fan)
    q = _poly_default_power(args, len(divisors), fan.dim(cone))
    return io.rational_doc(flag_closed_form(q, divisors, cone, psi, fan))


def cmd_symbolic_coeff(args) -> dict:
    fan = _fan(args)
    divisors = _divisors(args, fan)
    cone = _cone_arg(args, fan)
    q = _poly_default_power(args, len(divisors), fan.dim(cone))
    return io.rational_function_doc(symbolic_flag_coefficient(q, divisors, cone, fan))


def cmd_reduce(args) -> dict:
    fan = _fan(args)
    psi = _complements(args, fan)
    if not isinstance(psi, InnerProduct):
        raise SchemaError("reduce needs inner-product complements", "type")
    if not args.poly:
        raise SchemaError("--poly is required")
    names = _ray_names(fan)
    p = Polynomial.parse(args.poly, names)
    return io.polynomial_doc(RingPresentation(fan, psi.gram).reduce(p), names)


def cmd_pushforward(args) -> dict:
    f = _morphism(args)
    cycles = [io.cycle_from_doc(io.load_file(p), f.source) for p in args.cycle or []]
    if len(cycles) != 1:
        raise SchemaError("pushforward takes exactly one --cycle")
    return io.cycle_to_doc(pushforward(f, cycles[0]))


def cmd_projection_check(args) -> dict:
    f = _morphism(args)
    divisors = [io.divisor_from_doc(io.load_file(p), f.target) for p in args.divisor or []]
    if len(divisors) != 1:
        raise SchemaError("projection-check takes exactly one --divisor on the target")
    psi = _complements(args, f.target)
    if args.source_complements:
        psi_src = io.complements_from_doc(io.load_file(args.source_complements), f.source)
    else:
        psi_src = compatible_complements(f, psi)
    cycles = [io.cycle_from_doc(io.load_file(p), f.source) for p in args.cycle or []]
    z = cycles[0] if cycles else Cycle.fundamental(f.source)
    rep = projection_formula_check(f, divisors[0], z, psi, psi_src)
    return io.report_doc("projection-check", ok=rep.holds,
                         lhs=io.cycle_to_doc(rep.lhs), rhs=io.cycle_to_doc(rep.rhs))


def cmd_subdivide(args) -> dict:
    fan = _fan(args)
    if args.ray:
        sub, f = star_subdivision(fan, _int_list(args.ray, "--ray"))
    else:
        sub, f = simplicialize(fan)
    return io.morphism_to_doc(f)


def cmd_lefschetz(args) -> dict:
    fan = _fan(args)
    if args.complements:
        psi = _complements(args, fan)
        if not isinstance(psi, InnerProduct):
            raise SchemaError("lefschetz needs inner-product complements", "type")
        grams = [psi.gram]
    else:
        if args.seed is None:
            raise SchemaError("--seed is required when no --complements are given")
        rng = random.Random(args.seed)
        grams = [random_gram(fan.rank, rng) for _ in range(4)]
    coeffs = _rat_list(args.coeffs, "--coeffs") if args.coeffs else [1] * len(fan.rays)
    if len(coeffs) != len(fan.rays):
        raise SchemaError(f"expected {len(fan.rays)} coefficients", "--coeffs")
    indices = [args.index] if args.index is not None else list(range(fan.rank // 2 + 1))
    results = []
    for gram in grams:
        reports = [lefschetz_injectivity(fan, coeffs, i, gram) for i in indices]
        results = reports
        if all(r.injective for r in reports):
            break
    return io.report_doc(
        "lefschetz",
        ok=all(r.injective for r in results),
        gram=[[la.format_rational(a) for a in row] for row in gram],
        results=[{"i": r.i, "power": r.power, "rows": r.rows, "cols": r.cols, "rank": r.rank,
                  "injective": r.injective} for r in results],
    )


def cmd_polytope(args) -> dict:
    fan = _fan(args)
    divisors = _divisors(args, fan)
    P = polytope_of(divisors[0])
    return io.report_doc("polytope", ok=True,
                         vertices=[[la.format_rational(a) for a in v] for v in P.vertices],
                         volume=la.format_rational(polytope_volume(P)))


def cmd_properness(args) -> dict:
    f = _morphism(args)
    verdict = is_proper_restricted(f)
    return io.report_doc("properness", ok=True, proper=verdict.value)


COMMANDS = {
    "validate": (cmd_validate, "validate documents against a fan"),
    "intersect": (cmd_intersect, "apply divisors to a cycle (last divisor first)"),
    "power": (cmd_power, "apply one divisor repeatedly"),
    "poly": (cmd_poly, "evaluate a polynomial in d1..ds on a cycle"),
    "ring-product": (cmd_ring_product, "product of two cycles on a simplicial fan"),
    "todd": (cmd_todd, "cycle-level Todd class"),
    "chern": (cmd_chern, "Chern cycle c_j, or the total Chern cycle"),
    "degree": (cmd_degree, "degree of a zero-dimensional cycle"),
    "flag-coeff": (cmd_flag_coeff, "closed-form flag coefficient of a cone"),
    "symbolic-coeff": (cmd_symbolic_coeff, "flag coefficient as a function of the flag normal"),
    "reduce": (cmd_reduce, "reduce a polynomial in y1..yr to face monomials"),
    "pushforward": (cmd_pushforward, "push a cycle forward along a morphism"),
    "projection-check": (cmd_projection_check, "check the projection formula"),
    "subdivide": (cmd_subdivide, "star subdivision, or simplicialization without --ray"),
    "lefschetz": (cmd_lefschetz, "injectivity of powers of an ample-type class"),
    "polytope": (cmd_polytope, "polytope of a divisor and its volume"),
    "properness": (cmd_properness, "decide properness of a morphism where possible"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toric-cycles", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--fan")
        p.add_argument("--divisor", action="append")
        p.add_argument("--complements")
        p.add_argument("--source-complements")
        p.add_argument("--cycle", action="append")
        p.add_argument("--morphism")
        p.add_argument("--poly")
        p.add_argument("--seed", type=int)
        p.add_argument("--out")
        p.add_argument("--exponent", type=int)
        p.add_argument("--index", type=int)
        p.add_argument("--cone", help="comma-separated ray indices")
        p.add_argument("--ray", help="comma-separated integer coordinates")
        p.add_argument("--coeffs", help="comma-separated rationals")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    handler = COMMANDS[args.command][0]
    try:
        doc = handler(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ToricError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    text = io.dumps(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
