"""JSON documents for fans, divisors, cycles, complements and morphisms.

Every document is an object with a ``kind`` field.  Rationals are strings
``"p/q"`` (``"p"`` when integral), integer data (rays, cones, matrices) are
plain JSON integers, and cones are sorted lists of ray indices.  Output is
canonical: sorted keys, two-space indentation and a trailing newline, so
``dumps(parse(x)) == x`` for canonical input.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from . import linalg as la
from .complements import ComplementChoice, Explicit, Flag, InnerProduct, from_flag
from .divisors import Cycle, QCartierDivisor, divisor_from_ray_coefficients
from .errors import SchemaError
from .fan import Fan, build_fan
from .intersection import RationalFunction
from .morphisms import ToricMorphism
from .polynomial import Polynomial


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise SchemaError("document must be a JSON object")
    return doc


def load_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from None


# -- field helpers ---------------------------------------------------------------

def _expect_kind(doc: dict, kind: str) -> None:
    got = doc.get("kind")
    if got != kind:
        raise SchemaError(f"expected kind {kind!r}, got {got!r}", "kind")


def _field(doc: dict, name: str, path: str = "") -> Any:
    if name not in doc:
        raise SchemaError("missing field", f"{path}{name}")
    return doc[name]


def _int(x, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise SchemaError(f"expected an integer, got {x!r}", path)
    return x


def _list(x, path: str) -> list:
    if not isinstance(x, list):
        raise SchemaError(f"expected a list, got {type(x).__name__}", path)
    return x


def _rational(x, path: str) -> Fraction:
    if isinstance(x, bool):
        raise SchemaError(f"expected a rational, got {x!r}", path)
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return la.parse_rational(x)
        except SchemaError as exc:
            raise SchemaError(str(exc), path) from None
    raise SchemaError(f"expected a rational string, got {x!r}", path)


def _int_vector(x, path: str, length: int | None = None) -> list:
    vec = [_int(a, f"{path}[{i}]") for i, a in enumerate(_list(x, path))]
    if length is not None and len(vec) != length:
        raise SchemaError(f"expected {length} entries, got {len(vec)}", path)
    return vec


def _rat_vector(x, path: str, length: int | None = None) -> list:
    vec = [_rational(a, f"{path}[{i}]") for i, a in enumerate(_list(x, path))]
    if length is not None and len(vec) != length:
        raise SchemaError(f"expected {length} entries, got {len(vec)}", path)
    return vec


def _cone(x, path: str, fan: Fan) -> frozenset:
    idx = _int_vector(x, path)
    for k, i in enumerate(idx):
        if not 0 <= i < len(fan.rays):
            raise SchemaError(f"unknown ray index {i}", f"{path}[{k}]")
    cone = frozenset(idx)
    if cone not in fan:
        raise SchemaError(f"{sorted(cone)} is not a cone of the fan", path)
    return cone


def _rat_str(x) -> str:
    return la.format_rational(x)


def _cone_list(cone) -> list:
    return sorted(cone)


# -- fans ---------------------------------------------------------------------------

def fan_to_doc(fan: Fan) -> dict:
    return {
        "kind": "fan",
        "rank": fan.rank,
        "rays": [list(r) for r in fan.rays],
        "maximal_cones": [_cone_list(c) for c in fan.maximal_cones],
    }


def fan_from_doc(doc: dict, path: str = "") -> Fan:
    if doc.get("kind") != "fan":
        raise SchemaError(f"expected kind 'fan', got {doc.get('kind')!r}", f"{path}kind")
    rank = _int(_field(doc, "rank", path), f"{path}rank")
    if rank < 0:
        raise SchemaError("rank must be non-negative", f"{path}rank")
    rays = [_int_vector(r, f"{path}rays[{i}]", rank) for i, r in enumerate(_list(_field(doc, "rays", path), f"{path}rays"))]
    cones = []
    for i, c in enumerate(_list(_field(doc, "maximal_cones", path), f"{path}maximal_cones")):
        idx = _int_vector(c, f"{path}maximal_cones[{i}]")
        for k, j in enumerate(idx):
            if not 0 <= j < len(rays):
                raise SchemaError(f"unknown ray index {j}", f"{path}maximal_cones[{i}][{k}]")
        cones.append(idx)
    return build_fan(rank, rays, cones)


# -- divisors -------------------------------------------------------------------------

def divisor_to_doc(D: QCartierDivisor) -> dict:
    return {
        "kind": "divisor",
        "local_equations": [
            {"cone": _cone_list(c), "m": [_rat_str(a) for a in m]} for c, m in D.local_equations.items()
        ],
    }


def divisor_from_doc(doc: dict, fan: Fan) -> QCartierDivisor:
    _expect_kind(doc, "divisor")
    if "ray_coefficients" in doc:
        coeffs = _rat_vector(doc["ray_coefficients"], "ray_coefficients", len(fan.rays))
        return divisor_from_ray_coefficients(fan, coeffs)
    eqs = {}
    for i, entry in enumerate(_list(_field(doc, "local_equations"), "local_equations")):
        path = f"local_equations[{i}]"
        if not isinstance(entry, dict):
            raise SchemaError("expected an object", path)
        cone = _cone(_field(entry, "cone", path + "."), path + ".cone", fan)
        if cone not in fan.maximal_cones:
            raise SchemaError(f"{sorted(cone)} is not a maximal cone", path + ".cone")
        eqs[cone] = _rat_vector(_field(entry, "m", path + "."), path + ".m", fan.rank)
    for c in fan.maximal_cones:
        if c not in eqs:
            raise SchemaError(f"no local equation for maximal cone {sorted(c)}", "local_equations")
    return QCartierDivisor(fan, eqs)


# -- cycles -----------------------------------------------------------------------------

def cycle_to_doc(z: Cycle) -> dict:
    return {
        "kind": "cycle",
        "terms": [{"cone": _cone_list(c), "coeff": _rat_str(v)} for c, v in z],
    }


def cycle_from_doc(doc: dict, fan: Fan) -> Cycle:
    _expect_kind(doc, "cycle")
    terms: dict = {}
    for i, entry in enumerate(_list(_field(doc, "terms"), "terms")):
        path = f"terms[{i}]"
        if not isinstance(entry, dict):
            raise SchemaError("expected an object", path)
        cone = _cone(_field(entry, "cone", path + "."), path + ".cone", fan)
        terms[cone] = terms.get(cone, 0) + _rational(_field(entry, "coeff", path + "."), path + ".coeff")
    return Cycle(fan, terms)


# -- complements --------------------------------------------------------------------------

def complements_to_doc(psi: ComplementChoice) -> dict:
    if isinstance(psi, InnerProduct):
        return {"kind": "complements", "type": "inner_product",
                "gram": [[_rat_str(a) for a in row] for row in psi.gram]}
    if isinstance(psi, Flag):
        return {"kind": "complements", "type": "flag",
                "vectors": [[_rat_str(a) for a in f] for f in psi.vectors]}
    if isinstance(psi, Explicit):
        return {"kind": "complements", "type": "explicit",
                "bases": [{"cone": _cone_list(c), "basis": [[_rat_str(a) for a in q] for q in Q]}
                          for c, Q in psi.bases.items()]}
    raise TypeError(f"cannot serialize {psi!r}")


def complements_from_doc(doc: dict, fan: Fan) -> ComplementChoice:
    _expect_kind(doc, "complements")
    kind = _field(doc, "type")
    n = fan.rank
    if kind == "inner_product":
        rows = _list(_field(doc, "gram"), "gram")
        if len(rows) != n:
            raise SchemaError(f"expected {n} rows", "gram")
        return InnerProduct([_rat_vector(r, f"gram[{i}]", n) for i, r in enumerate(rows)])
    if kind == "flag":
        rows = _list(_field(doc, "vectors"), "vectors")
        if len(rows) != n:
            raise SchemaError(f"expected {n} vectors", "vectors")
        return from_flag([_rat_vector(r, f"vectors[{i}]", n) for i, r in enumerate(rows)], fan)
    if kind == "explicit":
        mapping = {}
        for i, entry in enumerate(_list(_field(doc, "bases"), "bases")):
            path = f"bases[{i}]"
            if not isinstance(entry, dict):
                raise SchemaError("expected an object", path)
            cone = _cone(_field(entry, "cone", path + "."), path + ".cone", fan)
            basis = _list(_field(entry, "basis", path + "."), path + ".basis")
            mapping[cone] = [_rat_vector(q, f"{path}.basis[{k}]", n) for k, q in enumerate(basis)]
        return Explicit(fan, mapping)
    raise SchemaError(f"unknown complement type {kind!r}", "type")


# -- morphisms --------------------------------------------------------------------------------

def morphism_to_doc(f: ToricMorphism) -> dict:
    return {
        "kind": "morphism",
        "matrix": [list(r) for r in f.matrix],
        "source": fan_to_doc(f.source),
        "target": fan_to_doc(f.target),
    }


def morphism_from_doc(doc: dict) -> ToricMorphism:
    _expect_kind(doc, "morphism")
    source = fan_from_doc(_field(doc, "source"), "source.")
    target = fan_from_doc(_field(doc, "target"), "target.")
    rows = _list(_field(doc, "matrix"), "matrix")
    if len(rows) != target.rank:
        raise SchemaError(f"expected {target.rank} rows", "matrix")
    matrix = [_int_vector(r, f"matrix[{i}]", source.rank) for i, r in enumerate(rows)]
    return ToricMorphism(matrix, source, target)


# -- results ---------------------------------------------------------------------------------------

def rational_doc(x) -> dict:
    return {"kind": "rational", "value": _rat_str(x)}


def rational_function_doc(r: RationalFunction) -> dict:
    return {
        "kind": "rational_function",
        "variables": [str(s) for s in r.symbols],
        "numerator": str(r.numerator),
        "denominator": str(r.denominator),
    }


def polynomial_doc(p: Polynomial, names) -> dict:
    return {"kind": "polynomial", "variables": list(names), "expression": p.format(names)}


def polynomial_from_doc(doc: dict) -> tuple:
    _expect_kind(doc, "polynomial")
    names = [str(v) for v in _list(_field(doc, "variables"), "variables")]
    expr = _field(doc, "expression")
    if not isinstance(expr, str):
        raise SchemaError("expected a string", "expression")
    return Polynomial.parse(expr, names), names


def report_doc(command: str, **fields) -> dict:
    return {"kind": "report", "command": command, **fields}


def parse_document(doc: dict, fan: Fan | None = None):
    """Parse any document kind; kinds other than ``fan`` and ``morphism`` need ``fan``."""
    kind = doc.get("kind")
    if kind == "fan":
        return fan_from_doc(doc)
    if kind == "morphism":
        return morphism_from_doc(doc)
    if kind == "rational":
        return _rational(_field(doc, "value"), "value")
    if kind == "polynomial":
        return polynomial_from_doc(doc)[0]
    if fan is None:
        raise SchemaError(f"documents of kind {kind!r} need a fan")
    if kind == "divisor":
        return divisor_from_doc(doc, fan)
    if kind == "cycle":
        return cycle_from_doc(doc, fan)
    if kind == "complements":
        return complements_from_doc(doc, fan)
    raise SchemaError(f"unknown kind {kind!r}", "kind")


def serialize(obj) -> dict:
    if isinstance(obj, Fan):
        return fan_to_doc(obj)
    if isinstance(obj, QCartierDivisor):
        return divisor_to_doc(obj)
    if isinstance(obj, Cycle):
        return cycle_to_doc(obj)
    if isinstance(obj, ComplementChoice):
        return complements_to_doc(obj)
    if isinstance(obj, ToricMorphism):
        return morphism_to_doc(obj)
    if isinstance(obj, RationalFunction):
        return rational_function_doc(obj)
    if isinstance(obj, (Fraction, int)):
        return rational_doc(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")
