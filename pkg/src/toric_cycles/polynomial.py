"""Sparse polynomials with rational coefficients.

Parsing and printing go through sympy; arithmetic stays on plain
dictionaries keyed by exponent tuples so evaluation code can walk monomials
without touching sympy.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import sympy

from . import linalg as la
from .errors import SchemaError


def _to_fraction(c) -> Fraction:
    c = sympy.Rational(c)
    return Fraction(int(c.p), int(c.q))


class Polynomial:
    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping | None = None):
        self.nvars = nvars
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps}")
            c = la.as_fraction(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
        self._terms = {k: v for k, v in sorted(clean.items()) if v}

    # -- construction -----------------------------------------------------
    @classmethod
    def constant(cls, nvars: int, c=1) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Polynomial":
        return cls(nvars, {tuple(int(j == i) for j in range(nvars)): 1})

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1) -> "Polynomial":
        return cls(len(exps), {tuple(exps): c})

    @classmethod
    def parse(cls, text: str, names: Sequence[str]) -> "Polynomial":
        """Parse ``text`` as a polynomial in the variables ``names``."""
        symbols = sympy.symbols(list(names)) if names else []
        local = {str(s): s for s in symbols}
        try:
            expr = sympy.sympify(text, locals=local, rational=True)
        except (sympy.SympifyError, SyntaxError, TypeError) as exc:
            raise SchemaError(f"cannot parse polynomial {text!r}: {exc}") from None
        return cls.from_sympy(expr, symbols)

    @classmethod
    def from_sympy(cls, expr, symbols: Sequence) -> "Polynomial":
        expr = sympy.sympify(expr)
        extra = expr.free_symbols - set(symbols)
        if extra:
            raise SchemaError(f"unknown variables {sorted(map(str, extra))}")
        if not symbols:
            if not expr.is_Rational:
                raise SchemaError(f"{expr} is not a rational constant")
            return cls(0, {(): _to_fraction(expr)})
        try:
            poly = sympy.Poly(expr, *symbols, domain="QQ")
        except sympy.PolynomialError as exc:
            raise SchemaError(f"not a polynomial: {exc}") from None
        return cls(len(symbols), {k: _to_fraction(v) for k, v in poly.as_dict().items()})

    # -- access -----------------------------------------------------------
    def terms(self) -> Iterable:
        return self._terms.items()

    def __iter__(self):
        return iter(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def is_homogeneous(self, k: int | None = None) -> bool:
        degs = {sum(e) for e in self._terms}
        if not degs:
            return True
        return len(degs) == 1 and (k is None or degs == {k})

    def homogeneous_part(self, k: int) -> "Polynomial":
        return Polynomial(self.nvars, {e: c for e, c in self._terms.items() if sum(e) == k})

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: "Polynomial") -> "Polynomial":
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return Polynomial(self.nvars, out)

    def __neg__(self):
        return Polynomial(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = la.as_fraction(other)
            return Polynomial(self.nvars, {e: c * v for e, v in self._terms.items()})
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        out = Polynomial.constant(self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        return hash((self.nvars, tuple(self._terms.items())))

    def evaluate(self, values: Sequence) -> Fraction:
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for x, k in zip(values, e):
                if k:
                    term *= la.as_fraction(x) ** k
            total += term
        return total

    def to_sympy(self, symbols: Sequence):
        return sympy.Add(*[
            sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[s ** k for s, k in zip(symbols, e)])
            for e, c in self._terms.items()
        ])

    def format(self, names: Sequence[str]) -> str:
        return str(sympy.expand(self.to_sympy(sympy.symbols(list(names)) if names else [])))

    def __repr__(self):
        names = [f"x{i + 1}" for i in range(self.nvars)]
        return f"Polynomial({self.format(names)})"


def elementary_symmetric(nvars: int, j: int) -> Polynomial:
    terms = {}
    for subset in itertools.combinations(range(nvars), j):
        terms[tuple(int(i in subset) for i in range(nvars))] = 1
    return Polynomial(nvars, terms)
