"""The ring structure on invariant cycles of a simplicial fan.

Every cycle is a polynomial in the toric divisors ``Y_i = D_i`` applied to
``[X]``.  Multiplying cycles means evaluating one cycle's polynomial on the
other.  For inner-product complements the kernel of ``Q[Y] -> Z_*`` is the
Stanley-Reisner ideal plus the quadrics ``J``; :class:`RingPresentation`
reduces polynomials to square-free face monomials with that description.
"""

from __future__ import annotations

import itertools
import math
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg as la
from .complements import ComplementChoice, InnerProduct
from .divisors import Cycle, divisor_from_ray_coefficients, toric_divisor
from .errors import (
    FormulaExtensionWarning,
    IrrationalAngle,
    NotSimplicial,
    SingularA,
    ToricError,
    ZeroCoefficient,
)
from .fan import Fan
from .intersection import Evaluator
from .polynomial import Polynomial, elementary_symmetric


def _require_simplicial(fan: Fan) -> None:
    if not fan.is_simplicial():
        raise NotSimplicial("the cycle ring is defined for simplicial fans")


def face_monomial(fan: Fan, cone) -> tuple:
    return tuple(int(i in cone) for i in range(len(fan.rays)))


class CycleRing:
    """Evaluation of polynomials in the toric divisors for one fan and one choice."""

    def __init__(self, fan: Fan, psi: ComplementChoice):
        _require_simplicial(fan)
        self.fan = fan
        self.psi = psi
        self.divisors = [toric_divisor(fan, i) for i in range(len(fan.rays))]
        self.evaluator = Evaluator(self.divisors, psi, fan)
        self._face_coeff: dict = {}

    @property
    def nvars(self) -> int:
        return len(self.fan.rays)

    def evaluate(self, p: Polynomial, z: Optional[Cycle] = None) -> Cycle:
        return self.evaluator.evaluate(p, z if z is not None else Cycle.fundamental(self.fan))

    def face_coefficient(self, cone) -> Fraction:
        """Coefficient ``c`` with ``Y_sigma . [X] = c [V(sigma)]``."""
        cone = frozenset(cone)
        c = self._face_coeff.get(cone)
        if c is None:
            z = self.evaluate(Polynomial.monomial(face_monomial(self.fan, cone)))
            c = z.coefficient(cone)
            if not c or len(z) != 1:
                raise ToricError(f"face monomial of {sorted(cone)} does not give a multiple of its orbit")
            self._face_coeff[cone] = c
        return c

    def polynomial_of(self, z: Cycle) -> Polynomial:
        terms = {}
        for cone, c in z:
            terms[face_monomial(self.fan, cone)] = c / self.face_coefficient(cone)
        return Polynomial(self.nvars, terms)

    def product(self, z1: Cycle, z2: Cycle) -> Cycle:
        return self.evaluate(self.polynomial_of(z1), z2)


def cycle_as_polynomial(z: Cycle, psi: ComplementChoice) -> Polynomial:
    return CycleRing(z.fan, psi).polynomial_of(z)


def product(z1: Cycle, z2: Cycle, psi: ComplementChoice) -> Cycle:
    return CycleRing(z1.fan, psi).product(z1, z2)


def characteristic_class(p: Polynomial, fan: Fan, psi: ComplementChoice) -> Cycle:
    """``p(D_1, ..., D_r) . [X]``."""
    return CycleRing(fan, psi).evaluate(p)


def chern_cycle(fan: Fan, psi: ComplementChoice, j: int) -> Cycle:
    """The ``j``-th elementary symmetric polynomial of the toric divisors on ``[X]``."""
    _require_simplicial(fan)
    return characteristic_class(elementary_symmetric(len(fan.rays), j), fan, psi)


def total_chern_cycle(fan: Fan, psi: ComplementChoice) -> Cycle:
    ring = CycleRing(fan, psi)
    total = Cycle(fan)
    for j in range(fan.rank + 1):
        total = total + ring.evaluate(elementary_symmetric(len(fan.rays), j))
    return total


# -- Todd class -------------------------------------------------------------

def todd_series(order: int) -> list:
    """Coefficients of ``x / (1 - exp(-x))`` up to ``x^order``."""
    # (1 - exp(-x)) / x = sum (-1)^k x^k / (k+1)!
    a = [Fraction((-1) ** k, math.factorial(k + 1)) for k in range(order + 1)]
    b = [Fraction(0)] * (order + 1)
    b[0] = 1 / a[0]
    for k in range(1, order + 1):
        b[k] = -sum((a[j] * b[k - j] for j in range(1, k + 1)), Fraction(0)) / a[0]
    return b


def todd_cycle(fan: Fan, psi: ComplementChoice) -> Cycle:
    """Evaluate ``prod_i D_i / (1 - exp(-D_i))`` on ``[X]``, truncated at degree ``n``.

    On a simplicial fan that is not smooth the product is still computed, but
    it is no longer known to represent a Todd class, so a
    :class:`FormulaExtensionWarning` is issued.
    """
    _require_simplicial(fan)
    if not fan.is_smooth():
        warnings.warn("todd_cycle on a singular fan evaluates the smooth formula verbatim",
                      FormulaExtensionWarning, stacklevel=2)
    ring = CycleRing(fan, psi)
    b = todd_series(fan.rank)
    z = Cycle.fundamental(fan)
    for i in range(len(fan.rays)):
        total = Cycle(fan)
        power = z
        for k in range(fan.rank + 1):
            if not power:
                break
            total = total + b[k] * power
            power = ring.evaluator.apply_sequence([i], power)
        z = total
    return z


def q_fraction(S: Sequence[int], size: int) -> Fraction:
    """Product of ``1/(|T|+1)`` over the cyclic runs ``T`` of ``S`` inside ``{1..size}``."""
    S = set(S)
    if not S <= set(range(1, size + 1)):
        raise ValueError(f"{sorted(S)} is not a subset of 1..{size}")
    if len(S) == size:
        raise ValueError("S must be a proper subset")
    if not S:
        return Fraction(1)
    # start scanning just after an element not in S so no run wraps
    start = next(i for i in range(1, size + 1) if i not in S)
    out = Fraction(1)
    run = 0
    for step in range(1, size + 1):
        i = (start + step - 1) % size + 1
        if i in S:
            run += 1
        elif run:
            out /= run + 1
            run = 0
    if run:
        out /= run + 1
    return out


# fraction of the plane inside an angle, keyed by (cos^2, sign of cos)
_ANGLE_FRACTIONS = {
    (Fraction(0), 0): Fraction(1, 4),
    (Fraction(1, 4), 1): Fraction(1, 6),
    (Fraction(1, 4), -1): Fraction(1, 3),
    (Fraction(1, 2), 1): Fraction(1, 8),
    (Fraction(1, 2), -1): Fraction(3, 8),
    (Fraction(3, 4), 1): Fraction(1, 12),
    (Fraction(3, 4), -1): Fraction(5, 12),
}


def linear_span_fraction(fan: Fan, cone, gram: Sequence[Sequence]) -> Fraction:
    """Fraction of the linear span of ``cone`` lying inside it, for the metric dual to ``gram``.

    Implemented for cones of dimension at most two.  A rational answer for
    a 2-dimensional cone requires an angle that is a rational multiple of
    pi with rational squared cosine; other angles raise
    :class:`IrrationalAngle`.
    """
    cone = frozenset(cone)
    d = fan.dim(cone)
    if d == 0:
        return Fraction(1)
    if d == 1:
        return Fraction(1, 2)
    if d > 2:
        raise IrrationalAngle("solid angles are only supported up to dimension 2")
    v1, v2 = fan.ray_vectors(cone)
    Ginv = la.inverse([[la.as_fraction(a) for a in row] for row in gram])
    a11 = la.dot(v1, la.matvec(Ginv, v1))
    a22 = la.dot(v2, la.matvec(Ginv, v2))
    a12 = la.dot(v1, la.matvec(Ginv, v2))
    key = (a12 * a12 / (a11 * a22), (a12 > 0) - (a12 < 0))
    if key not in _ANGLE_FRACTIONS:
        raise IrrationalAngle(f"angle with cos^2 = {key[0]} is not a rational fraction of a turn")
    return _ANGLE_FRACTIONS[key]


# -- presentation -------------------------------------------------------------

def is_face_set(fan: Fan, rays) -> bool:
    rays = frozenset(rays)
    return any(rays <= c for c in fan.maximal_cones)


def stanley_reisner_generators(fan: Fan) -> list:
    """Minimal sets of rays contained in no cone, as exponent tuples."""
    r = len(fan.rays)
    out = []
    for k in range(2, r + 1):
        for subset in itertools.combinations(range(r), k):
            s = frozenset(subset)
            if is_face_set(fan, s):
                continue
            if all(is_face_set(fan, s - {i}) for i in s):
                out.append(tuple(int(i in s) for i in range(r)))
    return out


def omega_pairings(fan: Fan, gram: Sequence[Sequence]) -> list:
    """Matrix ``a_ji = <omega(v_j), v_i>``."""
    ip = InnerProduct(gram)
    return [[la.dot(ip.omega(vj), vi) for vi in fan.rays] for vj in fan.rays]


def j_generators(fan: Fan, gram: Sequence[Sequence]) -> list:
    """One quadric ``sum_i a_ji Y_i Y_j`` per ray ``j``."""
    _require_simplicial(fan)
    a = omega_pairings(fan, gram)
    r = len(fan.rays)
    gens = []
    for j in range(r):
        terms = {}
        for i in range(r):
            e = [0] * r
            e[i] += 1
            e[j] += 1
            terms[tuple(e)] = terms.get(tuple(e), 0) + a[j][i]
        gens.append(Polynomial(r, terms))
    return gens


class RingPresentation:
    """Stanley-Reisner and ``J`` generators together with the reduction step."""

    def __init__(self, fan: Fan, gram: Sequence[Sequence]):
        _require_simplicial(fan)
        self.fan = fan
        self.gram = tuple(tuple(la.as_fraction(x) for x in row) for row in gram)
        self.stanley_reisner = stanley_reisner_generators(fan)
        self.j = j_generators(fan, gram)
        self._a = omega_pairings(fan, gram)
        self._steps: dict = {}

    @property
    def nvars(self) -> int:
        return len(self.fan.rays)

    def generators(self) -> list:
        return [Polynomial.monomial(e) for e in self.stanley_reisner] + list(self.j)

    def _step(self, cone: frozenset) -> dict:
        """Rows of ``-A^{-1} B``: ``Y_i Y_sigma = sum_l W[i][l] Y_l Y_sigma``."""
        W = self._steps.get(cone)
        if W is None:
            inside = sorted(cone)
            outside = [l for l in range(self.nvars) if l not in cone]
            A = [[self._a[j][i] for i in inside] for j in inside]
            if la.rank(A) < len(inside):
                raise SingularA(f"pairing matrix is singular on {inside}")
            B = [[self._a[j][l] for l in outside] for j in inside]
            M = la.matmul(la.inverse(A), B)
            W = {i: {l: -M[row][col] for col, l in enumerate(outside) if M[row][col]}
                 for row, i in enumerate(inside)}
            self._steps[cone] = W
        return W

    def reduce(self, p: Polynomial) -> Polynomial:
        """Rewrite ``p`` as a combination of face monomials modulo the presentation.

        Each pass lowers the excess exponent of a monomial by one, replacing
        ``Y_i Y_sigma`` by square-free terms; monomials on non-faces vanish.
        """
        r = self.nvars
        done: dict = {}
        work: dict = dict(p.terms())
        while work:
            exps = max(work, key=lambda e: (sum(e), e))
            c = work.pop(exps)
            if not c:
                continue
            support = frozenset(i for i, e in enumerate(exps) if e)
            if not is_face_set(self.fan, support):
                continue
            excess = [i for i in sorted(support) if exps[i] > 1]
            if not excess:
                done[exps] = done.get(exps, 0) + c
                continue
            i = excess[0]
            W = self._step(support)
            base = list(exps)
            base[i] -= 1
            for l, w in W[i].items():
                e = list(base)
                e[l] += 1
                e = tuple(e)
                work[e] = work.get(e, 0) + c * w
        return Polynomial(r, done)


@dataclass
class PresentationReport:
    generator_failures: list = field(default_factory=list)
    mismatches: list = field(default_factory=list)
    polynomials_checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.generator_failures and not self.mismatches


def random_polynomial(nvars: int, max_degree: int, rng: random.Random, terms: int = 4,
                      bound: int = 9) -> Polynomial:
    out = {}
    for _ in range(terms):
        deg = rng.randint(0, max_degree)
        e = [0] * nvars
        for _ in range(deg):
            e[rng.randrange(nvars)] += 1
        out[tuple(e)] = rng.randint(-bound, bound)
    return Polynomial(nvars, out)


def verify_presentation(fan: Fan, gram: Sequence[Sequence], psi: ComplementChoice,
                        samples: int = 100, rng: Optional[random.Random] = None) -> PresentationReport:
    """Check the generators vanish and that reduction agrees with direct evaluation."""
    rng = rng or random.Random(0)
    pres = RingPresentation(fan, gram)
    ring = CycleRing(fan, psi)
    report = PresentationReport()
    for g in pres.generators():
        if ring.evaluate(g):
            report.generator_failures.append(g)
    for _ in range(samples):
        p = random_polynomial(pres.nvars, fan.rank + 2, rng)
        if ring.evaluate(pres.reduce(p)) != ring.evaluate(p):
            report.mismatches.append(p)
        report.polynomials_checked += 1
    return report


# -- Lefschetz ------------------------------------------------------------------

@dataclass(frozen=True)
class LefschetzReport:
    i: int
    power: int
    rows: int
    cols: int
    rank: int

    @property
    def injective(self) -> bool:
        return self.rank == self.cols


def lefschetz_matrix(fan: Fan, coeffs: Sequence, i: int, gram: Sequence[Sequence]) -> tuple:
    """Matrix of ``omega^(n-2i)`` from cones of dimension ``i`` to cones of dimension ``n-i``.

    ``omega = sum a_j D_j``.  Columns are indexed by the source cones and
    rows by the target cones, both in fan order.
    """
    _require_simplicial(fan)
    n = fan.rank
    if not 0 <= 2 * i <= n:
        raise ValueError(f"need 0 <= i <= n/2, got i = {i}")
    if any(la.as_fraction(a) == 0 for a in coeffs):
        raise ZeroCoefficient("all coefficients of omega must be non-zero")
    psi = InnerProduct(gram)
    omega = divisor_from_ray_coefficients(fan, coeffs)
    ev = Evaluator([omega], psi, fan)
    src = fan.cones_of_dim(i)
    dst = fan.cones_of_dim(n - i)
    cols = []
    for s in src:
        z = ev.apply_sequence([0] * (n - 2 * i), Cycle.orbit(fan, s))
        cols.append([z.coefficient(t) for t in dst])
    matrix = [[cols[c][r] for c in range(len(src))] for r in range(len(dst))]
    return matrix, src, dst


def lefschetz_injectivity(fan: Fan, coeffs: Sequence, i: int, gram: Sequence[Sequence]) -> LefschetzReport:
    matrix, src, dst = lefschetz_matrix(fan, coeffs, i, gram)
    rank = la.rank(matrix) if matrix and src else 0
    return LefschetzReport(i, fan.rank - 2 * i, len(dst), len(src), rank)
