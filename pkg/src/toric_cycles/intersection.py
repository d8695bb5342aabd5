"""The action of Q-Cartier divisors on invariant cycles.

For a cone ``sigma`` the action is

    D . [V(sigma)] = sum over tau having sigma as a facet of
                     <pi_sigma(m_tau), n_{tau,sigma}> [V(tau)]

where ``m_tau`` is any representative of the local equation on ``tau`` and
``n_{tau,sigma}`` any lift of the primitive generator.  The pairing is
computed as ``<m_tau, g>`` with ``g = P_sigma^T n`` cached by the complement
choice.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import sympy

from . import linalg as la
from .complements import ComplementChoice, Explicit, Flag
from .divisors import Cycle, QCartierDivisor, lattice_volume, local_equation
from .errors import FanError, FanMismatch, FlagDegenerateAt, NotHomogeneous, NotProper, NotSimplicial
from .fan import Fan, build_fan
from .polynomial import Polynomial


def _same_fan(fan: Fan, *objects) -> None:
    for obj in objects:
        if obj.fan != fan:
            raise FanMismatch("inputs live on different fans")


def _action_on_orbit(D: QCartierDivisor, sigma, psi: ComplementChoice) -> dict:
    fan = D.fan
    out = {}
    for tau in fan.cones_over(sigma):
        value = la.dot(local_equation(D, tau), psi.effective_generator(fan, tau, sigma))
        if value:
            out[tau] = value
    return out


def intersect(D: QCartierDivisor, z: Cycle, psi: ComplementChoice) -> Cycle:
    """``D . z`` for the action defined by ``psi``."""
    _same_fan(D.fan, z)
    out: dict = {}
    for sigma, c in z:
        for tau, v in _action_on_orbit(D, sigma, psi).items():
            out[tau] = out.get(tau, 0) + c * v
    return Cycle(D.fan, out)


def intersects_properly(D: QCartierDivisor, sigma) -> bool:
    m = local_equation(D, sigma)
    return all(la.dot(m, v) == 0 for v in D.fan.ray_vectors(sigma))


def proper_restriction_cycle(D: QCartierDivisor, sigma) -> Cycle:
    """The cycle of ``D`` restricted to ``V(sigma)``; needs no complement choice."""
    fan = D.fan
    sigma = frozenset(sigma)
    if not intersects_properly(D, sigma):
        raise NotProper(f"divisor does not meet V({sorted(sigma)}) properly")
    return Cycle(fan, {
        tau: la.dot(local_equation(D, tau), fan.primitive_quotient_generator(tau, sigma))
        for tau in fan.cones_over(sigma)
    })


class Evaluator:
    """Evaluates polynomials in a fixed list of divisors on cycles.

    The action of each divisor on each orbit is computed once and reused.
    A monomial ``E_1^a_1 ... E_s^a_s`` is applied right to left, so the
    divisor with the largest index acts first.
    """

    def __init__(self, divisors: Sequence[QCartierDivisor], psi: ComplementChoice, fan: Optional[Fan] = None):
        if fan is None:
            if not divisors:
                raise FanError("a fan is needed when no divisors are given")
            fan = divisors[0].fan
        _same_fan(fan, *divisors)
        self.fan = fan
        self.divisors = list(divisors)
        self.psi = psi
        self._orbit: dict = {}

    def _act(self, i: int, terms: dict) -> dict:
        out: dict = {}
        for sigma, c in terms.items():
            key = (i, sigma)
            row = self._orbit.get(key)
            if row is None:
                row = _action_on_orbit(self.divisors[i], sigma, self.psi)
                self._orbit[key] = row
            for tau, v in row.items():
                out[tau] = out.get(tau, 0) + c * v
        return {k: v for k, v in out.items() if v}

    def apply_sequence(self, order: Sequence[int], z: Cycle) -> Cycle:
        """Apply ``divisors[order[0]]`` first, then ``order[1]`` and so on."""
        terms = dict(z.terms)
        for i in order:
            terms = self._act(i, terms)
            if not terms:
                break
        return Cycle(self.fan, terms)

    def evaluate(self, p: Polynomial, z: Cycle, check_order: bool = False,
                 rng: Optional[random.Random] = None) -> Cycle:
        if p.nvars != len(self.divisors):
            raise FanError(f"polynomial has {p.nvars} variables for {len(self.divisors)} divisors")
        _same_fan(self.fan, z)
        memo: dict = {(0,) * p.nvars: dict(z.terms)}

        def power(exps: tuple) -> dict:
            got = memo.get(exps)
            if got is None:
                i = next(k for k, e in enumerate(exps) if e)
                smaller = exps[:i] + (exps[i] - 1,) + exps[i + 1:]
                got = self._act(i, power(smaller))
                memo[exps] = got
            return got

        out: dict = {}
        for exps, c in p:
            for tau, v in power(exps).items():
                out[tau] = out.get(tau, 0) + c * v
        result = Cycle(self.fan, out)
        if check_order:
            rng = rng or random.Random(0)
            other = Cycle(self.fan)
            for exps, c in p:
                order = [i for i, e in enumerate(exps) for _ in range(e)]
                rng.shuffle(order)
                other = other + c * self.apply_sequence(order, z)
            assert other == result, "evaluation depends on the order of the factors"
        return result


def evaluate_polynomial(p: Polynomial, divisors: Sequence[QCartierDivisor], z: Cycle,
                        psi: ComplementChoice, check_order: bool = False) -> Cycle:
    return Evaluator(divisors, psi, z.fan).evaluate(p, z, check_order=check_order)


def power(D: QCartierDivisor, k: int, z: Cycle, psi: ComplementChoice) -> Cycle:
    for _ in range(k):
        z = intersect(D, z, psi)
    return z


# -- localization ----------------------------------------------------------

def localize_coefficient(fan: Fan, tau, sigma, divisors: Sequence[QCartierDivisor],
                         psi: ComplementChoice) -> Fraction:
    """Coefficient of ``[V(tau)]`` in ``E_1 ... E_s . [V(sigma)]`` computed on the affine piece of ``tau``.

    Everything is transported to the lattice ``N_tau``: the rays of ``tau``
    in a basis of ``N_tau``, local equations restricted to ``N_tau`` and the
    complements restricted likewise.  The chain sum is then evaluated on the
    fan of ``tau`` alone.
    """
    tau, sigma = frozenset(tau), frozenset(sigma)
    _same_fan(fan, *divisors)
    if not sigma <= tau or sigma not in fan or tau not in fan:
        raise FanError(f"{sorted(sigma)} is not a face of {sorted(tau)}")
    s = fan.dim(tau) - fan.dim(sigma)
    if s != len(divisors):
        raise FanError(f"codimension gap {s} but {len(divisors)} divisors")
    if s == 0:
        return Fraction(1)
    basis = fan.geometry(tau).span.vectors
    idx = sorted(tau)
    local_rays = [[int(a) for a in fan.geometry(tau).span.coordinates(fan.rays[i])] for i in idx]
    local = build_fan(len(basis), local_rays, [range(len(idx))])

    def restrict(m):
        return tuple(la.dot(m, b) for b in basis)

    mapping = {}
    for g in fan.faces(tau):
        lc = frozenset(idx.index(i) for i in g)
        mapping[lc] = [restrict(q) for q in psi.basis(fan, g)]
    local_psi = Explicit(local, mapping)
    eqs = [restrict(local_equation(E, tau)) for E in divisors]
    start = frozenset(idx.index(i) for i in sigma)
    top = frozenset(range(len(idx)))

    memo: dict = {}

    def chain_sum(g: frozenset, k: int) -> Fraction:
        # divisors[k-1] acts on V(g); the last divisor acts first
        if k == 0:
            return Fraction(int(g == top))
        key = (g, k)
        if key not in memo:
            m = eqs[k - 1]
            p = local_psi.project(local, g, m)
            total = Fraction(0)
            for h in local.cones_over(g):
                coeff = la.dot(p, local.primitive_quotient_generator(h, g))
                if coeff:
                    total += coeff * chain_sum(h, k - 1)
            memo[key] = total
        return memo[key]

    return chain_sum(start, s)


# -- volume decomposition ----------------------------------------------------

@dataclass(frozen=True)
class ChainTerm:
    chain: tuple
    value: Fraction
    vertices: tuple
    volume: Fraction

    @property
    def sign(self) -> int:
        return (self.value > 0) - (self.value < 0)


@dataclass(frozen=True)
class VolumeDecomposition:
    terms: tuple
    total: Fraction


def complete_flags(fan: Fan, sigma) -> list:
    """All chains ``0 = g_0 < g_1 < ... < g_d = sigma`` of successive facets."""
    sigma = frozenset(sigma)
    if not sigma:
        return [(sigma,)]
    return [c + (sigma,) for f in fan.facets(sigma) for c in complete_flags(fan, f)]


def dn_volume_decomposition(D: QCartierDivisor, sigma, psi: ComplementChoice) -> VolumeDecomposition:
    """Chain-by-chain expansion of the ``[V(sigma)]`` coefficient of ``D^n . [X]``.

    Each chain contributes a product whose absolute value is ``n!`` times
    the lattice volume of the simplex spanned by the projections of the
    local equation along the chain.
    """
    fan = D.fan
    sigma = frozenset(sigma)
    if sigma not in fan.maximal_cones or fan.dim(sigma) != fan.rank:
        raise FanError(f"{sorted(sigma)} is not a full-dimensional maximal cone")
    m = local_equation(D, sigma)
    terms = []
    for chain in complete_flags(fan, sigma):
        pts = tuple(psi.project(fan, g, m) for g in chain)
        value = Fraction(1)
        for a, b in zip(chain, chain[1:]):
            value *= la.dot(pts[chain.index(a)], fan.primitive_quotient_generator(b, a))
        terms.append(ChainTerm(chain, value, pts, lattice_volume(pts)))
    return VolumeDecomposition(tuple(terms), sum((t.value for t in terms), Fraction(0)))


# -- generic flag formulas ------------------------------------------------------

def _require_simplicial(fan: Fan, sigma) -> None:
    if len(sigma) != fan.dim(sigma):
        raise NotSimplicial(f"cone {sorted(sigma)} is not simplicial")


def flag_simplex_coefficient(D: QCartierDivisor, sigma, flag: Flag) -> tuple:
    """Signed simplex value of the ``[V(sigma)]`` coefficient of ``D^n . [X]``.

    The simplex is cut out by the coordinate hyperplanes of the dual basis
    and the hyperplane through ``m`` parallel to the penultimate flag member.
    Its vertices are the origin and ``t_i u_i`` with ``u_i`` the dual basis.
    The sign is negative exactly when an odd number of the rays ``u_i`` are
    missed, i.e. have ``t_i < 0``.  Returns ``(value, vertices)``.
    """
    fan = D.fan
    sigma = frozenset(sigma)
    n = fan.rank
    if fan.dim(sigma) != n:
        raise FanError(f"{sorted(sigma)} is not full-dimensional")
    _require_simplicial(fan, sigma)
    if not all(flag.is_generic_for(fan, g) for g in fan.faces(sigma)):
        raise FlagDegenerateAt(sigma)
    V = fan.ray_vectors(sigma)
    U = la.transpose(la.inverse(V))  # rows u_i with <u_i, v_j> = delta_ij
    w = flag.normal()
    m = local_equation(D, sigma)
    mw = la.dot(m, w)
    ts = []
    for u in U:
        uw = la.dot(u, w)
        if uw == 0:
            raise FlagDegenerateAt(sigma)
        ts.append(mw / uw)
    vertices = ((Fraction(0),) * n,) + tuple(tuple(t * a for a in u) for t, u in zip(ts, U))
    misses = sum(1 for t in ts if t < 0)
    value = (-1) ** misses * math.factorial(n) * lattice_volume(vertices)
    return value, vertices


def _cone_normal(fan: Fan, sigma, flag: Flag) -> tuple:
    """The normal ``w`` in ``N_sigma (x) Q`` killing ``f_1..f_{k-1}`` with ``<f_k, w> = 1``."""
    k = fan.dim(sigma)
    basis = fan.geometry(sigma).span.vectors
    A = [[la.dot(flag.vectors[i], b) for b in basis] for i in range(k)]
    if la.rank(A) < k:
        raise FlagDegenerateAt(sigma)
    y = la.solve_unique(A, [int(i == k - 1) for i in range(k)])
    return tuple(sum((y[j] * basis[j][a] for j in range(k)), Fraction(0)) for a in range(fan.rank))


def flag_normal_coordinates(fan: Fan, sigma, flag: Flag) -> tuple:
    """Coordinates of the flag normal of ``sigma`` in the basis of ``N_sigma``."""
    w = _cone_normal(fan, sigma, flag)
    return tuple(fan.geometry(sigma).span.coordinates(w))


def flag_closed_form(q: Polynomial, divisors: Sequence[QCartierDivisor], sigma, flag: Flag,
                     fan: Optional[Fan] = None) -> Fraction:
    """Closed form for the ``[V(sigma)]`` coefficient of ``q(E_1..E_s) . [X]``.

    With ``w`` the flag normal of ``sigma`` written as ``sum c_i v_i`` in the
    rays of ``sigma``, the value is ``q(<m_1,w>, ...) / (mult * prod c_i)``.
    """
    fan = fan or divisors[0].fan
    _same_fan(fan, *divisors)
    sigma = frozenset(sigma)
    k = fan.dim(sigma)
    _require_simplicial(fan, sigma)
    if q.nvars != len(divisors):
        raise FanError(f"polynomial has {q.nvars} variables for {len(divisors)} divisors")
    if not q.is_homogeneous(k):
        raise NotHomogeneous(f"polynomial is not homogeneous of degree {k}")
    if k == 0:
        return q.evaluate([0] * q.nvars) if q.nvars else q.coefficient(())
    w = _cone_normal(fan, sigma, flag)
    c = la.solve_unique(la.transpose(fan.ray_vectors(sigma)), w)
    if any(ci == 0 for ci in c):
        raise FlagDegenerateAt(sigma)
    values = [la.dot(local_equation(E, sigma), w) for E in divisors]
    denom = fan.multiplicity(sigma) * math.prod(c)
    return q.evaluate(values) / denom


class RationalFunction:
    """A reduced quotient of polynomials over Q in symbols ``w1..wk``."""

    def __init__(self, numerator, denominator, symbols: Sequence):
        self.symbols = tuple(symbols)
        expr = sympy.cancel(sympy.sympify(numerator) / sympy.sympify(denominator))
        num, den = sympy.fraction(sympy.together(expr))
        num, den = sympy.expand(num), sympy.expand(den)
        if den == 0:
            raise ZeroDivisionError("denominator vanishes identically")
        if num == 0:
            den = sympy.Integer(1)
        # normalize the leading coefficient of the denominator to 1
        if self.symbols and den.free_symbols:
            lc = sympy.Poly(den, *self.symbols).LC()
        else:
            lc = den
        self.numerator = sympy.expand(num / lc)
        self.denominator = sympy.expand(den / lc)

    def evaluate(self, point: Sequence) -> Fraction:
        subs = {s: sympy.Rational(la.as_fraction(x).numerator, la.as_fraction(x).denominator)
                for s, x in zip(self.symbols, point)}
        den = self.denominator.subs(subs)
        if den == 0:
            raise ZeroDivisionError("rational function has a pole at this point")
        val = sympy.Rational(self.numerator.subs(subs) / den)
        return Fraction(int(val.p), int(val.q))

    def is_zero(self) -> bool:
        return self.numerator == 0

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return sympy.simplify(self.numerator * other.denominator - other.numerator * self.denominator) == 0

    def __str__(self):
        return f"({self.numerator})/({self.denominator})"

    __repr__ = __str__


def symbolic_flag_coefficient(q: Polynomial, divisors: Sequence[QCartierDivisor], sigma,
                              fan: Optional[Fan] = None) -> RationalFunction:
    """The closed form as a function of the flag normal ``w`` of ``sigma``.

    ``w`` has coordinates ``w1..wk`` in the basis of ``N_sigma`` returned by
    the fan geometry; see :func:`flag_normal_coordinates`.
    """
    fan = fan or divisors[0].fan
    _same_fan(fan, *divisors)
    sigma = frozenset(sigma)
    k = fan.dim(sigma)
    _require_simplicial(fan, sigma)
    if not q.is_homogeneous(k):
        raise NotHomogeneous(f"polynomial is not homogeneous of degree {k}")
    syms = sympy.symbols([f"w{i + 1}" for i in range(k)]) if k else []
    basis = fan.geometry(sigma).span.vectors
    R = [fan.geometry(sigma).span.coordinates(v) for v in fan.ray_vectors(sigma)]

    def rat(x):
        x = la.as_fraction(x)
        return sympy.Rational(x.numerator, x.denominator)

    pairings = [sum((rat(la.dot(local_equation(E, sigma), b)) * s for b, s in zip(basis, syms)), sympy.Integer(0))
                for E in divisors]
    num = q.to_sympy(pairings) if q.nvars else rat(q.coefficient(()))
    den = sympy.Integer(fan.multiplicity(sigma))
    if k:
        Rinv = la.inverse(R)
        for i in range(k):
            den *= sum((rat(Rinv[j][i]) * syms[j] for j in range(k)), sympy.Integer(0))
    return RationalFunction(num, den, syms)
