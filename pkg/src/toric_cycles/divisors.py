"""Invariant cycles, Q-Cartier divisors, polytopes and lattice volumes."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Optional, Sequence

from . import linalg as la
from .errors import (
    AgreementViolation,
    CorrespondenceFailed,
    FanError,
    FanMismatch,
    NotSimplicial,
    NotZeroDimensional,
)
from .fan import Fan, _facets_of, cone_key


class Cycle:
    """A finite Q-linear combination of orbit closures ``[V(sigma)]``.

    Zero coefficients are never stored.  Cycles support ``+``, ``-``, scalar
    multiplication and exact equality.
    """

    __slots__ = ("fan", "_terms")

    def __init__(self, fan: Fan, terms: Optional[Mapping] = None):
        self.fan = fan
        clean = {}
        for cone, c in (terms or {}).items():
            cone = frozenset(cone)
            if cone not in fan:
                raise FanError(f"{sorted(cone)} is not a cone of the fan")
            c = la.as_fraction(c)
            if c:
                clean[cone] = clean.get(cone, 0) + c
        self._terms = {k: v for k, v in sorted(clean.items(), key=lambda kv: cone_key(kv[0])) if v}

    @classmethod
    def fundamental(cls, fan: Fan) -> "Cycle":
        """The class ``[X]`` of the whole variety."""
        return cls(fan, {frozenset(): 1})

    @classmethod
    def orbit(cls, fan: Fan, cone, coeff=1) -> "Cycle":
        return cls(fan, {frozenset(cone): coeff})

    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    def coefficient(self, cone) -> Fraction:
        return self._terms.get(frozenset(cone), Fraction(0))

    def __iter__(self):
        return iter(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def _check(self, other: "Cycle") -> None:
        if self.fan != other.fan:
            raise FanMismatch("cycles live on different fans")

    def __add__(self, other: "Cycle") -> "Cycle":
        self._check(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return Cycle(self.fan, out)

    def __neg__(self) -> "Cycle":
        return Cycle(self.fan, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other: "Cycle") -> "Cycle":
        return self + (-other)

    def __rmul__(self, c) -> "Cycle":
        c = la.as_fraction(c)
        return Cycle(self.fan, {k: c * v for k, v in self._terms.items()})

    __mul__ = __rmul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cycle):
            return NotImplemented
        return self.fan == other.fan and self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __repr__(self) -> str:
        body = " + ".join(f"{la.format_rational(c)}*V{sorted(k)}" for k, c in self._terms.items())
        return f"Cycle({body or '0'})"

    def codimensions(self) -> set:
        return {self.fan.dim(k) for k in self._terms}

    def part(self, codim: int) -> "Cycle":
        """The terms supported on cones of dimension ``codim``."""
        return Cycle(self.fan, {k: v for k, v in self._terms.items() if self.fan.dim(k) == codim})


def degree(z: Cycle) -> Fraction:
    """Sum of the coefficients of a cycle supported on full-dimensional cones."""
    n = z.fan.rank
    for cone, _ in z:
        if z.fan.dim(cone) != n:
            raise NotZeroDimensional(f"cone {sorted(cone)} does not give a point")
    return sum((c for _, c in z), Fraction(0))


class QCartierDivisor:
    """Local equations ``m_sigma`` in M (x) Q, one per maximal cone.

    The constructor checks the agreement condition and raises
    :class:`AgreementViolation` on the first failing pair.
    """

    __slots__ = ("fan", "_eqs")

    def __init__(self, fan: Fan, local_equations: Mapping):
        self.fan = fan
        eqs = {}
        for cone, m in local_equations.items():
            cone = frozenset(cone)
            if cone not in fan.maximal_cones:
                raise FanError(f"{sorted(cone)} is not a maximal cone")
            if len(m) != fan.rank:
                raise FanError(f"local equation on {sorted(cone)} has wrong length")
            eqs[cone] = tuple(la.as_fraction(a) for a in m)
        missing = [c for c in fan.maximal_cones if c not in eqs]
        if missing:
            raise FanError(f"no local equation on maximal cone {sorted(missing[0])}")
        self._eqs = {c: eqs[c] for c in fan.maximal_cones}
        validate_divisor(self)

    @property
    def local_equations(self) -> Mapping:
        return MappingProxyType(self._eqs)

    def __add__(self, other: "QCartierDivisor") -> "QCartierDivisor":
        if self.fan != other.fan:
            raise FanMismatch("divisors live on different fans")
        return QCartierDivisor(self.fan, {c: la.vadd(m, other._eqs[c]) for c, m in self._eqs.items()})

    def __rmul__(self, c) -> "QCartierDivisor":
        return QCartierDivisor(self.fan, {k: la.vscale(c, m) for k, m in self._eqs.items()})

    def __neg__(self):
        return (-1) * self

    def __sub__(self, other):
        return self + (-other)

    def equivalent(self, other: "QCartierDivisor") -> bool:
        """Equality modulo each maximal cone's perp."""
        if self.fan != other.fan:
            return False
        return all(
            all(la.dot(la.vsub(m, other._eqs[c]), v) == 0 for v in self.fan.ray_vectors(c))
            for c, m in self._eqs.items()
        )

    def __repr__(self):
        body = ", ".join(f"{sorted(c)}: {[la.format_rational(a) for a in m]}" for c, m in self._eqs.items())
        return f"QCartierDivisor({body})"


def validate_divisor(D: QCartierDivisor) -> None:
    fan = D.fan
    for a, b in itertools.combinations(fan.maximal_cones, 2):
        shared = a & b
        diff = la.vsub(D._eqs[a], D._eqs[b])
        if any(la.dot(diff, fan.rays[i]) != 0 for i in shared):
            raise AgreementViolation(a, b, shared)


def principal_divisor(fan: Fan, m: Sequence) -> QCartierDivisor:
    return QCartierDivisor(fan, {c: tuple(m) for c in fan.maximal_cones})


def local_equation(D: QCartierDivisor, cone) -> tuple:
    """A representative of the local equation on ``cone``, well defined modulo its perp."""
    cone = frozenset(cone)
    if cone not in D.fan:
        raise FanError(f"{sorted(cone)} is not a cone of the fan")
    for c in D.fan.maximal_cones:
        if cone <= c:
            return D._eqs[c]
    raise FanError(f"{sorted(cone)} lies in no maximal cone")  # pragma: no cover


def divisor_cycle(D: QCartierDivisor) -> Cycle:
    fan = D.fan
    return Cycle(fan, {
        frozenset([i]): la.dot(local_equation(D, [i]), v) for i, v in enumerate(fan.rays)
    })


def divisor_from_ray_coefficients(fan: Fan, coeffs: Sequence) -> QCartierDivisor:
    """The divisor with ``coeffs[i]`` along ray ``i`` on a simplicial fan.

    On each maximal cone the representative is taken in the span of the
    cone's rays, which makes it unique.
    """
    if not fan.is_simplicial():
        raise NotSimplicial("ray coefficients determine a Q-Cartier divisor only on simplicial fans")
    if len(coeffs) != len(fan.rays):
        raise FanError(f"expected {len(fan.rays)} ray coefficients, got {len(coeffs)}")
    eqs = {}
    for c in fan.maximal_cones:
        idx = sorted(c)
        V = [fan.rays[i] for i in idx]
        if not V:
            eqs[c] = (Fraction(0),) * fan.rank
            continue
        gram = la.matmul(V, la.transpose(V))
        a = la.solve_unique(gram, [la.as_fraction(coeffs[i]) for i in idx])
        eqs[c] = tuple(sum((a[k] * V[k][j] for k in range(len(idx))), Fraction(0)) for j in range(fan.rank))
    return QCartierDivisor(fan, eqs)


def toric_divisor(fan: Fan, i: int) -> QCartierDivisor:
    """The divisor ``D_i`` of ray ``i`` (simplicial fans)."""
    return divisor_from_ray_coefficients(fan, [int(j == i) for j in range(len(fan.rays))])


def cartier_space(fan: Fan) -> list:
    """A basis of all Q-Cartier divisors, as dictionaries of local equations."""
    n = fan.rank
    maxes = fan.maximal_cones
    pos = {c: k for k, c in enumerate(maxes)}
    rows = []
    for a, b in itertools.combinations(maxes, 2):
        for i in a & b:
            row = [0] * (n * len(maxes))
            for j in range(n):
                row[pos[a] * n + j] += fan.rays[i][j]
                row[pos[b] * n + j] -= fan.rays[i][j]
            rows.append(row)
    kernel = la.nullspace(rows, n * len(maxes))
    return [{c: tuple(vec[pos[c] * n:(pos[c] + 1) * n]) for c in maxes} for vec in kernel]


# -- polytopes and volumes -------------------------------------------------

@dataclass(frozen=True)
class LatticePolytope:
    vertices: tuple
    dim: int


def _affine_dim(points: Sequence[Sequence]) -> int:
    if not points:
        return -1
    return la.rank([la.vsub(p, points[0]) for p in points[1:]]) if len(points) > 1 else 0


def _in_convex_hull(p: Sequence, points: Sequence[Sequence]) -> bool:
    if not points:
        return False
    n = len(p)
    A = [[q[i] for q in points] for i in range(n)] + [[1] * len(points)]
    return la.nonnegative_solution(A, list(p) + [1]) is not None


def convex_hull_vertices(points: Sequence[Sequence]) -> list:
    pts = []
    for p in points:
        p = tuple(la.as_fraction(a) for a in p)
        if p not in pts:
            pts.append(p)
    return [p for k, p in enumerate(pts) if not _in_convex_hull(p, pts[:k] + pts[k + 1:])]


def polytope_of(D: QCartierDivisor, check: bool = True) -> LatticePolytope:
    """Hull of ``-m_sigma`` over maximal cones, with the correspondence check.

    The check requires the points to be pairwise distinct, each a vertex of
    the hull, and the hull to satisfy ``<u, v_i> >= -a_i`` for every ray,
    where ``a_i`` is the coefficient of ``D`` along ray ``i``.  The last
    condition rules out divisors whose points form a polytope with the
    orientation reversed.
    """
    fan = D.fan
    if check and fan.is_complete() is not True:
        raise CorrespondenceFailed("polytope correspondence needs a complete fan")
    pts = [tuple(-a for a in D._eqs[c]) for c in fan.maximal_cones]
    verts = convex_hull_vertices(pts)
    if check:
        if len(set(pts)) != len(pts):
            raise CorrespondenceFailed("two maximal cones share the point -m_sigma")
        if len(verts) != len(pts):
            raise CorrespondenceFailed("some -m_sigma is not a vertex of the hull")
        coeffs = divisor_cycle(D)
        for i, v in enumerate(fan.rays):
            a = coeffs.coefficient([i])
            if any(la.dot(u, v) < -a for u in pts):
                raise CorrespondenceFailed(f"hull leaves the half-space of ray {i}")
    verts.sort()
    return LatticePolytope(tuple(verts), _affine_dim(verts))


def lattice_volume(vertices: Sequence[Sequence]) -> Fraction:
    """Normalized volume of a simplex relative to the lattice of its affine span.

    A unimodular ``k``-simplex has volume ``1/k!``; degenerate simplices have
    volume 0.
    """
    verts = [tuple(la.as_fraction(a) for a in u) for u in vertices]
    k = len(verts) - 1
    if k <= 0:
        return Fraction(1) if k == 0 else Fraction(0)
    edges = [la.vsub(u, verts[0]) for u in verts[1:]]
    if la.rank(edges) < k:
        return Fraction(0)
    n = len(verts[0])
    # lattice of the affine span: saturation of the integral span direction
    direction = [la.clear_denominators(e) for e in edges]
    basis, _ = la.saturate(direction, n)
    coords = [basis.coordinates(e) for e in edges]
    return abs(la.det(coords)) / math.factorial(k)


def _triangulate(points: list) -> list:
    """Simplices (as vertex lists) triangulating the hull of ``points``."""
    verts = sorted(convex_hull_vertices(points))
    d = _affine_dim(verts)
    if d <= 0:
        return [verts[:1]] if verts else []
    if len(verts) == d + 1:
        return [verts]
    apex = verts[0]
    lifted = [(Fraction(1),) + v for v in verts]
    out = []
    for local, _ in _facets_of(lifted, d + 1):
        if 0 in local:
            continue
        facet = [verts[i] for i in sorted(local)]
        for simplex in _triangulate(facet):
            out.append([apex] + simplex)
    return out


def polytope_volume(P) -> Fraction:
    """Lattice volume of a polytope given as a :class:`LatticePolytope` or point list.

    Polytopes of less than full dimension have volume 0.
    """
    verts = list(P.vertices if isinstance(P, LatticePolytope) else P)
    if not verts:
        return Fraction(0)
    n = len(verts[0])
    verts = [tuple(la.as_fraction(a) for a in v) for v in verts]
    if _affine_dim(verts) < n:
        return Fraction(0)
    return sum((lattice_volume(s) for s in _triangulate(verts)), Fraction(0))
