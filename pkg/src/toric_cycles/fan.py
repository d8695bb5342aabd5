"""Fans of strongly convex rational polyhedral cones.

A cone is identified by the frozenset of indices of its rays; the zero cone
is ``frozenset()``.  Ray sets of distinct cones are distinct, so this is a
faithful label.  ``Fan.cones`` lists every cone ordered by dimension and then
lexicographically by sorted ray indices, and ``Fan.cone_id`` gives the
position in that list.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from . import linalg as la
from .errors import (
    FanError,
    IntersectionNotAFace,
    NonPrimitiveRay,
    NotAFacetPair,
    NotStronglyConvex,
    RayNotExtremal,
)

Cone = frozenset


def cone_key(cone: Iterable[int]) -> tuple:
    s = tuple(sorted(cone))
    return (len(s), s)


@dataclass(frozen=True)
class ConeGeometry:
    """Lattice data attached to one cone."""

    cone: Cone
    dim: int
    span: la.LatticeBasis          # N_sigma, saturated
    chart: la.QuotientChart        # coordinates on N(sigma) = N / N_sigma
    perp: la.LatticeBasis          # M(sigma) = M ∩ sigma^perp
    multiplicity: int


@dataclass(frozen=True)
class HalfspaceData:
    """Inequality description of a cone: equations vanish on it, inequalities are >= 0."""

    equations: tuple
    inequalities: tuple

    def contains(self, x: Sequence) -> bool:
        return all(la.dot(e, x) == 0 for e in self.equations) and all(
            la.dot(h, x) >= 0 for h in self.inequalities
        )

    def in_relative_interior(self, x: Sequence) -> bool:
        return all(la.dot(e, x) == 0 for e in self.equations) and all(
            la.dot(h, x) > 0 for h in self.inequalities
        )


def _facets_of(rays: Sequence[Sequence[int]], dim: int) -> list[tuple[frozenset, tuple]]:
    """Facets of the cone over ``rays`` as (local ray-index set, inward normal).

    Brute-force double description: every facet is spanned by ``dim - 1``
    independent rays, so try all such subsets and keep the supporting ones.
    """
    k = len(rays)
    if dim == 0:
        return []
    found: dict[frozenset, tuple] = {}
    n = len(rays[0])
    for subset in itertools.combinations(range(k), dim - 1):
        sub = [rays[i] for i in subset]
        if sub and la.rank(sub) != dim - 1:
            continue
        kernel = la.nullspace(sub, n) if sub else la.nullspace([], n)
        normal = None
        for kv in kernel:
            values = [la.dot(kv, r) for r in rays]
            if any(values):
                normal = kv
                break
        if normal is None:
            continue
        values = [la.dot(normal, r) for r in rays]
        if all(v >= 0 for v in values):
            pass
        elif all(v <= 0 for v in values):
            normal = la.vscale(-1, normal)
        else:
            continue
        on = frozenset(i for i in range(k) if la.dot(normal, rays[i]) == 0)
        if on not in found:
            found[on] = la.clear_denominators(normal)
    return list(found.items())


def _is_strongly_convex(rays: Sequence[Sequence[int]], n: int) -> bool:
    if not rays:
        return True
    # a line exists iff 0 is a nontrivial nonnegative combination of the rays
    return not _zero_is_positive_combination(rays, n)


def _zero_is_positive_combination(rays, n) -> bool:
    A = [[r[i] for r in rays] for i in range(n)] + [[1] * len(rays)]
    return la.nonnegative_solution(A, [0] * n + [1]) is not None


class Fan:
    """A validated fan in N = Z^rank.

    Build one with :func:`build_fan`; the constructor trusts its input.
    """

    def __init__(self, rank: int, rays, cones_with_dims: dict, maximal_cones):
        self.rank = rank
        self.rays: tuple = tuple(tuple(int(a) for a in r) for r in rays)
        self._dims: dict = dict(cones_with_dims)
        self.cones: tuple = tuple(sorted(self._dims, key=cone_key))
        self.maximal_cones: tuple = tuple(sorted(maximal_cones, key=cone_key))
        self._index = {c: i for i, c in enumerate(self.cones)}
        self._geometry: dict = {}
        self._halfspaces: dict = {}
        self._facets: dict = {}
        self._over: dict = {}
        self._hash = hash((self.rank, self.rays, self.maximal_cones))

    # -- identity ---------------------------------------------------------
    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Fan):
            return NotImplemented
        return (self.rank, self.rays, self.maximal_cones) == (other.rank, other.rays, other.maximal_cones)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Fan(rank={self.rank}, rays={len(self.rays)}, cones={len(self.cones)})"

    # -- basic queries ----------------------------------------------------
    def __contains__(self, cone) -> bool:
        return frozenset(cone) in self._dims

    def cone_id(self, cone) -> int:
        return self._index[frozenset(cone)]

    def dim(self, cone) -> int:
        return self._dims[frozenset(cone)]

    def codim(self, cone) -> int:
        return self.rank - self.dim(cone)

    def ray_vectors(self, cone) -> list:
        return [self.rays[i] for i in sorted(cone)]

    def cones_of_dim(self, d: int) -> list:
        return [c for c in self.cones if self._dims[c] == d]

    @property
    def zero_cone(self) -> Cone:
        return frozenset()

    def faces(self, cone) -> list:
        cone = frozenset(cone)
        return [c for c in self.cones if c <= cone]

    def facets(self, cone) -> list:
        cone = frozenset(cone)
        if cone not in self._facets:
            d = self._dims[cone]
            self._facets[cone] = [c for c in self.cones if c < cone and self._dims[c] == d - 1]
        return self._facets[cone]

    def cones_over(self, cone) -> list:
        """Cones having ``cone`` as a facet."""
        cone = frozenset(cone)
        if cone not in self._over:
            d = self._dims[cone]
            self._over[cone] = [c for c in self.cones if c > cone and self._dims[c] == d + 1]
        return self._over[cone]

    def cones_containing(self, cone) -> list:
        cone = frozenset(cone)
        return [c for c in self.cones if c >= cone]

    def maximal_cones_containing(self, cone) -> list:
        cone = frozenset(cone)
        return [c for c in self.maximal_cones if c >= cone]

    # -- classification ---------------------------------------------------
    def is_simplicial(self) -> bool:
        return all(len(c) == d for c, d in self._dims.items())

    def is_smooth(self) -> bool:
        return self.is_simplicial() and all(self.multiplicity(c) == 1 for c in self.maximal_cones)

    def is_complete(self) -> Optional[bool]:
        """Completeness by facet counting; ``None`` means undecided.

        Complete when every maximal cone is full-dimensional and every
        codimension-one cone lies in exactly two maximal cones.  A
        lower-dimensional maximal cone or a codimension-one cone on only one
        maximal cone is a definite boundary, so the answer is ``False``.
        """
        n = self.rank
        if any(self._dims[c] < n for c in self.maximal_cones):
            return False
        counts = [len(self.cones_over(t)) for t in self.cones_of_dim(n - 1)] if n > 0 else []
        if n > 0 and any(k < 2 for k in counts):
            return False
        if any(k > 2 for k in counts) or len(self.rays) < n + 1:
            return None
        return True

    def multiplicity(self, cone) -> int:
        return self.geometry(cone).multiplicity

    # -- geometry ---------------------------------------------------------
    def geometry(self, cone) -> ConeGeometry:
        cone = frozenset(cone)
        geo = self._geometry.get(cone)
        if geo is None:
            n = self.rank
            vecs = self.ray_vectors(cone)
            span, _ = la.saturate(vecs, n)
            chart = la.quotient_coordinates(n, span)
            perp = la.LatticeBasis(n, tuple(la.integer_kernel(vecs, n)) if vecs else
                                   tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), True)
            if vecs:
                mult = 1
                for d in la.invariant_factors(vecs):
                    mult *= d
            else:
                mult = 1
            geo = ConeGeometry(cone, self._dims[cone], span, chart, perp, mult)
            self._geometry[cone] = geo
        return geo

    def halfspaces(self, cone) -> HalfspaceData:
        cone = frozenset(cone)
        hs = self._halfspaces.get(cone)
        if hs is None:
            vecs = self.ray_vectors(cone)
            eqs = self.geometry(cone).perp.vectors
            ineqs = tuple(normal for _, normal in _facets_of(vecs, self._dims[cone])) if vecs else ()
            hs = HalfspaceData(tuple(eqs), ineqs)
            self._halfspaces[cone] = hs
        return hs

    def contains_point(self, cone, x: Sequence) -> bool:
        return self.halfspaces(cone).contains(x)

    def smallest_cone_containing(self, points: Sequence[Sequence]) -> Optional[Cone]:
        for c in self.cones:
            if all(self.contains_point(c, p) for p in points):
                return c
        return None

    def primitive_quotient_generator(self, tau, sigma) -> tuple:
        """Lift in N_tau of the primitive generator of the image of tau in N(sigma)."""
        tau, sigma = frozenset(tau), frozenset(sigma)
        if not (sigma < tau and self._dims[tau] == self._dims[sigma] + 1):
            raise NotAFacetPair(f"{sorted(sigma)} is not a facet of {sorted(tau)}")
        key = ("gen", tau, sigma)
        cached = self._geometry.get(key)
        if cached is not None:
            return cached
        big = self.geometry(tau).span
        small = self.geometry(sigma).span
        # coordinates of N_sigma inside N_tau
        coords = [[int(a) for a in big.coordinates(v)] for v in small.vectors]
        local = la.quotient_coordinates(big.rank, la.LatticeBasis(big.rank, tuple(coords), True))
        gen = local.lift((1,))
        witness = next(i for i in tau - sigma)
        wcoord = local.project([int(a) for a in big.coordinates(self.rays[witness])])
        if wcoord[0] < 0:
            gen = local.lift((-1,))
        vec = tuple(sum(g * b[j] for g, b in zip(gen, big.vectors)) for j in range(self.rank))
        self._geometry[key] = vec
        return vec

    def star(self, cone) -> "Fan":
        """The fan of V(cone) in the quotient lattice N(cone)."""
        sigma = frozenset(cone)
        chart = self.geometry(sigma).chart
        over = self.cones_over(sigma)
        rays = [la.primitive(chart.project(self.primitive_quotient_generator(g, sigma))) for g in over]
        pos = {g: i for i, g in enumerate(over)}
        maxes = []
        for t in self.maximal_cones_containing(sigma):
            maxes.append(frozenset(pos[g] for g in over if g <= t))
        return build_fan(chart.quotient_rank, rays, maxes)

    def affine_fan(self, cone) -> "Fan":
        """The fan consisting of ``cone`` and its faces, with ray indices renumbered."""
        cone = frozenset(cone)
        idx = sorted(cone)
        return build_fan(self.rank, [self.rays[i] for i in idx], [range(len(idx))])


def build_fan(rank: int, rays: Sequence[Sequence[int]], maximal_cones: Iterable[Iterable[int]]) -> Fan:
    """Validate the data of a fan and enumerate all faces.

    Raises one of :class:`NonPrimitiveRay`, :class:`NotStronglyConvex`,
    :class:`RayNotExtremal`, :class:`IntersectionNotAFace` or
    :class:`FanError`.
    """
    rays = [tuple(int(a) for a in r) for r in rays]
    for i, r in enumerate(rays):
        if len(r) != rank:
            raise FanError(f"ray {i} has {len(r)} coordinates, expected {rank}")
        if not la.is_primitive(r):
            raise NonPrimitiveRay(f"ray {i} = {r} is not primitive")
    if len(set(rays)) != len(rays):
        raise FanError("rays are not pairwise distinct")
    cones_in = [frozenset(int(i) for i in c) for c in maximal_cones]
    for c in cones_in:
        for i in c:
            if not 0 <= i < len(rays):
                raise FanError(f"cone {sorted(c)} refers to unknown ray {i}")
    if not cones_in:
        cones_in = [frozenset()]

    dims: dict = {frozenset(): 0}
    face_sets: dict = {}

    def faces_of(cone: frozenset) -> None:
        if cone in face_sets:
            return
        idx = sorted(cone)
        vecs = [rays[i] for i in idx]
        d = la.rank(vecs) if vecs else 0
        dims[cone] = d
        if len(idx) == d:
            face_sets[cone] = True
            for sub in itertools.chain.from_iterable(itertools.combinations(idx, k) for k in range(d)):
                f = frozenset(sub)
                dims.setdefault(f, len(sub))
                face_sets[f] = True
            return
        face_sets[cone] = True
        for local, _ in _facets_of(vecs, d):
            faces_of(frozenset(idx[i] for i in local))

    for c in cones_in:
        vecs = [rays[i] for i in sorted(c)]
        if not _is_strongly_convex(vecs, rank):
            raise NotStronglyConvex(f"cone {sorted(c)} contains a line")
        faces_of(c)
        for i in c:
            if frozenset([i]) not in dims:
                raise RayNotExtremal(f"ray {i} is not an extremal ray of cone {sorted(c)}")

    used = set().union(*cones_in)
    if used != set(range(len(rays))):
        raise FanError(f"rays {sorted(set(range(len(rays))) - used)} belong to no cone")

    maximal = [c for c in set(cones_in) if not any(c < o for o in cones_in)]
    fan = Fan(rank, rays, dims, maximal)

    for a, b in itertools.combinations(fan.maximal_cones, 2):
        shared = a & b
        if shared not in dims or not (shared in fan.faces(a) and shared in fan.faces(b)):
            raise IntersectionNotAFace(f"cones {sorted(a)} and {sorted(b)} meet outside a common face")
        positive = [rays[i] for i in a - shared] + [tuple(-x for x in rays[i]) for i in b - shared]
        zero = [rays[i] for i in shared]
        if not la.strictly_separable(positive, zero, rank):
            raise IntersectionNotAFace(f"cones {sorted(a)} and {sorted(b)} meet outside a common face")
    return fan
