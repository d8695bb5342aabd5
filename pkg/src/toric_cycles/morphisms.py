"""Toric morphisms: pushforward, pullback, subdivisions and the projection formula."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg as la
from .complements import ComplementChoice, Flag, InnerProduct, check_pushforward_compatible
from .divisors import Cycle, QCartierDivisor, local_equation, polytope_volume
from .errors import (
    CannotSimplicialize,
    ConeNotMapped,
    FanError,
    FanMismatch,
    NotProper,
    RayOutsideSupport,
    ToricError,
)
from .fan import Fan, build_fan
from .intersection import Evaluator, intersect
from .polynomial import Polynomial


class Properness(enum.Enum):
    YES = "yes"
    NO = "no"
    UNDECIDED = "undecided"


class ToricMorphism:
    """A lattice map ``phi: N' -> N`` (an ``n x n'`` integer matrix) compatible with the fans.

    ``image_cone(s)`` is the smallest cone of the target containing the
    image of the source cone ``s``.
    """

    def __init__(self, matrix: Sequence[Sequence[int]], source: Fan, target: Fan):
        self.matrix = tuple(tuple(int(a) for a in row) for row in matrix)
        if len(self.matrix) != target.rank or any(len(r) != source.rank for r in self.matrix):
            raise FanError(f"matrix must be {target.rank} x {source.rank}")
        self.source = source
        self.target = target
        images = [tuple(la.matvec(self.matrix, v)) for v in source.rays] if target.rank else [() for _ in source.rays]
        self.ray_images = images
        self._image: dict = {}
        for s in source.cones:
            pts = [images[i] for i in s]
            t = target.smallest_cone_containing(pts) if pts else frozenset()
            if t is None:
                raise ConeNotMapped(s)
            self._image[s] = t

    def image_cone(self, cone) -> frozenset:
        return self._image[frozenset(cone)]

    @property
    def transpose(self) -> list:
        return la.transpose(self.matrix) if self.matrix else [[] for _ in range(self.source.rank)]

    def pull_character(self, m: Sequence) -> tuple:
        """``phi^*`` on M (x) Q."""
        return tuple(sum((la.as_fraction(m[i]) * self.matrix[i][j] for i in range(self.target.rank)), Fraction(0))
                     for j in range(self.source.rank))

    def pushforward_index(self, cone) -> int:
        """``[M'(s) : phi^*(M(c(s)))]`` when codimensions agree, else 0."""
        s = frozenset(cone)
        t = self.image_cone(s)
        if self.target.codim(t) != self.source.codim(s):
            return 0
        sub_src = self.source.geometry(s).perp
        images = [self.pull_character(p) for p in self.target.geometry(t).perp.vectors]
        if not images:
            return 1
        coords = [sub_src.coordinates(v) for v in images]
        if any(x.denominator != 1 for row in coords for x in row):
            raise ToricError("pulled back characters leave M'(s)")  # pragma: no cover
        return abs(int(la.det(coords)))

    def __repr__(self):
        return f"ToricMorphism({[list(r) for r in self.matrix]})"


def build_morphism(matrix: Sequence[Sequence[int]], source: Fan, target: Fan) -> ToricMorphism:
    return ToricMorphism(matrix, source, target)


def identity_morphism(source: Fan, target: Fan) -> ToricMorphism:
    n = target.rank
    return ToricMorphism(la.identity(n), source, target)


def _truncated_volume(points: list, basis, normal: Sequence) -> Fraction:
    """Volume of the hull of 0 and ``points`` scaled to ``<normal, x> = 1``, in ``basis`` coordinates."""
    pts = [tuple(Fraction(0) for _ in basis.vectors)]
    for p in points:
        h = la.dot(normal, p)
        pts.append(tuple(a / h for a in basis.coordinates(p)))
    return polytope_volume(pts)


def _covers(f: ToricMorphism, t: frozenset) -> bool:
    """Whether images of source cones fill the target cone ``t`` (phi injective)."""
    target = f.target
    d = target.dim(t)
    if d == 0:
        return any(f.image_cone(s) == t for s in f.source.cones)
    basis = target.geometry(t).span
    normal = [sum(col) for col in zip(*target.halfspaces(t).inequalities)]
    whole = _truncated_volume(target.ray_vectors(t), basis, normal)
    covered = Fraction(0)
    for s in f.source.cones:
        if f.source.dim(s) == d and f.image_cone(s) <= t:
            covered += _truncated_volume([f.ray_images[i] for i in sorted(s)], basis, normal)
    return covered == whole


def is_proper_restricted(f: ToricMorphism) -> Properness:
    """Decide properness for two classes of morphisms.

    If ``phi`` is square and invertible over Q, properness is equivalent to
    the images of source cones filling the target support, which is checked
    by comparing volumes of truncated cones.  If both fans are complete the
    morphism is proper.  Otherwise the answer is undecided.
    """
    n, n_src = f.target.rank, f.source.rank
    if n == n_src and (n == 0 or la.rank(f.matrix) == n):
        for t in f.target.maximal_cones:
            if not _covers(f, t):
                return Properness.NO
        return Properness.YES
    if f.source.is_complete() is True and f.target.is_complete() is True:
        return Properness.YES
    return Properness.UNDECIDED


def pushforward(f: ToricMorphism, z: Cycle, check: bool = True) -> Cycle:
    if z.fan != f.source:
        raise FanMismatch("cycle does not live on the source fan")
    if check and is_proper_restricted(f) is not Properness.YES:
        raise NotProper("pushforward needs a morphism known to be proper")
    out: dict = {}
    for s, c in z:
        k = f.pushforward_index(s)
        if k:
            t = f.image_cone(s)
            out[t] = out.get(t, 0) + k * c
    return Cycle(f.target, out)


def pullback_divisor(f: ToricMorphism, D: QCartierDivisor) -> QCartierDivisor:
    if D.fan != f.target:
        raise FanMismatch("divisor does not live on the target fan")
    return QCartierDivisor(f.source, {
        s: f.pull_character(local_equation(D, f.image_cone(s))) for s in f.source.maximal_cones
    })


# -- subdivisions ---------------------------------------------------------------

def star_subdivision(fan: Fan, ray: Sequence[int]) -> tuple:
    """Star subdivision at a primitive vector in the support.

    Every cone containing ``ray`` is replaced by the cones spanned by
    ``ray`` and those of its facets that do not contain it.  Returns the
    new fan and the identity morphism to ``fan``.  Subdividing at an
    existing ray returns the fan unchanged.
    """
    ray = tuple(int(a) for a in ray)
    if len(ray) != fan.rank or not la.is_primitive(ray):
        raise FanError(f"{ray} is not a primitive vector of rank {fan.rank}")
    if ray in fan.rays:
        return fan, identity_morphism(fan, fan)
    owner = fan.smallest_cone_containing([ray])
    if owner is None:
        raise RayOutsideSupport(f"{ray} is outside the support of the fan")
    new = len(fan.rays)
    cones = []

    def split(c: frozenset) -> list:
        if not fan.contains_point(c, ray):
            return [c]
        return [f | {new} for f in fan.facets(c) if not fan.contains_point(f, ray)]

    for c in fan.maximal_cones:
        for piece in split(c):
            if piece not in cones:
                cones.append(piece)
    sub = build_fan(fan.rank, list(fan.rays) + [ray], cones)
    return sub, identity_morphism(sub, fan)


def simplicialize(fan: Fan, max_steps: int = 64) -> tuple:
    """Star-subdivide at interior points of non-simplicial cones until simplicial."""
    current = fan
    for _ in range(max_steps):
        bad = [c for c in current.cones if len(c) != current.dim(c)]
        if not bad:
            return current, identity_morphism(current, fan)
        c = min(bad, key=lambda c: (current.dim(c), sorted(c)))
        v = la.primitive([sum(col) for col in zip(*current.ray_vectors(c))])
        current, _ = star_subdivision(current, v)
    raise CannotSimplicialize(f"fan not simplicial after {max_steps} subdivisions")


def compatible_complements(f: ToricMorphism, psi: ComplementChoice) -> ComplementChoice:
    """A source choice compatible with ``psi`` for ``phi`` square and invertible.

    An inner product is transported so that ``phi^*`` is an isometry; a flag
    is pulled back vector by vector.
    """
    n = f.target.rank
    if f.source.rank != n or la.rank(f.matrix) < n:
        raise ToricError("compatible complements are only built for invertible lattice maps")
    if isinstance(psi, InnerProduct):
        inv = la.inverse(f.matrix)
        return InnerProduct(la.matmul(la.matmul(inv, psi.gram), la.transpose(inv)))
    if isinstance(psi, Flag):
        return Flag([f.pull_character(v) for v in psi.vectors])
    raise ToricError("compatible complements need an inner product or a flag")


def product_on_nonsimplicial(divisors: Sequence[QCartierDivisor], psi: ComplementChoice,
                             fan: Optional[Fan] = None, p: Optional[Polynomial] = None) -> Cycle:
    """``p(E_1..E_k) . [X]`` computed on a simplicial refinement and pushed forward.

    By default ``p`` is the product ``E_1 ... E_k``.
    """
    fan = fan or divisors[0].fan
    if p is None:
        p = Polynomial.monomial([1] * len(divisors))
    sub, f = simplicialize(fan)
    psi_src = compatible_complements(f, psi)
    pulled = [pullback_divisor(f, E) for E in divisors]
    upstairs = Evaluator(pulled, psi_src, sub).evaluate(p, Cycle.fundamental(sub))
    return pushforward(f, upstairs)


@dataclass(frozen=True)
class ProjectionReport:
    lhs: Cycle
    rhs: Cycle

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def projection_formula_check(f: ToricMorphism, D: QCartierDivisor, z: Cycle,
                             psi: ComplementChoice, psi_src: ComplementChoice) -> ProjectionReport:
    """Both sides of ``f_*(f^*D . z) = D . f_*(z)``."""
    check_pushforward_compatible(psi, psi_src, f)
    lhs = pushforward(f, intersect(pullback_divisor(f, D), z, psi_src))
    rhs = intersect(D, pushforward(f, z, check=False), psi)
    return ProjectionReport(lhs, rhs)


def inverse_image_cones(f: ToricMorphism, cone) -> list:
    """Source cones whose image cone is exactly ``cone``."""
    cone = frozenset(cone)
    return [s for s in f.source.cones if f.image_cone(s) == cone]
