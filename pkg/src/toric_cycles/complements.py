"""Choices of complements and the projections they induce.

A choice assigns to every cone ``sigma`` a subspace ``Psi(sigma)`` of
M (x) Q complementary to ``sigma^perp`` and growing along faces.  The
projection ``pi_sigma`` has image ``sigma^perp`` and kernel ``Psi(sigma)``.

Three variants are provided: an inner product (``Psi(sigma)`` is the
orthogonal complement of ``sigma^perp``), a flag (``Psi(sigma)`` is the
flag member of dimension ``dim sigma``) and explicit per-cone bases.
Inner products and flags are not tied to a fan; projections are always
requested together with the fan whose cone is meant.
"""

from __future__ import annotations

import random
from typing import Mapping, Optional, Sequence

from . import linalg as la
from .errors import (
    ComplementarityFailed,
    FanError,
    FanMismatch,
    IncompatibleAt,
    NestednessFailed,
    NotGeneric,
    NotPositiveDefinite,
    NotSymmetric,
)
from .fan import Fan


def _span_basis(fan: Fan, cone) -> list:
    vecs = fan.ray_vectors(cone)
    return [vecs[i] for i in la.independent_subset(vecs)]


class ComplementChoice:
    """Base class; subclasses implement :meth:`basis`."""

    kind = "abstract"

    def __init__(self, rank: int):
        self.rank = rank
        self._projectors: dict = {}
        self._generators: dict = {}

    def basis(self, fan: Fan, cone) -> list:
        raise NotImplementedError

    def _check_fan(self, fan: Fan) -> None:
        if fan.rank != self.rank:
            raise FanMismatch(f"complement choice has rank {self.rank}, fan has rank {fan.rank}")

    def projector(self, fan: Fan, cone) -> tuple:
        """Matrix P with ``pi_sigma(m) = P m``."""
        cone = frozenset(cone)
        key = (fan, cone)
        P = self._projectors.get(key)
        if P is None:
            self._check_fan(fan)
            n = self.rank
            V = _span_basis(fan, cone)
            Q = self.basis(fan, cone)
            if not V:
                P = tuple(tuple(r) for r in la.identity(n))
            else:
                VQ = la.matmul(V, la.transpose(Q))
                if len(Q) != len(V) or la.rank(VQ) < len(V):
                    raise ComplementarityFailed(cone)
                # m - Q^T (V Q^T)^{-1} V m
                corr = la.matmul(la.matmul(la.transpose(Q), la.inverse(VQ)), V)
                P = tuple(tuple(int(i == j) - corr[i][j] for j in range(n)) for i in range(n))
            self._projectors[key] = P
        return P

    def project(self, fan: Fan, cone, m: Sequence) -> tuple:
        return tuple(la.matvec(self.projector(fan, cone), [la.as_fraction(a) for a in m]))

    def effective_generator(self, fan: Fan, tau, sigma) -> tuple:
        """``g`` with ``<pi_sigma(m), n_{tau,sigma}> = <m, g>`` for all m."""
        key = (fan, frozenset(tau), frozenset(sigma))
        g = self._generators.get(key)
        if g is None:
            P = self.projector(fan, sigma)
            n = fan.primitive_quotient_generator(tau, sigma)
            g = tuple(la.matvec(la.transpose(P), n))
            self._generators[key] = g
        return g


class InnerProduct(ComplementChoice):
    kind = "inner_product"

    def __init__(self, gram: Sequence[Sequence]):
        G = [[la.as_fraction(a) for a in row] for row in gram]
        n = len(G)
        if any(len(row) != n for row in G):
            raise NotSymmetric("gram matrix is not square")
        if any(G[i][j] != G[j][i] for i in range(n) for j in range(n)):
            raise NotSymmetric("gram matrix is not symmetric")
        for k in range(1, n + 1):
            if la.det([row[:k] for row in G[:k]]) <= 0:
                raise NotPositiveDefinite(f"leading minor of size {k} is not positive")
        super().__init__(n)
        self.gram = tuple(tuple(r) for r in G)
        self.inverse_gram = tuple(tuple(r) for r in la.inverse(G)) if n else ()

    def omega(self, v: Sequence) -> tuple:
        """The element of M (x) Q representing pairing with ``v`` under the inner product."""
        return tuple(la.matvec(self.inverse_gram, v))

    def basis(self, fan: Fan, cone) -> list:
        return [self.omega(v) for v in _span_basis(fan, cone)]

    def __repr__(self):
        return f"InnerProduct({[[la.format_rational(a) for a in r] for r in self.gram]})"


class Flag(ComplementChoice):
    kind = "flag"

    def __init__(self, vectors: Sequence[Sequence]):
        F = [tuple(la.as_fraction(a) for a in f) for f in vectors]
        n = len(F)
        if any(len(f) != n for f in F) or (n and la.rank(F) < n):
            raise NotGeneric(frozenset())
        super().__init__(n)
        self.vectors = tuple(F)

    def basis(self, fan: Fan, cone) -> list:
        return list(self.vectors[: fan.dim(cone)])

    def is_generic_for(self, fan: Fan, cone) -> bool:
        V = _span_basis(fan, cone)
        if not V:
            return True
        return la.rank(la.matmul(V, la.transpose(self.basis(fan, cone)))) == len(V)

    def check_generic(self, fan: Fan) -> None:
        self._check_fan(fan)
        for c in fan.cones:
            if not self.is_generic_for(fan, c):
                raise NotGeneric(c)

    def projector(self, fan: Fan, cone):
        try:
            return super().projector(fan, cone)
        except ComplementarityFailed:
            raise NotGeneric(frozenset(cone)) from None

    def normal(self, k: Optional[int] = None) -> tuple:
        """The vector ``w`` of N (x) Q killing ``f_1..f_{k-1}`` with ``<f_k, w> = 1``."""
        k = self.rank if k is None else k
        return tuple(la.solve_unique([list(f) for f in self.vectors], [int(i == k - 1) for i in range(self.rank)]))

    def __repr__(self):
        return f"Flag({[[la.format_rational(a) for a in f] for f in self.vectors]})"


class Explicit(ComplementChoice):
    kind = "explicit"

    def __init__(self, fan: Fan, mapping: Mapping):
        super().__init__(fan.rank)
        self.fan = fan
        bases = {}
        for cone, vecs in mapping.items():
            cone = frozenset(cone)
            if cone not in fan:
                raise FanError(f"{sorted(cone)} is not a cone of the fan")
            bases[cone] = tuple(tuple(la.as_fraction(a) for a in v) for v in vecs)
        bases.setdefault(frozenset(), ())
        for c in fan.cones:
            if c not in bases:
                raise ComplementarityFailed(c)
        self.bases = {c: bases[c] for c in fan.cones}
        for c in fan.cones:
            Q = self.bases[c]
            if len(Q) != fan.dim(c) or any(len(q) != self.rank for q in Q):
                raise ComplementarityFailed(c)
            self.projector(fan, c)
        for c in fan.cones:
            for f in fan.facets(c):
                span = self.bases[c]
                for q in self.bases[f]:
                    if not la.row_space_contains(span, q):
                        raise NestednessFailed(f, c)

    def basis(self, fan: Fan, cone) -> list:
        if fan != self.fan:
            raise FanMismatch("explicit complements belong to a different fan")
        return list(self.bases[frozenset(cone)])

    def __repr__(self):
        return f"Explicit({len(self.bases)} cones)"


def from_inner_product(gram: Sequence[Sequence]) -> InnerProduct:
    return InnerProduct(gram)


def from_flag(vectors: Sequence[Sequence], fan: Optional[Fan] = None) -> Flag:
    """A flag choice; when ``fan`` is given, genericity is checked on all its cones."""
    flag = Flag(vectors)
    if fan is not None:
        flag.check_generic(fan)
    return flag


def explicit(fan: Fan, mapping: Mapping) -> Explicit:
    return Explicit(fan, mapping)


def as_explicit(psi: ComplementChoice, fan: Fan) -> Explicit:
    """Freeze any choice into explicit bases on ``fan``."""
    return Explicit(fan, {c: psi.basis(fan, c) for c in fan.cones})


def project(psi: ComplementChoice, fan: Fan, cone, m: Sequence) -> tuple:
    return psi.project(fan, cone, m)


def project_between(psi: ComplementChoice, fan: Fan, sigma, tau, m: Sequence) -> tuple:
    """The induced map from classes modulo ``tau^perp`` to ``sigma^perp`` modulo ``tau^perp``.

    ``sigma`` must be a face of ``tau``.  Any representative ``m`` may be
    passed; the result is a representative of the image class.
    """
    sigma, tau = frozenset(sigma), frozenset(tau)
    if not sigma <= tau or sigma not in fan or tau not in fan:
        raise FanError(f"{sorted(sigma)} is not a face of {sorted(tau)}")
    return psi.project(fan, sigma, m)


def congruent_modulo_perp(fan: Fan, cone, a: Sequence, b: Sequence) -> bool:
    diff = la.vsub(a, b)
    return all(la.dot(diff, v) == 0 for v in fan.ray_vectors(cone))


def check_pushforward_compatible(psi: ComplementChoice, psi_src: ComplementChoice, morphism) -> None:
    """Check ``phi^*(Psi(c(s))) <= Psi'(s)`` for every equal-codimension source cone ``s``."""
    phiT = la.transpose(morphism.matrix)
    for s in morphism.source.cones:
        t = morphism.image_cone(s)
        if morphism.target.codim(t) != morphism.source.codim(s):
            continue
        span = psi_src.basis(morphism.source, s)
        for q in psi.basis(morphism.target, t):
            image = la.matvec(phiT, q)
            if any(image) and not la.row_space_contains(span, image):
                raise IncompatibleAt(s)


# -- random choices for property tests ------------------------------------

def random_gram(n: int, rng: random.Random, bound: int = 3) -> list:
    """``B^T B + I`` for a random integer ``B``; positive definite by construction."""
    B = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]
    BtB = la.matmul(la.transpose(B), B)
    return [[BtB[i][j] + (1 if i == j else 0) for j in range(n)] for i in range(n)]


def random_flag(fan: Fan, rng: random.Random, bound: int = 4, attempts: int = 200) -> Flag:
    n = fan.rank
    for _ in range(attempts):
        F = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]
        if la.rank(F) < n:
            continue
        flag = Flag(F)
        if all(flag.is_generic_for(fan, c) for c in fan.cones):
            return flag
    raise NotGeneric(frozenset())  # pragma: no cover - practically unreachable


def random_explicit(fan: Fan, rng: random.Random, bound: int = 4, attempts: int = 200) -> Explicit:
    """Random explicit choice.

    On simplicial fans each ray gets a random line and a cone gets the span
    of its rays' lines, which makes nestedness automatic.  Otherwise the
    bases of a random inner product are frozen.
    """
    n = fan.rank
    if not fan.is_simplicial():
        return as_explicit(InnerProduct(random_gram(n, rng)), fan)
    for _ in range(attempts):
        lines = [tuple(rng.randint(-bound, bound) for _ in range(n)) for _ in fan.rays]
        mapping = {c: [lines[i] for i in sorted(c)] for c in fan.cones}
        try:
            return Explicit(fan, mapping)
        except ComplementarityFailed:
            continue
    raise ComplementarityFailed(frozenset())  # pragma: no cover
