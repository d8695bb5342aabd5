"""Standard fans used in examples and tests."""

from __future__ import annotations

import itertools
from fractions import Fraction

from . import linalg as la
from .fan import Fan, build_fan


def affine_space(n: int) -> Fan:
    return build_fan(n, [tuple(int(i == j) for j in range(n)) for i in range(n)], [range(n)])


def projective_space(n: int) -> Fan:
    """Rays ``e_1..e_n`` and ``-(e_1+...+e_n)``; every proper subset spans a cone."""
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)] + [tuple([-1] * n)]
    return build_fan(n, rays, itertools.combinations(range(n + 1), n))


def projective_space_gram(n: int) -> list:
    """Inner product on M induced from the standard one on Z^(n+1).

    ``P^n`` is realised in the sum-zero sublattice of Z^(n+1) with rays
    ``e_i - e_(i+1)`` taken cyclically.  In the basis given by the first
    ``n`` rays this is the fan of :func:`projective_space`, the pairing
    ``<omega(v_i), v_j>`` is the dot product in Z^(n+1), and the resulting
    inner product on M is the inverse of the Cartan matrix of type A_n.
    """
    cartan = [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)] for i in range(n)]
    return la.inverse(cartan)


def p1_product(k: int) -> Fan:
    """``(P^1)^k`` with rays ``e_1..e_k, -e_1..-e_k``."""
    rays = [tuple(int(i == j) for j in range(k)) for i in range(k)]
    rays += [tuple(-a for a in r) for r in rays]
    cones = [[i if s == 0 else i + k for i, s in enumerate(signs)] for signs in itertools.product((0, 1), repeat=k)]
    return build_fan(k, rays, cones)


def p1xp1() -> Fan:
    return p1_product(2)


def hirzebruch(a: int) -> Fan:
    return build_fan(2, [(1, 0), (0, 1), (-1, a), (0, -1)], [[0, 1], [1, 2], [2, 3], [3, 0]])


def weighted_projective_plane() -> Fan:
    """``P(1,1,2)``: complete, simplicial, one singular cone of multiplicity 2."""
    return build_fan(2, [(1, 0), (0, 1), (-1, -2)], [[0, 1], [1, 2], [0, 2]])


def blowup_affine_plane() -> Fan:
    return build_fan(2, [(1, 0), (1, 1), (0, 1)], [[0, 1], [1, 2]])


def square_cone() -> Fan:
    """The non-simplicial cone over a unit square in rank 3."""
    return build_fan(3, [(0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)], [range(4)])


def cube_fan() -> Fan:
    """Complete non-simplicial fan over the faces of the cube ``[-1,1]^3``."""
    rays = list(itertools.product((-1, 1), repeat=3))
    cones = []
    for axis in range(3):
        for sign in (-1, 1):
            cones.append([i for i, r in enumerate(rays) if r[axis] == sign])
    return build_fan(3, rays, cones)


def two_cones_rank3() -> Fan:
    """Two simplicial cones of different multiplicity sharing a facet."""
    return build_fan(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -2)], [[0, 1, 2], [0, 1, 3]])


def simplicial_family() -> dict:
    """Simplicial fixtures of rank at most 4."""
    return {
        "A1": affine_space(1),
        "A2": affine_space(2),
        "A3": affine_space(3),
        "P1": projective_space(1),
        "P2": projective_space(2),
        "P3": projective_space(3),
        "P1xP1": p1xp1(),
        "F1": hirzebruch(1),
        "F2": hirzebruch(2),
        "P112": weighted_projective_plane(),
        "Bl": blowup_affine_plane(),
        "twocones": two_cones_rank3(),
        "P1^3": p1_product(3),
        "P4": projective_space(4),
    }


def fixture_family() -> dict:
    """All fixtures including non-simplicial fans."""
    out = simplicial_family()
    out["square"] = square_cone()
    out["cube"] = cube_fan()
    return out


def canonical_gram(n: int) -> list:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
