"""Shared helpers for the test suite: random inputs and independent oracles."""

import math
import random
from fractions import Fraction

from toric_cycles import linalg as la
from toric_cycles.complements import from_inner_product, random_explicit, random_flag, random_gram
from toric_cycles.divisors import QCartierDivisor, cartier_space, divisor_from_ray_coefficients, local_equation
from toric_cycles.divisors import Cycle
from toric_cycles import fixtures as fx
from toric_cycles.fan import build_fan
from toric_cycles.morphisms import identity_morphism, star_subdivision


def random_rational(rng, bound=5, den=3):
    return Fraction(rng.randint(-bound, bound), rng.randint(1, den))


def random_divisor(fan, rng, bound=5):
    if fan.is_simplicial():
        return divisor_from_ray_coefficients(fan, [random_rational(rng, bound) for _ in fan.rays])
    basis = cartier_space(fan)
    coeffs = [random_rational(rng, bound) for _ in basis]
    eqs = {c: tuple(sum((a * b[c][j] for a, b in zip(coeffs, basis)), Fraction(0)) for j in range(fan.rank))
           for c in fan.maximal_cones}
    return QCartierDivisor(fan, eqs)


def choice_variants(fan, rng):
    """One complement choice of each kind."""
    return [
        from_inner_product(random_gram(fan.rank, rng)),
        random_flag(fan, rng),
        random_explicit(fan, rng),
    ]


def random_simplicial_cone(n, rng, bound=3):
    """An affine fan on ``n`` random primitive, independent rays."""
    while True:
        rays = [tuple(rng.randint(-bound, bound) for _ in range(n)) for _ in range(n)]
        if la.rank(rays) == n and all(la.is_primitive(r) for r in rays) and len(set(rays)) == n:
            return build_fan(n, rays, [range(n)])


def quotient_multiple(fan, tau, sigma):
    """The k with image(v) = k * n_{tau,sigma} in N(sigma), v the ray of tau outside sigma.

    M(sigma) is the dual lattice of N(sigma), so k is the gcd of the
    pairings of v with a basis of M(sigma).
    """
    v = fan.rays[next(iter(sorted(tau - sigma)))]
    return math.gcd(*(la.dot(u, v) for u in fan.geometry(sigma).perp.vectors))


def oracle_projection(psi, fan, sigma, m):
    """Decompose m = p + q with p in sigma-perp and q in Psi(sigma) by one linear solve."""
    perp = [list(p) for p in fan.geometry(sigma).perp.vectors]
    Q = [list(q) for q in psi.basis(fan, sigma)]
    cols = perp + Q
    if not cols:
        return tuple(la.as_fraction(a) for a in m)
    coeffs = la.solve_unique(la.transpose(cols), list(m))
    return tuple(sum((coeffs[i] * perp[i][j] for i in range(len(perp))), Fraction(0)) for j in range(fan.rank))


def oracle_intersect(D, z, psi):
    """D . z recomputed from the defining formula with brute-force lattice data."""
    fan = D.fan
    out = {}
    for sigma, c in z:
        for tau in fan.cones_over(sigma):
            p = oracle_projection(psi, fan, sigma, local_equation(D, tau))
            v = fan.rays[next(iter(tau - sigma))]
            value = la.dot(p, v) / quotient_multiple(fan, tau, sigma)
            out[tau] = out.get(tau, 0) + c * value
    return Cycle(fan, out)


def random_refinement(rng):
    """A fixture fan and one or two star subdivisions of it at random interior points."""
    name = rng.choice(["A2", "A3", "P2", "F1", "P1xP1", "P112", "twocones"])
    base = fx.simplicial_family()[name]
    fan = base
    for _ in range(rng.randint(1, 2)):
        c = rng.choice([c for c in fan.cones if fan.dim(c) >= 2])
        weights = [rng.randint(1, 3) for _ in c]
        v = la.primitive([sum(w * fan.rays[i][j] for w, i in zip(weights, sorted(c))) for j in range(fan.rank)])
        fan, _ = star_subdivision(fan, v)
    return base, fan, identity_morphism(fan, base)


def seeded(name):
    return random.Random(f"toric-{name}")
