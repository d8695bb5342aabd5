import random
from fractions import Fraction

import pytest

from toric_cycles import fixtures as fx
from toric_cycles import linalg as la
from toric_cycles.complements import (
    as_explicit,
    check_pushforward_compatible,
    congruent_modulo_perp,
    explicit,
    from_flag,
    from_inner_product,
    project,
    project_between,
    random_explicit,
    random_flag,
    random_gram,
)
from toric_cycles.errors import (
    ComplementarityFailed,
    IncompatibleAt,
    NestednessFailed,
    NotGeneric,
    NotPositiveDefinite,
    NotSymmetric,
)
from toric_cycles.morphisms import identity_morphism, star_subdivision

C2 = fx.affine_space(2)
P2 = fx.projective_space(2)
FAMILY = fx.fixture_family()


def rational_vector(rng, n, bound=6):
    return tuple(Fraction(rng.randint(-bound, bound), rng.randint(1, 4)) for _ in range(n))


def all_choices(fan, rng):
    yield from_inner_product(random_gram(fan.rank, rng))
    if fan.is_simplicial():
        yield random_flag(fan, rng)
    yield random_explicit(fan, rng)


def test_inner_product_examples():
    psi = from_inner_product(fx.canonical_gram(2))
    assert psi.basis(C2, {0}) == [(1, 0)]
    assert project(psi, C2, {0}, (3, 4)) == (0, 4)
    from_inner_product([[2, 1], [1, 2]])
    with pytest.raises(NotPositiveDefinite):
        from_inner_product([[1, 2], [2, 1]])
    with pytest.raises(NotSymmetric):
        from_inner_product([[1, 1], [0, 1]])


def test_scaled_projective_gram_matches_induced_one():
    # [[2,1],[1,2]] is 3 times the inverse Cartan matrix used by the fixture
    induced = fx.projective_space_gram(2)
    assert [[3 * a for a in row] for row in induced] == [[2, 1], [1, 2]]


def test_flag_examples():
    from_flag([(1, 2), (0, 1)], C2)
    with pytest.raises(NotGeneric) as exc:
        from_flag([(0, 1), (1, 0)], C2)
    assert exc.value.cone == frozenset({0})
    flag = from_flag([(1, 2), (0, 1)])
    assert flag.is_generic_for(C2, frozenset())
    assert project(flag, C2, {0}, (1, 0)) == (0, -2)


def test_projection_onto_rho3():
    psi = from_inner_product(fx.canonical_gram(2))
    p = project(psi, P2, {2}, (-1, 0))
    assert p == (Fraction(-1, 2), Fraction(1, 2))
    # normal equations: p in rho3-perp, m - p orthogonal to rho3-perp
    assert la.dot(p, P2.rays[2]) == 0
    assert la.dot(la.vsub((-1, 0), p), (1, -1)) == 0


def test_project_zero_cone_is_identity():
    psi = from_inner_product(random_gram(2, random.Random(3)))
    assert project(psi, P2, frozenset(), (5, -2)) == (5, -2)


def test_explicit_validation():
    psi = from_inner_product(fx.canonical_gram(2))
    as_explicit(psi, C2)
    C3 = fx.affine_space(3)
    base = {c: as_explicit(from_inner_product(fx.canonical_gram(3)), C3).bases[c] for c in C3.cones}
    bad = dict(base)
    bad[frozenset({0, 1})] = [(0, 1, 0), (1, 0, 1)]  # complementary but misses Psi(rho_1) = e_1
    with pytest.raises(NestednessFailed):
        explicit(C3, bad)
    with pytest.raises(ComplementarityFailed):
        explicit(C2, {frozenset({0}): [(1, 0), (0, 1)], frozenset({1}): [(0, 1)],
                      frozenset({0, 1}): [(1, 0), (0, 1)]})
    with pytest.raises(ComplementarityFailed):
        explicit(C2, {frozenset({0}): [(0, 1)], frozenset({1}): [(0, 1)],
                      frozenset({0, 1}): [(1, 0), (0, 1)]})


@pytest.mark.parametrize("name", sorted(FAMILY))
def test_projection_laws(name):
    fan = FAMILY[name]
    rng = random.Random(name)
    n = fan.rank
    for psi in all_choices(fan, rng):
        for c in fan.cones:
            Q = psi.basis(fan, c)
            for _ in range(3):
                m = rational_vector(rng, n)
                p = project(psi, fan, c, m)
                assert project(psi, fan, c, p) == p
                assert all(la.dot(p, v) == 0 for v in fan.ray_vectors(c))
                diff = la.vsub(m, p)
                assert not any(diff) or la.row_space_contains(Q, diff)
                m2 = rational_vector(rng, n)
                a = Fraction(rng.randint(-3, 3), 2)
                combo = la.vadd(m, la.vscale(a, m2))
                assert project(psi, fan, c, combo) == la.vadd(p, la.vscale(a, project(psi, fan, c, m2)))
            for q in Q:
                assert not any(project(psi, fan, c, q))


@pytest.mark.parametrize("name", ["P2", "P3", "F1", "P1xP1", "twocones", "cube"])
def test_gram_scaling_invariance(name):
    fan = FAMILY[name]
    rng = random.Random(name)
    G = random_gram(fan.rank, rng)
    a = from_inner_product(G)
    b = from_inner_product([[Fraction(7, 3) * x for x in row] for row in G])
    for c in fan.cones:
        assert a.projector(fan, c) == b.projector(fan, c)


@pytest.mark.parametrize("name", ["P2", "P3", "F2", "P112", "twocones", "square"])
def test_coefficient_well_defined(name):
    """<pi_sigma(m), n> is independent of the representative m mod tau-perp and the lift n mod N_sigma."""
    fan = FAMILY[name]
    rng = random.Random(name)
    for psi in all_choices(fan, rng):
        for tau in fan.cones:
            perp = fan.geometry(tau).perp.vectors
            for sigma in fan.facets(tau):
                m = rational_vector(rng, fan.rank)
                n = fan.primitive_quotient_generator(tau, sigma)
                base = la.dot(project(psi, fan, sigma, m), n)
                shift = [rng.randint(-3, 3) for _ in perp]
                m2 = la.vadd(m, [sum((s * p[j] for s, p in zip(shift, perp)), 0) for j in range(fan.rank)])
                assert congruent_modulo_perp(fan, tau, m, m2)
                span = fan.geometry(sigma).span.vectors
                k = [rng.randint(-3, 3) for _ in span]
                lift_shift = [sum((c * b[j] for c, b in zip(k, span)), 0) for j in range(fan.rank)]
                n2 = la.vadd(n, lift_shift)
                assert la.dot(project(psi, fan, sigma, m2), n2) == base


@pytest.mark.parametrize("name", ["P2", "P3", "F1", "twocones"])
def test_project_between_commutes(name):
    fan = FAMILY[name]
    rng = random.Random(name)
    for psi in all_choices(fan, rng):
        for tau in fan.cones:
            for sigma in fan.faces(tau):
                for delta in fan.faces(sigma):
                    m = rational_vector(rng, fan.rank)
                    direct = project_between(psi, fan, sigma, tau, m)
                    via = project_between(psi, fan, sigma, tau, project_between(psi, fan, delta, tau, m))
                    assert direct == via
        assert project_between(psi, fan, frozenset(), frozenset(), (1,) * fan.rank) == (1,) * fan.rank


def test_flag_acceptance_matches_genericity():
    rng = random.Random(11)
    for name in ("P2", "P3", "F1", "twocones"):
        fan = FAMILY[name]
        for _ in range(20):
            F = [[rng.randint(-2, 2) for _ in range(fan.rank)] for _ in range(fan.rank)]
            if la.rank(F) < fan.rank:
                continue
            try:
                flag = from_flag(F, fan)
            except NotGeneric:
                continue
            for c in fan.cones:
                k = fan.dim(c)
                # sigma-perp and F_k meet only in 0
                rows = [list(f) for f in flag.vectors[:k]]
                perp = fan.geometry(c).perp.vectors
                assert la.rank(rows + [list(p) for p in perp]) == len(rows) + len(perp)


def test_pushforward_compatibility():
    sub, f = star_subdivision(C2, (1, 1))
    G = random_gram(2, random.Random(5))
    check_pushforward_compatible(from_inner_product(G), from_inner_product(G), f)
    ident = identity_morphism(C2, C2)
    psi = from_flag([(1, 2), (0, 1)], C2)
    check_pushforward_compatible(psi, psi, ident)
    with pytest.raises(IncompatibleAt):
        check_pushforward_compatible(psi, from_flag([(2, 1), (0, 1)], C2), ident)
