import random
import warnings
from fractions import Fraction

import pytest

from _support import seeded
from toric_cycles import fixtures as fx
from toric_cycles.complements import from_inner_product, random_gram
from toric_cycles.divisors import Cycle, degree, divisor_cycle, toric_divisor
from toric_cycles.errors import FormulaExtensionWarning, IrrationalAngle, NotSimplicial, ZeroCoefficient
from toric_cycles.intersection import power
from toric_cycles.polynomial import Polynomial
from toric_cycles.ring import (
    CycleRing,
    RingPresentation,
    chern_cycle,
    cycle_as_polynomial,
    j_generators,
    lefschetz_injectivity,
    lefschetz_matrix,
    linear_span_fraction,
    product,
    q_fraction,
    random_polynomial,
    stanley_reisner_generators,
    todd_cycle,
    todd_series,
    total_chern_cycle,
    verify_presentation,
)

C2 = fx.affine_space(2)
P2 = fx.projective_space(2)
IDENTITY2 = from_inner_product(fx.canonical_gram(2))
S13, S23 = frozenset({0, 2}), frozenset({1, 2})


def mono(*exps):
    return Polynomial.monomial(list(exps))


def test_cycle_as_polynomial():
    assert cycle_as_polynomial(Cycle.fundamental(P2), IDENTITY2) == Polynomial.constant(3)
    assert cycle_as_polynomial(Cycle.orbit(C2, {0, 1}), IDENTITY2) == mono(1, 1)
    assert cycle_as_polynomial(Cycle.orbit(P2, S13), IDENTITY2) == mono(1, 0, 1)


def test_products():
    X = Cycle.fundamental(P2)
    z = Cycle.orbit(P2, {2})
    assert product(X, z, IDENTITY2) == z
    assert product(z, z, IDENTITY2) == Cycle(P2, {S13: Fraction(1, 2), S23: Fraction(1, 2)})
    assert not product(Cycle.orbit(P2, {0, 1}), Cycle.orbit(P2, {1}), IDENTITY2)
    with pytest.raises(NotSimplicial):
        product(Cycle.fundamental(fx.cube_fan()), Cycle.fundamental(fx.cube_fan()), IDENTITY2)


@pytest.mark.parametrize("name", ["P2", "P3", "F1", "P112", "P1xP1", "twocones"])
def test_ring_laws(name):
    fan = fx.simplicial_family()[name]
    rng = seeded(name)
    ring = CycleRing(fan, from_inner_product(random_gram(fan.rank, rng)))

    def random_cycle(codim):
        cones = fan.cones_of_dim(codim)
        return Cycle(fan, {c: rng.randint(-3, 3) for c in rng.sample(cones, min(2, len(cones)))})

    X = Cycle.fundamental(fan)
    for _ in range(4):
        j, k, l = (rng.randint(0, fan.rank) for _ in range(3))
        a, b, c = random_cycle(j), random_cycle(k), random_cycle(l)
        assert ring.product(a, b) == ring.product(b, a)
        assert ring.product(ring.product(a, b), c) == ring.product(a, ring.product(b, c))
        assert ring.product(X, a) == a
        assert ring.product(a, b).codimensions() <= {j + k}


def test_stanley_reisner():
    assert stanley_reisner_generators(P2) == [(1, 1, 1)]
    assert stanley_reisner_generators(C2) == []
    assert sorted(stanley_reisner_generators(fx.p1xp1())) == [(0, 1, 0, 1), (1, 0, 1, 0)]


def test_j_generators():
    assert j_generators(C2, fx.canonical_gram(2)) == [mono(2, 0), mono(0, 2)]
    C3 = fx.affine_space(3)
    assert j_generators(C3, fx.canonical_gram(3)) == [mono(2, 0, 0), mono(0, 2, 0), mono(0, 0, 2)]
    for n in (2, 3, 4):
        fan = fx.projective_space(n)
        gens = j_generators(fan, fx.projective_space_gram(n))
        r = n + 1
        for j, g in enumerate(gens):
            expected = {}
            e = [0] * r
            e[j] = 2
            expected[tuple(e)] = Fraction(1)
            for nb in ((j - 1) % r, (j + 1) % r):
                e = [0] * r
                e[j] += 1
                e[nb] += 1
                expected[tuple(e)] = Fraction(-1, 2)
            scale = g.coefficient(tuple(2 * int(i == j) for i in range(r)))
            assert scale != 0
            assert dict(g.terms()) == {k: scale * v for k, v in expected.items()}


def test_reduce_examples():
    pres = RingPresentation(P2, fx.canonical_gram(2))
    assert pres.reduce(mono(1, 0, 1)) == mono(1, 0, 1)
    assert pres.reduce(mono(0, 0, 2)) == Polynomial(3, {(1, 0, 1): Fraction(1, 2), (0, 1, 1): Fraction(1, 2)})
    assert pres.reduce(mono(2, 1, 1)) == Polynomial(3, {})


def test_verify_presentation_and_negative_control():
    G = fx.canonical_gram(2)
    assert verify_presentation(P2, G, from_inner_product(G), samples=20).ok
    wrong = [[2, 1], [1, 3]]
    report = verify_presentation(P2, wrong, from_inner_product(G), samples=20)
    assert not report.ok


@pytest.mark.parametrize("name", ["P2", "P1xP1", "A3"])
def test_verify_presentation_fixtures(name):
    fan = fx.simplicial_family()[name]
    G = random_gram(fan.rank, seeded(name))
    report = verify_presentation(fan, G, from_inner_product(G), samples=30, rng=seeded(name))
    assert report.ok and report.polynomials_checked == 30


# -- characteristic classes -----------------------------------------------------

def test_todd_series_bernoulli():
    # x/(1-e^-x) = 1 + x/2 + x^2/12 - x^4/720 + ...
    assert todd_series(4) == [1, Fraction(1, 2), Fraction(1, 12), 0, Fraction(-1, 720)]


def test_todd_p1():
    P1 = fx.projective_space(1)
    z = todd_cycle(P1, from_inner_product([[1]]))
    assert z == Cycle(P1, {frozenset(): 1, frozenset({0}): Fraction(1, 2), frozenset({1}): Fraction(1, 2)})


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_todd_projective_space(n):
    fan = fx.projective_space(n)
    z = todd_cycle(fan, from_inner_product(fx.projective_space_gram(n)))
    for c in fan.cones:
        S = [i + 1 for i in c]
        assert z.coefficient(c) == q_fraction(S, n + 1)
        if fan.dim(c) <= 2:
            assert z.coefficient(c) == linear_span_fraction(fan, c, fx.projective_space_gram(n))
    assert degree(z.part(n)) == 1


def test_todd_p1xp1_degree():
    fan = fx.p1xp1()
    z = todd_cycle(fan, from_inner_product(fx.canonical_gram(2)))
    assert degree(z.part(2)) == 1


def test_todd_warns_on_singular_fan():
    fan = fx.weighted_projective_plane()
    with pytest.warns(FormulaExtensionWarning):
        todd_cycle(fan, from_inner_product(fx.canonical_gram(2)))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        todd_cycle(P2, IDENTITY2)


def test_q_fraction():
    assert q_fraction([1, 2, 4], 5) == Fraction(1, 6)
    assert q_fraction([3], 4) == Fraction(1, 2)
    assert q_fraction([5, 1], 5) == Fraction(1, 3)  # runs wrap around
    assert q_fraction([], 3) == 1
    with pytest.raises(ValueError):
        q_fraction([1, 2, 3], 3)


def test_linear_span_fraction():
    G = fx.projective_space_gram(2)
    assert linear_span_fraction(P2, {0, 1}, G) == Fraction(1, 3)
    assert linear_span_fraction(P2, {0}, G) == Fraction(1, 2)
    assert linear_span_fraction(C2, {0, 1}, fx.canonical_gram(2)) == Fraction(1, 4)
    with pytest.raises(IrrationalAngle):
        linear_span_fraction(C2, {0, 1}, [[2, 1], [1, 3]])


def test_chern_classes():
    psi = IDENTITY2
    assert chern_cycle(P2, psi, 0) == Cycle.fundamental(P2)
    for name in ("P2", "F1", "P1xP1"):
        fan = fx.simplicial_family()[name]
        c1 = chern_cycle(fan, psi, 1)
        assert c1 == sum((divisor_cycle(toric_divisor(fan, i)) for i in range(len(fan.rays))), Cycle(fan))
    assert degree(chern_cycle(P2, psi, 2)) == 3
    total = total_chern_cycle(P2, psi)
    assert total.part(0) == Cycle.fundamental(P2) and degree(total.part(2)) == 3


def test_chern_top_degree_is_euler_characteristic():
    for name, euler in (("P3", 4), ("P1^3", 8), ("F2", 4)):
        fan = fx.simplicial_family()[name]
        psi = from_inner_product(random_gram(fan.rank, seeded(name)))
        assert degree(chern_cycle(fan, psi, fan.rank)) == euler


# -- Lefschetz ------------------------------------------------------------------

def test_lefschetz_affine_orthogonal_isomorphism():
    for n in (2, 3, 4):
        fan = fx.affine_space(n)
        for i in range(n // 2 + 1):
            rep = lefschetz_injectivity(fan, [1 + k for k in range(n)], i, fx.canonical_gram(n))
            assert rep.rows == rep.cols == rep.rank


def test_lefschetz_p2():
    G = random_gram(2, random.Random(4))
    rep = lefschetz_injectivity(P2, [1, 1, 1], 0, G)
    assert (rep.rows, rep.cols, rep.rank) == (3, 1, 1) and rep.injective
    rep = lefschetz_injectivity(P2, [1, 1, 1], 1, G)
    assert rep.power == 0 and rep.injective
    with pytest.raises(ZeroCoefficient):
        lefschetz_matrix(P2, [1, 0, 1], 0, G)


def test_lefschetz_matrix_column_matches_power():
    G = fx.projective_space_gram(2)
    matrix, src, dst = lefschetz_matrix(P2, [2, 1, 1], 0, G)
    from toric_cycles.divisors import divisor_from_ray_coefficients
    z = power(divisor_from_ray_coefficients(P2, [2, 1, 1]), 2, Cycle.fundamental(P2), from_inner_product(G))
    assert [row[0] for row in matrix] == [z.coefficient(t) for t in dst]


def test_random_polynomial_shape():
    p = random_polynomial(3, 4, random.Random(0))
    assert p.nvars == 3 and p.degree() <= 4
