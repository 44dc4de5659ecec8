import math
import random
from fractions import Fraction

import mpmath
import pytest

from latticeforge.quadform import QuadraticForm, is_isotropic_over_Q
from latticeforge.sl2z import (
    IDENTITY, INFINITE, S, T, UpperHalfPoint, congruence_member, finite_order,
    fundamental_area, in_fundamental_domain, is_unipotent, lift_sl2, mahler_min, mat_inv,
    mat_mul, mat_pow, mobius, on_boundary, parse_point, reduce_to_fundamental,
    residues_sl2, sl2_mod_order, sl2_order_formula, torsion_free_check,
)
from latticeforge.surd import Surd


def random_point(rng):
    re = Fraction(rng.randint(-400, 400), rng.randint(1, 40))
    im = Fraction(rng.randint(1, 60), rng.randint(1, 300))
    return UpperHalfPoint(re, im)


def random_modular(rng, length=6):
    g = IDENTITY
    for _ in range(length):
        g = mat_mul(g, mat_pow(T, rng.randint(-3, 3)) if rng.random() < 0.5 else S)
    return g


def test_reduction_examples():
    tr = reduce_to_fundamental("5+2i")
    assert tr.result == UpperHalfPoint(0, 2)
    assert tr.word_str() == "T^-5"
    tr = reduce_to_fundamental("i/2")
    assert tr.result == UpperHalfPoint(0, 2)
    assert tr.word_str() == "S"
    rho = UpperHalfPoint(Fraction(1, 2), Surd(0, Fraction(1, 2), 3))
    tr = reduce_to_fundamental(rho)
    assert tr.result == rho and tr.word == [] and on_boundary(rho)


def test_parse_point_with_surd():
    z = parse_point("1/2+sqrt(3)/2*i")
    assert z.re == Fraction(1, 2)
    assert z.im * z.im == Fraction(3, 4)


def test_upper_half_plane_enforced():
    with pytest.raises(ValueError):
        UpperHalfPoint(1, 0)
    with pytest.raises(ValueError):
        UpperHalfPoint(1, -2)


def test_random_reductions():
    rng = random.Random(17)
    for _ in range(1000):
        z = random_point(rng)
        tr = reduce_to_fundamental(z)
        assert mobius(tr.product, z) == tr.result
        assert tr.result.abs2() >= 1
        assert abs(tr.result.re) <= Fraction(1, 2)
        assert tr.verify()


def test_orbit_invariance():
    rng = random.Random(23)
    for _ in range(200):
        z = random_point(rng)
        g = random_modular(rng)
        w = mobius(g, z)
        a, b = reduce_to_fundamental(z).result, reduce_to_fundamental(w).result
        assert a == b or (on_boundary(a) and on_boundary(b))


def test_orbit_invariance_on_the_boundary():
    # the two vertical edges are identified by T, the arc by S
    z = UpperHalfPoint(Fraction(-1, 2), 3)
    w = mobius(T, z)
    assert on_boundary(z) and on_boundary(w) and z != w
    arc = UpperHalfPoint(Fraction(3, 5), Fraction(4, 5))
    tr = reduce_to_fundamental(arc)
    assert on_boundary(tr.result)


def test_area_against_closed_form():
    enc = fundamental_area(1e-6)
    # triangle with angles pi/3, pi/3, 0 has hyperbolic area pi/3; the metric carries 1/4
    exact = mpmath.pi / 12
    assert enc.lo <= exact <= enc.hi
    assert enc.width <= 1e-6
    assert enc.hi < 1 / (2 * mpmath.sqrt(3))
    quad = mpmath.quad(lambda x: mpmath.quad(lambda y: 1 / (4 * y * y),
                                             [mpmath.sqrt(1 - x * x), mpmath.inf]), [-0.5, 0.5])
    assert abs(quad - exact) < 1e-10


def test_congruence_membership():
    assert congruence_member(IDENTITY, 7)
    assert congruence_member(((1, 2), (0, 1)), 2)
    assert congruence_member(((-1, 0), (0, -1)), 2)
    assert not congruence_member(((-1, 0), (0, -1)), 3)


def _gamma_sample(rng, n):
    g = IDENTITY
    for _ in range(rng.randint(1, 4)):
        h = random_modular(rng, 3)
        base = mat_pow(T, n) if rng.random() < 0.5 else ((1, 0), (n, 1))
        g = mat_mul(g, mat_mul(mat_mul(h, base), mat_inv(h)))
    return g


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_gamma_n_is_a_normal_subgroup(n):
    rng = random.Random(n)
    for _ in range(300):
        x, y = _gamma_sample(rng, n), _gamma_sample(rng, n)
        assert congruence_member(x, n) and congruence_member(y, n)
        assert congruence_member(mat_mul(x, y), n)
        assert congruence_member(mat_inv(x), n)
        g = random_modular(rng)
        assert congruence_member(mat_mul(mat_mul(g, x), mat_inv(g)), n)


def test_order_mod_n_small():
    assert [sl2_mod_order(n) for n in (1, 2, 3)] == [1, 6, 24]
    with pytest.raises(ValueError):
        sl2_mod_order(61)


@pytest.mark.parametrize("n", range(1, 7))
def test_order_matches_constructive_lifts(n):
    residues = list(residues_sl2(n))
    assert len(residues) == sl2_mod_order(n) == sl2_order_formula(n)
    images = set()
    for m in residues:
        (a, b), (c, d) = g = lift_sl2(m, n)
        assert a * d - b * c == 1
        red = tuple(tuple(x % n for x in row) for row in g)
        assert red == tuple(tuple(x % n for x in row) for row in m)
        images.add(red)
    assert len(images) == len(residues)


def test_finite_order():
    assert finite_order(((-1, 0), (0, -1))) == 2
    assert finite_order(T) == INFINITE
    assert finite_order(S) == 4
    assert finite_order(((0, -1), (1, 1))) == 6
    assert finite_order(((0, -1), (1, -1))) == 3


def test_finite_order_against_powers():
    rng = random.Random(4)
    for _ in range(300):
        g = random_modular(rng, 5)
        k = finite_order(g)
        hits = [j for j in range(1, 13) if mat_pow(g, j) == IDENTITY]
        assert (hits[0] if hits else INFINITE) == k


def test_torsion_levels():
    assert torsion_free_check(1)["certificate"]["order"] == 4
    rep = torsion_free_check(2)
    assert rep["verdict"] == "torsion"
    assert rep["certificate"]["witness"] == [[-1, 0], [0, -1]]
    rep = torsion_free_check(3, samples=2000)
    assert rep["verdict"] == "torsion-free-on-samples" and rep["torsion_found"] == 0


def test_unipotent_detection():
    assert is_unipotent(IDENTITY)
    assert is_unipotent(((1, 5), (0, 1)))
    assert not is_unipotent(((2, 1), (1, 1)))
    assert is_unipotent([[1, 2, 3], [0, 1, 4], [0, 0, 1]])


def _form(diag):
    return QuadraticForm.diagonal([Fraction(x) for x in diag])


def test_mahler_examples():
    res = mahler_min(_form([1, 1, 1]), 20)
    assert res.minimum == 1 and sorted(map(abs, res.argmin)) == [0, 0, 1]
    res = mahler_min(_form([7, -1, -1, -1]), 8)
    assert res.minimum >= 1


def test_mahler_rejects_isotropic_forms():
    f = _form([2, 2, -3])
    verdict = is_isotropic_over_Q(f).verdict
    if verdict == "isotropic":
        with pytest.raises(ValueError):
            mahler_min(f, 5)
    else:
        assert mahler_min(f, 10).minimum >= 1
    with pytest.raises(ValueError):
        mahler_min(_form([1, -1, 1]), 5)


@pytest.mark.parametrize("diag", [[1, 1, 1], [1, 1, -3], [1, 2, -5], [7, -1, -1, -1],
                                  [1, 1, 1, 1]])
def test_mahler_lower_bound(diag):
    f = _form(diag)
    cert = is_isotropic_over_Q(f)
    assert cert.verdict == "anisotropic"
    res = mahler_min(f, 6, cert)
    assert res.minimum >= 1
    v = res.argmin
    assert math.gcd(*v) == 1
    assert abs(sum(d * x * x for d, x in zip(diag, v))) == res.minimum


def test_fundamental_domain_is_closed():
    assert in_fundamental_domain(UpperHalfPoint(Fraction(1, 2), 1))
    assert in_fundamental_domain(UpperHalfPoint(0, 1))
    assert not in_fundamental_domain(UpperHalfPoint(Fraction(1, 2), Fraction(1, 2)))
