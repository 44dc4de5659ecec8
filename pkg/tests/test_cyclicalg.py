import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.ntheory import n_order

from latticeforge import linalg as L
from latticeforge.cyclicalg import (
    CyclicAlgebra, cyclotomic_real_subfield, embed_cyclic_matrix, is_division_cyclic,
    prime_criterion, split_matrix_model, zero_divisor_from_norm,
)
from latticeforge.numfield import QQ, QuadraticExtension
from latticeforge.quatalg import QuaternionAlgebra, is_division

coef = st.fractions(min_value=-6, max_value=6, max_denominator=4)
triple = st.tuples(coef, coef, coef)


@pytest.fixture(scope="module")
def L7():
    return cyclotomic_real_subfield(7)


@pytest.mark.parametrize("q", [7, 13, 19, 31])
def test_gaussian_period_min_poly(q):
    ext = cyclotomic_real_subfield(q)
    g = int(sympy.primitive_root(q))
    sub = [pow(g, 3 * k, q) for k in range((q - 1) // 3)]
    periods = [sum(np.exp(2j * np.pi * pow(g, j, q) * h / q) for h in sub).real for j in range(3)]
    expected = np.rint(np.poly(periods)[::-1]).astype(int)
    assert list(ext.top.min_poly) == list(expected)


@pytest.mark.parametrize("q", [7, 13])
def test_sigma_is_an_automorphism_of_order_three(q):
    ext = cyclotomic_real_subfield(q)
    eta = ext.top.gen
    rng = random.Random(q)
    for _ in range(20):
        a = ext.coerce([Fraction(rng.randint(-5, 5)) for _ in range(3)])
        b = ext.coerce([Fraction(rng.randint(-5, 5)) for _ in range(3)])
        assert ext.sigma(a * b) == ext.sigma(a) * ext.sigma(b)
        assert ext.sigma_pow(a, 3) == a
    assert ext.sigma(eta) != eta


@pytest.mark.parametrize("p,q", [(p, q) for q in (7, 13) for p in (2, 3, 5, 11, 17, 29) if p != q])
def test_prime_criterion_matches_order(p, q):
    out = prime_criterion(p, q)
    assert out["order"] == n_order(p, q)
    assert (out["verdict"] == "passes") == (n_order(p, q) == q - 1)


def test_prime_criterion_q7():
    verdicts = {p: prime_criterion(p, 7)["verdict"] for p in (2, 3, 5, 13)}
    assert verdicts == {2: "fails", 3: "passes", 5: "passes", 13: "fails"}
    assert prime_criterion(13, 7)["order"] == 2


def test_prime_criterion_rejects_composites():
    with pytest.raises(ValueError):
        prime_criterion(4, 7)


@given(triple, triple)
def test_norm_is_multiplicative(a, b):
    ext = cyclotomic_real_subfield(7)
    x, y = ext.coerce(list(a)), ext.coerce(list(b))
    assert ext.norm(x * y) == ext.norm(x) * ext.norm(y)


@given(triple, triple, triple)
def test_cyclic_algebra_is_associative(a, b, c):
    alg = CyclicAlgebra(cyclotomic_real_subfield(7), 3)
    ext = alg.ext
    x = alg(ext.coerce(list(a)), ext.coerce(list(b)), ext.coerce(list(c)))
    y = alg(ext.coerce(list(c)), ext.one, ext.coerce(list(a)))
    z = alg.sigma + alg(ext.coerce(list(b)))
    assert (x * y) * z == x * (y * z)


def test_sigma_cubed_is_alpha(L7):
    alg = CyclicAlgebra(L7, 5)
    assert alg.sigma ** 3 == alg.scalar(L7.coerce(5))
    eta = L7.top.gen
    assert alg.sigma * alg.scalar(eta) == alg.scalar(L7.sigma(eta)) * alg.sigma


@given(triple, triple, triple, triple)
def test_embedding_is_multiplicative(a, b, c, d):
    alg = CyclicAlgebra(cyclotomic_real_subfield(7), 3)
    ext = alg.ext
    x = alg(ext.coerce(list(a)), ext.coerce(list(b)), ext.coerce(list(c)))
    y = alg(ext.coerce(list(d)), ext.coerce(list(a)), ext.one)
    assert L.mat_equal(embed_cyclic_matrix(x * y),
                       L.matmul(embed_cyclic_matrix(x), embed_cyclic_matrix(y)))


@pytest.mark.parametrize("p,verdict", [(2, "division"), (3, "division"), (5, "division"),
                                       (13, "split"), (29, "split")])
def test_division_verdicts_q7(L7, p, verdict):
    alg = CyclicAlgebra(L7, p)
    v = is_division_cyclic(alg)
    assert v.verdict == verdict and v.check(alg)
    if verdict == "split":
        assert L7.norm(v.norm_preimage) == p
        z, w = v.zero_divisor
        assert not z.is_zero() and not w.is_zero() and (z * w).is_zero()


def test_rational_cube_splits(L7):
    v = is_division_cyclic(CyclicAlgebra(L7, 8))
    assert v.verdict == "split"


@given(triple, triple)
def test_split_matrix_model(a, b):
    L7 = cyclotomic_real_subfield(7)
    alg = CyclicAlgebra(L7, 13)
    t = is_division_cyclic(alg).norm_preimage
    model = split_matrix_model(alg, t)
    x = alg(L7.coerce(list(a)), L7.one, L7.coerce(list(b)))
    y = alg.sigma + alg(L7.coerce(list(b)))
    assert L.mat_equal(model(x * y), L.matmul(model(x), model(y)))


def test_zero_divisor_from_norm(L7):
    alg = CyclicAlgebra(L7, 1)
    z, w = zero_divisor_from_norm(alg, L7.one)
    assert (z * w).is_zero()


@pytest.mark.parametrize("beta,alpha", [(2, 3), (-1, -1), (5, 2), (3, -1), (7, 5), (-3, 13)])
def test_quadratic_case_agrees_with_quaternions(beta, alpha):
    ext = QuadraticExtension(QQ, Fraction(beta))
    v = is_division_cyclic(CyclicAlgebra(ext, alpha))
    q = is_division(QuaternionAlgebra(Fraction(beta), Fraction(alpha)))
    assert v.verdict == q.verdict


# -- degree two against quaternions ------------------------------------------------------------

def _quad_alg(beta=2, alpha=3):
    ext = QuadraticExtension(QQ, Fraction(beta))
    return ext, CyclicAlgebra(ext, alpha)


def _to_quaternion(x, D):
    c0, c1 = (list(x.coeffs) + [x.algebra.ext.zero] * 2)[:2]
    return D.element([c0.u, c0.v, c1.u, c1.v])


@pytest.mark.parametrize("beta,alpha", [(2, 3), (-1, -1), (5, -2), (3, 7)])
def test_degree_two_basis_matches_quaternion_table(beta, alpha):
    ext, A = _quad_alg(beta, alpha)
    D = QuaternionAlgebra(Fraction(beta), Fraction(alpha))
    root = ext(0, 1)
    basis = [A.one, A.scalar(root), A.sigma, A.scalar(root) * A.sigma]
    assert [_to_quaternion(b, D) for b in basis] == [D.one, D.i, D.j, D.k]
    for x in basis:
        for y in basis:
            assert _to_quaternion(x * y, D) == _to_quaternion(x, D) * _to_quaternion(y, D)


def test_degree_two_associative():
    ext, A = _quad_alg()
    rng = random.Random(6)

    def rnd():
        return A(*[ext(Fraction(rng.randint(-5, 5)), Fraction(rng.randint(-5, 5))) for _ in range(2)])
    for _ in range(200):
        x, y, z = rnd(), rnd(), rnd()
        assert (x * y) * z == x * (y * z)


def test_degree_three_associative_exhaustive_basis(L7):
    A = CyclicAlgebra(L7, 3)
    basis = [A(*([L7.zero] * j + [b])) for j in range(3) for b in L7.basis()]
    for x in basis:
        for y in basis:
            for z in basis:
                assert (x * y) * z == x * (y * z)


def test_degree_two_alpha_one_zero_divisor():
    ext, A = _quad_alg(3, 1)
    z, w = zero_divisor_from_norm(A, ext.one)
    assert not z.is_zero() and not w.is_zero() and (z * w).is_zero()


@pytest.mark.parametrize("beta,alpha", [(2, 7), (5, 4), (3, -2), (2, -1), (13, 3)])
def test_degree_two_split_has_norm_preimage(beta, alpha):
    ext, A = _quad_alg(beta, alpha)
    v = is_division_cyclic(A)
    if v.verdict == "split":
        assert ext.norm(v.norm_preimage) == alpha
        assert v.check(A)
    else:
        assert v.verdict == "division"
        assert is_division(QuaternionAlgebra(Fraction(beta), Fraction(alpha))).verdict == "division"
