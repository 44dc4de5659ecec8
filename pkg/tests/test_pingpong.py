import json
import random
from fractions import Fraction

import pytest

from latticeforge.pingpong import (
    CircleInterval, PingPongCertificate, PingPongFailure, ProjectivePoint, arc_around,
    as_matrix, circle_distance, commutator, find_certificate, hyperbolic_data, mat_inv,
    mat_mul, mat_pow, mobius_act, reduced_words, validate_words, verify_contracting,
)
from latticeforge.surd import Surd

G1 = [[2, 0], [0, Fraction(1, 2)]]
H = [[1, 1], [1, 2]]


def g2():
    h = as_matrix(H)
    return mat_mul(mat_mul(h, as_matrix(G1)), mat_inv(h))


@pytest.fixture(scope="module")
def cert():
    return find_certificate(G1, g2(), n_max=10)


def _random_sl2(rng):
    a = Fraction(rng.randint(-9, 9), rng.randint(1, 4)) or Fraction(1)
    b = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
    c = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
    return as_matrix([[a, b], [c, (1 + b * c) / a]])


def _random_point(rng):
    if rng.random() < 0.1:
        return ProjectivePoint(1, 0)
    return ProjectivePoint(Surd(Fraction(rng.randint(-30, 30), rng.randint(1, 7)),
                                Fraction(rng.randint(-3, 3), 2), 5))


def test_mobius_examples():
    assert mobius_act(G1, ProjectivePoint(1, 1)) == ProjectivePoint(4, 1)
    p = ProjectivePoint(Fraction(3, 7))
    assert mobius_act([[1, 0], [0, 1]], p) == p
    assert mobius_act([[0, -1], [1, 0]], ProjectivePoint(1, 0)) == ProjectivePoint(0, 1)


def test_action_property():
    rng = random.Random(8)
    for _ in range(500):
        g, h, p = _random_sl2(rng), _random_sl2(rng), _random_point(rng)
        assert mobius_act(mat_mul(g, h), p) == mobius_act(g, mobius_act(h, p))


def test_zero_point_rejected():
    with pytest.raises(ValueError):
        ProjectivePoint(0, 0)


def test_hyperbolic_data_examples():
    d = hyperbolic_data(G1)
    assert d.eigenvalue == 2
    assert d.attracting == ProjectivePoint(1, 0) and d.repelling == ProjectivePoint(0, 1)
    d = hyperbolic_data([[2, 1], [1, 1]])
    assert d.eigenvalue == Surd(Fraction(3, 2), Fraction(1, 2), 5)
    with pytest.raises(ValueError):
        hyperbolic_data([[1, 1], [0, 1]])


def test_hyperbolic_data_equivariance():
    h = as_matrix(H)
    d0, d1 = hyperbolic_data(G1), hyperbolic_data(g2())
    assert d1.attracting == mobius_act(h, d0.attracting)
    assert d1.repelling == mobius_act(h, d0.repelling)


def test_hyperbolic_data_fixed_points():
    rng = random.Random(2)
    seen = 0
    while seen < 100:
        g = as_matrix([[rng.randint(-6, 6) for _ in range(2)] for _ in range(2)])
        if g[0][0] * g[1][1] - g[0][1] * g[1][0] != 1 or abs(g[0][0] + g[1][1]) <= 2:
            continue
        d = hyperbolic_data(g)
        t = (g[0][0] + g[1][1]).a
        lam = d.eigenvalue
        assert lam * lam - lam * t + 1 == 0
        assert mobius_act(g, d.attracting) == d.attracting
        assert mobius_act(g, d.repelling) == d.repelling
        assert abs(float(lam)) > 1
        seen += 1
    for _ in range(1000):
        g = _random_sl2(rng)
        tr = g[0][0] + g[1][1]
        if abs(tr) > 2:
            d = hyperbolic_data(g)
            assert mobius_act(g, d.attracting) == d.attracting


def test_convergence_to_attracting_point():
    rng = random.Random(9)
    g = as_matrix([[2, 1], [1, 1]])
    d = hyperbolic_data(g)
    for _ in range(20):
        p = ProjectivePoint(Fraction(rng.randint(-50, 50), rng.randint(1, 9)))
        if p == d.repelling:
            continue
        dist = [circle_distance(mobius_act(mat_pow(g, n), p), d.attracting) for n in range(0, 16)]
        tail = dist[3:]
        assert all(b <= a for a, b in zip(tail, tail[1:]))
        assert dist[-1] < 1e-8


def test_convergence_of_rational_diagonal():
    g = as_matrix(G1)
    p = ProjectivePoint(Fraction(5, 3))
    dist = [circle_distance(mobius_act(mat_pow(g, n), p), ProjectivePoint(1, 0))
            for n in range(1, 41)]
    assert all(b < a for a, b in zip(dist, dist[1:]) if a > 1e-15)


def test_verify_contracting_examples():
    g = as_matrix([[4, 0], [0, Fraction(1, 4)]])
    a_plus = arc_around(ProjectivePoint(1, 0), 0.3)
    a_minus = arc_around(ProjectivePoint(0, 1), 0.3)
    b = [arc_around(ProjectivePoint(1), 0.3), arc_around(ProjectivePoint(-1), 0.3)]
    assert verify_contracting(g, a_minus, b, a_plus)
    assert not verify_contracting([[1, 0], [0, 1]], a_minus, b, a_plus)
    with pytest.raises(ValueError):
        verify_contracting(g, a_minus, [a_plus], a_plus)


def test_contracting_eventually_for_powers():
    a_plus = arc_around(ProjectivePoint(1, 0), 0.2)
    a_minus = arc_around(ProjectivePoint(0, 1), 0.2)
    b = [arc_around(ProjectivePoint(1), 0.2)]
    results = [verify_contracting(mat_pow(as_matrix(G1), n), a_minus, b, a_plus) for n in range(1, 12)]
    first = results.index(True)
    assert all(results[first:])


def test_arc_membership():
    arc = CircleInterval(ProjectivePoint(3), ProjectivePoint(-3))    # wraps through infinity
    assert arc.contains(ProjectivePoint(1, 0))
    assert arc.contains(ProjectivePoint(10))
    assert not arc.contains(ProjectivePoint(0))
    assert arc.contains(arc.interior_point())


def test_certificate_found_and_reverifies(cert):
    assert cert.n <= 10
    assert cert.verify()
    assert cert.verify() == cert.verify()
    again = PingPongCertificate.from_json(json.loads(json.dumps(cert.to_json())))
    assert again.verify() and again.n == cert.n


def test_words_up_to_length_six(cert):
    rep = validate_words(cert, max_len=6)
    assert rep["words"] == len(reduced_words(6)) == 4 * (3 ** 6 - 1) // 2
    assert rep["trivial"] == [] and rep["verdict"] == "free"
    assert rep["tracked"] == rep["words"]


def test_commutator_nontrivial(cert):
    c = commutator(cert)
    assert c != as_matrix([[1, 0], [0, 1]])


def test_rejections():
    with pytest.raises(ValueError):
        find_certificate(G1, G1)
    with pytest.raises(ValueError):
        find_certificate([[1, 1], [0, 1]], g2())
    with pytest.raises(ValueError):
        find_certificate([[2, 0], [0, 1]], g2())


def test_failure_is_reported():
    with pytest.raises(PingPongFailure) as info:
        find_certificate(G1, g2(), n_max=1, halvings=0)
    assert "attempts" in info.value.diagnostics


def test_second_pair_with_irrational_fixed_points():
    # both generators have fixed points in Q(sqrt 5) and Q(sqrt 3)
    c = find_certificate([[2, 1], [1, 1]], [[3, 2], [1, 1]], n_max=20)
    assert c.verify()
    assert validate_words(c, max_len=4)["trivial"] == []
