import json
import math
import random
from fractions import Fraction

import pytest

from latticeforge import linalg as L
from latticeforge.latticekit import (
    GroupLabel, InvalidLabel, NotSimpleError, all_labels, build_lattice, cocompact_sl3_cyclic,
    complexify, descriptor_from_json, irreducible_so_recipe, is_compact, is_isotypic,
    is_unipotent_matrix, rrank, sl3_noncocompact_family, table_row, type_of,
)
from latticeforge.numfield import field_from_json
from latticeforge.quadform import QuadraticForm, _dec, is_isotropic_over_Q, signature_at
from latticeforge.quatalg import algebra_from_json, reduced_norm, reduced_trace

BOUND = 8


def table_oracle(bound=BOUND):
    """Rows of the classical-group table, instantiated for parameters <= bound.

    Maps str(label) -> (type, rrank, maximal compact, dim).
    """
    rows = {}

    def add(name, letter, n, rr, k, dim):
        rows[name] = (f"{letter}{n}", rr, k, dim)

    for n in range(1, 4 * bound):
        if n + 1 <= bound:
            add(f"SL({n + 1},R)", "A", n, n, f"SO({n + 1})", n * n + 2 * n)
            add(f"SL({n + 1},C)", "A", n, n, f"SU({n + 1})", 2 * n * n + 4 * n)
        if n % 2 == 1 and (n + 1) // 2 <= bound:
            add(f"SL({(n + 1) // 2},H)", "A", n, (n - 1) // 2, f"Sp({(n + 1) // 2})", n * n + 2 * n)
        for p in range(n + 2):
            q = n + 1 - p
            if p <= bound and q <= bound:
                add(f"SU({p},{q})", "A", n, min(p, q), f"S(U({p}) x U({q}))", n * n + 2 * n)
        for p in range(2 * n + 2):
            q = 2 * n + 1 - p
            if p <= bound and q <= bound:
                add(f"SO({p},{q})", "B", n, min(p, q), f"S(O({p}) x O({q}))", 2 * n * n + n)
        if 2 * n + 1 <= bound:
            add(f"SO({2 * n + 1},C)", "B", n, n, f"SO({2 * n + 1})", 4 * n * n + 2 * n)
        for p in range(n + 1):
            q = n - p
            if p <= bound and q <= bound:
                add(f"Sp({p},{q})", "C", n, min(p, q), f"Sp({p}) x Sp({q})", 2 * n * n + n)
        if 2 * n <= bound:
            add(f"Sp({2 * n},R)", "C", n, n, f"U({n})", 2 * n * n + n)
            add(f"Sp({2 * n},C)", "C", n, n, f"Sp({n})", 4 * n * n + 2 * n)
        for p in range(2 * n + 1):
            q = 2 * n - p
            if p <= bound and q <= bound:
                add(f"SO({p},{q})", "D", n, min(p, q), f"S(O({p}) x O({q}))", 2 * n * n - n)
        if 2 * n <= bound:
            add(f"SO({2 * n},C)", "D", n, n, f"SO({2 * n})", 4 * n * n - 2 * n)
        if n <= bound:
            add(f"SO({n},H)", "D", n, n // 2, f"U({n})", 2 * n * n - n)
    return rows


def complexify_oracle(name):
    g = GroupLabel.parse(name)
    f, p = g.family, g.params
    if f in ("SL_C", "SO_C", "Sp_C"):
        return [name, name]
    return [{
        "SL_R": lambda: f"SL({p[0]},C)", "SL_H": lambda: f"SL({2 * p[0]},C)",
        "SU": lambda: f"SL({p[0] + p[1]},C)", "SO_H": lambda: f"SO({2 * p[0]},C)",
        "SO": lambda: f"SO({p[0] + p[1]},C)", "Sp_R": lambda: f"Sp({p[0]},C)",
        "Sp_pq": lambda: f"Sp({2 * (p[0] + p[1])},C)",
    }[f]()]


def test_every_label_is_a_table_row():
    oracle = table_oracle()
    labels = {str(g) for g in all_labels(BOUND)}
    assert labels == set(oracle)


def test_table_values():
    for name, (typ, rr, k, dim) in table_oracle().items():
        row = table_row(name)
        assert row["type"] == typ, name
        assert row["rrank"] == rr, name
        assert row["maximal_compact"] == k, name
        assert row["dim"] == dim, name


def test_complexification():
    for g in all_labels(BOUND):
        cx = complexify(g)
        assert [str(c) for c in cx] == complexify_oracle(str(g))
        assert all(c.family in ("SL_C", "SO_C", "Sp_C") for c in cx)
        assert all(type_of(c) == type_of(g) for c in cx)


@pytest.mark.parametrize("name,expected", [
    ("SL(3,R)", ("A", 2)), ("SO(2,3)", ("B", 2)), ("SO(4,H)", ("D", 4)),
])
def test_type_examples(name, expected):
    assert type_of(name) == expected


@pytest.mark.parametrize("name,expected", [("SO(3,5)", 3), ("SL(4,H)", 3), ("SO(5,H)", 2)])
def test_rrank_examples(name, expected):
    assert rrank(name) == expected


def test_complexify_examples():
    assert [str(c) for c in complexify("SU(2,3)")] == ["SL(5,C)"]
    assert [str(c) for c in complexify("SO(3,H)")] == ["SO(6,C)"]
    assert [str(c) for c in complexify("SL(3,C)")] == ["SL(3,C)", "SL(3,C)"]


def test_rrank_matches_real_signature():
    for m in range(7):
        for n in range(7):
            if m + n < 2:
                continue
            form = QuadraticForm.diagonal([Fraction(1)] * m + [Fraction(-1)] * n)
            p, q = signature_at(form)
            assert rrank(GroupLabel("SO", (m, n))) == min(p, q)


def test_isotypic_examples():
    assert not is_isotypic(["SL(2,R)", "SL(3,R)"])
    assert not is_isotypic(["SL(5,R)", "SO(2,3)"])
    assert is_isotypic(["SO(1,2)", "SL(2,R)"])
    assert is_isotypic(["Sp(4,R)", "SO(2,3)"])
    with pytest.raises(NotSimpleError):
        is_isotypic(["SO(2,2)"])


def test_label_validation():
    with pytest.raises(InvalidLabel):
        GroupLabel.parse("SU(1,0)")
    with pytest.raises(InvalidLabel):
        GroupLabel.parse("Sp(3,R)")
    with pytest.raises(InvalidLabel):
        GroupLabel.parse("GL(3,R)")
    assert GroupLabel.parse("SO(5)") == GroupLabel("SO", (5, 0))
    assert is_compact("SO(5)") and not is_compact("SL(2,C)")


# -- reports --------------------------------------------------------------------------------

SQRT2 = {"min_poly": [-2, 0, 1]}

DESCRIPTORS = [
    {"field": SQRT2, "construction": "SO-form", "diagonal": ["1", "1", ["0", "-1"]]},
    {"field": SQRT2, "construction": "SO-form", "diagonal": ["1", "-1", "1"]},
    {"field": SQRT2, "construction": "SL-n-over-F", "n": 2},
    {"field": "Q", "construction": "SO-form", "diagonal": ["1", "1", "-1", "-1", "-1"]},
    {"field": "Q", "construction": "SO-form", "diagonal": ["7", "-1", "-1", "-1"]},
    {"field": "Q", "construction": "SO-form", "diagonal": ["1", "1", "-3"]},
    {"field": "Q", "construction": "SO-form", "diagonal": ["1", "1", "1"]},
    {"field": "Q", "construction": "SL-n-over-F", "n": 3},
    {"field": "Q", "construction": "SL-n-over-D", "n": 1, "algebra": {"beta": "1", "gamma": "3"}},
    {"field": "Q", "construction": "SL-n-over-D", "n": 1, "algebra": {"beta": "2", "gamma": "5"}},
    {"field": "Q", "construction": "SL-n-over-D", "n": 1, "algebra": {"beta": "-1", "gamma": "-1"}},
    {"field": "Q", "construction": "SL1-cyclic", "algebra": {"q": 7, "alpha": "3"}},
    {"field": "Q", "construction": "SL1-cyclic", "algebra": {"q": 7, "alpha": "13"}},
]


def _reports():
    return [(d, build_lattice(d).to_json()) for d in DESCRIPTORS]


def test_sqrt2_orthogonal_group_is_cocompact():
    rep = build_lattice(DESCRIPTORS[0]).to_json()
    names = [e["group"]["name"] for e in rep["per_place"]]
    assert names == ["SO(2,1)", "SO(3,0)"]
    assert rep["verdict"]["cocompact"] == "yes"
    assert rep["certificate"]["kind"] == "compact-place"
    assert rep["ambient"] == "SO(2,1)"


def test_sl2_over_sqrt2():
    rep = build_lattice(DESCRIPTORS[2]).to_json()
    assert rep["ambient"] == "SL(2,R) x SL(2,R)"
    assert rep["irreducible"] is True
    assert rep["verdict"]["cocompact"] == "no"


def test_id23_is_not_cocompact():
    rep = build_lattice(DESCRIPTORS[3]).to_json()
    assert rep["ambient"] == "SO(2,3)"
    assert rep["verdict"]["cocompact"] == "no"
    assert rep["qrank"] == 2
    assert rep["irreducible"] is False
    v = [Fraction(x) for x in rep["certificate"]["witness"]]
    assert v[0] ** 2 + v[1] ** 2 - v[2] ** 2 - v[3] ** 2 - v[4] ** 2 == 0 and any(v)


def test_anisotropic_form_is_cocompact_with_qrank_zero():
    rep = build_lattice(DESCRIPTORS[4]).to_json()
    assert rep["verdict"]["cocompact"] == "yes"
    assert rep["certificate"]["kind"] == "anisotropic"
    assert rep["qrank"] == 0


def _charpoly_is_unipotent(cp):
    n = len(cp) - 1
    return all(c == math.comb(n, k) * (-1) ** (n - k) for k, c in enumerate(cp))


def _first(x):
    return Fraction(x[0] if isinstance(x, list) else x)


def test_cocompactness_soundness():
    for desc, rep in _reports():
        verdict = rep["verdict"]["cocompact"]
        cert = rep.get("certificate")
        assert verdict in ("yes", "no", "inconclusive")
        if verdict == "inconclusive":
            assert rep.get("inconclusive") is True
            continue
        assert cert is not None
        F = field_from_json(desc["field"])
        if verdict == "yes":
            if cert["kind"] == "compact-place":
                entry = next(e for e in rep["per_place"] if e["place"] == cert["place"])
                p, q = entry["group"]["params"] if entry["group"]["family"] in ("SO", "SU") \
                    else (0, 0)
                assert entry["compact"] and min(p, q) == 0
            elif cert["kind"] == "anisotropic":
                form = descriptor_from_json(desc).data["form"]
                assert is_isotropic_over_Q(form).verdict == "anisotropic"
            else:
                assert cert["kind"] == "division-algebra"
                assert cert["division"]["verdict"] == "division"
            continue
        kind = cert["kind"]
        if kind == "isotropic-vector":
            form = descriptor_from_json(desc).data["form"]
            v = [_dec(F, x) for x in cert["witness"]]
            assert form.value(v) == 0 and any(x != 0 for x in v)
            if "unipotent" in cert:
                u = [[Fraction(x) for x in r] for r in cert["unipotent"]]
                assert is_unipotent_matrix(u)
                assert L.mat_equal(L.congruent(u, form.gram), form.gram)
        elif "unipotent" in cert:
            u = [[_dec(F, x) for x in r] for r in cert["unipotent"]]
            assert L.charpoly(u) == [F.coerce(math.comb(len(u), k) * (-1) ** (len(u) - k))
                                     for k in range(len(u) + 1)]
        elif "quaternion" in cert:
            alg = algebra_from_json(dict(desc["algebra"], field=desc["field"]))
            x = alg.element([Fraction(c) for c in cert["quaternion"]])
            assert reduced_norm(x) == 1 and reduced_trace(x) == 2 and x != alg.one
        else:
            assert "charpoly" in cert
            assert _charpoly_is_unipotent([_first(c) for c in cert["charpoly"]])


def test_reports_are_deterministic():
    first = [json.dumps(r, sort_keys=True) for _, r in _reports()]
    second = [json.dumps(r, sort_keys=True) for _, r in _reports()]
    assert first == second
    for _, r in _reports():
        roots = [float(e["root"]) for e in r["per_place"] if e.get("root")]
        assert roots == sorted(roots, reverse=True)


def test_quaternion_reports():
    split, division, hamilton = (build_lattice(d).to_json() for d in DESCRIPTORS[8:11])
    assert split["verdict"]["cocompact"] == "no"
    assert division["per_place"][0]["group"]["name"] == "SL(2,R)"
    assert hamilton["per_place"][0]["group"]["name"] == "SL(1,H)"
    assert hamilton["certificate"]["kind"] == "compact-place"


# -- recipes ----------------------------------------------------------------------------------

def test_recipe_example():
    res = irreducible_so_recipe([(2, 3), (1, 4), (1, 4), (0, 5)])
    assert res.squarefrees == [2, 3]
    assert [tuple(s) for s in res.signatures] == [(2, 3), (1, 4), (1, 4), (0, 5)]
    rows = ["".join(r) for r in res.sign_rows]
    assert rows == ["++---", "+----", "+----", "-----"]


def test_recipe_small_cases():
    res = irreducible_so_recipe([(3, 0)])
    assert [tuple(s) for s in res.signatures] == [(3, 0)]
    res = irreducible_so_recipe([(1, 2), (0, 3)])
    assert res.squarefrees == [2]
    assert [tuple(s) for s in res.signatures] == [(1, 2), (0, 3)]


def test_recipe_round_trip():
    rng = random.Random(31)
    for _ in range(20):
        n = rng.randint(1, 5)
        k = rng.randint(1, 4)
        targets = [(p, n - p) for p in (rng.randint(0, n) for _ in range(k))]
        res = irreducible_so_recipe(targets)
        padded = sorted(targets, key=lambda s: -s[0])
        padded += [(0, n)] * (len(res.signatures) - len(padded))
        padded.sort(key=lambda s: -s[0])
        assert [tuple(s) for s in res.signatures] == padded
        assert res.verified


def test_recipe_rejects_mixed_dimensions():
    with pytest.raises(ValueError):
        irreducible_so_recipe([(1, 2), (1, 3)])


def test_sl3_noncocompact_family():
    desc, rep = sl3_noncocompact_family(2)
    out = rep.to_json()
    assert out["qrank"] == 1
    assert out["verdict"]["cocompact"] == "no"
    assert out["certificate"]["charpoly"] == ["-1", "3", "-3", "1"]
    assert out["ambient"] == "SL(3,R)"
    _, rep3 = sl3_noncocompact_family(3)
    assert rep3.qrank == 1
    with pytest.raises(ValueError):
        sl3_noncocompact_family(4)


@pytest.mark.parametrize("p,verdict", [(3, "yes"), (5, "yes"), (13, "no")])
def test_sl3_cyclic(p, verdict):
    _, rep = cocompact_sl3_cyclic(7, p)
    assert rep.cocompact == verdict


def test_sl3_cyclic_p2_conflict_is_flagged():
    _, rep = cocompact_sl3_cyclic(7, 2)
    assert rep.certificate["criterion"]["verdict"] == "fails"
    assert rep.note
