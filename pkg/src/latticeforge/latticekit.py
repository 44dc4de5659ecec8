"""Classical-group tables and lattice reports built by restriction of scalars.

A lattice is described by a number field F and a construction (orthogonal
group of a form, special linear group over F or over a quaternion algebra,
unitary group of a Hermitian form over a quadratic extension or over a
quaternion algebra, or SL_1 of a cyclic algebra).  The report lists the real
group at every place of F and decides cocompactness whenever a certificate
is available.
"""

import math
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from . import linalg as L
from .arith import fraction_str, squarefree_int, to_fraction
from .numfield import (
    QQ, FieldElement, QuadExtElement, QuadraticExtension, RationalField, evaluate_at,
    field_from_json, make_field, sign_at,
)
from .quadform import (
    QuadraticForm, _dec, _enc, is_isotropic, is_isotropic_over_Q, qrank_so, signature_at,
)

FAMILIES = ("SL_R", "SL_C", "SL_H", "SU", "SO", "SO_C", "SO_H", "Sp_R", "Sp_C", "Sp_pq")
COMPLEX_FAMILIES = ("SL_C", "SO_C", "Sp_C")


class InvalidLabel(ValueError):
    pass


class NotSimpleError(ValueError):
    pass


@dataclass(frozen=True)
class GroupLabel:
    family: str
    params: tuple

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(int(x) for x in self.params))
        _validate(self)

    def __str__(self):
        f, p = self.family, self.params
        if f in ("SU", "SO"):
            return f"{f}({p[0]},{p[1]})"
        if f == "Sp_pq":
            return f"Sp({p[0]},{p[1]})"
        base, fld = f.split("_")
        fld = {"R": "R", "C": "C", "H": "H"}[fld]
        return f"{base}({p[0]},{fld})"

    def to_json(self):
        return {"family": self.family, "params": list(self.params), "name": str(self)}

    @classmethod
    def parse(cls, text):
        """Parse names such as SL(3,R), SO(2,3), SO(4,H), Sp(4,C), Sp(1,2), SU(2,3).

        The compact groups SO(n), SU(n) and Sp(n) stand for SO(n,0), SU(n,0), Sp(n,0).
        """
        m = re.fullmatch(r"\s*(SU|SO|Sp)\s*\(\s*(\d+)\s*\)\s*", text)
        if m:
            text = f"{m.group(1)}({m.group(2)},0)"
        m = re.fullmatch(r"\s*(SL|SU|SO|Sp)\s*\(\s*(\d+)\s*,\s*([0-9]+|R|C|H)\s*\)\s*", text)
        if not m:
            raise InvalidLabel(f"cannot parse group label {text!r}")
        name, a, b = m.groups()
        if b in ("R", "C", "H"):
            fam = f"{name}_{b}"
            if fam not in FAMILIES:
                raise InvalidLabel(f"{name}(n,{b}) is not a classical family here")
            return cls(fam, (int(a),))
        fam = {"SU": "SU", "SO": "SO", "Sp": "Sp_pq"}.get(name)
        if fam is None:
            raise InvalidLabel(f"{name}(p,q) is not a classical family here")
        return cls(fam, (int(a), int(b)))


def _validate(label):
    f, p = label.family, label.params
    if f not in FAMILIES:
        raise InvalidLabel(f"unknown family {f!r}")
    want = 2 if f in ("SU", "SO", "Sp_pq") else 1
    if len(p) != want:
        raise InvalidLabel(f"{f} takes {want} parameter(s)")
    if any(x < 0 for x in p):
        raise InvalidLabel("parameters must be nonnegative")
    n = sum(p)
    ok = {
        "SL_R": n >= 2, "SL_C": n >= 2, "SL_H": n >= 1, "SU": n >= 2,
        "SO": n >= 2, "SO_C": n >= 2, "SO_H": n >= 1,
        "Sp_R": n >= 2 and n % 2 == 0, "Sp_C": n >= 2 and n % 2 == 0, "Sp_pq": n >= 1,
    }[f]
    if not ok:
        raise InvalidLabel(f"invalid parameters {p} for {f}")


def _lab(x):
    if isinstance(x, GroupLabel):
        return x
    if isinstance(x, str):
        return GroupLabel.parse(x)
    fam, params = x
    return GroupLabel(fam, params)


def type_of(label):
    """(letter, rank) of the complexified root system, read off the classical table."""
    g = _lab(label)
    f, p = g.family, g.params
    if f in ("SL_R", "SL_C"):
        return "A", p[0] - 1
    if f == "SL_H":
        return "A", 2 * p[0] - 1
    if f == "SU":
        return "A", p[0] + p[1] - 1
    if f in ("SO", "SO_C"):
        N = sum(p)
        return ("B", (N - 1) // 2) if N % 2 else ("D", N // 2)
    if f == "SO_H":
        return "D", p[0]
    if f in ("Sp_R", "Sp_C"):
        return "C", p[0] // 2
    return "C", p[0] + p[1]


def rrank(label):
    g = _lab(label)
    f, p = g.family, g.params
    if f in ("SL_R", "SL_C"):
        return p[0] - 1
    if f == "SL_H":
        return p[0] - 1
    if f in ("SU", "SO", "Sp_pq"):
        return min(p)
    if f == "SO_C":
        return p[0] // 2
    if f == "SO_H":
        return p[0] // 2
    return p[0] // 2


def maximal_compact(label):
    g = _lab(label)
    f, p = g.family, g.params
    return {
        "SL_R": lambda: f"SO({p[0]})", "SL_C": lambda: f"SU({p[0]})",
        "SL_H": lambda: f"Sp({p[0]})", "SU": lambda: f"S(U({p[0]}) x U({p[1]}))",
        "SO": lambda: f"S(O({p[0]}) x O({p[1]}))", "SO_C": lambda: f"SO({p[0]})",
        "SO_H": lambda: f"U({p[0]})", "Sp_R": lambda: f"U({p[0] // 2})",
        "Sp_C": lambda: f"Sp({p[0] // 2})", "Sp_pq": lambda: f"Sp({p[0]}) x Sp({p[1]})",
    }[f]()


def real_dimension(label):
    letter, n = type_of(label)
    d = {"A": n * n + 2 * n, "B": 2 * n * n + n, "C": 2 * n * n + n, "D": 2 * n * n - n}[letter]
    return 2 * d if _lab(label).family in COMPLEX_FAMILIES else d


def is_compact(label):
    g = _lab(label)
    return g.family not in COMPLEX_FAMILIES and rrank(g) == 0


def complexify(label):
    """Tuple of complex labels (two factors when the input is already complex)."""
    g = _lab(label)
    f, p = g.family, g.params
    if f in COMPLEX_FAMILIES:
        return (g, g)
    if f == "SL_R":
        out = ("SL_C", p[0])
    elif f in ("SL_H", "SO_H"):
        out = (f[:2] + "_C", 2 * p[0])
    elif f == "SU":
        out = ("SL_C", p[0] + p[1])
    elif f == "SO":
        out = ("SO_C", p[0] + p[1])
    elif f == "Sp_R":
        out = ("Sp_C", p[0])
    else:
        out = ("Sp_C", 2 * (p[0] + p[1]))
    return (GroupLabel(out[0], (out[1],)),)


def table_row(label):
    g = _lab(label)
    letter, n = type_of(g)
    return {"label": str(g), "type": f"{letter}{n}", "rrank": rrank(g),
            "maximal_compact": maximal_compact(g), "dim": real_dimension(g),
            "compact": is_compact(g), "complexification": [str(c) for c in complexify(g)]}


def normalized_type(label):
    """Type after the low-rank isogenies: B1, C1 -> A1; C2 -> B2; D3 -> A3.

    D2 groups are simple only for SO(1,3) (isogenous to SL(2,C)); the rest are
    products of two A1 factors.  D1 groups are abelian.
    """
    g = _lab(label)
    letter, n = type_of(g)
    if letter in ("B", "C") and n == 1:
        return "A", 1
    if letter == "C" and n == 2:
        return "B", 2
    if letter == "D" and n == 3:
        return "A", 3
    if letter == "D" and n == 2:
        if g.family == "SO" and sorted(g.params) == [1, 3]:
            return "A", 1
        raise NotSimpleError(f"{g} is not simple: type D2 groups such as SO(2,2) are "
                             "isogenous to products of two groups of type A1")
    if letter == "D" and n == 1:
        raise NotSimpleError(f"{g} is abelian, not semisimple")
    if letter == "A" and n == 0:
        raise NotSimpleError(f"{g} is trivial")
    return letter, n


def is_isotypic(labels):
    types = {normalized_type(x) for x in labels}
    return len(types) <= 1


def all_labels(bound=8):
    """Every valid label with parameters at most bound."""
    out = []
    for f in FAMILIES:
        if f in ("SU", "SO", "Sp_pq"):
            for p in range(bound + 1):
                for q in range(bound + 1):
                    try:
                        out.append(GroupLabel(f, (p, q)))
                    except InvalidLabel:
                        pass
        else:
            for n in range(1, bound + 1):
                try:
                    out.append(GroupLabel(f, (n,)))
                except InvalidLabel:
                    pass
    return out


# -- lattice descriptors and reports ---------------------------------------------------

CONSTRUCTIONS = ("SO-form", "SL-n-over-F", "SL-n-over-D", "SU-over-L", "SU-over-D",
                 "SL1-cyclic")


@dataclass
class LatticeDescriptor:
    field: object
    construction: str
    data: dict

    def __post_init__(self):
        if self.construction not in CONSTRUCTIONS:
            raise ValueError(f"unknown construction {self.construction!r}")
        need = {"SO-form": ("form",), "SL-n-over-F": ("n",), "SL-n-over-D": ("algebra", "n"),
                "SU-over-L": ("beta", "hermitian"), "SU-over-D": ("form",),
                "SL1-cyclic": ("algebra",)}[self.construction]
        missing = [k for k in need if k not in self.data]
        if missing:
            raise ValueError(f"{self.construction} needs {', '.join(missing)}")

    def to_json(self):
        d = self.data
        out = {"field": self.field.to_json(), "construction": self.construction}
        c = self.construction
        if c == "SO-form":
            out["gram"] = d["form"].to_json()["gram"]
        elif c == "SL-n-over-F":
            out["n"] = d["n"]
        elif c == "SL-n-over-D":
            out["n"] = d["n"]
            out["algebra"] = d["algebra"].to_json()
        elif c == "SU-over-L":
            out["beta"] = _enc(d["beta"])
            out["hermitian"] = [[z.to_json() for z in row] for row in d["hermitian"]]
        elif c == "SU-over-D":
            f = d["form"]
            out["algebra"] = f.algebra.to_json()
            out["tau"] = f.tau
            out["hermitian"] = [[x.to_json() for x in row] for row in f.gram]
        else:
            out["algebra"] = d["algebra"].to_json()
        return out


def descriptor_from_json(desc):
    from .quatalg import HermitianFormOverD, algebra_from_json
    F = field_from_json(desc.get("field", "Q"))
    c = desc.get("construction")
    if c == "SO-form":
        gram = desc.get("gram")
        if gram is None:
            diag = desc["diagonal"]
            n = len(diag)
            gram = [[diag[i] if i == j else "0" for j in range(n)] for i in range(n)]
        return LatticeDescriptor(F, c, {"form": QuadraticForm([[_dec(F, x) for x in r] for r in gram], F)})
    if c == "SL-n-over-F":
        return LatticeDescriptor(F, c, {"n": int(desc["n"])})
    if c == "SL-n-over-D":
        alg = algebra_from_json(dict(desc["algebra"], field=desc.get("field", "Q")))
        return LatticeDescriptor(F, c, {"algebra": alg, "n": int(desc["n"])})
    if c == "SU-over-L":
        beta = _dec(F, desc["beta"])
        ext = QuadraticExtension(F, beta)
        herm = [[QuadExtElement(ext, _dec(F, z["u"]), _dec(F, z.get("v", "0"))) for z in r]
                for r in desc["hermitian"]]
        return LatticeDescriptor(F, c, {"beta": beta, "hermitian": herm, "ext": ext})
    if c == "SU-over-D":
        alg = algebra_from_json(dict(desc["algebra"], field=desc.get("field", "Q")))
        gram = [[alg.coerce([_dec(F, t) for t in x]) for x in r] for r in desc["hermitian"]]
        return LatticeDescriptor(F, c, {"form": HermitianFormOverD(alg, gram, desc.get("tau", "tau_c"))})
    if c == "SL1-cyclic":
        from .cyclicalg import CyclicAlgebra, cyclotomic_real_subfield
        alg = desc["algebra"]
        ext = cyclotomic_real_subfield(int(alg["q"]))
        return LatticeDescriptor(QQ, c, {"algebra": CyclicAlgebra(ext, to_fraction(alg["alpha"]))})
    raise ValueError(f"unknown construction {c!r}")


@dataclass
class PlaceEntry:
    place: object
    label: GroupLabel
    root: str = ""
    detail: dict = dc_field(default_factory=dict)

    @property
    def compact(self):
        return is_compact(self.label)

    def to_json(self):
        out = {"place": self.place.to_json(), "group": self.label.to_json(),
               "compact": self.compact}
        if self.root:
            out["root"] = self.root
        out.update(self.detail)
        return out


@dataclass
class LatticeReport:
    per_place: list
    cocompact: str                 # yes | no | inconclusive
    certificate: dict = None
    qrank: object = "unavailable"
    irreducible: bool = False
    note: str = ""

    @property
    def compact_places(self):
        return [e for e in self.per_place if e.compact]

    @property
    def ambient(self):
        return [e.label for e in self.per_place if not e.compact]

    def to_json(self):
        out = {
            "per_place": [e.to_json() for e in self.per_place],
            "compact_places": [e.place.to_json() for e in self.compact_places],
            "ambient": " x ".join(str(g) for g in self.ambient) or "trivial",
            "irreducible": self.irreducible,
            "qrank": self.qrank,
            "verdict": {"cocompact": self.cocompact},
        }
        if self.certificate is not None:
            out["certificate"] = self.certificate
        else:
            out["inconclusive"] = True
        if self.note:
            out["note"] = self.note
        return out


def ordered_places(F):
    """Real places by decreasing value of the generator, then complex places."""
    if isinstance(F, RationalField):
        return list(F.places)
    real = sorted(F.real_places(), key=lambda pl: -_approx(pl))
    return real + list(F.complex_places())


def _approx(pl):
    v = pl.approx()
    return float(v.real if isinstance(v, complex) else v)


def _root_str(pl):
    if isinstance(pl.field, RationalField):
        return ""
    v = pl.approx()
    if isinstance(v, complex) or hasattr(v, "imag") and getattr(v, "imag", 0):
        v = complex(v)
        return f"{v.real:.6f}{v.imag:+.6f}i"
    return f"{float(v):.6f}"


def build_lattice(desc):
    """Per-place real groups and a cocompactness verdict with its certificate."""
    if isinstance(desc, dict):
        desc = descriptor_from_json(desc)
    builder = {
        "SO-form": _build_so, "SL-n-over-F": _build_sl_f, "SL-n-over-D": _build_sl_d,
        "SU-over-L": _build_su_l, "SU-over-D": _build_su_d, "SL1-cyclic": _build_cyclic,
    }[desc.construction]
    return builder(desc)


def _compact_certificate(entries):
    for e in entries:
        if e.compact:
            return {"kind": "compact-place", "place": e.place.to_json(), "group": str(e.label),
                    "reason": f"{e.label} is compact, so the diagonal embedding is cocompact"}
    return None


def _several_places(F, simple=True):
    return simple and len(F.places) > 1


def _build_so(desc):
    F = desc.field
    form = desc.data["form"]
    n = form.dim
    if form.is_degenerate():
        raise ValueError("form is degenerate")
    entries = []
    for pl in ordered_places(F):
        if pl.is_real:
            p, q = signature_at(form, None if isinstance(F, RationalField) else pl)
            entries.append(PlaceEntry(pl, GroupLabel("SO", (p, q)), _root_str(pl),
                                      {"signature": [p, q]}))
        else:
            entries.append(PlaceEntry(pl, GroupLabel("SO_C", (n,)), _root_str(pl)))
    qrank = qrank_so(form) if form.is_rational else "unavailable"
    rep = LatticeReport(entries, "inconclusive", qrank=qrank,
                        irreducible=_several_places(F, n >= 3 and n != 4))
    cert = _compact_certificate(entries)
    if cert:
        rep.cocompact, rep.certificate = "yes", cert
        return rep
    iso = is_isotropic(form)
    if iso.verdict == "anisotropic":
        rep.cocompact = "yes"
        rep.certificate = {"kind": "anisotropic", "isotropy": iso.to_json(),
                           "reason": "no unipotent elements in SO of an anisotropic form"}
    elif iso.verdict == "isotropic":
        v = _integral(iso.witness, F)
        rep.cocompact = "no"
        rep.certificate = {"kind": "isotropic-vector", "witness": [_enc(x) for x in v],
                           "value": _enc(form.value(v))}
        if form.is_rational and n >= 3:
            u = eichler_unipotent(form, v)
            if u is not None:
                rep.certificate["unipotent"] = [[_enc(x) for x in r] for r in u]
                rep.certificate["reason"] = "Eichler transformation fixing the isotropic line"
    else:
        rep.note = iso.note
    return rep


def _integral(v, F):
    """Scale a vector over F to one with integral power-basis coordinates."""
    den = 1
    for x in v:
        cs = x.coeffs if isinstance(x, FieldElement) else (Fraction(x),)
        for c in cs:
            den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
    return [x * den for x in v]


def eichler_unipotent(form, v):
    """Integral unipotent element of SO(form) built from an isotropic vector v.

    With w orthogonal to v and outside Qv, E(x) = x + B(x,v) w - B(x,w) v
    - B(w,w)/2 B(x,v) v preserves B.  Scaling w by an integer clears denominators.
    """
    G = form.gram
    n = form.dim
    Gv = L.matvec(G, v)
    w = None
    for k in range(n):
        e = [Fraction(int(i == k)) for i in range(n)]
        # project e_k into v-perp along a vector y with B(y, v) != 0
        cand = e
        if L.bilinear(G, e, v) != 0:
            continue
        if L.rank([v, cand]) == 2:
            w = cand
            break
    if w is None:
        basis = L.nullspace([Gv])
        for b in basis:
            if L.rank([v, b]) == 2:
                w = b
                break
    if w is None:
        return None

    def E(w):
        Gw = L.matvec(G, w)
        ww = L.bilinear(G, w, w)
        cols = []
        for k in range(n):
            xv = Gv[k]      # B(e_k, v)
            xw = Gw[k]
            cols.append([Fraction(int(i == k)) + xv * w[i] - xw * v[i] - ww / 2 * xv * v[i]
                         for i in range(n)])
        return L.from_columns(cols)
    lin = L.from_columns([[Gv[k] * w[i] - L.matvec(G, w)[k] * v[i] for i in range(n)]
                          for k in range(n)])
    quad = L.from_columns([[L.bilinear(G, w, w) / 2 * Gv[k] * v[i] for i in range(n)]
                           for k in range(n)])
    m = _den(lin) * _den(quad)
    u = E([m * x for x in w])
    assert all(x.denominator == 1 for r in u for x in r)
    assert L.mat_equal(L.congruent(u, G), G)
    assert is_unipotent_matrix(u)
    return u


def _den(m):
    d = 1
    for r in m:
        for x in r:
            d = d * Fraction(x).denominator // math.gcd(d, Fraction(x).denominator)
    return d


def is_unipotent_matrix(m):
    n = len(m)
    cp = L.charpoly(m)
    target = [Fraction(math.comb(n, k) * (-1) ** (n - k)) for k in range(n + 1)]
    return all(a == b for a, b in zip(cp, target))


def _elementary(n, F):
    u = L.identity(n, F.one, F.zero)
    u[0][n - 1] = F.one
    return u


def _build_sl_f(desc):
    F = desc.field
    n = int(desc.data["n"])
    entries = []
    for pl in ordered_places(F):
        lab = GroupLabel("SL_R" if pl.is_real else "SL_C", (n,))
        entries.append(PlaceEntry(pl, lab, _root_str(pl)))
    u = _elementary(n, F)
    cert = {"kind": "unipotent", "unipotent": [[_enc(x) for x in r] for r in u],
            "reason": "elementary matrix with integral entries"}
    return LatticeReport(entries, "no", cert, qrank=n - 1 if isinstance(F, RationalField) else "unavailable",
                         irreducible=_several_places(F))


def _build_sl_d(desc):
    from .quatalg import is_division, splits_at
    F = desc.field
    alg = desc.data["algebra"]
    n = int(desc.data["n"])
    entries = []
    for pl in ordered_places(F):
        if not pl.is_real:
            lab = GroupLabel("SL_C", (2 * n,))
        elif splits_at(alg, pl):
            lab = GroupLabel("SL_R", (2 * n,))
        else:
            lab = GroupLabel("SL_H", (n,))
        entries.append(PlaceEntry(pl, lab, _root_str(pl), {"split": lab.family != "SL_H"}))
    rep = LatticeReport(entries, "inconclusive", irreducible=_several_places(F))
    cert = _compact_certificate(entries)
    if cert:
        rep.cocompact, rep.certificate = "yes", cert
        return rep
    if n >= 2:
        u = _elementary(n, F)
        rep.cocompact = "no"
        rep.certificate = {"kind": "unipotent", "unipotent": [[_enc(x) for x in r] for r in u]}
        return rep
    verdict = is_division(alg)
    if verdict.verdict == "division":
        rep.cocompact = "yes"
        rep.certificate = {"kind": "division-algebra", "division": verdict.to_json(),
                           "reason": "every nonidentity element of SL(1,D) is semisimple"}
    elif verdict.verdict == "split":
        x = quaternion_unipotent(alg, verdict.splitting["i"], verdict.splitting["j"])
        rep.cocompact = "no"
        rep.certificate = {"kind": "unipotent", "quaternion": x.to_json(),
                           "reason": "1 + nilpotent with reduced trace 2 and reduced norm 1",
                           "split": verdict.to_json()}
    else:
        rep.note = verdict.note
    return rep


def quaternion_unipotent(alg, I, J):
    """1 + m nu where nu maps to E_12 under the splitting and m clears denominators."""
    from .quatalg import reduced_norm, reduced_trace, split_embedding
    F = alg.base
    basis = alg.basis()
    images = [split_embedding(alg, b, I, J) for b in basis]
    cols = [[m[0][0], m[0][1], m[1][0], m[1][1]] for m in images]
    sol = L.solve(L.from_columns(cols), [F.zero, F.one, F.zero, F.zero])
    assert sol is not None
    nu = alg.zero
    for c, b in zip(sol, basis):
        nu = nu + b.scale(c)
    den = 1
    for c in sol:
        cs = c.coeffs if isinstance(c, FieldElement) else (Fraction(c),)
        for t in cs:
            den = den * Fraction(t).denominator // math.gcd(den, Fraction(t).denominator)
    x = alg.one + nu.scale(F.coerce(den))
    assert reduced_norm(x) == F.one and reduced_trace(x) == 2 * F.one
    return x


def hermitian_diagonal_over_L(ext, h):
    """Diagonal entries (in the base field) of a sigma-Hermitian matrix over L."""
    n = len(h)
    F = ext.base

    def pair(x, y):
        acc = ext.zero
        for i in range(n):
            for j in range(n):
                acc = acc + x[i].conj() * h[i][j] * y[j]
        return acc
    vecs = [[ext.one if i == j else ext.zero for i in range(n)] for j in range(n)]
    diag = []
    while vecs:
        k = next((a for a, v in enumerate(vecs) if not pair(v, v).is_zero()), None)
        if k is None:
            for a in range(len(vecs)):
                for b in range(a + 1, len(vecs)):
                    for c in (ext.one, ext(F.zero, F.one)):
                        w = [x + c * y for x, y in zip(vecs[a], vecs[b])]
                        if k is None and not pair(w, w).is_zero():
                            k, vecs[a] = a, w
        if k is None:
            raise ValueError("Hermitian form is degenerate")
        piv = vecs.pop(k)
        d = pair(piv, piv)
        diag.append(d.u)
        vecs = [[x - (pair(piv, v) / d) * y for x, y in zip(v, piv)] for v in vecs]
    return diag


def _build_su_l(desc):
    F = desc.field
    beta = desc.data["beta"]
    ext = desc.data.get("ext") or QuadraticExtension(F, beta)
    h = desc.data["hermitian"]
    n = len(h)
    diag = hermitian_diagonal_over_L(ext, h)
    entries = []
    for pl in ordered_places(F):
        if not pl.is_real:
            lab = GroupLabel("SL_C", (n,))
        else:
            sb = _sign(F, beta, pl)
            if sb > 0:
                lab = GroupLabel("SL_R", (n,))
            else:
                p = sum(1 for d in diag if _sign(F, d, pl) > 0)
                lab = GroupLabel("SU", (p, n - p))
        entries.append(PlaceEntry(pl, lab, _root_str(pl)))
    rep = LatticeReport(entries, "inconclusive", irreducible=_several_places(F))
    cert = _compact_certificate(entries)
    if cert:
        rep.cocompact, rep.certificate = "yes", cert
        return rep
    for i in range(n):
        if h[i][i].is_zero():
            v = [ext.one if k == i else ext.zero for k in range(n)]
            rep.cocompact = "no"
            rep.certificate = {"kind": "isotropic-vector", "witness": [z.to_json() for z in v]}
            return rep
    # h(x, x) as a quadratic form over F on L^n = F^{2n}
    basis = []
    for i in range(n):
        for c in (ext.one, ext(F.zero, F.one)):
            basis.append([c if k == i else ext.zero for k in range(n)])

    def pair(x, y):
        acc = ext.zero
        for a in range(n):
            for b in range(n):
                acc = acc + x[a].conj() * h[a][b] * y[b]
        return acc
    gram = [[pair(x, y).u for y in basis] for x in basis]
    cert = is_isotropic(QuadraticForm(gram, F))
    if cert.verdict == "isotropic":
        w = cert.witness
        v = [ext(w[2 * k], w[2 * k + 1]) for k in range(n)]
        rep.cocompact = "no"
        rep.certificate = {"kind": "isotropic-vector", "witness": [z.to_json() for z in v]}
    elif cert.verdict == "anisotropic":
        rep.cocompact = "yes"
        rep.certificate = {"kind": "anisotropic", "isotropy": cert.to_json()}
    else:
        rep.note = cert.note
    return rep


def _sign(F, x, pl):
    if isinstance(F, RationalField):
        x = Fraction(x)
        return (x > 0) - (x < 0)
    return sign_at(x, pl)


def _build_su_d(desc):
    from .quatalg import hermitian_diag_over_D, is_division
    form = desc.data["form"]
    F = form.algebra.base
    hd = hermitian_diag_over_D(form)
    by_index = {(d["place"].kind, d["place"].index): d for d in hd.places}
    entries = []
    for pl in ordered_places(F):
        d = by_index[(pl.kind, pl.index)]
        lab = GroupLabel(*d["label"])
        extra = {"split": d["split"]}
        if "signature" in d:
            extra["signature"] = list(d["signature"])
        entries.append(PlaceEntry(pl, lab, _root_str(pl), extra))
    rep = LatticeReport(entries, "inconclusive", irreducible=_several_places(F))
    cert = _compact_certificate(entries)
    if cert:
        rep.cocompact, rep.certificate = "yes", cert
        return rep
    if hd.isotropic_witness is not None:
        rep.cocompact = "no"
        rep.certificate = {"kind": "isotropic-vector",
                           "witness": [x.to_json() for x in hd.isotropic_witness]}
        return rep
    if form.dim == 1:
        dv = is_division(form.algebra)
        if dv.verdict == "division":
            rep.cocompact = "yes"
            rep.certificate = {"kind": "anisotropic", "division": dv.to_json(),
                               "reason": "a one-dimensional Hermitian form over a division "
                                         "algebra is anisotropic"}
            return rep
    rep.note = "no compact place and no isotropic vector found"
    return rep


def _build_cyclic(desc):
    from .cyclicalg import is_division_cyclic
    alg = desc.data["algebra"]
    d = alg.degree
    pl = QQ.places[0]
    entries = [PlaceEntry(pl, GroupLabel("SL_R", (d,)), "", {"split": True})]
    verdict = is_division_cyclic(alg)
    rep = LatticeReport(entries, "inconclusive")
    rep.qrank = 0 if verdict.verdict == "division" else ("unavailable" if verdict.verdict != "split" else d - 1)
    if verdict.verdict == "division":
        rep.cocompact = "yes"
        rep.certificate = {"kind": "division-algebra", "division": verdict.to_json(),
                           "reason": "a division algebra has no nontrivial unipotent units"}
    elif verdict.verdict == "split":
        u = cyclic_unipotent(alg, verdict.norm_preimage)
        from .cyclicalg import embed_cyclic_matrix
        m = embed_cyclic_matrix(u)
        rep.cocompact = "no"
        rep.certificate = {"kind": "unipotent", "element": u.to_json(),
                           "division": verdict.to_json(),
                           "charpoly": [c.to_json() if hasattr(c, "to_json") else fraction_str(c)
                                        for c in L.charpoly(m)]}
    else:
        rep.note = verdict.note
    return rep


def cyclic_unipotent(alg, t):
    """1 + m nu with nu the preimage of E_12 under the matrix model twisted by t."""
    from .cyclicalg import CyclicElement, split_matrix_model
    ext = alg.ext
    d = alg.degree
    model = split_matrix_model(alg, t)
    basis = []
    for j in range(d):
        for b in ext.basis():
            cs = [ext.zero] * d
            cs[j] = b
            basis.append(CyclicElement(alg, cs))
    cols = [[x for r in model(b) for x in r] for b in basis]
    target = [Fraction(0)] * (d * d)
    target[1] = Fraction(1)
    sol = L.solve(L.from_columns(cols), target)
    assert sol is not None
    den = 1
    for c in sol:
        den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
    nu = alg.scalar(ext.zero)
    for c, b in zip(sol, basis):
        nu = nu + CyclicElement(alg, [ext.coerce(c * den) * x for x in b.coeffs])
    return alg.one + nu


# -- recipes -----------------------------------------------------------------------------

def _squarefrees(t):
    out, m = [], 2
    while len(out) < t:
        if squarefree_int(m) == m and all(math.gcd(m, k) == 1 for k in out):
            out.append(m)
        m += 1
    return out


def _sum_of_roots_field(ms):
    import sympy
    if not ms:
        return QQ
    x = sympy.Symbol("x")
    mp = sympy.minimal_polynomial(sum(sympy.sqrt(m) for m in ms), x)
    coeffs = [int(c) for c in reversed(sympy.Poly(mp, x).all_coeffs())]
    return make_field(coeffs)


def _simplest_between(lo, hi):
    """Simplest rational strictly inside (lo, hi); None stands for an infinite end."""
    if lo is None:
        return Fraction(math.ceil(hi) - 1)
    if hi is None:
        return Fraction(math.floor(lo) + 1)
    mid = (lo + hi) / 2
    r = Fraction(round(mid))
    if lo < r < hi:
        return r
    den = 1
    while True:
        den += 1
        k = math.floor(lo * den) + 1
        if Fraction(k, den) < hi:
            return Fraction(k, den)


def _separated(F, places, alpha):
    """Rational enclosures of sigma_j(alpha), refined until pairwise disjoint."""
    width = Fraction(1, 4)
    while True:
        encl = [evaluate_at(alpha, pl, width) for pl in places]
        ok = all(encl[k].hi < encl[k - 1].lo for k in range(1, len(encl)))
        if ok:
            return encl
        width /= 16


@dataclass
class RecipeResult:
    squarefrees: list
    field: object
    alpha_name: str
    coefficients: list
    places: list
    targets: list
    signatures: list
    sign_rows: list
    verified: bool

    def form(self):
        F = self.field
        alpha = F.gen if not isinstance(F, RationalField) else Fraction(0)
        return QuadraticForm.diagonal([alpha - a for a in self.coefficients], F)

    def to_json(self):
        return {
            "squarefrees": self.squarefrees,
            "field": self.field.to_json(),
            "alpha": self.alpha_name,
            "a": [fraction_str(a) for a in self.coefficients],
            "places": [{"place": pl.to_json(), "alpha": _root_str(pl)} for pl in self.places],
            "targets": [list(t) for t in self.targets],
            "signatures": [list(s) for s in self.signatures],
            "sign_rows": ["(" + ",".join(r) + ")" for r in self.sign_rows],
            "verdict": "verified" if self.verified else "mismatch",
            "certificate": {"signatures": [list(s) for s in self.signatures]},
        }


def irreducible_so_recipe(targets):
    """Field F and a_1..a_n so that diag(alpha - a_l) has the target signature at
    each real place of F = Q(sqrt m_1, ..., sqrt m_t), alpha = sum sqrt m_i.

    Targets are sorted by decreasing p and padded with (0, n) to length 2^t.
    Places are taken by decreasing sigma(alpha); a_l lies strictly between
    the sigma_j(alpha) with l > p_j and those with l <= p_j.
    """
    targets = [tuple(int(x) for x in t) for t in targets]
    if not targets:
        raise ValueError("no targets")
    n = sum(targets[0])
    if any(sum(t) != n or min(t) < 0 for t in targets):
        raise ValueError("all targets must be signatures (p, n - p) of the same n")
    t = 0
    while 2 ** t < len(targets):
        t += 1
    padded = sorted(targets, key=lambda s: -s[0]) + [(0, n)] * (2 ** t - len(targets))
    padded.sort(key=lambda s: -s[0])
    ms = _squarefrees(t)
    F = _sum_of_roots_field(ms)
    if isinstance(F, RationalField):
        places = list(F.places)
        values = [(Fraction(0), Fraction(0))]
    else:
        places = ordered_places(F)
        assert len(places) == 2 ** t and all(pl.is_real for pl in places)
        encl = _separated(F, places, F.gen)
        values = [(e.lo, e.hi) for e in encl]
    ps = [s[0] for s in padded]
    coeffs = []
    for ell in range(1, n + 1):
        above = [j for j, p in enumerate(ps) if ell <= p]
        below = [j for j, p in enumerate(ps) if ell > p]
        assert all(a < b for a in above for b in below) or not above or not below
        lo = max(values[j][1] for j in below) if below else None
        hi = min(values[j][0] for j in above) if above else None
        assert lo is None or hi is None or lo < hi, "infeasible ordering"
        coeffs.append(_simplest_between(lo, hi))
    res = RecipeResult(ms, F, " + ".join(f"sqrt({m})" for m in ms) or "0", coeffs, places,
                       padded, [], [], False)
    form = res.form()
    sigs, rows = [], []
    for pl in places:
        sigs.append(signature_at(form, None if isinstance(F, RationalField) else pl))
        if isinstance(F, RationalField):
            rows.append(["+" if -a > 0 else "-" for a in coeffs])
        else:
            rows.append(["+" if sign_at(F.gen - a, pl) > 0 else "-" for a in coeffs])
    res.signatures = sigs
    res.sign_rows = rows
    res.verified = [tuple(s) for s in sigs] == [tuple(s) for s in padded]
    assert res.verified, "recipe verification failed"
    return res


def sl3_unipotent(r, a=2, b=0, c=0):
    """Element of U_Gamma for SU(J_3; Z[sqrt r], sigma), over Q(sqrt r)."""
    ext = QuadraticExtension(QQ, r)
    one, zero = ext.one, ext.zero
    x12 = ext(a, b)
    x13 = ext(Fraction(-(a * a - r * b * b), 2), c)
    x23 = ext(-a, b)
    return ext, [[one, x12, x13], [zero, one, x23], [zero, zero, one]]


def _check_su_j3(ext, g):
    J = [[ext.zero, ext.zero, ext.one], [ext.zero, ext.one, ext.zero],
         [ext.one, ext.zero, ext.zero]]
    gs = [[g[j][i].conj() for j in range(3)] for i in range(3)]
    lhs = L.matmul(L.matmul(gs, J), g)
    return all(lhs[i][j] == J[i][j] for i in range(3) for j in range(3))


def sl3_noncocompact_family(r):
    r = int(r)
    if r < 2 or squarefree_int(r) != r:
        raise ValueError(f"r = {r} must be a square-free integer >= 2")
    ext, u = sl3_unipotent(r)
    assert _check_su_j3(ext, u)
    cp = L.charpoly(u)
    assert [c for c in cp] == [ext.coerce(x) for x in (-1, 3, -3, 1)]
    J = [[ext.zero, ext.zero, ext.one], [ext.zero, ext.one, ext.zero], [ext.one, ext.zero, ext.zero]]
    desc = LatticeDescriptor(QQ, "SU-over-L", {"beta": Fraction(r), "hermitian": J, "ext": ext})
    rep = build_lattice(desc)
    rep.cocompact = "no"
    rep.qrank = 1
    rep.certificate = {
        "kind": "unipotent",
        "unipotent": [[z.to_json() for z in row] for row in u],
        "charpoly": ["-1", "3", "-3", "1"],
        "isotropic_vector": ["1", "0", "0"],
        "reason": "u lies in SU(J3; Z[sqrt r]) and (1,0,0) spans a maximal isotropic line",
    }
    return desc, rep


def cocompact_sl3_cyclic(q, p):
    from .cyclicalg import CyclicAlgebra, cyclotomic_real_subfield, prime_criterion
    crit = prime_criterion(p, q)
    ext = cyclotomic_real_subfield(q)
    alg = CyclicAlgebra(ext, p)
    desc = LatticeDescriptor(QQ, "SL1-cyclic", {"algebra": alg})
    rep = build_lattice(desc)
    rep.certificate = dict(rep.certificate or {}, criterion=crit)
    if crit["verdict"] == "fails" and rep.cocompact == "yes":
        rep.note = (f"criterion fails (order of {p} mod {q} is {crit['order']}), "
                    "yet the algebra is certified division")
    return desc, rep


__all__ = [
    "GroupLabel", "InvalidLabel", "NotSimpleError", "type_of", "rrank", "complexify",
    "is_compact", "is_isotypic", "normalized_type", "table_row", "all_labels",
    "LatticeDescriptor", "LatticeReport", "PlaceEntry", "build_lattice", "descriptor_from_json",
    "irreducible_so_recipe", "RecipeResult", "sl3_noncocompact_family", "cocompact_sl3_cyclic",
    "eichler_unipotent", "is_unipotent_matrix", "quaternion_unipotent", "cyclic_unipotent",
    "ordered_places", "hermitian_diagonal_over_L",
]
