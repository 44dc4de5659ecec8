"""Symmetric bilinear forms over Q and number fields.

Over Q the isotropy question is decided by Hasse-Minkowski: a diagonal form
is isotropic iff it is isotropic at every place, and the local test uses the
Hilbert-symbol criteria (rank 2, 3, 4; rank >= 5 is isotropic at every prime).
Verdicts carry witnesses: an isotropic vector checked exactly, or a place
where the form is locally anisotropic.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, isqrt

import numpy as np

from . import linalg as L
from .arith import (
    factor, is_prime, primes_dividing, rational_sqrt, square_class, squarefree_int, to_fraction,
)
from .numfield import QQ, FieldElement, RationalField, field_from_json, sign_at

INF = "inf"


class DegenerateFormError(ValueError):
    """The form has a nonzero radical where a nondegenerate one is required."""


# -- forms -------------------------------------------------------------------------

class QuadraticForm:
    """Symmetric Gram matrix over Q or a number field."""

    def __init__(self, gram, field=QQ):
        self.field = field
        self.gram = [[field.coerce(x) for x in row] for row in gram]
        n = len(self.gram)
        if any(len(row) != n for row in self.gram):
            raise ValueError("Gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if self.gram[i][j] != self.gram[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        self.dim = n

    @classmethod
    def diagonal(cls, entries, field=QQ):
        n = len(entries)
        zero = field.zero
        return cls([[entries[i] if i == j else zero for j in range(n)] for i in range(n)], field)

    @property
    def is_rational(self):
        return isinstance(self.field, RationalField)

    def det(self):
        return L.det(self.gram)

    def is_degenerate(self):
        return self.det() == 0

    def value(self, v):
        v = [self.field.coerce(x) for x in v]
        return L.bilinear(self.gram, v, v)

    def pair(self, x, y):
        return L.bilinear(self.gram, x, y)

    def change_basis(self, u):
        return QuadraticForm(L.congruent(u, self.gram), self.field)

    def scaled(self, c):
        c = self.field.coerce(c)
        return QuadraticForm([[c * x for x in row] for row in self.gram], self.field)

    def to_json(self):
        return {"field": self.field.to_json(), "gram": [[_enc(x) for x in row] for row in self.gram]}

    @classmethod
    def from_json(cls, desc):
        field = field_from_json(desc.get("field", "Q"))
        gram = [[_dec(field, x) for x in row] for row in desc["gram"]]
        return cls(gram, field)

    def __eq__(self, other):
        return isinstance(other, QuadraticForm) and self.field == other.field and \
            L.mat_equal(self.gram, other.gram)

    def __repr__(self):
        return f"QuadraticForm({self.dim}-dim over {self.field})"


def _enc(x):
    if isinstance(x, FieldElement):
        return x.to_json()
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _dec(field, x):
    if isinstance(x, list):
        return field.coerce([to_fraction(c) for c in x])
    return field.coerce(to_fraction(x))


def _unit_vectors(n, field):
    return [[field.one if i == j else field.zero for i in range(n)] for j in range(n)]


# -- diagonalization ----------------------------------------------------------------

def diagonalize(form):
    """Return (U, diag) with U^T gram U = diag(diag) exactly.

    Orthogonalization with pivot search: a vector of nonzero norm is used as
    pivot; when every remaining vector is isotropic, a pair e_i, e_j with
    B(e_i, e_j) != 0 is replaced by e_i + e_j, e_i - e_j.
    """
    g = form.gram
    n = form.dim
    vecs = _unit_vectors(n, form.field)
    done = []
    while vecs:
        norms = [L.bilinear(g, v, v) for v in vecs]
        k = next((i for i, q in enumerate(norms) if q != 0), None)
        if k is None:
            pair = next(((i, j) for i in range(len(vecs)) for j in range(i + 1, len(vecs))
                         if L.bilinear(g, vecs[i], vecs[j]) != 0), None)
            if pair is None:
                done.extend(vecs)
                break
            i, j = pair
            a, b = vecs[i], vecs[j]
            vecs[i] = [x + y for x, y in zip(a, b)]
            vecs[j] = [x - y for x, y in zip(a, b)]
            continue
        p = vecs.pop(k)
        q = norms[k]
        rest = []
        for v in vecs:
            c = L.bilinear(g, v, p)
            if c != 0:
                c = c / q
                v = [x - c * y for x, y in zip(v, p)]
            rest.append(v)
        vecs = rest
        done.append(p)
    u = L.from_columns(done)
    d = L.congruent(u, g)
    diag = [d[i][i] for i in range(n)]
    assert all(d[i][j] == 0 for i in range(n) for j in range(n) if i != j)
    return u, diag


# -- local theory over Q -----------------------------------------------------------

def _int_class(a):
    """Integer in the same square class as the nonzero rational a."""
    a = Fraction(a)
    if a == 0:
        raise ValueError("Hilbert symbol of zero")
    return a.numerator * a.denominator


def _split(a, p):
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v, a


def _legendre(u, p):
    return 1 if pow(u % p, (p - 1) // 2, p) == 1 else -1


def hilbert_symbol(a, b, v):
    """(a, b)_v for nonzero rationals a, b; v a prime or "inf"."""
    a, b = _int_class(a), _int_class(b)
    if v == INF or v is None or v == float("inf"):
        return -1 if a < 0 and b < 0 else 1
    if not isinstance(v, int) or not is_prime(v):
        raise ValueError(f"place {v!r} is neither prime nor inf")
    p = v
    al, u = _split(a, p)
    be, w = _split(b, p)
    if p == 2:
        def eps(x):
            return ((x - 1) // 2) % 2

        def omega(x):
            return ((x * x - 1) // 8) % 2
        e = eps(u) * eps(w) + al * omega(w) + be * omega(u)
        return -1 if e % 2 else 1
    s = (-1) ** ((al * be * ((p - 1) // 2)) % 2)
    if be % 2:
        s *= _legendre(u, p)
    if al % 2:
        s *= _legendre(w, p)
    return s


def relevant_places(*nums):
    """inf, 2 and the odd primes dividing the given nonzero rationals."""
    primes = {2}
    for x in nums:
        x = Fraction(x)
        primes.update(factor(x.numerator))
        primes.update(factor(x.denominator))
    return [INF] + sorted(primes)


def hilbert_product(a, b):
    """Product of (a, b)_v over all places; +1 by reciprocity."""
    out = 1
    for v in relevant_places(a, b):
        out *= hilbert_symbol(a, b, v)
    return out


def is_local_square(a, v):
    a = Fraction(a)
    if a == 0:
        return True
    if v == INF:
        return a > 0
    n = _int_class(a)
    k, u = _split(n, v)
    if k % 2:
        return False
    if v == 2:
        return u % 8 == 1
    return _legendre(u, v) == 1


def is_locally_isotropic(diag, v):
    """Isotropy of the nondegenerate diagonal form over Q_v (v prime or inf)."""
    diag = [Fraction(a) for a in diag]
    n = len(diag)
    if any(a == 0 for a in diag):
        return True
    if n <= 1:
        return False
    if v == INF:
        return any(a > 0 for a in diag) and any(a < 0 for a in diag)
    d = Fraction(1)
    for a in diag:
        d *= a
    if n == 2:
        return is_local_square(-d, v)
    if n >= 5:
        return True
    eps = 1
    for i in range(n):
        for j in range(i + 1, n):
            eps *= hilbert_symbol(diag[i], diag[j], v)
    if n == 3:
        return hilbert_symbol(-1, -d, v) == eps
    return (not is_local_square(d, v)) or eps == hilbert_symbol(-1, -1, v)


def local_obstruction(diag):
    """First place (inf, then primes ascending) where the form is anisotropic, else None."""
    diag = [Fraction(a) for a in diag]
    if len(diag) == 1:
        return INF if diag[0] != 0 else None
    if len(diag) == 2:
        d = -diag[0] * diag[1]
        if d < 0:
            return INF
        if rational_sqrt(d) is not None:
            return None
        return min(p for p, e in factor(_int_class(d)).items() if e % 2)
    for v in relevant_places(*diag):
        if not is_locally_isotropic(diag, v):
            return v
    return None


# -- certificates ------------------------------------------------------------------

@dataclass
class IsotropyCertificate:
    verdict: str                       # isotropic | anisotropic | inconclusive
    witness: list = None               # isotropic vector, original coordinates
    obstruction: object = None         # place (prime or "inf") or real Place
    note: str = ""
    degenerate: bool = False

    def check(self, form):
        """Re-verify the certificate against the form."""
        if self.verdict == "isotropic":
            return any(x != 0 for x in self.witness) and form.value(self.witness) == 0
        if self.verdict == "anisotropic":
            if self.obstruction == "rank-one":
                return form.dim == 1 and not form.is_degenerate()
            if form.is_rational:
                _, diag = diagonalize(form)
                return local_obstruction(diag) is not None and \
                    not is_locally_isotropic(diag, self.obstruction)
            _, diag = diagonalize(form)
            signs = {sign_at(a, self.obstruction) for a in diag}
            return len(signs) == 1 and 0 not in signs
        return True

    def to_json(self):
        out = {"verdict": self.verdict}
        if self.witness is not None:
            out["certificate"] = {"witness": [_enc(x) for x in self.witness]}
        elif self.obstruction is not None:
            ob = self.obstruction
            out["certificate"] = {"obstruction": ob.to_json() if hasattr(ob, "to_json") else ob}
        else:
            out["inconclusive"] = True
        if self.note:
            out["note"] = self.note
        if self.degenerate:
            out["degenerate"] = True
        return out


def _radical_vector(u, diag):
    for k, a in enumerate(diag):
        if a == 0:
            return [row[k] for row in u]
    return None


def is_isotropic_over_Q(form):
    """Hasse-Minkowski isotropy decision for a form over Q, with certificate."""
    if not form.is_rational:
        raise ValueError("form is not over Q")
    u, diag = diagonalize(form)
    rad = _radical_vector(u, diag)
    if rad is not None:
        return IsotropyCertificate("isotropic", rad, note="radical vector", degenerate=True)
    ob = local_obstruction(diag)
    if ob is not None:
        return IsotropyCertificate("anisotropic", obstruction=ob,
                                   note=f"locally anisotropic at {ob}")
    y = isotropic_vector_diagonal(diag)
    w = L.matvec(u, y)
    assert form.value(w) == 0
    return IsotropyCertificate("isotropic", _primitive(w))


def _primitive(v):
    """Scale a rational vector to a primitive integer vector."""
    from math import gcd, lcm
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    first = next(x for x in ints if x)
    if first < 0:
        ints = [-x for x in ints]
    return [Fraction(x) for x in ints]


# -- isotropic vectors of diagonal forms over Q -----------------------------------------

def isotropic_vector_diagonal(diag):
    """A nonzero rational vector x with sum a_i x_i^2 = 0, for a form known isotropic.

    Coefficients are reduced to squarefree integers; sub-forms are tried in
    increasing size (pairs, triples, quadruples, then an indefinite quintuple).
    """
    diag = [Fraction(a) for a in diag]
    n = len(diag)
    classes = [square_class(a) for a in diag]
    s = [c[0] for c in classes]
    y = _isotropic_squarefree(s)
    if y is None:
        raise ArithmeticError("form is anisotropic")
    # a_i = s_i c_i^2, so x_i = y_i / c_i
    x = [Fraction(y[i]) / classes[i][1] for i in range(n)]
    assert sum(a * t * t for a, t in zip(diag, x)) == 0
    return x


def _embed(n, idx, vals):
    out = [0] * n
    for i, v in zip(idx, vals):
        out[i] = v
    return out


def _isotropic_squarefree(s):
    n = len(s)
    for i, j in combinations(range(n), 2):
        if s[i] == -s[j]:
            return _embed(n, (i, j), (1, 1))
    for size in (3, 4):
        for idx in combinations(range(n), size):
            sub = [s[i] for i in idx]
            if local_obstruction(sub) is None:
                vec = _ternary(sub) if size == 3 else _quaternary(sub)
                return _embed(n, idx, vec)
    if n >= 5:
        pos = [i for i in range(n) if s[i] > 0]
        neg = [i for i in range(n) if s[i] < 0]
        if pos and neg:
            idx = _indefinite_five(pos, neg)
            return _embed(n, idx, _quinary([s[i] for i in idx]))
    return None


def _indefinite_five(pos, neg):
    k = min(len(pos), 4)
    chosen = pos[:k] + neg[:5 - k]
    if len(chosen) < 5:
        chosen = neg[:min(len(neg), 4)]
        chosen = pos[:5 - len(chosen)] + chosen
    return sorted(chosen)


def _ternary(abc, bound=8, limit=256):
    """Integer solution of a x^2 + b y^2 + c z^2 = 0 (known to exist).

    Heights are searched doubling from 8, solving for z from (x, y); past the
    limit the Legendre descent in sympy takes over.
    """
    a, b, c = abc
    while bound <= limit:
        sol = _ternary_search(a, b, c, bound)
        if sol is not None:
            return sol
        bound *= 2
    return _ternary_legendre(a, b, c)


def _ternary_search(a, b, c, bound):
    """Least (by height, then x, y) solution with |x|, |y| <= bound, x >= 0."""
    if max(abs(a), abs(b)) * bound * bound > 1 << 50:
        return None
    xs = np.arange(0, bound + 1, dtype=np.int64)
    ys = np.arange(-bound, bound + 1, dtype=np.int64)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    num = -(a * X * X + b * Y * Y)
    ok = (num % c == 0) & ((X != 0) | (Y != 0))
    q = np.where(ok, num // c, -1)
    ok &= q >= 0
    best = None
    for k in np.flatnonzero(ok):
        qk = int(q.flat[k])
        zk = isqrt(qk)
        if zk * zk != qk:
            continue
        x, y = int(X.flat[k]), int(Y.flat[k])
        cand = (max(abs(x), abs(y), zk), x, abs(y), -y, zk)
        if best is None or cand < best:
            best = cand
    if best is None:
        return None
    return [best[1], -best[3], best[4]]


def _ternary_legendre(a, b, c):
    from sympy import symbols
    from sympy.solvers.diophantine.diophantine import diop_ternary_quadratic_normal
    x, y, z = symbols("x y z", integer=True)
    coeffs, scale = _legendre_normal(a, b, c)
    p, q, r = coeffs
    sol = diop_ternary_quadratic_normal(p * x ** 2 + q * y ** 2 + r * z ** 2)
    if sol[0] is None:
        raise ArithmeticError(f"no solution found for {a}x^2 + {b}y^2 + {c}z^2")
    vec = [Fraction(int(t)) * s for t, s in zip(sol, scale)]
    den = 1
    for t in vec:
        den = den * t.denominator // gcd(den, t.denominator)
    out = [int(t * den) for t in vec]
    g = gcd(gcd(out[0], out[1]), out[2])
    out = [t // g for t in out]
    assert a * out[0] ** 2 + b * out[1] ** 2 + c * out[2] ** 2 == 0
    return out


def _legendre_normal(a, b, c):
    """Squarefree, pairwise coprime (p, q, r) and scalings s with x_orig = s * x_new.

    A prime dividing two coefficients but not the third must divide the third
    variable, so it moves onto that coefficient; |pqr| drops at every step.
    """
    cs = [int(a), int(b), int(c)]
    scale = [Fraction(1)] * 3
    while True:
        g = gcd(gcd(cs[0], cs[1]), cs[2])
        cs = [t // g for t in cs]
        for i in range(3):
            s, k = square_class(Fraction(cs[i]))
            cs[i] = int(s)
            scale[i] /= k
        for i, j, k in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
            g = gcd(cs[i], cs[j])
            if g > 1:
                p = min(factor(g))
                cs[i] //= p
                cs[j] //= p
                cs[k] *= p
                scale[k] *= p
                break
        else:
            return cs, scale


def _represent_search(first, second):
    """Squarefree t with <first, -t> and <second, t> both isotropic.

    t = q (-1)^e_0 prod p^e_p over the bad primes p and one prime q outside
    them.  <a1, a2, -t> is isotropic at v iff (t, -a1 a2)_v = (a1, a2)_v, a
    condition linear over F2 in the exponents once q is fixed; at q itself it
    holds by reciprocity.  For a ternary `second` the analogous condition is
    (t, -a3 a4)_v = (-a3, -a4)_v; a quaternary `second` is checked directly.
    """
    a1, a2 = first
    bad = primes_dividing(2, *[Fraction(x).numerator * Fraction(x).denominator
                               for x in list(first) + list(second)])
    places = [INF] + bad
    gens = [-1] + bad
    conds = [(-a1 * a2, [hilbert_symbol(a1, a2, v) for v in places])]
    if len(second) == 2:
        a3, a4 = second
        conds.append((-a3 * a4, [hilbert_symbol(-a3, -a4, v) for v in places]))
    rows = [[hilbert_symbol(g, c, v) == -1 for g in gens] for c, _ in conds for v in places]
    for q in _primes_outside(bad):
        rhs = [r[k] * (hilbert_symbol(q, c, v) if q > 1 else 1) == -1
               for c, r in conds for k, v in enumerate(places)]
        for e in _f2_solutions(rows, rhs):
            t = q
            for g, bit in zip(gens, e):
                if bit:
                    t *= g
            if all(is_locally_isotropic(list(first) + [-t], v) and
                   is_locally_isotropic(list(second) + [t], v) for v in places):
                return t
    raise AssertionError("unreachable")


def _primes_outside(bad):
    yield 1
    q = 2
    while True:
        if q not in bad and is_prime(q):
            yield q
        q += 1


def _f2_solutions(rows, rhs, limit=64):
    """Solutions of rows * e = rhs over F2 (at most `limit` of them)."""
    n = len(rows[0])
    eqs = [(sum(1 << j for j, b in enumerate(r) if b), int(bool(c))) for r, c in zip(rows, rhs)]
    pivots = []
    for col in range(n):
        k = next((i for i, (m, _) in enumerate(eqs) if m >> col & 1), None)
        if k is None:
            continue
        pm, pc = eqs.pop(k)
        eqs = [(m ^ pm, c ^ pc) if m >> col & 1 else (m, c) for m, c in eqs]
        pivots = [(c0, m ^ pm, c ^ pc) if m >> col & 1 else (c0, m, c) for c0, m, c in pivots]
        pivots.append((col, pm, pc))
    if any(m == 0 and c for m, c in eqs):
        return
    pivot_cols = {c0 for c0, _, _ in pivots}
    free = [j for j in range(n) if j not in pivot_cols]
    for count, mask in enumerate(range(1 << len(free))):
        if count >= limit:
            return
        e = [0] * n
        for i, j in enumerate(free):
            e[j] = mask >> i & 1
        for col, m, c in pivots:
            others = m & ~(1 << col)
            e[col] = c ^ (sum(e[j] for j in range(n) if others >> j & 1) & 1)
        yield e


def _quaternary(s):
    """Witness for an isotropic <a1,a2,a3,a4> all of whose ternary parts are anisotropic."""
    t = _represent_search(s[:2], s[2:])
    x1, x2, w1 = _ternary([s[0], s[1], -t])
    x3, x4, w2 = _ternary([s[2], s[3], t])
    # a1 x1^2 + a2 x2^2 = t w1^2 and a3 x3^2 + a4 x4^2 = -t w2^2, w1 w2 != 0
    assert w1 != 0 and w2 != 0
    return [Fraction(x1, w1), Fraction(x2, w1), Fraction(x3, w2), Fraction(x4, w2)]


def _quinary(s):
    """Witness for an indefinite rank-5 form with no isotropic proper diagonal part."""
    for idx in combinations(range(5), 3):
        sub = [s[i] for i in idx]
        if local_obstruction(sub) is None:
            return _embed(5, idx, _ternary(sub))
    for idx in combinations(range(5), 4):
        sub = [s[i] for i in idx]
        if local_obstruction(sub) is None:
            return _embed(5, idx, _quaternary(sub))
    t = _represent_search(s[:2], s[2:])
    x1, x2, w1 = _ternary([s[0], s[1], -t])
    rest = [s[2], s[3], s[4], t]
    y = isotropic_vector_diagonal(rest)
    assert w1 != 0 and y[3] != 0
    scale = Fraction(1) / y[3]
    return [Fraction(x1, w1), Fraction(x2, w1)] + [Fraction(v) * scale for v in y[:3]]


# -- Witt decomposition -------------------------------------------------------------

@dataclass
class WittDecomposition:
    hyperbolic_count: int
    anisotropic_part: list             # diagonal entries of B'
    basis_change: list                 # U, columns e_1..e_m, f_1..f_m, anisotropic basis
    anisotropy: IsotropyCertificate = None

    def block(self):
        m = self.hyperbolic_count
        entries = [Fraction(1)] * m + [Fraction(-1)] * m + list(self.anisotropic_part)
        n = len(entries)
        return [[entries[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)]

    def check(self, form):
        return L.mat_equal(L.congruent(self.basis_change, form.gram), self.block())

    def to_json(self):
        return {
            "hyperbolic_count": self.hyperbolic_count,
            "anisotropic_part": [_enc(x) for x in self.anisotropic_part],
            "basis_change": [[_enc(x) for x in row] for row in self.basis_change],
            "anisotropy": self.anisotropy.to_json() if self.anisotropy else None,
        }


def witt_decompose(form):
    """Split off hyperbolic planes until the remainder is anisotropic (over Q)."""
    if not form.is_rational:
        raise ValueError("Witt decomposition is implemented over Q")
    g = form.gram
    u, diag = diagonalize(form)
    if any(a == 0 for a in diag):
        raise DegenerateFormError("form is degenerate")
    # current complement: vectors w_k (original coordinates) with norms diag[k]
    ws, ds = _squarefree_basis([[row[k] for row in u] for k in range(form.dim)], diag)
    es, fs = [], []
    while len(ds) >= 2 and local_obstruction(ds) is None:
        x = isotropic_vector_diagonal(ds)
        nz = [k for k, t in enumerate(x) if t != 0]
        i, i2 = nz[0], nz[1]
        uvec = _comb(x, ws)
        v = [c / (ds[i] * x[i]) for c in ws[i]]
        bvv = L.bilinear(g, v, v)
        v = [a - (bvv / 2) * b for a, b in zip(v, uvec)]
        e = [a + b / 2 for a, b in zip(uvec, v)]
        f = [a - b / 2 for a, b in zip(uvec, v)]
        rest = []
        for k, w in enumerate(ws):
            if k in (i, i2):
                continue
            be, bf = L.bilinear(g, w, e), L.bilinear(g, w, f)
            rest.append([a - be * b + bf * c for a, b, c in zip(w, e, f)])
        es.append(e)
        fs.append(f)
        ws, ds = _rediagonalize(g, rest)
    cols = es + fs + ws
    res = WittDecomposition(len(es), list(ds), L.from_columns(cols) if cols else [],
                            None)
    if ds:
        ob = local_obstruction(ds)
        res.anisotropy = IsotropyCertificate("anisotropic", obstruction=ob,
                                             note=f"locally anisotropic at {ob}")
    assert res.check(form)
    return res


def _comb(coeffs, vecs):
    out = [Fraction(0)] * len(vecs[0])
    for c, v in zip(coeffs, vecs):
        if c != 0:
            out = [a + c * b for a, b in zip(out, v)]
    return out


def _squarefree_basis(vecs, norms):
    """Rescale vectors so their norms become squarefree integers."""
    out_v, out_d = [], []
    for v, q in zip(vecs, norms):
        s, c = square_class(q)
        out_v.append([x / c for x in v])
        out_d.append(Fraction(s))
    return out_v, out_d


def _rediagonalize(g, vecs):
    if not vecs:
        return [], []
    sub = [[L.bilinear(g, a, b) for b in vecs] for a in vecs]
    u, diag = diagonalize(QuadraticForm(sub))
    new = [_comb([row[k] for row in u], vecs) for k in range(len(vecs))]
    assert all(d != 0 for d in diag)
    return _squarefree_basis(new, diag)


def qrank_so(form):
    """Q-rank of SO(form): the Witt index over Q."""
    return witt_decompose(form).hyperbolic_count


# -- real places -------------------------------------------------------------------

def signature_at(form, place=None):
    """(p, q) of the form at a real place, from exact signs of a diagonalization."""
    if place is not None and not place.is_real:
        raise ValueError("signature is defined at real places only")
    _, diag = diagonalize(form)
    p = q = 0
    for a in diag:
        s = (a > 0) - (a < 0) if form.is_rational else sign_at(a, place)
        if s == 0:
            raise DegenerateFormError("form is degenerate")
        if s > 0:
            p += 1
        else:
            q += 1
    return p, q


def is_isotropic(form, height=2, max_checks=20000):
    """Isotropy over Q (decided) or over a number field (certificate or inconclusive)."""
    if form.is_rational:
        return is_isotropic_over_Q(form)
    F = form.field
    u, diag = diagonalize(form)
    rad = _radical_vector(u, diag)
    if rad is not None:
        return IsotropyCertificate("isotropic", rad, note="radical vector", degenerate=True)
    for pl in F.real_places():
        signs = {sign_at(a, pl) for a in diag}
        if len(signs) == 1:
            return IsotropyCertificate("anisotropic", obstruction=pl,
                                       note=f"definite at real place #{pl.index}")
    if len(diag) == 1:
        return IsotropyCertificate("anisotropic", obstruction="rank-one", note="rank one")
    y = _search_over_field(F, diag, height, max_checks)
    if y is None:
        return IsotropyCertificate("inconclusive",
                                   note=f"no isotropic vector up to height {height}")
    w = L.matvec(u, y)
    assert form.value(w) == 0
    return IsotropyCertificate("isotropic", w)


def _search_over_field(F, diag, height, max_checks):
    from itertools import product
    from .numfield import square_root
    n = len(diag)
    for i in range(n):
        for j in range(i + 1, n):
            r = square_root(-diag[j] / diag[i])
            if r is not None:
                y = [F.zero] * n
                y[i], y[j] = r, F.one
                return y
    coords = [F.coerce(list(c)) for c in product(range(-height, height + 1), repeat=F.degree)]
    coords.sort(key=lambda e: (max(abs(c) for c in e.coeffs), e.coeffs))
    checks = 0
    last = diag[-1]
    for head in product(coords, repeat=n - 1):
        if all(c.is_zero() for c in head):
            continue
        rhs = -sum((d * c * c for d, c in zip(diag, head)), F.zero) / last
        checks += 1
        if checks > max_checks:
            return None
        if rhs.is_zero():
            return list(head) + [F.zero]
        if not F.is_square(rhs):
            continue
        r = square_root(rhs)
        return list(head) + [r]
    return None


# -- Witt's extension theorem --------------------------------------------------------

def extend_isometry(form, domain, images):
    """Extend the isometry domain[k] -> images[k] to an isometry g of the whole space.

    The partial map is first enlarged until its domain is nondegenerate (each
    radical vector gets an isotropic partner on both sides), then realized as a
    product of reflections.  Returns g with g^T G g = G and g domain[k] = images[k].
    """
    G = form.gram
    F = form.field
    n = form.dim
    if form.is_degenerate():
        raise DegenerateFormError("form is degenerate")
    dom = [[F.coerce(x) for x in v] for v in domain]
    img = [[F.coerce(x) for x in v] for v in images]
    if len(dom) != len(img):
        raise ValueError("domain and images differ in length")
    for i in range(len(dom)):
        for j in range(len(dom)):
            if L.bilinear(G, dom[i], dom[j]) != L.bilinear(G, img[i], img[j]):
                raise ValueError("partial map does not preserve the form")
    if dom and L.rank(dom) != len(dom):
        dom, img = _independent(dom, img)
    if dom and L.rank(img) != len(img):
        raise ValueError("partial map is not injective")
    dom, img = _close_radical(G, dom, img, F)
    g = _reflections(G, dom, img, F, n)
    assert L.mat_equal(L.congruent(g, G), G), "extension is not an isometry"
    for a, b in zip(domain, images):
        assert all(x == y for x, y in zip(L.matvec(g, [F.coerce(t) for t in a]), b))
    return g


def _independent(dom, img):
    keep_d, keep_i = [], []
    for a, b in zip(dom, img):
        if L.rank(keep_d + [a]) > len(keep_d):
            keep_d.append(a)
            keep_i.append(b)
        else:
            c = L.solve(L.from_columns(keep_d), a)
            if any(x != y for x, y in zip(_comb_f(c, keep_i), b)):
                raise ValueError("partial map is not linear on its domain")
    return keep_d, keep_i


def _comb_f(coeffs, vecs):
    out = [c * 0 for c in vecs[0]]
    for c, v in zip(coeffs, vecs):
        out = [a + c * b for a, b in zip(out, v)]
    return out


def _gram_of(G, vecs):
    return [[L.bilinear(G, a, b) for b in vecs] for a in vecs]


def _close_radical(G, dom, img, F):
    while dom:
        rad = L.nullspace(_gram_of(G, dom), F.one, F.zero)
        if not rad:
            return dom, img
        c = rad[0]
        r = _comb_f(c, dom)
        r2 = _comb_f(c, img)
        k = next(i for i, t in enumerate(c) if t != 0)
        rest = [v for i, v in enumerate(dom) if i != k]
        rest2 = [v for i, v in enumerate(img) if i != k]
        z = _partner(G, r, rest, F)
        z2 = _partner(G, r2, rest2, F)
        dom = rest + [r, z]
        img = rest2 + [r2, z2]
    return dom, img


def _partner(G, r, rest, F):
    """Isotropic z with B(z, r) = 1 and B(z, w) = 0 for w in rest."""
    rows = [L.matvec(G, r)] + [L.matvec(G, w) for w in rest]
    rhs = [F.one] + [F.zero] * len(rest)
    z = L.solve(rows, rhs)
    t = L.bilinear(G, z, z) / 2
    return [a - t * b for a, b in zip(z, r)]


def _reflect_matrix(G, w, F, n):
    """Matrix of x -> x - 2 B(x, w) / B(w, w) w."""
    q = L.bilinear(G, w, w)
    gw = L.matvec(G, w)
    ident = L.identity(n, F.one, F.zero)
    return [[ident[i][j] - 2 * w[i] * gw[j] / q for j in range(n)] for i in range(n)]


def _reflections(G, dom, img, F, n):
    """Product of reflections sending an orthogonalized domain onto its image."""
    g = L.identity(n, F.one, F.zero)
    if not dom:
        return g
    # orthogonal basis of span(dom) with matching images
    sub = _gram_of(G, dom)
    u, _ = diagonalize(QuadraticForm(sub, F))
    cols = [[row[k] for row in u] for k in range(len(dom))]
    xs = [_comb_f(c, dom) for c in cols]
    ys = [_comb_f(c, img) for c in cols]
    for x, y in zip(xs, ys):
        gx = L.matvec(g, x)
        if all(a == b for a, b in zip(gx, y)):
            continue
        d = [a - b for a, b in zip(gx, y)]
        if L.bilinear(G, d, d) != 0:
            g = L.matmul(_reflect_matrix(G, d, F, n), g)
        else:
            s = [a + b for a, b in zip(gx, y)]
            g = L.matmul(_reflect_matrix(G, s, F, n), g)
            g = L.matmul(_reflect_matrix(G, y, F, n), g)
    return g


# -- discriminants -----------------------------------------------------------------

def discriminant(form):
    """det of the Gram matrix; well defined up to nonzero squares."""
    return form.det()


def discriminant_class(form):
    """Squarefree integer representing the discriminant modulo squares (forms over Q)."""
    if not form.is_rational:
        raise ValueError("square classes are listed for Q only")
    d = form.det()
    if d == 0:
        raise DegenerateFormError("form is degenerate")
    return squarefree_int(_int_class(d))


def same_discriminant_class(form1, form2):
    """Whether det(B1)/det(B2) is a square in the base field.

    A necessary condition (odd-dimensional case) for the orthogonal groups of
    the two forms to have commensurable integer points; not a decision procedure.
    """
    if form1.field != form2.field:
        raise ValueError("forms over different fields")
    ratio = form1.det() / form2.det()
    if form1.is_rational:
        return rational_sqrt(ratio) is not None
    return form1.field.is_square(ratio)


__all__ = [
    "QuadraticForm", "WittDecomposition", "IsotropyCertificate", "DegenerateFormError",
    "diagonalize", "hilbert_symbol", "hilbert_product", "is_locally_isotropic",
    "local_obstruction", "is_isotropic_over_Q", "is_isotropic", "isotropic_vector_diagonal",
    "witt_decompose", "qrank_so", "signature_at", "extend_isometry", "discriminant",
    "discriminant_class", "same_discriminant_class", "INF",
]
