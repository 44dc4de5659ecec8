"""Quaternion algebras D_{beta,gamma}(F) and Hermitian forms over them."""

from dataclasses import dataclass
from fractions import Fraction

from . import linalg as L
from .numfield import QQ, FieldElement, QuadExtElement, QuadraticExtension, RationalField, square_root
from .arith import rational_sqrt
from .quadform import QuadraticForm, diagonalize, is_isotropic


class QuaternionAlgebra:
    """D_{beta,gamma}(F): basis 1, i, j, k with i^2 = beta, j^2 = gamma, ij = k = -ji."""

    def __init__(self, beta, gamma, base=QQ):
        self.base = base
        self.beta = base.coerce(beta)
        self.gamma = base.coerce(gamma)
        if self.beta == 0 or self.gamma == 0:
            raise ValueError("beta and gamma must be nonzero")

    def __call__(self, a=0, b=0, c=0, d=0):
        return QuaternionElement(self, a, b, c, d)

    def element(self, coords):
        return QuaternionElement(self, *coords)

    @property
    def one(self):
        return self(1)

    @property
    def zero(self):
        return self()

    @property
    def i(self):
        return self(0, 1)

    @property
    def j(self):
        return self(0, 0, 1)

    @property
    def k(self):
        return self(0, 0, 0, 1)

    def basis(self):
        return [self.one, self.i, self.j, self.k]

    def coerce(self, x):
        if isinstance(x, QuaternionElement):
            if x.algebra != self:
                raise ValueError("element of a different quaternion algebra")
            return x
        return self(x)

    def __eq__(self, other):
        return isinstance(other, QuaternionAlgebra) and self.base == other.base and \
            self.beta == other.beta and self.gamma == other.gamma

    def __hash__(self):
        return hash((repr(self.base), repr(self.beta), repr(self.gamma)))

    def to_json(self):
        return {"field": self.base.to_json(), "beta": _enc(self.beta), "gamma": _enc(self.gamma)}

    def __repr__(self):
        return f"D_{{{self.beta},{self.gamma}}}({self.base})"


def _enc(x):
    if isinstance(x, FieldElement):
        return x.to_json()
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class QuaternionElement:
    __slots__ = ("algebra", "a", "b", "c", "d")

    def __init__(self, algebra, a=0, b=0, c=0, d=0):
        F = algebra.base
        self.algebra = algebra
        self.a, self.b, self.c, self.d = (F.coerce(t) for t in (a, b, c, d))

    @property
    def coords(self):
        return (self.a, self.b, self.c, self.d)

    def _other(self, o):
        if isinstance(o, QuaternionElement):
            if o.algebra != self.algebra:
                raise ValueError("mixed quaternion algebras")
            return o
        return QuaternionElement(self.algebra, o)

    def __add__(self, o):
        o = self._other(o)
        return QuaternionElement(self.algebra, *(x + y for x, y in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return QuaternionElement(self.algebra, *(-x for x in self.coords))

    def __sub__(self, o):
        return self + (-self._other(o))

    def __rsub__(self, o):
        return self._other(o) - self

    def __mul__(self, o):
        return quat_mul(self, self._other(o))

    def __rmul__(self, o):
        return quat_mul(self._other(o), self)

    def inverse(self):
        n = reduced_norm(self)
        if n == 0:
            raise ZeroDivisionError("zero divisor has no inverse")
        return conjugate(self, "tau_c").scale(1 / n)

    def __truediv__(self, o):
        return self * self._other(o).inverse()

    def scale(self, s):
        return QuaternionElement(self.algebra, *(s * x for x in self.coords))

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.algebra.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, o):
        if isinstance(o, (int, Fraction, FieldElement)):
            o = QuaternionElement(self.algebra, o)
        if not isinstance(o, QuaternionElement):
            return NotImplemented
        return all(x == y for x, y in zip(self.coords, o.coords))

    def __hash__(self):
        return hash(tuple(repr(x) for x in self.coords))

    def is_zero(self):
        return all(x == 0 for x in self.coords)

    def __repr__(self):
        return f"({self.a}) + ({self.b})i + ({self.c})j + ({self.d})k"

    def to_json(self):
        return [_enc(x) for x in self.coords]


def quat_mul(x, y):
    """Product from i^2 = beta, j^2 = gamma, ij = k = -ji."""
    if x.algebra != y.algebra:
        raise ValueError("mixed quaternion algebras")
    be, ga = x.algebra.beta, x.algebra.gamma
    a1, b1, c1, d1 = x.coords
    a2, b2, c2, d2 = y.coords
    return QuaternionElement(
        x.algebra,
        a1 * a2 + be * b1 * b2 + ga * c1 * c2 - be * ga * d1 * d2,
        a1 * b2 + b1 * a2 - ga * c1 * d2 + ga * d1 * c2,
        a1 * c2 + c1 * a2 + be * b1 * d2 - be * d1 * b2,
        a1 * d2 + d1 * a2 + b1 * c2 - c1 * b2,
    )


def reduced_norm(x):
    be, ga = x.algebra.beta, x.algebra.gamma
    a, b, c, d = x.coords
    return a * a - be * b * b - ga * c * c + be * ga * d * d


def reduced_trace(x):
    return 2 * x.a


def conjugate(x, which="tau_c"):
    """tau_c negates i, j, k; tau_r (reversion) negates j only."""
    a, b, c, d = x.coords
    if which == "tau_c":
        return QuaternionElement(x.algebra, a, -b, -c, -d)
    if which == "tau_r":
        return QuaternionElement(x.algebra, a, b, -c, d)
    raise ValueError(f"unknown antiinvolution {which!r}")


# -- places ----------------------------------------------------------------------

def _sign(F, x, place):
    return F.sign_at(x, place)


def _real_place(F, place):
    if place is None:
        if not isinstance(F, RationalField):
            raise ValueError("a place is required over a number field")
        return QQ.places[0]
    return place


def splits_at(algebra, place=None):
    """Whether D tensored with the completion at a place is Mat_2 (not H)."""
    F = algebra.base
    place = _real_place(F, place)
    if not place.is_real:
        return True
    return _sign(F, algebra.beta, place) > 0 or _sign(F, algebra.gamma, place) > 0


# -- division -------------------------------------------------------------------------

@dataclass
class DivisionVerdict:
    verdict: str                   # division | split | inconclusive
    zero_divisor: object = None    # nonzero x with Nred(x) = 0
    splitting: dict = None         # images of i and j in Mat_2(F)
    obstruction: object = None     # place where D is not split
    note: str = ""

    @property
    def is_division(self):
        return self.verdict == "division"

    def check(self, algebra):
        if self.verdict == "split":
            x = self.zero_divisor
            if x.is_zero() or reduced_norm(x) != 0:
                return False
            I, J = self.splitting["i"], self.splitting["j"]
            return check_splitting(algebra, I, J)
        if self.verdict == "division":
            if isinstance(self.obstruction, (int, str)):
                from .quadform import is_locally_isotropic
                return not is_locally_isotropic(
                    [1, -algebra.beta, -algebra.gamma], self.obstruction)
            return not splits_at(algebra, self.obstruction)
        return True

    def to_json(self):
        out = {"verdict": self.verdict, "note": self.note}
        if self.zero_divisor is not None:
            out["certificate"] = {
                "zero_divisor": self.zero_divisor.to_json(),
                "i": [[_enc(x) for x in r] for r in self.splitting["i"]],
                "j": [[_enc(x) for x in r] for r in self.splitting["j"]],
            }
        elif self.obstruction is not None:
            ob = self.obstruction
            out["certificate"] = {"nonsplit_place": ob.to_json() if hasattr(ob, "to_json") else ob}
        else:
            out["inconclusive"] = True
        return out


def check_splitting(algebra, I, J):
    """I^2 = beta, J^2 = gamma, IJ = -JI, and 1, I, J, IJ independent."""
    F = algebra.base
    one = L.identity(2, F.one, F.zero)

    def smul(c, m):
        return [[c * x for x in r] for r in m]
    IJ = L.matmul(I, J)
    JI = L.matmul(J, I)
    ok = L.mat_equal(L.matmul(I, I), smul(algebra.beta, one)) and \
        L.mat_equal(L.matmul(J, J), smul(algebra.gamma, one)) and \
        L.mat_equal(IJ, smul(F.coerce(-1), JI))
    flat = [[m[r][c] for r in range(2) for c in range(2)] for m in (one, I, J, IJ)]
    return ok and L.rank(flat) == 4


def split_embedding(algebra, x, I, J):
    """Image of x under 1 -> Id, i -> I, j -> J, k -> IJ."""
    F = algebra.base
    K = L.matmul(I, J)
    out = [[F.zero, F.zero], [F.zero, F.zero]]
    one = L.identity(2, F.one, F.zero)
    for coef, m in zip(x.coords, (one, I, J, K)):
        out = [[out[r][c] + coef * m[r][c] for c in range(2)] for r in range(2)]
    return out


def _splitting_from_witness(algebra, z, x, y):
    """Explicit Mat_2(F) model from z^2 = beta x^2 + gamma y^2, (z, x, y) != 0."""
    F = algebra.base
    be, ga = algebra.beta, algebra.gamma
    if y == 0:
        b = z / x                      # beta = b^2
        I = [[b, F.zero], [F.zero, -b]]
        J = [[F.zero, F.one], [ga, F.zero]]
    else:
        p, r = z / y, x / y            # N(p + r sqrt(beta)) = gamma
        I = [[F.zero, be], [F.one, F.zero]]
        J = [[p, -be * r], [r, -p]]
    return {"i": I, "j": J}


def is_division(algebra, height=2):
    """Division/split verdict with certificate.

    Split iff z^2 - beta x^2 - gamma y^2 is isotropic; over Q this is decided by
    Hasse-Minkowski, over a number field a nonsplit real place proves division
    and a bounded search may find a zero divisor.
    """
    F = algebra.base
    be, ga = algebra.beta, algebra.gamma
    form = QuadraticForm.diagonal([F.one, -be, -ga], F)
    cert = is_isotropic(form, height=height)
    if cert.verdict == "isotropic":
        z, x, y = cert.witness
        zd = QuaternionElement(algebra, z, x, y, 0)
        assert not zd.is_zero() and reduced_norm(zd) == 0
        spl = _splitting_from_witness(algebra, z, x, y)
        assert check_splitting(algebra, spl["i"], spl["j"])
        return DivisionVerdict("split", zd, spl, note="isotropic norm form")
    if cert.verdict == "anisotropic":
        ob = cert.obstruction
        where = ob if isinstance(ob, (int, str)) else f"real place #{ob.index}"
        return DivisionVerdict("division", obstruction=ob,
                               note=f"norm form anisotropic at {where}")
    return DivisionVerdict("inconclusive", note=cert.note)


# -- matrix embedding ---------------------------------------------------------------

def embed_mat2(x):
    """phi(x) = [[a + b s, c + d s], [gamma (c - d s), a - b s]] with s = sqrt(beta).

    Entries lie in F(sqrt(beta)) (a QuadraticExtension), or in F when beta is
    a square there.  det phi(x) = Nred(x).
    """
    alg = x.algebra
    F = alg.base
    s, ring = _sqrt_in(F, alg.beta)
    a, b, c, d = (ring.coerce(t) if ring is not F else t for t in x.coords)
    ga = ring.coerce(alg.gamma) if ring is not F else alg.gamma
    return [[a + b * s, c + d * s], [ga * (c - d * s), a - b * s]]


_EXT_CACHE = {}


def _sqrt_in(F, r):
    """(sqrt(r), ring): the root inside F when r is a square, else in F(sqrt(r))."""
    key = (repr(F), repr(r))
    if key not in _EXT_CACHE:
        _EXT_CACHE[key] = _make_sqrt(F, r)
    return _EXT_CACHE[key]


def _make_sqrt(F, r):
    if isinstance(F, RationalField):
        q = rational_sqrt(r)
        if q is not None:
            return q, F
    elif F.is_square(r):
        return square_root(r), F
    ext = QuadraticExtension(F, r)
    return ext.sqrt_beta, ext


def mat2_det(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


# -- Hermitian forms ---------------------------------------------------------------

class HermitianFormOverD:
    """tau-Hermitian matrix over a quaternion algebra; B(x, y) = tau(x)^T G y."""

    def __init__(self, algebra, gram, tau="tau_c"):
        if tau not in ("tau_c", "tau_r"):
            raise ValueError(f"unknown antiinvolution {tau!r}")
        self.algebra = algebra
        self.tau = tau
        self.gram = [[algebra.coerce(x) for x in row] for row in gram]
        n = len(self.gram)
        self.dim = n
        for i in range(n):
            for j in range(n):
                if conjugate(self.gram[j][i], tau) != self.gram[i][j]:
                    raise ValueError("Gram matrix is not Hermitian")

    def pair(self, x, y):
        acc = self.algebra.zero
        for i in range(self.dim):
            ti = conjugate(x[i], self.tau)
            for j in range(self.dim):
                acc = acc + ti * self.gram[i][j] * y[j]
        return acc

    def change_basis(self, u):
        """tau(U)^T G U."""
        n = self.dim
        cols = [[u[r][c] for r in range(n)] for c in range(n)]
        return HermitianFormOverD(self.algebra,
                                  [[self.pair(a, b) for b in cols] for a in cols], self.tau)


@dataclass
class HermitianDiagonalization:
    basis_change: list               # U, columns are the new basis
    diagonal: list                   # B(u_k, u_k)
    places: list                     # per real/complex place data
    isotropic_witness: list = None   # a basis vector with B(v, v) = 0, if one exists

    def to_json(self):
        return {
            "diagonal": [x.to_json() for x in self.diagonal],
            "places": [dict(p, place=p["place"].to_json()) for p in self.places],
            "isotropic_witness": None if self.isotropic_witness is None
            else [x.to_json() for x in self.isotropic_witness],
        }


def _hermitian_pivot(form, vecs):
    """A nonzero-norm vector among vecs or built from a pair, or None."""
    alg = form.algebra
    for k, v in enumerate(vecs):
        if not form.pair(v, v).is_zero():
            return k, v
    lambdas = alg.basis()
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            if form.pair(vecs[i], vecs[j]).is_zero():
                continue
            for lam in lambdas:
                w = [x + y * lam for x, y in zip(vecs[i], vecs[j])]
                if not form.pair(w, w).is_zero():
                    vecs[i] = w
                    return i, w
    return None, None


def hermitian_diag_over_D(form):
    """Congruent diagonal form and the real points of SU(form) at each place."""
    alg = form.algebra
    n = form.dim
    vecs = [[alg.one if r == c else alg.zero for r in range(n)] for c in range(n)]
    witness = next((v for v in vecs if form.pair(v, v).is_zero()), None)
    done = []
    while vecs:
        k, p = _hermitian_pivot(form, vecs)
        if k is None:
            raise ValueError("form is degenerate")
        vecs.pop(k)
        b_inv = form.pair(p, p).inverse()
        rest = []
        for v in vecs:
            coef = b_inv * form.pair(p, v)
            rest.append([x - y * coef for x, y in zip(v, p)])
        vecs = rest
        done.append(p)
    u = [[done[c][r] for c in range(n)] for r in range(n)]
    diag_form = form.change_basis(u)
    for r in range(n):
        for c in range(n):
            if r != c and not diag_form.gram[r][c].is_zero():
                raise AssertionError("diagonalization failed")
    diag = [diag_form.gram[r][r] for r in range(n)]
    return HermitianDiagonalization(u, diag, _place_data(form, diag), witness)


def _place_data(form, diag):
    alg = form.algebra
    F = alg.base
    n = form.dim
    out = []
    places = F.places
    for pl in places:
        if not pl.is_real:
            fam = ("Sp_C", (2 * n,)) if form.tau == "tau_c" else ("SO_C", (2 * n,))
            out.append({"place": pl, "split": True, "label": fam})
            continue
        split = splits_at(alg, pl)
        if form.tau == "tau_c":
            if split:
                out.append({"place": pl, "split": True, "label": ("Sp_R", (2 * n,))})
            else:
                p = sum(1 for x in diag if _sign(F, x.a, pl) > 0)
                out.append({"place": pl, "split": False, "label": ("Sp_pq", (p, n - p)),
                            "signature": (p, n - p)})
        else:
            if not split:
                out.append({"place": pl, "split": False, "label": ("SO_H", (n,))})
            else:
                p, q = tau_r_signature(form, pl)
                out.append({"place": pl, "split": True, "label": ("SO", (p, q)),
                            "signature": (p, q)})
    return out


def tau_r_signature(form, place):
    """Signature of the real symmetric 2n x 2n form attached to a tau_r-Hermitian
    form at a real place where D splits.

    With beta > 0: phi(i) = diag(s, -s), phi(j) = [[0, 1], [gamma, 0]] and
    phi(tau_r x) = S^-1 phi(x)^T S for S = diag(gamma, -1).  With beta < 0 <
    gamma: phi(i) = [[0, 1], [beta, 0]], phi(j) = diag(t, -t), S = [[0, 1], [1, 0]].
    The symmetric matrix is S_n Phi(G).
    """
    alg = form.algebra
    F = alg.base
    n = form.dim
    if _sign(F, alg.beta, place) > 0:
        root_of = alg.beta
        s, ring = _sqrt_in(F, root_of)
        lift = ring.coerce

        def phi(x):
            a, b, c, d = (lift(t) for t in x.coords)
            ga = lift(alg.gamma)
            return [[a + b * s, c + d * s], [ga * (c - d * s), a - b * s]]
        S = [[lift(alg.gamma), lift(0)], [lift(0), lift(-1)]]
    elif _sign(F, alg.gamma, place) > 0:
        root_of = alg.gamma
        t, ring = _sqrt_in(F, root_of)
        lift = ring.coerce

        def phi(x):
            a, b, c, d = (lift(u) for u in x.coords)
            be = lift(alg.beta)
            return [[a + c * t, b - d * t], [be * (b + d * t), a - c * t]]
        S = [[lift(0), lift(1)], [lift(1), lift(0)]]
    else:
        raise ValueError("D does not split at this place")
    big = [[lift(0)] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            blk = L.matmul(S, phi(form.gram[i][j]))
            for r in range(2):
                for c in range(2):
                    big[2 * i + r][2 * j + c] = blk[r][c]
    q = QuadraticForm(big, ring)
    _, dg = diagonalize(q)
    pos = neg = 0
    for x in dg:
        sg = _ext_sign(F, ring, x, root_of, place)
        if sg == 0:
            raise ValueError("form is degenerate")
        if sg > 0:
            pos += 1
        else:
            neg += 1
    return pos, neg


def _ext_sign(F, ring, x, r, place):
    """Sign of u + v sqrt(r) at a real place where r > 0 (positive root)."""
    if not isinstance(x, QuadExtElement):
        return _sign(F, x, place)
    su, sv = _sign(F, x.u, place), _sign(F, x.v, place)
    if sv == 0:
        return su
    if su == 0 or su == sv:
        return sv if su == 0 else su
    return su * _sign(F, x.u * x.u - x.v * x.v * r, place)


# -- the epsilon bookkeeping for SO(1, 2m-1) constructions -------------------------------

def epsilon_beta_gamma(x, place=None):
    """Case formula epsilon_{beta,gamma}(x) in {0, 1, 2} for tau_r-fixed invertible x.

    x = a + b i + d k with beta or gamma positive at the place.  The value is
    the number of positive eigenvalues of -S phi(x), i.e. the negative ones of
    the matrix S phi(x) used by tau_r_signature.
    """
    alg = x.algebra
    F = alg.base
    place = _real_place(F, place)
    if x.c != 0:
        raise ValueError("x is not fixed by tau_r")
    be, ga = alg.beta, alg.gamma
    a, b, d = x.a, x.b, x.d
    sg_b, sg_g = _sign(F, be, place), _sign(F, ga, place)
    if sg_b < 0 and sg_g < 0:
        raise ValueError("beta and gamma are both negative at this place")
    m = a * a - be * (b * b - ga * d * d)
    if _sign(F, m, place) == 0:
        raise ValueError("x is not invertible")
    if sg_g * _sign(F, m, place) > 0:
        return 1
    if sg_g < 0:
        return 2 if _sign(F, a, place) > 0 else 0
    # gamma > 0: sign of (beta + 1) b + (beta - 1) d sqrt(gamma)
    u, v = (be + 1) * b, (be - 1) * d
    su, sv = _sign(F, u, place), _sign(F, v, place)
    if sv == 0:
        s = su
    elif su == 0 or su == sv:
        s = sv if su == 0 else su
    else:
        s = su * _sign(F, u * u - v * v * ga, place)
    if s == 0:
        raise ValueError("epsilon undefined: boundary case")
    return 0 if s > 0 else 2


def algebra_from_json(desc):
    from .numfield import field_from_json
    from .arith import to_fraction
    F = field_from_json(desc.get("field", "Q"))

    def dec(v):
        if isinstance(v, list):
            return F.coerce([to_fraction(c) for c in v])
        return F.coerce(to_fraction(v))
    return QuaternionAlgebra(dec(desc["beta"]), dec(desc["gamma"]), F)


__all__ = [
    "QuaternionAlgebra", "QuaternionElement", "HermitianFormOverD", "DivisionVerdict",
    "HermitianDiagonalization", "quat_mul", "reduced_norm", "reduced_trace", "conjugate",
    "is_division", "splits_at", "embed_mat2", "hermitian_diag_over_D", "tau_r_signature",
    "epsilon_beta_gamma", "split_embedding", "check_splitting", "mat2_det", "algebra_from_json",
]
