"""Cyclic algebras L^alpha[sigma] of prime degree d.

Elements are sums a_0 + a_1 sigma + ... + a_{d-1} sigma^{d-1} with a_j in L,
multiplied by sigma z = sigma(z) sigma and sigma^d = alpha.  Row i of the
matrix model holds the coordinates of sigma^i X; that map is multiplicative,
so determinants decide invertibility.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg as L
from . import poly as P
from .arith import factor, is_prime, multiplicative_order, valuation
from .numfield import (
    QQ, CyclicExtension, FieldElement, QuadExtElement, QuadraticExtension, RationalField,
    make_field,
)
from .quadform import QuadraticForm, is_isotropic


class CyclicAlgebra:
    def __init__(self, ext, alpha):
        self.ext = ext
        self.base = ext.base
        self.degree = ext.degree
        self.alpha = self.base.coerce(alpha)
        if self.alpha == 0:
            raise ValueError("alpha must be nonzero")

    def __call__(self, *coeffs):
        return CyclicElement(self, coeffs)

    @property
    def one(self):
        return CyclicElement(self, [self.ext.one])

    @property
    def sigma(self):
        return CyclicElement(self, [self.ext.zero, self.ext.one])

    def scalar(self, z):
        return CyclicElement(self, [z])

    def to_json(self):
        a = self.alpha
        return {"ext": self.ext.to_json(),
                "alpha": a.to_json() if isinstance(a, FieldElement) else _frac(a)}

    def __repr__(self):
        return f"({self.ext})^{self.alpha}[sigma]"


def _frac(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class CyclicElement:
    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra, coeffs):
        d = algebra.degree
        cs = [algebra.ext.coerce(c) for c in coeffs]
        if len(cs) > d:
            raise ValueError(f"at most {d} coefficients")
        cs += [algebra.ext.zero] * (d - len(cs))
        self.algebra = algebra
        self.coeffs = tuple(cs)

    def _other(self, o):
        if isinstance(o, CyclicElement):
            if o.algebra is not self.algebra:
                raise ValueError("mixed cyclic algebras")
            return o
        return CyclicElement(self.algebra, [o])

    def __add__(self, o):
        o = self._other(o)
        return CyclicElement(self.algebra, [x + y for x, y in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclicElement(self.algebra, [-x for x in self.coeffs])

    def __sub__(self, o):
        return self + (-self._other(o))

    def __rsub__(self, o):
        return self._other(o) - self

    def __mul__(self, o):
        return cyclic_mul(self, self._other(o))

    def __rmul__(self, o):
        return cyclic_mul(self._other(o), self)

    def __pow__(self, k):
        out = self.algebra.one
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, o):
        try:
            o = self._other(o)
        except (TypeError, ValueError):
            return NotImplemented
        return all(x == y for x, y in zip(self.coeffs, o.coeffs))

    def __hash__(self):
        return hash(tuple(repr(c) for c in self.coeffs))

    def is_zero(self):
        return all(self.algebra.ext.is_zero(c) for c in self.coeffs)

    def __repr__(self):
        return " + ".join(f"({c})s^{j}" for j, c in enumerate(self.coeffs))

    def to_json(self):
        return [c.to_json() for c in self.coeffs]


def cyclic_mul(x, y):
    """(sum a_j s^j)(sum b_k s^k) = sum a_j sigma^j(b_k) s^(j+k), with s^d = alpha."""
    alg = x.algebra
    if y.algebra is not alg:
        raise ValueError("mixed cyclic algebras")
    ext, d, alpha = alg.ext, alg.degree, alg.alpha
    out = [ext.zero] * d
    for j, a in enumerate(x.coeffs):
        if ext.is_zero(a):
            continue
        for k, b in enumerate(y.coeffs):
            if ext.is_zero(b):
                continue
            term = a * ext.sigma_pow(b, j)
            m = j + k
            if m >= d:
                term = term * ext.coerce(alpha)
                m -= d
            out[m] = out[m] + term
    return CyclicElement(alg, out)


def embed_cyclic_matrix(x, algebra=None):
    """d x d matrix over L: row i lists the coordinates of sigma^i X.

    Entry (i, k) is sigma^i(a_{k-i}), multiplied by alpha when k < i.  For
    d = 3 the second row is (alpha sigma(z), sigma(x), sigma(y)).
    """
    if not isinstance(x, CyclicElement):
        x = CyclicElement(algebra, x)
    alg = x.algebra
    ext, d = alg.ext, alg.degree
    a = ext.coerce(alg.alpha)
    rows = []
    for i in range(d):
        row = []
        for k in range(d):
            e = ext.sigma_pow(x.coeffs[(k - i) % d], i)
            row.append(e * a if k < i else e)
        rows.append(row)
    return rows


# -- cyclotomic cubic fields --------------------------------------------------------

def _cyclo_reduce(v, q):
    """Coordinates in Q(zeta_q) = Q[x]/(Phi_q) of a vector in Q[x]/(x^q - 1)."""
    return [v[i] - v[q - 1] for i in range(q - 1)]


def _cyclo_mul(u, v, q):
    out = [0] * q
    for i, a in enumerate(u):
        if a:
            for j, b in enumerate(v):
                if b:
                    out[(i + j) % q] += a * b
    return out


def _primitive_root(q):
    phi = q - 1
    for g in range(2, q):
        if all(pow(g, phi // p, q) != 1 for p in factor(phi)):
            return g
    return 1


def cyclotomic_real_subfield(q):
    """Degree-3 cyclic field inside Q(zeta_q) generated by a Gaussian period.

    eta = sum of zeta^k over the index-3 subgroup H of cubes; for q = 7 this
    is zeta + zeta^-1 = 2 cos(2 pi / 7).  sigma sends the period of H to the
    period of the next coset g H (g a primitive root).
    """
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    if (q - 1) % 3:
        raise ValueError(f"q = {q} is not 1 mod 3; no cubic subfield")
    g = _primitive_root(q)
    H = sorted({pow(g, 3 * k, q) for k in range((q - 1) // 3)})
    periods = []
    for c in range(3):
        gc = pow(g, c, q)
        v = [0] * q
        for h in H:
            v[h * gc % q] += 1
        periods.append(v)
    # min poly prod (X - eta_c): elementary symmetric functions are integers
    e1 = [sum(t) for t in zip(*periods)]
    e2 = [0] * q
    for a in range(3):
        for b in range(a + 1, 3):
            e2 = [x + y for x, y in zip(e2, _cyclo_mul(periods[a], periods[b], q))]
    e3 = _cyclo_mul(_cyclo_mul(periods[0], periods[1], q), periods[2], q)
    ints = []
    for e in (e1, e2, e3):
        r = _cyclo_reduce(e, q)
        assert all(t == 0 for t in r[1:]), "symmetric function is not rational"
        ints.append(r[0])
    s1, s2, s3 = ints
    min_poly = [-s3, s2, -s1, 1]
    field = make_field(min_poly)
    # sigma(eta_0) = eta_1 = c0 + c1 eta_0 + c2 eta_0^2
    one = [1] + [0] * (q - 1)
    sq = _cyclo_mul(periods[0], periods[0], q)
    cols = [_cyclo_reduce(b, q) for b in (one, periods[0], sq)]
    target = _cyclo_reduce(periods[1], q)
    sol = L.solve(L.from_columns([[Fraction(t) for t in c] for c in cols]),
                  [Fraction(t) for t in target])
    assert sol is not None
    ext = CyclicExtension(field, FieldElement(field, sol), 3)
    ext.cyclotomic_q = q
    return ext


def prime_criterion(p, q):
    """Order of p mod q; passes iff p generates (Z/q)^x (no r < q - 1 with p^r = 1)."""
    if not is_prime(p) or not is_prime(q):
        raise ValueError("p and q must be prime")
    if p == q:
        raise ValueError("p and q must differ")
    order = multiplicative_order(p, q)
    powers = {str(r): pow(p, r, q) for r in range(1, q) if (q - 1) % r == 0}
    return {"p": p, "q": q, "order": order, "verdict": "passes" if order == q - 1 else "fails",
            "certificate": {"powers_mod_q": powers}}


# -- division decision ---------------------------------------------------------------------

@dataclass
class CyclicDivisionVerdict:
    verdict: str                   # division | split | inconclusive
    norm_preimage: object = None   # t in L with N(t) = alpha
    zero_divisor: object = None    # (z, w), z w = 0
    obstruction: object = None     # place or inert prime data
    criterion: dict = None
    note: str = ""

    @property
    def is_division(self):
        return self.verdict == "division"

    def check(self, algebra):
        if self.verdict == "split":
            ext = algebra.ext
            z, w = self.zero_divisor
            return ext.norm(self.norm_preimage) == algebra.alpha and \
                not z.is_zero() and not w.is_zero() and (z * w).is_zero()
        if self.verdict == "division" and isinstance(self.obstruction, dict) and \
                "inert_prime" in self.obstruction:
            p = self.obstruction["inert_prime"]
            f = list(algebra.ext.top.min_poly)
            return P.distinct_degree_pattern(f, p) == [algebra.degree] and \
                valuation(algebra.alpha, p) % algebra.degree != 0
        return True

    def to_json(self):
        out = {"verdict": self.verdict, "note": self.note}
        if self.criterion is not None:
            out["criterion"] = self.criterion
        if self.verdict == "split":
            z, w = self.zero_divisor
            out["certificate"] = {"norm_preimage": self.norm_preimage.to_json(),
                                  "zero_divisor": z.to_json(), "annihilator": w.to_json()}
        elif self.obstruction is not None:
            ob = self.obstruction
            out["certificate"] = ob.to_json() if hasattr(ob, "to_json") else ob
        else:
            out["inconclusive"] = True
        return out


def zero_divisor_from_norm(algebra, t):
    """With N(t) = alpha and x = 1/t, (x s)^d = 1: z = x s - 1 and w = sum (x s)^k."""
    ext = algebra.ext
    x = ext.one / t if not isinstance(t, FieldElement) else t.inverse()
    xs = CyclicElement(algebra, [ext.zero, x])
    z = xs - algebra.one
    w = algebra.one
    p = algebra.one
    for _ in range(algebra.degree - 1):
        p = p * xs
        w = w + p
    assert (z * w).is_zero()
    return z, w


def _split(algebra, t, note):
    return CyclicDivisionVerdict("split", norm_preimage=t,
                                 zero_divisor=zero_divisor_from_norm(algebra, t), note=note)


def is_division_cyclic(algebra, height=1000):
    """Division test by the norm criterion (d prime): division iff alpha is not a norm."""
    d = algebra.degree
    if not is_prime(d):
        raise ValueError(f"degree {d} is not prime")
    ext = algebra.ext
    alpha = algebra.alpha
    if isinstance(ext, QuadraticExtension):
        return _division_quadratic(algebra)
    crit = None
    q = getattr(ext, "cyclotomic_q", None)
    if q is not None and alpha.denominator == 1 and is_prime(abs(alpha.numerator)) \
            and abs(alpha.numerator) != q:
        crit = prime_criterion(abs(alpha.numerator), q)
    # alpha = c^d with c rational is the norm of c
    root = _rational_root(alpha, d)
    if root is not None:
        v = _split(algebra, ext.coerce(root), f"alpha is the norm of {root}")
        v.criterion = crit
        return v
    inert = _inert_obstruction(ext, alpha, d)
    if inert is not None:
        return CyclicDivisionVerdict(
            "division", obstruction=inert, criterion=crit,
            note=f"{inert['inert_prime']} is inert in L and v(alpha) = {inert['valuation']} "
                 f"is not divisible by {d}")
    t = norm_preimage_search(ext, alpha, height)
    if t is not None:
        v = _split(algebra, t, "explicit norm preimage")
        v.criterion = crit
        return v
    return CyclicDivisionVerdict("inconclusive", criterion=crit,
                                 note=f"no norm preimage up to height {height}; division likely")


def _rational_root(alpha, d):
    a = Fraction(alpha)
    sgn = -1 if a < 0 else 1
    if sgn < 0 and d % 2 == 0:
        return None

    def iroot(n):
        r = round(abs(n) ** (1.0 / d)) if n else 0
        for c in (r - 1, r, r + 1):
            if c >= 0 and c ** d == abs(n):
                return c
        return None
    num, den = iroot(a.numerator), iroot(a.denominator)
    if num is None or den is None:
        return None
    return sgn * Fraction(num, den)


def _inert_obstruction(ext, alpha, d):
    """A prime p inert in L with v_p(alpha) not divisible by d: alpha is then not a norm."""
    a = Fraction(alpha)
    f = list(ext.top.min_poly)
    for p in sorted(set(factor(a.numerator)) | set(factor(a.denominator))):
        v = valuation(a, p)
        if v % d == 0:
            continue
        if P.distinct_degree_pattern(f, p) == [d]:
            return {"inert_prime": p, "valuation": v,
                    "reason": "min_poly irreducible mod p, so p is inert and every norm "
                              "has p-adic valuation divisible by the degree"}
    return None


def norm_preimage_search(ext, alpha, height=1000):
    """Integral t = a + b eta + c eta^2 (power basis) with N(t) = alpha, or None.

    Heights double from 4; for each (a, b) the norm is a cubic in c whose real
    roots are found numerically and confirmed exactly.
    """
    a = Fraction(alpha)
    if a.denominator != 1 or ext.degree != 3:
        return None
    field = ext.top
    etas = np.array([pl.approx() for pl in field.real_places()], dtype=float)
    if len(etas) != 3:
        return None
    targets = [a] if ext.degree % 2 == 0 else [a, -a]
    h = 4
    seen = 0
    while True:
        h = min(h, height)
        rng = np.arange(-h, h + 1, dtype=float)
        A, B = np.meshgrid(rng, rng, indexing="ij")
        A, B = A.ravel(), B.ravel()
        mask = np.maximum(np.abs(A), np.abs(B)) > seen if seen else np.ones_like(A, bool)
        A, B = A[mask], B[mask]
        u = A[:, None] + B[:, None] * etas[None, :]
        v = np.broadcast_to(etas ** 2, u.shape)
        c3 = v[:, 0] * v[:, 1] * v[:, 2]
        c2 = u[:, 0] * v[:, 1] * v[:, 2] + u[:, 1] * v[:, 0] * v[:, 2] + u[:, 2] * v[:, 0] * v[:, 1]
        c1 = u[:, 0] * u[:, 1] * v[:, 2] + u[:, 0] * u[:, 2] * v[:, 1] + u[:, 1] * u[:, 2] * v[:, 0]
        c0 = u[:, 0] * u[:, 1] * u[:, 2]
        for target in targets:
            comp = np.zeros((len(A), 3, 3))
            comp[:, 0, :] = -np.stack([c2, c1, c0 - float(target)], axis=1) / c3[:, None]
            comp[:, 1, 0] = 1
            comp[:, 2, 1] = 1
            roots = np.linalg.eigvals(comp)
            near = (np.abs(roots.imag) < 1e-6) & (np.abs(roots.real - np.rint(roots.real)) < 1e-6) \
                & (np.abs(roots.real) <= h + 0.5)
            hits = []
            for idx, col in zip(*np.nonzero(near)):
                cand = (int(A[idx]), int(B[idx]), int(np.rint(roots[idx, col].real)))
                hits.append((max(abs(x) for x in cand), cand))
            for _, (x, y, z) in sorted(hits):
                t = FieldElement(field, [x, y, z])
                n = ext.norm(t)
                if n == a:
                    return t
                if n == -a and ext.degree % 2:
                    return -t
        if h >= height:
            return None
        seen = h
        h *= 2


def _division_quadratic(algebra):
    """d = 2: alpha is a norm from F(sqrt(beta)) iff x^2 - beta y^2 - alpha z^2 is isotropic."""
    ext = algebra.ext
    F = ext.base
    form = QuadraticForm.diagonal([F.one, -ext.beta, -algebra.alpha], F)
    cert = is_isotropic(form)
    if cert.verdict == "isotropic":
        x, y, z = cert.witness
        assert z != 0
        t = QuadExtElement(ext, x / z, y / z)
        assert ext.norm(t) == algebra.alpha
        return _split(algebra, t, "explicit norm preimage")
    if cert.verdict == "anisotropic":
        ob = cert.obstruction
        where = ob if isinstance(ob, (int, str)) else f"real place #{ob.index}"
        return CyclicDivisionVerdict("division", obstruction={"place": ob if isinstance(ob, (int, str))
                                                              else ob.to_json()},
                                     note=f"x^2 - beta y^2 = alpha z^2 has no solution at {where}")
    return CyclicDivisionVerdict("inconclusive", note=cert.note)


# -- split algebras as matrices -----------------------------------------------------

def _coords(ext, z):
    if isinstance(ext, QuadraticExtension):
        z = ext.coerce(z)
        return [z.u, z.v]
    return list(ext.top.coerce(z).coeffs)


def split_matrix_model(algebra, t):
    """Matrix of X acting on L (as a base-field space) with sigma acting as v -> t sigma(v).

    When N(t) = alpha this is an algebra isomorphism onto d x d matrices over the base.
    """
    ext = algebra.ext
    basis = ext.basis()

    def act(X, v):
        out = ext.zero
        cur = v
        for j, a in enumerate(X.coeffs):
            if j:
                cur = t * ext.sigma(cur)
            out = out + a * cur
        return out

    def model(X):
        cols = [_coords(ext, act(X, b)) for b in basis]
        return L.from_columns(cols)
    return model


def cyclic_extension_from_json(desc):
    if "q" in desc:
        return cyclotomic_real_subfield(int(desc["q"]))
    raise ValueError("unsupported cyclic extension descriptor")


__all__ = [
    "CyclicAlgebra", "CyclicElement", "CyclicDivisionVerdict", "cyclic_mul",
    "embed_cyclic_matrix", "cyclotomic_real_subfield", "prime_criterion",
    "is_division_cyclic", "norm_preimage_search", "zero_divisor_from_norm",
    "split_matrix_model",
]
