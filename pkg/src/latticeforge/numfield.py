"""Exact arithmetic in Q and in number fields Q[x]/(f).

Real places are isolated with Sturm sequences.  Complex places are isolated by
certified disks: high-precision approximations from mpmath are checked with
exact rational arithmetic against Smith's inclusion theorem (the union of the
disks |z - z_i| <= n|W_i| holds every root, and pairwise disjoint disks hold
exactly one root each, W_i being the Weierstrass correction).
"""

from fractions import Fraction
import threading

import mpmath

from . import poly as P
from .arith import factor, is_prime, rational_sqrt, sign, to_fraction


class ReducibleError(ValueError):
    """The proposed minimal polynomial has a detected factorization."""


# -- small exact helpers ------------------------------------------------------

def _mpf_to_fraction(x):
    sgn, man, exp, _ = mpmath.mpf(x)._mpf_
    man, exp = (-1) ** sgn * int(man), int(exp)
    if man == 0:
        return Fraction(0)
    return Fraction(man * (1 << exp)) if exp >= 0 else Fraction(man, 1 << -exp)


def _cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _cdiv(a, b):
    den = b[0] * b[0] + b[1] * b[1]
    return ((a[0] * b[0] + a[1] * b[1]) / den, (a[1] * b[0] - a[0] * b[1]) / den)


def _csub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _cabs2(a):
    return a[0] * a[0] + a[1] * a[1]


def _upper_sqrt(q):
    """A rational >= sqrt(q), coarse but cheap."""
    q = Fraction(q)
    if q <= 0:
        return Fraction(0)
    # sqrt(q) <= (q + t^2) / (2t) for any t > 0; pick t from a float estimate
    t = Fraction(max(float(q), 1e-300) ** 0.5).limit_denominator(1 << 60)
    if t <= 0:
        t = Fraction(1, 1 << 60)
    return (q + t * t) / (2 * t)


class Interval:
    """Closed rational interval [lo, hi]."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        self.lo = Fraction(lo)
        self.hi = Fraction(lo if hi is None else hi)

    def __add__(self, o):
        o = _ival(o)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, o):
        return self + (-_ival(o))

    def __mul__(self, o):
        o = _ival(o)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(ps), max(ps))

    __rmul__ = __mul__

    @property
    def width(self):
        return self.hi - self.lo

    def contains(self, x):
        return self.lo <= x <= self.hi

    def excludes_zero(self):
        return self.lo > 0 or self.hi < 0

    def __repr__(self):
        return f"[{float(self.lo):.12g}, {float(self.hi):.12g}]"


def _ival(x):
    return x if isinstance(x, Interval) else Interval(x)


class Box:
    """Closed rational rectangle re x im, an enclosure of a complex number."""

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re = _ival(re)
        self.im = _ival(im)

    def __add__(self, o):
        o = _box(o)
        return Box(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __mul__(self, o):
        o = _box(o)
        return Box(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    @property
    def width(self):
        return max(self.re.width, self.im.width)

    def contains(self, z):
        return self.re.contains(z[0]) and self.im.contains(z[1])

    def __repr__(self):
        return f"Box(re={self.re}, im={self.im})"


def _box(x):
    if isinstance(x, Box):
        return x
    return Box(_ival(x), Interval(0))


# -- places --------------------------------------------------------------------

class Place:
    """A real embedding, or a conjugate pair of complex embeddings.

    Real places keep a half-open isolating interval (lo, hi] (or an exact
    rational root when lo == hi).  Complex places keep a certified disk around
    the root in the upper half-plane.  Refinement is monotone and guarded by a
    lock, so concurrent readers may refine independently.
    """

    def __init__(self, field, kind, index, box):
        self.field = field
        self.kind = kind
        self.index = index
        self._box = box
        self._lock = threading.Lock()

    @property
    def is_real(self):
        return self.kind == "real"

    def root_enclosure(self, width):
        """Interval or Box around the defining root, of width <= width."""
        width = Fraction(width)
        with self._lock:
            if self.is_real:
                lo, hi = self._box
                if hi - lo > width:
                    lo, hi = P.refine_real_root(self.field._sturm, lo, hi, width)
                    self._box = (lo, hi)
                return Interval(lo, hi)
            center, radius = self._box
            while 2 * radius > width:
                center, radius = self.field._refine_complex(center, radius, width)
            self._box = (center, radius)
            return Box(Interval(center[0] - radius, center[0] + radius),
                       Interval(center[1] - radius, center[1] + radius))

    def approx(self):
        """Float (real) or complex approximation of the root."""
        enc = self.root_enclosure(Fraction(1, 10 ** 12))
        if self.is_real:
            return float((enc.lo + enc.hi) / 2)
        return complex(float((enc.re.lo + enc.re.hi) / 2), float((enc.im.lo + enc.im.hi) / 2))

    def to_json(self):
        return {"kind": self.kind, "index": self.index}

    def __repr__(self):
        return f"Place({self.kind}#{self.index} of {self.field})"


# -- the rational field --------------------------------------------------------

class RationalField:
    """Q, with a single real place."""

    degree = 1
    min_poly = (0, 1)
    assumed_irreducible = False
    is_rational = True

    def __init__(self):
        self.places = [Place(self, "real", 0, (Fraction(0), Fraction(0)))]

    def __call__(self, x):
        return self.coerce(x)

    def coerce(self, x):
        if isinstance(x, FieldElement):
            if x.field.degree == 1 or all(c == 0 for c in x.coeffs[1:]):
                return x.coeffs[0]
            raise TypeError("element is not rational")
        return to_fraction(x)

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def real_places(self):
        return list(self.places)

    def complex_places(self):
        return []

    def signature(self):
        return (1, 0)

    def is_zero(self, x):
        return x == 0

    def sign_at(self, x, place=None):
        return sign(self.coerce(x))

    def evaluate_at(self, x, place=None, width=None):
        x = self.coerce(x)
        return Interval(x)

    def conjugate(self, x, place=None):
        return self.coerce(x)

    def is_square(self, x):
        return rational_sqrt(self.coerce(x)) is not None

    def to_json(self):
        return "Q"

    def __repr__(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")


QQ = RationalField()


# -- number fields ---------------------------------------------------------------

class NumberField:
    """F = Q[x]/(min_poly) with monic integral min_poly; use make_field()."""

    is_rational = False

    def __init__(self, min_poly, assumed_irreducible=False, certificate=""):
        self.min_poly = tuple(int(c) for c in min_poly)
        self.degree = len(self.min_poly) - 1
        self.assumed_irreducible = assumed_irreducible
        self.irreducibility = certificate
        self._sturm = P.sturm_sequence(list(self.min_poly))
        self._dps = 30
        self.places = self._compute_places()
        r = len(self.real_places())
        s = len(self.complex_places())
        assert r + 2 * s == self.degree, "place count mismatch"

    # construction of places
    def _certified_disks(self, dps):
        f = list(self.min_poly)
        n = self.degree
        with mpmath.workdps(dps):
            approx = mpmath.polyroots([mpmath.mpf(c) for c in reversed(f)],
                                      maxsteps=200 + 20 * dps, extraprec=2 * dps)
            tol = mpmath.mpf(10) ** (-(dps // 2))
            pts = []
            for z in approx:
                z = mpmath.mpc(z)
                im = z.imag if abs(z.imag) > tol else mpmath.mpf(0)
                pts.append((_mpf_to_fraction(z.real), _mpf_to_fraction(im)))
        disks = []
        for i, zi in enumerate(pts):
            num = (Fraction(0), Fraction(0))
            for c in reversed(f):
                num = _cmul(num, zi)
                num = (num[0] + c, num[1])
            den = (Fraction(1), Fraction(0))
            for j, zj in enumerate(pts):
                if j != i:
                    d = _csub(zi, zj)
                    if d == (0, 0):
                        return None
                    den = _cmul(den, d)
            w = _cdiv(num, den)
            disks.append((zi, n * _upper_sqrt(_cabs2(w))))
        for i in range(n):
            for j in range(i + 1, n):
                (ci, ri), (cj, rj) = disks[i], disks[j]
                if _cabs2(_csub(ci, cj)) <= (ri + rj) ** 2:
                    return None
        for c, r in disks:
            if c[1] != 0 and abs(c[1]) <= r:
                return None
        return disks

    def _disks(self, dps):
        while True:
            disks = self._certified_disks(dps)
            if disks is not None:
                return disks, dps
            dps *= 2
            if dps > 5000:
                raise ArithmeticError("complex root isolation failed")

    def _compute_places(self):
        intervals = P.isolate_real_roots(list(self.min_poly))
        places = []
        for i, (a, b) in enumerate(intervals):
            if P.evaluate(list(self.min_poly), b) == 0:
                box = (b, b)
            else:
                box = (a, b)
            places.append(Place(self, "real", i, box))
        if len(intervals) < self.degree:
            disks, self._dps = self._disks(self._dps)
            n_real_disks = sum(1 for c, _ in disks if c[1] == 0)
            if n_real_disks != len(intervals):
                raise ArithmeticError("Sturm count disagrees with certified disks")
            upper = sorted(((c, r) for c, r in disks if c[1] > 0), key=lambda cr: (cr[0][0], cr[0][1]))
            for k, (c, r) in enumerate(upper):
                places.append(Place(self, "complex", len(intervals) + k, (c, r)))
        return places

    def _refine_complex(self, center, radius, width):
        dps = self._dps
        while True:
            dps *= 2
            disks, dps = self._disks(dps)
            for c, r in disks:
                if c[1] > 0 and _upper_sqrt(_cabs2(_csub(c, center))) + r <= radius:
                    if 2 * r <= width or r < radius / 2:
                        self._dps = max(self._dps, dps // 2)
                        return c, r
            if dps > 5000:
                raise ArithmeticError("complex refinement failed")

    # elements
    def __call__(self, x):
        return self.coerce(x)

    def coerce(self, x):
        if isinstance(x, FieldElement):
            if x.field is self:
                return x
            if x.field.degree == 1:
                return FieldElement(self, [x.coeffs[0]])
            raise TypeError(f"element of {x.field} is not in {self}")
        if isinstance(x, (list, tuple)):
            return FieldElement(self, [to_fraction(c) for c in x])
        return FieldElement(self, [to_fraction(x)])

    @property
    def gen(self):
        return FieldElement(self, [0, 1])

    @property
    def zero(self):
        return FieldElement(self, [])

    @property
    def one(self):
        return FieldElement(self, [1])

    def real_places(self):
        return [p for p in self.places if p.is_real]

    def complex_places(self):
        return [p for p in self.places if not p.is_real]

    def signature(self):
        return (len(self.real_places()), len(self.complex_places()))

    def place(self, kind, index):
        for p in self.places:
            if p.kind == kind and p.index == index:
                return p
        raise KeyError(f"no {kind} place #{index}")

    def is_zero(self, x):
        return self.coerce(x).is_zero()

    def evaluate_at(self, x, place, width):
        return evaluate_at(self.coerce(x), place, width)

    def sign_at(self, x, place):
        return sign_at(self.coerce(x), place)

    def is_square(self, x):
        """Exact squareness test via y^2 - x over F having a root in F.

        Decided by checking signs at real places, then the absolute norm, then
        a factor search of y^2 - x over F using its norm polynomial.
        """
        x = self.coerce(x)
        if x.is_zero():
            return True
        for pl in self.real_places():
            if sign_at(x, pl) < 0:
                return False
        n = x.absolute_norm()
        if rational_sqrt(n) is None:
            return False
        return square_root(x) is not None

    def to_json(self):
        return {"min_poly": list(self.min_poly)}

    def __repr__(self):
        return f"Q[x]/({P.fmt(list(self.min_poly))})"


class FieldElement:
    """Element of a NumberField in the power basis 1, a, ..., a^(d-1)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        c = [Fraction(v) for v in coeffs]
        d = field.degree
        if len(c) > d:
            c = P.rem(c, list(field.min_poly))
        c = list(c) + [Fraction(0)] * (d - len(c))
        self.coeffs = tuple(c)

    def _other(self, o):
        if isinstance(o, FieldElement):
            if o.field is not self.field:
                if o.field.degree == 1:
                    return FieldElement(self.field, [o.coeffs[0]])
                raise TypeError("mixed number fields")
            return o
        if isinstance(o, (int, Fraction)):
            return FieldElement(self.field, [o])
        return NotImplemented

    def __add__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.coeffs])

    def __sub__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        prod = P.mul(list(self.coeffs), list(o.coeffs))
        return FieldElement(self.field, P.rem(prod, list(self.field.min_poly)))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a number field")
        d, s, _ = P.ext_gcd(P.trim(list(self.coeffs)), list(self.field.min_poly))
        if len(d) != 1:
            raise ZeroDivisionError("element is a zero divisor: min_poly is reducible")
        return FieldElement(self.field, s)

    def __truediv__(self, o):
        o = self._other(o)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, o):
        return self.inverse() * o

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            return self.coeffs[0] == o and all(c == 0 for c in self.coeffs[1:])
        if isinstance(o, FieldElement):
            return self.field is o.field and self.coeffs == o.coeffs
        return NotImplemented

    def __hash__(self):
        if all(c == 0 for c in self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((id(self.field), self.coeffs))

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def is_rational(self):
        return all(c == 0 for c in self.coeffs[1:])

    def poly(self):
        return P.trim(list(self.coeffs))

    def mult_matrix(self):
        """Matrix of y -> self*y in the power basis (columns are images)."""
        d = self.field.degree
        cols = []
        for k in range(d):
            basis = [0] * k + [1]
            cols.append((self * FieldElement(self.field, basis)).coeffs)
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def absolute_norm(self):
        from .linalg import det
        return det(self.mult_matrix())

    def absolute_trace(self):
        m = self.mult_matrix()
        return sum(m[i][i] for i in range(len(m)))

    def __repr__(self):
        return P.fmt(self.poly(), "a")

    def to_json(self):
        from .arith import fraction_str
        return [fraction_str(c) for c in self.coeffs]


# -- operations -------------------------------------------------------------------

_FIELD_CACHE = {}
_CACHE_LOCK = threading.Lock()


def _divisors(n):
    n = abs(n)
    divs = [1]
    for p, e in factor(n).items():
        divs = [d * p ** k for d in divs for k in range(e + 1)]
    return divs


def _rational_root(f):
    """An integer root of a monic integer polynomial, or None."""
    if f[0] == 0:
        return 0
    for d in _divisors(f[0]):
        for r in (d, -d):
            if P.evaluate(f, r) == 0:
                return r
    return None


def _small_primes(count, skip=()):
    out = []
    p = 2
    while len(out) < count:
        if is_prime(p) and p not in skip:
            out.append(p)
        p += 1
    return out


def _quadratic_factor(f):
    """A monic integer factorization (x^2+ax+b)(x^2+cx+d) of a monic quartic, or None."""
    from math import isqrt
    c0, c1, c2, c3 = f[:4]
    if c0 == 0:
        return ((0, 0), (c2, c3))
    for b in _divisors(c0):
        for b in (b, -b):
            d = c0 // b
            s = c2 - b - d          # a*c, with a + c = c3
            disc = c3 * c3 - 4 * s
            if disc < 0 or isqrt(disc) ** 2 != disc:
                continue
            r = isqrt(disc)
            for a in {(c3 + r) // 2, (c3 - r) // 2}:
                c = c3 - a
                if a * c == s and a * d + b * c == c1:
                    return ((b, a), (d, c))
    return None


def irreducibility_certificate(f):
    """Return (status, reason); status in {"irreducible", "reducible", "unknown"}."""
    f = [int(c) for c in f]
    n = len(f) - 1
    if n == 1:
        return "irreducible", "degree one"
    r = _rational_root(f)
    if r is not None:
        return "reducible", f"rational root {r}"
    if n <= 3:
        return "irreducible", "degree <= 3 without rational root"
    if n == 4:
        fac = _quadratic_factor(f)
        if fac is not None:
            (b, a), (d, c) = fac
            return "reducible", f"factors as ({P.fmt([b, a, 1])})({P.fmt([d, c, 1])})"
        return "irreducible", "quartic without rational root or quadratic factor"
    for c in (0, 1, -1, 2, -2, 3, -3):
        g = [int(x) for x in P.shift(f, c)]
        for p in sorted(factor(g[0])):
            if eisenstein_test(g, p):
                return "irreducible", f"Eisenstein at p={p} after x -> x{c:+d}"
    disc_primes = set()
    possible = set(range(1, n))
    for p in _small_primes(60):
        pat = P.distinct_degree_pattern(f, p)
        if pat is None:
            disc_primes.add(p)
            continue
        if pat == [n]:
            return "irreducible", f"irreducible mod {p}"
        possible &= P.subset_sums(pat)
        if not possible:
            return "irreducible", "incompatible factor degrees modulo small primes"
    return "unknown", "inconclusive: factor degree patterns compatible with a splitting"


def make_field(min_poly):
    """Construct F = Q[x]/(min_poly); min_poly is integral, monic, lowest degree first."""
    coeffs = [c for c in min_poly]
    for c in coeffs:
        if Fraction(c).denominator != 1:
            raise ValueError("min_poly must have integer coefficients")
    coeffs = P.trim([int(c) for c in coeffs])
    if len(coeffs) < 2:
        raise ValueError("min_poly must have degree >= 1")
    if coeffs[-1] != 1:
        raise ValueError("min_poly must be monic")
    key = tuple(coeffs)
    with _CACHE_LOCK:
        if key in _FIELD_CACHE:
            return _FIELD_CACHE[key]
    status, reason = irreducibility_certificate(coeffs)
    if status == "reducible":
        raise ReducibleError(f"{P.fmt(coeffs)} is reducible: {reason}")
    field = NumberField(coeffs, assumed_irreducible=(status == "unknown"), certificate=reason)
    with _CACHE_LOCK:
        return _FIELD_CACHE.setdefault(key, field)


def field_from_json(desc):
    if desc == "Q" or desc is None:
        return QQ
    return make_field(desc["min_poly"])


def _horner_enclosure(coeffs, enc):
    acc = Interval(0) if isinstance(enc, Interval) else Box(0, 0)
    for c in reversed(coeffs):
        acc = acc * enc + c
    return acc


def evaluate_at(elem, place, width):
    """Certified enclosure of sigma(elem) of width <= width.

    Returns an Interval for a real place and a Box for a complex place.  The
    zero element yields the exact zero enclosure.
    """
    width = Fraction(width)
    if width <= 0:
        raise ValueError("width must be positive")
    field = place.field
    if field is QQ or isinstance(field, RationalField):
        return Interval(QQ.coerce(elem))
    elem = field.coerce(elem)
    if elem.is_zero():
        return Interval(0) if place.is_real else Box(0, 0)
    coeffs = elem.poly()
    if len(coeffs) == 1:
        return Interval(coeffs[0]) if place.is_real else Box(coeffs[0], 0)
    root_w = width
    while True:
        enc = place.root_enclosure(root_w)
        val = _horner_enclosure(coeffs, enc)
        if val.width <= width:
            return val
        root_w = min(root_w, enc.width if enc.width > 0 else root_w) / 4


def sign_at(elem, place):
    """Exact sign of sigma(elem) at a real place."""
    if not place.is_real:
        raise ValueError("sign is only defined at real places")
    field = place.field
    if isinstance(field, RationalField):
        return sign(QQ.coerce(elem))
    elem = field.coerce(elem)
    if elem.is_zero():
        return 0
    w = Fraction(1)
    while True:
        iv = evaluate_at(elem, place, w)
        if iv.excludes_zero():
            return 1 if iv.lo > 0 else -1
        if iv.lo == iv.hi == 0:
            # exact rational root with element vanishing: impossible for a
            # nonzero element of a field, but keep the contract honest
            return 0
        w /= 1 << 8


def conjugate_approx(elem, place):
    enc = evaluate_at(elem, place, Fraction(1, 10 ** 15))
    if isinstance(enc, Interval):
        return float((enc.lo + enc.hi) / 2)
    return complex(float((enc.re.lo + enc.re.hi) / 2), float((enc.im.lo + enc.im.hi) / 2))


def square_root(x):
    """A square root of x inside its own field, or None.

    Factors Y^2 - x over F with sympy's algebraic-field arithmetic.
    """
    import sympy
    field = x.field
    a, Y = sympy.symbols("a Y")
    K = sympy.QQ.algebraic_field(sympy.CRootOf(sympy.Poly(list(reversed(field.min_poly)), a), 0))
    xk = K([sympy.QQ(c.numerator, c.denominator) for c in reversed(x.coeffs)])
    f = sympy.Poly([K.one, K.zero, -xk], Y, domain=K)
    for g, _ in f.factor_list()[1]:
        if g.degree() != 1:
            continue
        c1, c0 = g.rep.to_list()
        root = -c0 / c1
        coeffs = [Fraction(int(q.numerator), int(q.denominator)) for q in reversed(root.to_list())]
        y = FieldElement(field, coeffs)
        if y * y == x:
            return y
    return None


def relative_norm(elem, ext):
    """N_{L/F}(elem): the product of the Galois conjugates of elem."""
    if ext is None or not hasattr(ext, "norm"):
        raise ValueError("relative_norm needs a quadratic or cyclic extension with a generator")
    return ext.norm(elem)


def eisenstein_test(poly_coeffs, p):
    """Eisenstein's criterion at p (True proves irreducibility over Q)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    f = [int(c) for c in P.trim(poly_coeffs)]
    if len(f) < 2:
        raise ValueError("degree must be >= 1")
    if f[-1] % p == 0:
        return False
    if any(c % p for c in f[:-1]):
        return False
    return f[0] % (p * p) != 0


def sturm_count(poly_coeffs, interval):
    """Distinct real roots of poly in the half-open interval (a, b]."""
    a, b = interval
    return P.sturm_count(P.squarefree_part([Fraction(c) for c in poly_coeffs]), a, b)


def field_with_signature(r, s):
    """A number field with exactly r real and s complex places.

    Builds g(x) = (x - a_1)...(x - a_r)(x^(2s) + 1) with a_i = 0, 1, -1, 2, ...,
    rescales to k^n g(x/k) with k = p^2 so that g = x^n mod p^2 and |g| > p at
    the real critical points, then takes f = g - p (Eisenstein at p).
    """
    if r < 0 or s < 0 or r + s == 0:
        raise ValueError("need r, s >= 0, not both zero")
    if (r, s) == (0, 1):
        return make_field([1, 0, 1])
    n = r + 2 * s
    shifts = [0]
    while len(shifts) < r:
        k = len(shifts)
        shifts.append((k + 1) // 2 if k % 2 else -(k // 2))
    g = [1]
    for a in shifts[:r]:
        g = P.mul(g, [-a, 1])
    if s:
        g = P.mul(g, [1] + [0] * (2 * s - 1) + [1])
    crit_min = _min_abs_at_critical_points(g)
    p = 5
    while True:
        if is_prime(p):
            k = p * p
            if crit_min is None or k ** n * crit_min > p:
                gk = [int(c) * k ** (n - i) for i, c in enumerate(g)]
                f = list(gk)
                f[0] -= p
                assert eisenstein_test(f, p)
                field = make_field(f)
                if field.signature() == (r, s):
                    return field
        p += 1


def _min_abs_at_critical_points(g):
    """Rational lower bound for min |g(t)| over real t with g'(t) = 0."""
    dg = P.derivative(g)
    if P.degree(dg) < 1:
        return None
    seq = P.sturm_sequence(dg)
    best = None
    for a, b in P.isolate_real_roots(dg):
        w = Fraction(1, 4)
        while True:
            lo, hi = P.refine_real_root(seq, a, b, w)
            val = _horner_enclosure(g, Interval(lo, hi))
            if val.excludes_zero():
                bound = min(abs(val.lo), abs(val.hi))
                break
            a, b = lo, hi
            w /= 16
        best = bound if best is None else min(best, bound)
    return best


# -- extensions ------------------------------------------------------------------------

class QuadExtElement:
    """u + v*sqrt(beta) in a quadratic extension L = F(sqrt(beta))."""

    __slots__ = ("ext", "u", "v")

    def __init__(self, ext, u, v=0):
        self.ext = ext
        self.u = ext.base.coerce(u)
        self.v = ext.base.coerce(v)

    def _other(self, o):
        if isinstance(o, QuadExtElement):
            if o.ext is not self.ext:
                raise TypeError("mixed quadratic extensions")
            return o
        return QuadExtElement(self.ext, o, 0)

    def __add__(self, o):
        o = self._other(o)
        return QuadExtElement(self.ext, self.u + o.u, self.v + o.v)

    __radd__ = __add__

    def __neg__(self):
        return QuadExtElement(self.ext, -self.u, -self.v)

    def __sub__(self, o):
        return self + (-self._other(o))

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o = self._other(o)
        b = self.ext.beta
        return QuadExtElement(self.ext, self.u * o.u + b * self.v * o.v, self.u * o.v + self.v * o.u)

    __rmul__ = __mul__

    def conj(self):
        return QuadExtElement(self.ext, self.u, -self.v)

    def norm(self):
        return self.u * self.u - self.ext.beta * self.v * self.v

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        ninv = 1 / n if not isinstance(n, Fraction) else Fraction(1) / n
        return QuadExtElement(self.ext, self.u * ninv, -self.v * ninv)

    def __truediv__(self, o):
        return self * self._other(o).inverse()

    def __rtruediv__(self, o):
        return self.inverse() * o

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = QuadExtElement(self.ext, 1, 0)
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self):
        return self.u == 0 and self.v == 0

    def __eq__(self, o):
        try:
            o = self._other(o)
        except TypeError:
            return NotImplemented
        return self.u == o.u and self.v == o.v

    def __hash__(self):
        return hash((self.u, self.v))

    def __repr__(self):
        return f"({self.u}) + ({self.v})*sqrt({self.ext.beta})"

    def to_json(self):
        from .arith import fraction_str

        def enc(x):
            return x.to_json() if isinstance(x, FieldElement) else fraction_str(x)
        return {"u": enc(self.u), "v": enc(self.v)}


class QuadraticExtension:
    """L = F(sqrt(beta)) with its Galois automorphism a + b sqrt(beta) -> a - b sqrt(beta)."""

    degree = 2

    def __init__(self, base, beta):
        self.base = base
        self.beta = base.coerce(beta)
        if base.is_zero(self.beta):
            raise ValueError("beta must be nonzero")
        if base.is_square(self.beta):
            raise ValueError(f"beta = {self.beta} is a square in the base field")

    def __call__(self, u, v=0):
        return QuadExtElement(self, u, v)

    @property
    def sqrt_beta(self):
        return QuadExtElement(self, 0, 1)

    @property
    def one(self):
        return QuadExtElement(self, 1, 0)

    @property
    def zero(self):
        return QuadExtElement(self, 0, 0)

    def coerce(self, x):
        if isinstance(x, QuadExtElement):
            return x
        return QuadExtElement(self, x, 0)

    def sigma(self, x):
        return self.coerce(x).conj()

    def sigma_pow(self, x, k):
        x = self.coerce(x)
        return x.conj() if k % 2 else x

    def norm(self, x):
        """Relative norm N_{L/F}(x) = x * sigma(x), an element of the base."""
        if not isinstance(x, QuadExtElement):
            x = self.base.coerce(x)
            return x * x
        return x.norm()

    def is_base(self, x):
        return self.coerce(x).v == 0

    def is_zero(self, x):
        return self.coerce(x).is_zero()

    def basis(self):
        return [self.one, self.sqrt_beta]

    def to_json(self):
        beta = self.beta.to_json() if isinstance(self.beta, FieldElement) else str(self.beta)
        return {"base": self.base.to_json(), "beta": beta}

    def __repr__(self):
        return f"{self.base}(sqrt({self.beta}))"


class CyclicExtension:
    """A cyclic extension L/Q, L = Q(zeta), with sigma given by sigma(zeta)."""

    def __init__(self, top, sigma_image, degree=None):
        self.base = QQ
        self.top = top
        self.sigma_image = top.coerce(sigma_image)
        self.degree = top.degree if degree is None else degree
        if self.degree != top.degree:
            raise ValueError("only cyclic extensions of Q given by an absolute field are supported")
        f = list(top.min_poly)
        img = self.sigma_image
        if not _eval_in_field(f, img).is_zero():
            raise ValueError("sigma(zeta) is not a root of the minimal polynomial")
        z = top.gen
        powers = [z]
        for _ in range(self.degree - 1):
            powers.append(self.sigma(powers[-1]))
        if self.sigma(powers[-1]) != z:
            raise ValueError("sigma^d is not the identity")
        if any(powers[k] == z for k in range(1, self.degree)):
            raise ValueError("sigma does not generate the Galois group")

    def coerce(self, x):
        return self.top.coerce(x)

    @property
    def one(self):
        return self.top.one

    @property
    def zero(self):
        return self.top.zero

    def sigma(self, x):
        x = self.top.coerce(x)
        return _eval_in_field(x.poly(), self.sigma_image)

    def sigma_pow(self, x, k):
        x = self.top.coerce(x)
        for _ in range(k % self.degree):
            x = self.sigma(x)
        return x

    def norm(self, x):
        x = self.top.coerce(x)
        out = x
        y = x
        for _ in range(self.degree - 1):
            y = self.sigma(y)
            out = out * y
        assert out.is_rational(), "norm left the base field"
        return out.coeffs[0]

    def is_base(self, x):
        return self.top.coerce(x).is_rational()

    def is_zero(self, x):
        return self.top.coerce(x).is_zero()

    def basis(self):
        return [FieldElement(self.top, [0] * k + [1]) for k in range(self.degree)]

    def to_json(self):
        return {"top": self.top.to_json(), "sigma": self.sigma_image.to_json()}

    def __repr__(self):
        return f"{self.top} / Q, sigma(a) = {self.sigma_image}"


def _eval_in_field(coeffs, x):
    acc = x.field.zero
    for c in reversed(list(coeffs)):
        acc = acc * x + c
    return acc


def random_element(field, rng, bound=5):
    """Random element with integer power-basis coordinates in [-bound, bound]."""
    if isinstance(field, RationalField):
        return Fraction(rng.randint(-bound, bound))
    return FieldElement(field, [rng.randint(-bound, bound) for _ in range(field.degree)])


def all_places_json(field):
    return [p.to_json() for p in field.places]


__all__ = [
    "QQ", "RationalField", "NumberField", "FieldElement", "Place", "Interval", "Box",
    "QuadraticExtension", "QuadExtElement", "CyclicExtension", "ReducibleError",
    "make_field", "field_from_json", "evaluate_at", "sign_at", "relative_norm",
    "eisenstein_test", "sturm_count", "field_with_signature", "irreducibility_certificate",
    "random_element", "conjugate_approx",
]

