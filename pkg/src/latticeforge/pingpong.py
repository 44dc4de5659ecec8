"""Ping-pong certificates for free subgroups of SL(2, R).

Points of RP^1 are written [x : y] with exact surd coordinates and identified
with t = x / y in R u {inf}.  Circle intervals run in the direction of
increasing t, wrapping through infinity.  Matrices of determinant 1 preserve
this cyclic order, so the image of the arc from a to b is the arc from g(a)
to g(b).
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from .arith import to_fraction
from .surd import Surd, parse_surd


# -- matrices ------------------------------------------------------------------------------

def as_matrix(g):
    """2 x 2 tuple of Surds; accepts nested sequences or a row-major 'a,b,c,d' string."""
    if isinstance(g, str):
        vals = [parse_surd(x) if "sqrt" in x else Surd(to_fraction(x.strip())) for x in g.split(",")]
        if len(vals) != 4:
            raise ValueError("a matrix needs four entries")
        g = [vals[:2], vals[2:]]
    return tuple(tuple(Surd.coerce(x) for x in row) for row in g)


def det(g):
    return g[0][0] * g[1][1] - g[0][1] * g[1][0]


def check_sl2(g):
    g = as_matrix(g)
    if det(g) != 1:
        raise ValueError("matrix must have determinant 1")
    return g


def mat_mul(g, h):
    return tuple(tuple(g[i][0] * h[0][j] + g[i][1] * h[1][j] for j in range(2)) for i in range(2))


def mat_inv(g):
    (a, b), (c, d) = g
    return ((d, -b), (-c, a))


def mat_pow(g, k):
    if k < 0:
        g, k = mat_inv(g), -k
    out = as_matrix([[1, 0], [0, 1]])
    base = g
    while k:
        if k & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        k >>= 1
    return out


def is_pm_identity(g):
    return g[0][1] == 0 and g[1][0] == 0 and g[0][0] == g[1][1] and abs(g[0][0]) == 1


# -- projective points ---------------------------------------------------------------------

class ProjectivePoint:
    __slots__ = ("x", "y")

    def __init__(self, x, y=1):
        x, y = Surd.coerce(x), Surd.coerce(y)
        if x == 0 and y == 0:
            raise ValueError("[0 : 0] is not a point")
        if y == 0:
            x = Surd(1)
        else:
            x, y = x / y, Surd(1)
        self.x, self.y = x, y

    @property
    def is_infinity(self):
        return self.y == 0

    @property
    def t(self):
        """Affine coordinate x / y, or None at infinity."""
        return None if self.is_infinity else self.x

    def __eq__(self, o):
        return isinstance(o, ProjectivePoint) and self.x * o.y == self.y * o.x

    def __hash__(self):
        return hash(("inf",) if self.is_infinity else (self.x.a, self.x.b, self.x.m))

    def angle(self):
        """Position on the circle: 2 arctan(t) in (-pi, pi]."""
        return math.pi if self.is_infinity else 2 * math.atan(float(self.x))

    def to_json(self):
        return {"x": self.x.to_json(), "y": self.y.to_json()}

    @classmethod
    def from_json(cls, d):
        return cls(Surd.from_json(d["x"]), Surd.from_json(d["y"]))

    @classmethod
    def from_angle(cls, theta, max_den=10 ** 6):
        """A rational point near the given angle."""
        theta = math.remainder(theta, 2 * math.pi)
        if abs(abs(theta) - math.pi) < 1e-12:
            return cls(1, 0)
        return cls(Fraction(math.tan(theta / 2)).limit_denominator(max_den))

    def __repr__(self):
        return "[1:0]" if self.is_infinity else f"[{self.x}:1]"


def mobius_act(g, p):
    (a, b), (c, d) = as_matrix(g)
    return ProjectivePoint(a * p.x + b * p.y, c * p.x + d * p.y)


def circle_distance(p, q):
    d = abs(p.angle() - q.angle()) % (2 * math.pi)
    return min(d, 2 * math.pi - d)


# -- circle intervals ---------------------------------------------------------------------

def _key_from(c, p):
    """Position of p along the circle read from c, increasing t, wrapping through inf."""
    if c.is_infinity:
        return (0, Surd(0)) if p.is_infinity else (1, p.x)
    if p.is_infinity:
        return (1, Surd(0))
    return (0, p.x) if p.x >= c.x else (2, p.x)


def _cmp_keys(k1, k2):
    if k1[0] != k2[0]:
        return -1 if k1[0] < k2[0] else 1
    s = (k1[1] - k2[1]).sign()
    return s


@dataclass(frozen=True)
class CircleInterval:
    """Closed arc from start to end in the direction of increasing t."""
    start: ProjectivePoint
    end: ProjectivePoint

    def __post_init__(self):
        if self.start == self.end:
            raise ValueError("interval endpoints must differ")

    def contains(self, p):
        return _cmp_keys(_key_from(self.start, p), _key_from(self.start, self.end)) <= 0

    def contains_interval(self, other):
        if not (self.contains(other.start) and self.contains(other.end)):
            return False
        ks = _key_from(self.start, other.start)
        ke = _key_from(self.start, other.end)
        return _cmp_keys(ks, ke) < 0

    def intersects(self, other):
        return self.contains(other.start) or self.contains(other.end) or \
            other.contains(self.start) or other.contains(self.end)

    def image(self, g):
        return CircleInterval(mobius_act(g, self.start), mobius_act(g, self.end))

    def interior_point(self):
        """An exact point strictly inside the arc."""
        a, b = self.start, self.end
        if a.is_infinity:
            return ProjectivePoint(b.x - 1)
        if b.is_infinity:
            return ProjectivePoint(a.x + 1)
        if a.x < b.x:
            return ProjectivePoint((a.x + b.x) / 2)
        return ProjectivePoint(1, 0)

    def to_json(self):
        return {"start": self.start.to_json(), "end": self.end.to_json()}

    @classmethod
    def from_json(cls, d):
        return cls(ProjectivePoint.from_json(d["start"]), ProjectivePoint.from_json(d["end"]))

    def __repr__(self):
        return f"arc({self.start} -> {self.end})"


def arc_around(p, radius):
    th = p.angle()
    return CircleInterval(ProjectivePoint.from_angle(th - radius),
                          ProjectivePoint.from_angle(th + radius))


# -- hyperbolic elements -------------------------------------------------------------------

@dataclass
class HyperbolicData:
    eigenvalue: Surd
    attracting: ProjectivePoint
    repelling: ProjectivePoint

    def to_json(self):
        return {"lambda": self.eigenvalue.to_json(), "attracting": self.attracting.to_json(),
                "repelling": self.repelling.to_json()}


def _eigvec(g, lam):
    (a, b), (c, d) = g
    if b != 0:
        return ProjectivePoint(b, lam - a)
    if c != 0:
        return ProjectivePoint(lam - d, c)
    return ProjectivePoint(1, 0) if a == lam else ProjectivePoint(0, 1)


def hyperbolic_data(g):
    """(lambda, attracting, repelling) with |lambda| > 1 the eigenvalue at the attracting point."""
    g = check_sl2(g)
    tr = g[0][0] + g[1][1]
    if not tr.is_rational():
        raise ValueError("trace must be rational for an exact eigenvalue")
    t = tr.a
    disc = t * t - 4
    if disc <= 0:
        raise ValueError("element is not hyperbolic (|trace| <= 2)")
    root = Surd.sqrt(disc)
    sign = 1 if t > 0 else -1
    lam = (Surd(t) + root * sign) / 2          # |lam| > 1
    mu = Surd(1) / lam
    data = HyperbolicData(lam, _eigvec(g, lam), _eigvec(g, mu))
    assert mobius_act(g, data.attracting) == data.attracting
    assert lam * lam - lam * t + 1 == 0
    return data


# -- contraction ---------------------------------------------------------------------------

def _pairwise_disjoint(arcs):
    return all(not arcs[i].intersects(arcs[j]) for i in range(len(arcs)) for j in range(i + 1, len(arcs)))


def _maps_into(g, arc, target):
    img = arc.image(g)
    ok = target.contains_interval(img)
    return ok and target.contains(mobius_act(g, arc.interior_point()))


def verify_contracting(g, a_minus, b, a_plus):
    """g(B u A+) in A+ and g^-1(B u A-) in A-; B is an arc or a list of arcs."""
    g = check_sl2(g)
    b = [b] if isinstance(b, CircleInterval) else list(b)
    if not _pairwise_disjoint([a_minus, a_plus] + b):
        raise ValueError("the sets must be pairwise disjoint")
    gi = mat_inv(g)
    return all(_maps_into(g, x, a_plus) for x in b + [a_plus]) and \
        all(_maps_into(gi, x, a_minus) for x in b + [a_minus])


@dataclass
class PingPongCertificate:
    g1: tuple
    g2: tuple
    n: int
    a_minus: CircleInterval
    a_plus: CircleInterval
    b_minus: CircleInterval
    b_plus: CircleInterval

    def generators(self):
        return mat_pow(self.g1, self.n), mat_pow(self.g2, self.n)

    def verify(self):
        a, b = self.generators()
        try:
            return verify_contracting(a, self.a_minus, [self.b_minus, self.b_plus], self.a_plus) and \
                verify_contracting(b, self.b_minus, [self.a_minus, self.a_plus], self.b_plus)
        except ValueError:
            return False

    def to_json(self):
        enc = lambda g: [[x.to_json() for x in r] for r in g]
        return {"g1": enc(self.g1), "g2": enc(self.g2), "n": self.n,
                "A_minus": self.a_minus.to_json(), "A_plus": self.a_plus.to_json(),
                "B_minus": self.b_minus.to_json(), "B_plus": self.b_plus.to_json()}

    @classmethod
    def from_json(cls, d):
        dec = lambda g: as_matrix([[Surd.from_json(x) for x in r] for r in g])
        return cls(dec(d["g1"]), dec(d["g2"]), int(d["n"]),
                   CircleInterval.from_json(d["A_minus"]), CircleInterval.from_json(d["A_plus"]),
                   CircleInterval.from_json(d["B_minus"]), CircleInterval.from_json(d["B_plus"]))


class PingPongFailure(Exception):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


def find_certificate(g1, g2, n_max=20, halvings=4):
    """Search n = 1..n_max for disjoint arcs around the four fixed points.

    The initial radius is a quarter of the least circle distance between fixed
    points; it is halved up to `halvings` times before n is incremented.
    """
    g1, g2 = check_sl2(g1), check_sl2(g2)
    h1, h2 = hyperbolic_data(g1), hyperbolic_data(g2)
    pts = [h1.repelling, h1.attracting, h2.repelling, h2.attracting]
    if {h1.attracting, h1.repelling} & {h2.attracting, h2.repelling}:
        raise ValueError("the generators share an eigenvector")
    sep = min(circle_distance(pts[i], pts[j]) for i in range(4) for j in range(i + 1, 4))
    tried = []
    for n in range(1, n_max + 1):
        a, b = mat_pow(g1, n), mat_pow(g2, n)
        radius = sep / 4
        for _ in range(halvings + 1):
            arcs = [arc_around(p, radius) for p in pts]
            if _pairwise_disjoint(arcs) and all(arc.contains(p) for arc, p in zip(arcs, pts)):
                am, ap, bm, bp = arcs
                if verify_contracting(a, am, [bm, bp], ap) and verify_contracting(b, bm, [am, ap], bp):
                    cert = PingPongCertificate(g1, g2, n, am, ap, bm, bp)
                    assert cert.verify()
                    return cert
            tried.append((n, radius))
            radius /= 2
    raise PingPongFailure(f"no certificate with n <= {n_max}",
                          {"separation": sep, "attempts": len(tried)})


# -- words -----------------------------------------------------------------------------------

def reduced_words(max_len):
    """All nonempty reduced words over a, A = a^-1, b, B = b^-1 up to max_len."""
    inverse = {"a": "A", "A": "a", "b": "B", "B": "b"}
    level = [(x,) for x in "aAbB"]
    out = list(level)
    for _ in range(max_len - 1):
        level = [w + (x,) for w in level for x in "aAbB" if inverse[w[-1]] != x]
        out.extend(level)
    return out


def validate_words(cert, max_len=6, count=None, seed=0):
    """Check words w != +-Id and track a point through the ping-pong sets."""
    if not cert.verify():
        raise ValueError("certificate does not verify")
    a, b = cert.generators()
    mats = {"a": a, "A": mat_inv(a), "b": b, "B": mat_inv(b)}
    target = {"a": cert.a_plus, "A": cert.a_minus, "b": cert.b_plus, "B": cert.b_minus}
    words = reduced_words(max_len)
    if count is not None and count < len(words):
        import random
        words = random.Random(seed).sample(words, count)
    trivial = []
    tracked = 0
    for w in words:
        m = mats[w[0]]
        for x in w[1:]:
            m = mat_mul(m, mats[x])
        if is_pm_identity(m):
            trivial.append("".join(w))
            continue
        # start in the block the last letter does not belong to
        start = cert.b_plus.start if w[-1] in "aA" else cert.a_plus.start
        p = mobius_act(m, start)
        assert target[w[0]].contains(p), f"tracking failed for {''.join(w)}"
        tracked += 1
    report = {"words": len(words), "max_len": max_len, "trivial": trivial, "tracked": tracked,
              "verdict": "free" if not trivial else "relation-found"}
    report["certificate"] = {"checked_words": len(words), "none_equal_pm_identity": not trivial}
    return report


def commutator(cert):
    a, b = cert.generators()
    return mat_mul(mat_mul(a, b), mat_mul(mat_inv(a), mat_inv(b)))


__all__ = [
    "ProjectivePoint", "CircleInterval", "HyperbolicData", "PingPongCertificate",
    "PingPongFailure", "as_matrix", "check_sl2", "mobius_act", "hyperbolic_data",
    "verify_contracting", "find_certificate", "validate_words", "reduced_words",
    "arc_around", "circle_distance", "commutator", "mat_mul", "mat_inv", "mat_pow",
]
