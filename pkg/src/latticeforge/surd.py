"""Exact real numbers a + b sqrt(m) with rational a, b and square-free m >= 2."""

import math
from fractions import Fraction

from .arith import fraction_str, square_class, to_fraction


def _sign_surd(a, b, m):
    """Sign of a + b sqrt(m), exactly."""
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0 or m == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: compare a^2 with b^2 m
    d = a * a - b * b * m
    return sa * ((d > 0) - (d < 0))


class Surd:
    __slots__ = ("a", "b", "m")

    def __init__(self, a=0, b=0, m=0):
        a, b = Fraction(a), Fraction(b)
        m = int(m)
        if m < 0:
            raise ValueError("radicand must be nonnegative")
        if b and m:
            s, c = square_class(Fraction(m))
            s = int(s)
            b *= c
            m = s
            if m == 1:
                a, b, m = a + b, Fraction(0), 0
        if b == 0:
            m = 0
        self.a, self.b, self.m = a, b, m

    @classmethod
    def sqrt(cls, q):
        """sqrt of a nonnegative rational."""
        q = Fraction(q)
        if q < 0:
            raise ValueError("negative radicand")
        s, c = square_class(q)
        return cls(0, c, int(s)) if s != 1 else cls(c)

    @staticmethod
    def coerce(x):
        if isinstance(x, Surd):
            return x
        return Surd(to_fraction(x))

    def _join(self, o):
        o = Surd.coerce(o)
        m = self.m or o.m
        if self.m and o.m and self.m != o.m:
            raise ValueError(f"mixed radicands sqrt({self.m}) and sqrt({o.m})")
        return o, m

    def __add__(self, o):
        o, m = self._join(o)
        return Surd(self.a + o.a, self.b + o.b, m)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.m)

    def __sub__(self, o):
        return self + (-Surd.coerce(o))

    def __rsub__(self, o):
        return Surd.coerce(o) - self

    def __mul__(self, o):
        o, m = self._join(o)
        return Surd(self.a * o.a + self.b * o.b * m, self.a * o.b + self.b * o.a, m)

    __rmul__ = __mul__

    def conj(self):
        return Surd(self.a, -self.b, self.m)

    def norm(self):
        return self.a * self.a - self.b * self.b * self.m

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero")
        c = self.conj()
        return Surd(c.a / n, c.b / n, self.m)

    def __truediv__(self, o):
        return self * Surd.coerce(o).inverse()

    def __rtruediv__(self, o):
        return Surd.coerce(o) * self.inverse()

    def __pow__(self, k):
        out = Surd(1)
        for _ in range(k):
            out = out * self
        return out

    def sign(self):
        return _sign_surd(self.a, self.b, self.m)

    def __eq__(self, o):
        try:
            o = Surd.coerce(o)
        except (TypeError, ValueError):
            return NotImplemented
        return (self - o).sign() == 0 if (self.m == o.m or not self.m or not o.m) else False

    def __hash__(self):
        return hash((self.a, self.b, self.m))

    def __lt__(self, o):
        return (self - o).sign() < 0

    def __le__(self, o):
        return (self - o).sign() <= 0

    def __gt__(self, o):
        return (self - o).sign() > 0

    def __ge__(self, o):
        return (self - o).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.m)

    def is_rational(self):
        return self.b == 0

    def floor(self):
        f = math.floor(float(self))
        for k in (f - 1, f, f + 1):
            if Surd(k) <= self < Surd(k + 1):
                return k
        # far from float precision: bisect exactly
        lo, hi = f - 2 ** 20, f + 2 ** 20
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if Surd(mid) <= self:
                lo = mid
            else:
                hi = mid
        return lo

    def to_json(self):
        if self.b == 0:
            return fraction_str(self.a)
        return {"a": fraction_str(self.a), "b": fraction_str(self.b), "root": self.m}

    @classmethod
    def from_json(cls, x):
        if isinstance(x, dict):
            return cls(to_fraction(x["a"]), to_fraction(x.get("b", "0")), int(x.get("root", 0)))
        return cls(to_fraction(x))

    def __repr__(self):
        if self.b == 0:
            return fraction_str(self.a)
        return f"{fraction_str(self.a)}{'+' if self.b > 0 else '-'}{fraction_str(abs(self.b))}*sqrt({self.m})"


def parse_surd(text):
    """Parse an exact real such as 3/2, -1/2+sqrt(3)/2 or 2*sqrt(5)."""
    import sympy
    expr = sympy.nsimplify(sympy.sympify(str(text).replace("^", "**")))
    return surd_from_sympy(expr)


def surd_from_sympy(expr):
    import sympy
    expr = sympy.expand(expr)
    a, b, m = Fraction(0), Fraction(0), 0
    for term, coef in expr.as_coefficients_dict().items():
        c = Fraction(int(sympy.fraction(coef)[0]), int(sympy.fraction(coef)[1]))
        if term == 1:
            a += c
            continue
        if isinstance(term, sympy.Pow) and term.exp == sympy.Rational(1, 2) and term.base.is_Integer:
            r = int(term.base)
            if m and m != r:
                raise ValueError("more than one radicand")
            m = r
            b += c
            continue
        raise ValueError(f"not a quadratic surd: {expr}")
    return Surd(a, b, m)
