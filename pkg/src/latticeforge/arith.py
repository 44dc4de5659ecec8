"""Integer and rational helpers shared by the exact modules."""

from fractions import Fraction
from functools import lru_cache
from math import isqrt
import os

from sympy import factorint as _factorint
from sympy import isprime as _isprime


def to_fraction(x):
    """Parse an int, Fraction or "p/q" string."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot read {x!r} as a rational")


def fraction_str(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def sign(x):
    return (x > 0) - (x < 0)


@lru_cache(maxsize=4096)
def factor(n):
    """Prime factorization of |n| as a dict (cached)."""
    n = abs(int(n))
    if n <= 1:
        return {}
    return dict(_factorint(n))


def is_prime(n):
    return n >= 2 and bool(_isprime(n))


def primes_dividing(*nums):
    out = set()
    for n in nums:
        out.update(factor(n))
    return sorted(out)


def squarefree_int(n):
    """Squarefree part of a nonzero integer, keeping the sign."""
    if n == 0:
        raise ValueError("zero has no squarefree part")
    s = 1
    for p, e in factor(n).items():
        if e % 2:
            s *= p
    return s if n > 0 else -s


def square_class(q):
    """(squarefree integer s, rational c) with q = s * c**2."""
    q = Fraction(q)
    num = q.numerator * q.denominator
    s = squarefree_int(num)
    c2 = q / s
    c = rational_sqrt(c2)
    assert c is not None
    return s, c


def rational_sqrt(q):
    """Exact square root of a rational square, else None."""
    q = Fraction(q)
    if q < 0:
        return None
    a, b = q.numerator, q.denominator
    ra, rb = isqrt(a), isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


def is_rational_square(q):
    return rational_sqrt(q) is not None


def sqrt_lower(q, bits=64):
    """Rational lower bound for sqrt(q) within 2**-bits relative."""
    q = Fraction(q)
    if q <= 0:
        return Fraction(0)
    scale = 1 << (2 * bits)
    return Fraction(isqrt(q.numerator * scale // q.denominator), 1 << bits)


def sqrt_upper(q, bits=64):
    q = Fraction(q)
    if q <= 0:
        return Fraction(0)
    lo = sqrt_lower(q, bits)
    hi = lo + Fraction(1, 1 << bits)
    while hi * hi < q:
        hi += Fraction(1, 1 << bits)
    return hi


def valuation(n, p):
    """p-adic valuation of a nonzero rational."""
    q = Fraction(n)
    if q == 0:
        raise ValueError("valuation of zero")
    v = 0
    a, b = q.numerator, q.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v


def multiplicative_order(a, n):
    a %= n
    if a == 0:
        raise ValueError("not a unit")
    k, x = 1, a
    while x != 1:
        x = x * a % n
        k += 1
    return k


def thread_cap():
    """Worker cap from LATTICEFORGE_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get("LATTICEFORGE_THREADS", "1")))
    except ValueError:
        return 1
