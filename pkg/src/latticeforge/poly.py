"""Dense univariate polynomials over Q, lowest degree first.

Polynomials are plain lists of ``int`` or ``Fraction``; the empty list is the
zero polynomial.  Everything here is exact.
"""

from fractions import Fraction
from math import gcd


def trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f):
    return len(trim(f)) - 1


def add(f, g):
    n = max(len(f), len(g))
    return trim([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)])


def neg(f):
    return [-c for c in f]


def sub(f, g):
    return add(f, neg(g))


def scale(f, c):
    return trim([c * a for a in f])


def mul(f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] += a * b
    return trim(out)


def divmod_poly(f, g):
    """Quotient and remainder of f by g over Q."""
    f = [Fraction(c) for c in trim(f)]
    g = trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    lead = Fraction(g[-1])
    q = [Fraction(0)] * max(len(f) - len(g) + 1, 0)
    while len(f) >= len(g) and f:
        c = f[-1] / lead
        shift = len(f) - len(g)
        q[shift] = c
        for i, b in enumerate(g):
            f[shift + i] -= c * b
        f = trim(f)
    return trim(q), f


def rem(f, g):
    return divmod_poly(f, g)[1]


def monic(f):
    f = trim(f)
    if not f:
        return f
    lead = Fraction(f[-1])
    return [Fraction(c) / lead for c in f]


def poly_gcd(f, g):
    f, g = trim(f), trim(g)
    while g:
        f, g = g, rem(f, g)
    return monic(f)


def ext_gcd(f, g):
    """Return (d, s, t) with s*f + t*g = d, d monic."""
    r0, r1 = trim(f), trim(g)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = divmod_poly(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1))
        t0, t1 = t1, sub(t0, mul(q, t1))
    lead = Fraction(r0[-1])
    return [c / lead for c in r0], [c / lead for c in s0], [c / lead for c in t0]


def derivative(f):
    return trim([i * f[i] for i in range(1, len(f))])


def evaluate(f, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def compose(f, g):
    """f(g(x))."""
    acc = []
    for c in reversed(trim(f)):
        acc = add(mul(acc, g), [c])
    return acc


def shift(f, c):
    """f(x + c)."""
    return compose(f, [c, 1])


def squarefree_part(f):
    f = trim(f)
    if degree(f) < 1:
        return f
    g = poly_gcd(f, derivative(f))
    return monic(divmod_poly(f, g)[0])


def content_primitive(f):
    """Clear denominators and content; returns an integer polynomial."""
    f = [Fraction(c) for c in trim(f)]
    if not f:
        return []
    den = 1
    for c in f:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in f]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


# -- real roots ------------------------------------------------------------

def sturm_sequence(f):
    f = squarefree_part(f)
    seq = [f, derivative(f)]
    while seq[-1]:
        r = rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append(neg(r))
    return [s for s in seq if s]


def _sign(x):
    return (x > 0) - (x < 0)


def _variations(seq, x):
    signs = [_sign(evaluate(p, x)) for p in seq]
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count_seq(seq, a, b):
    """Number of distinct roots in the half-open interval (a, b]."""
    return _variations(seq, a) - _variations(seq, b)


def sturm_count(f, a, b):
    """Count the distinct real roots of f in (a, b]."""
    f = trim(f)
    if degree(f) < 1:
        return 0
    return sturm_count_seq(sturm_sequence(f), Fraction(a), Fraction(b))


def root_bound(f):
    """Cauchy bound: every complex root has modulus below the result."""
    f = trim(f)
    lead = abs(Fraction(f[-1]))
    return 1 + max(abs(Fraction(c)) / lead for c in f[:-1]) if len(f) > 1 else Fraction(1)


def isolate_real_roots(f):
    """Disjoint half-open intervals (a, b], each holding exactly one real root.

    Sorted ascending.  f need not be squarefree; distinct roots are isolated.
    """
    f = trim(f)
    if degree(f) < 1:
        return []
    seq = sturm_sequence(f)
    bound = Fraction(root_bound(f))
    out = []
    stack = [(-bound, bound)]
    while stack:
        a, b = stack.pop()
        n = sturm_count_seq(seq, a, b)
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        m = (a + b) / 2
        stack.append((a, m))
        stack.append((m, b))
    out.sort()
    return out


def refine_real_root(seq, a, b, width):
    """Shrink (a, b] holding one root until b - a <= width."""
    while b - a > width:
        m = (a + b) / 2
        if sturm_count_seq(seq, a, m) == 1:
            b = m
        else:
            a = m
    return a, b


# -- arithmetic mod p --------------------------------------------------------

def to_mod(f, p):
    return trim([int(c) % p for c in f])


def mod_trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def mod_mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return mod_trim(out)


def mod_rem(f, g, p):
    f = list(f)
    g = mod_trim(list(g))
    inv = pow(g[-1], -1, p)
    while len(f) >= len(g) and f:
        c = f[-1] * inv % p
        s = len(f) - len(g)
        for i, b in enumerate(g):
            f[s + i] = (f[s + i] - c * b) % p
        mod_trim(f)
    return f


def mod_gcd(f, g, p):
    f, g = mod_trim(list(f)), mod_trim(list(g))
    while g:
        f, g = g, mod_rem(f, g, p)
    if f:
        inv = pow(f[-1], -1, p)
        f = [c * inv % p for c in f]
    return f


def mod_powmod(base, e, modulus, p):
    result = [1]
    base = mod_rem(base, modulus, p)
    while e:
        if e & 1:
            result = mod_rem(mod_mul(result, base, p), modulus, p)
        base = mod_rem(mod_mul(base, base, p), modulus, p)
        e >>= 1
    return result


def distinct_degree_pattern(f, p):
    """Degrees of the irreducible factors of a squarefree monic f mod p.

    Returns None when f is not squarefree mod p (the pattern is then useless
    for irreducibility arguments).
    """
    f = to_mod(f, p)
    if len(f) < 2 or f[-1] == 0:
        return None
    inv = pow(f[-1], -1, p)
    f = [c * inv % p for c in f]
    if len(mod_gcd(f, to_mod(derivative(f), p), p)) > 1:
        return None
    pattern = []
    x = [0, 1]
    h = x
    i = 0
    while len(f) - 1 >= 2 * (i + 1):
        i += 1
        h = mod_powmod(h, p, f, p)
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        g = mod_gcd(f, mod_trim(diff), p)
        k = len(g) - 1
        if k > 0:
            pattern.extend([i] * (k // i))
            # f <- f / g
            q, r = _mod_divmod(f, g, p)
            f = q
            h = mod_rem(h, f, p) if len(f) > 1 else [0]
    if len(f) > 1:
        pattern.append(len(f) - 1)
    return sorted(pattern)


def _mod_divmod(f, g, p):
    f = list(f)
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - len(g) + 1, 0)
    while len(f) >= len(g) and f:
        c = f[-1] * inv % p
        s = len(f) - len(g)
        q[s] = c
        for i, b in enumerate(g):
            f[s + i] = (f[s + i] - c * b) % p
        mod_trim(f)
    return mod_trim(q), f


def roots_mod_p(f, p):
    f = to_mod(f, p)
    return [x for x in range(p) if evaluate(f, x) % p == 0]


def subset_sums(degrees):
    sums = {0}
    for d in degrees:
        sums |= {s + d for s in sums}
    return sums


def fmt(f, var="x"):
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and c == 1:
            s = mono
        elif mono and c == -1:
            s = "-" + mono
        else:
            s = f"{c}{'*' + mono if mono else ''}"
        terms.append(s)
    return " + ".join(terms).replace("+ -", "- ") or "0"
