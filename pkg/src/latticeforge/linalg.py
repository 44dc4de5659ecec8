"""Exact dense linear algebra over any field whose elements support + - * /.

Matrices are lists of rows.  Entries may be Fractions, FieldElements,
QuadExtElements or quaternions; zero tests use ``x == 0``.
"""

from fractions import Fraction


def zeros(n, m, zero=Fraction(0)):
    return [[zero for _ in range(m)] for _ in range(n)]


def identity(n, one=Fraction(1), zero=Fraction(0)):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def transpose(a):
    return [list(r) for r in zip(*a)]


def matmul(a, b):
    bt = transpose(b)
    out = []
    for row in a:
        out_row = []
        for col in bt:
            acc = row[0] * col[0]
            for x, y in zip(row[1:], col[1:]):
                acc = acc + x * y
            out_row.append(acc)
        out.append(out_row)
    return out


def matvec(a, v):
    out = []
    for row in a:
        acc = row[0] * v[0]
        for x, y in zip(row[1:], v[1:]):
            acc = acc + x * y
        out.append(acc)
    return out


def matpow(a, k, one=1, zero=0):
    n = len(a)
    result = identity(n, one, zero)
    base = a
    while k:
        if k & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        k >>= 1
    return result


def congruent(u, g):
    """u^T g u."""
    return matmul(matmul(transpose(u), g), u)


def bilinear(g, x, y):
    gy = matvec(g, y)
    acc = x[0] * gy[0]
    for a, b in zip(x[1:], gy[1:]):
        acc = acc + a * b
    return acc


def is_zero_matrix(a):
    return all(x == 0 for row in a for x in row)


def mat_equal(a, b):
    return len(a) == len(b) and all(
        len(r) == len(s) and all(x == y for x, y in zip(r, s)) for r, s in zip(a, b))


def det(a):
    """Determinant by fraction-producing Gaussian elimination."""
    n = len(a)
    if n == 0:
        return Fraction(1)
    m = [list(r) for r in a]
    result = None
    sgn = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if not m[r][c] == 0), None)
        if piv is None:
            return m[0][0] * 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sgn = -sgn
        p = m[c][c]
        result = p if result is None else result * p
        for r in range(c + 1, n):
            if m[r][c] == 0:
                continue
            f = m[r][c] / p
            m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return result if sgn == 1 else -result


def rref(a):
    """Reduced row echelon form and pivot columns."""
    m = [list(r) for r in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if not m[i][c] == 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(rows):
            if i != r and not m[i][c] == 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a):
    if not a:
        return 0
    return len(rref(a)[1])


def nullspace(a, one=Fraction(1), zero=Fraction(0)):
    """Basis (list of vectors) of {x : a x = 0}."""
    cols = len(a[0])
    m, pivots = rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * cols
        v[f] = one
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][f]
        basis.append(v)
    return basis


def inverse(a):
    n = len(a)
    one = a[0][0] * 0 + 1 if n else Fraction(1)
    zero = one * 0
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(a)]
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in m]


def solve(a, b):
    """One solution x of a x = b, or None when inconsistent."""
    n = len(a[0])
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    m, pivots = rref(aug)
    if n in pivots:
        return None
    zero = b[0] * 0
    x = [zero] * n
    for i, pc in enumerate(pivots):
        x[pc] = m[i][n]
    return x


def columns(a):
    return transpose(a)


def from_columns(cols):
    return transpose(cols)


def in_span(vectors, v):
    if not vectors:
        return all(x == 0 for x in v)
    return solve(from_columns(vectors), v) is not None


def charpoly(a):
    """Characteristic polynomial det(x I - a), lowest degree first (Faddeev-LeVerrier)."""
    n = len(a)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = zeros(n, n)
    for k in range(1, n + 1):
        m = matmul(a, m)
        for i in range(n):
            m[i][i] = m[i][i] + coeffs[n - k + 1]
        am = matmul(a, m)
        tr = am[0][0]
        for i in range(1, n):
            tr = tr + am[i][i]
        coeffs[n - k] = -tr / k if not isinstance(tr, int) else Fraction(-tr, k)
    return coeffs
