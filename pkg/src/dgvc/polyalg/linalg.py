"""Dense exact linear algebra over Q on lists of lists of Fractions."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

Matrix = list[list[Fraction]]


def zeros(r: int, c: int) -> Matrix:
    return [[Fraction(0)] * c for _ in range(r)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def matmul(a: Matrix, b: Matrix, zero=None) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = zeros(len(a), cols) if zero is None else [[zero] * cols for _ in a]
    for i, row in enumerate(a):
        orow = out[i]
        for k in range(inner):
            aik = row[k]
            if aik:
                brow = b[k]
                for j in range(cols):
                    if brow[j]:
                        orow[j] += aik * brow[j]
    return out


def matvec(a: Matrix, v: list[Fraction]) -> list[Fraction]:
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in a]


def transpose(a: Matrix, ncols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def sub_scalar(a: Matrix, s) -> Matrix:
    out = [list(r) for r in a]
    for i in range(len(out)):
        out[i][i] -= s
    return out


def rref(a: Matrix, ncols: int | None = None) -> tuple[Matrix, list[int]]:
    m = [list(r) for r in a]
    rows = len(m)
    cols = len(m[0]) if m else (ncols or 0)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        prow = m[r]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], prow)]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Matrix) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def nullspace(a: Matrix, ncols: int) -> list[list[Fraction]]:
    """Basis of {v : a v = 0} as a list of column vectors."""
    if not a:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    r, piv = rref(a, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -r[i][f]
        basis.append(v)
    return basis


def nullspace_int(a: list[list[int]], ncols: int) -> list[list[Fraction]]:
    """Same basis as :func:`nullspace` for an integer matrix, by fraction-free elimination."""
    if not a:
        return nullspace(a, ncols)
    m = [list(r) for r in a if any(r)]
    rows = len(m)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r >= rows:
            break
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        prow = m[r]
        p = prow[c]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                row = [p * x - f * y for x, y in zip(m[i], prow)]
                g = 0
                for x in row:
                    g = gcd(g, x)
                m[i] = [x // g for x in row] if g > 1 else row
        pivots.append(c)
        r += 1
    basis = []
    for f in (c for c in range(ncols) if c not in pivots):
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = Fraction(-m[i][f], m[i][pc])
        basis.append(v)
    return basis


def column_space_basis(vectors: list[list[Fraction]], dim: int) -> list[list[Fraction]]:
    """Row-reduced basis of the span of ``vectors`` (each of length ``dim``)."""
    if not vectors:
        return []
    r, piv = rref([list(v) for v in vectors], dim)
    return [r[i] for i in range(len(piv))]


def solve_in_basis(basis_cols: list[list[Fraction]], v: list[Fraction]) -> list[Fraction]:
    """Coordinates of ``v`` in the (independent) columns ``basis_cols``."""
    k = len(basis_cols)
    n = len(v)
    aug = [[basis_cols[j][i] for j in range(k)] + [v[i]] for i in range(n)]
    r, piv = rref(aug, k + 1)
    if k in piv:
        raise ValueError("vector not in span")
    coords = [Fraction(0)] * k
    for i, p in enumerate(piv):
        coords[p] = r[i][k]
    return coords


def restrict(op: Matrix, basis_cols: list[list[Fraction]]) -> Matrix:
    """Matrix of ``op`` on an invariant subspace spanned by ``basis_cols``."""
    k = len(basis_cols)
    out = zeros(k, k)
    for j, b in enumerate(basis_cols):
        img = matvec(op, b)
        c = solve_in_basis(basis_cols, img)
        for i in range(k):
            out[i][j] = c[i]
    return out


def matpow(a: Matrix, k: int, one=None) -> Matrix:
    """a^k by squaring; pass ``one=1`` to stay in plain integers."""
    n = len(a)
    r = identity(n) if one is None else [[one if i == j else 0 for j in range(n)] for i in range(n)]
    b = a
    while k:
        if k & 1:
            r = matmul(r, b, zero=0 if one is not None else None)
        k >>= 1
        if k:
            b = matmul(b, b, zero=0 if one is not None else None)
    return r


def charpoly(a: Matrix) -> list[Fraction]:
    """Coefficients c_0..c_n of det(t I - a) (Faddeev-LeVerrier)."""
    n = len(a)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = zeros(n, n)
    for k in range(1, n + 1):
        m = matmul(a, m)
        for i in range(n):
            m[i][i] += coeffs[n - k + 1]
        am = matmul(a, m)
        tr = sum(am[i][i] for i in range(n))
        coeffs[n - k] = -tr / k
    return coeffs


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def poly_eval(coeffs: list[Fraction], x: Fraction) -> Fraction:
    v = Fraction(0)
    for c in reversed(coeffs):
        v = v * x + c
    return v


def rational_roots(coeffs: list[Fraction]) -> list[Fraction]:
    """Distinct rational roots of sum c_i t^i, sorted ascending."""
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    if len(cs) <= 1:
        return []
    roots = set()
    while cs and cs[0] == 0:
        roots.add(Fraction(0))
        cs.pop(0)
    if len(cs) <= 1:
        return sorted(roots)
    den = 1
    for c in cs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in cs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    ints = [v // g for v in ints]
    for p in _divisors(ints[0]):
        for q in _divisors(ints[-1]):
            for s in (p, -p):
                x = Fraction(s, q)
                if x not in roots and poly_eval(cs, x) == 0:
                    roots.add(x)
    return sorted(roots)
