"""Univariate polynomials over an abstract finite field.

A field object must expose ``zero``, ``one``, ``order``, ``char``,
``random(rng)`` and ``from_int(k)``; its elements support ``+ - *``,
unary minus, ``inv()``, ``is_zero()`` and ``==``.  Polynomials are lists of
elements, lowest degree first, with no trailing zeros (``[]`` is zero).
"""

from __future__ import annotations

import random


def trim(a):
    a = list(a)
    while a and a[-1].is_zero():
        a.pop()
    return a


def deg(a) -> int:
    return len(a) - 1


def add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return trim(out)


def neg(a):
    return [-c for c in a]


def sub(a, b):
    return add(a, neg(b))


def scale(a, c):
    if c.is_zero():
        return []
    return trim([x * c for x in a])


def mul(a, b):
    if not a or not b:
        return []
    zero = a[0] - a[0]
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return trim(out)


def divmod_(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    lead_inv = b[-1].inv()
    db = len(b) - 1
    if len(a) <= db:
        return [], trim(a)
    q = [b[0] - b[0]] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c.is_zero():
            continue
        c = c * lead_inv
        q[i - db] = c
        for j in range(db + 1):
            a[i - db + j] = a[i - db + j] - c * b[j]
    return trim(q), trim(a[:db])


def mod(a, b):
    return divmod_(a, b)[1]


def monic(a):
    if not a:
        return []
    return scale(a, a[-1].inv())


def gcd(a, b):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, mod(a, b)
    return monic(a)


def derivative(a, field):
    return trim([a[i] * field.from_int(i) for i in range(1, len(a))])


def evaluate(a, x, field):
    acc = field.zero
    for c in reversed(a):
        acc = acc * x + c
    return acc


def powmod(a, e: int, m):
    result = [m[-1] * m[-1].inv()]
    base = mod(a, m)
    while e:
        if e & 1:
            result = mod(mul(result, base), m)
        e >>= 1
        if e:
            base = mod(mul(base, base), m)
    return result


def x_poly(field):
    return [field.zero, field.one]


def _pth_root_coeff(c, field):
    # Frobenius is bijective on a finite field; the inverse is c ** (order / p)
    return c ** (field.order // field.char)


def squarefree_decomposition(a, field):
    """Return [(g, e)] with a = lead * prod g**e, g squarefree and coprime."""
    a = monic(a)
    if len(a) <= 1:
        return []
    p = field.char
    out = []
    da = derivative(a, field)
    if not da:
        root = [_pth_root_coeff(a[i], field) for i in range(0, len(a), p)]
        return [(g, e * p) for g, e in squarefree_decomposition(root, field)]
    c = gcd(a, da)
    w = divmod_(a, c)[0]
    i = 1
    while len(w) > 1:
        y = gcd(w, c)
        z = divmod_(w, y)[0]
        if len(z) > 1:
            out.append((z, i))
        i += 1
        w = y
        c = divmod_(c, y)[0]
    if len(c) > 1:
        root = [_pth_root_coeff(c[k], field) for k in range(0, len(c), p)]
        out.extend((g, e * p) for g, e in squarefree_decomposition(root, field))
    return out


def distinct_degree(a, field):
    """Split a squarefree monic polynomial into [(product of degree-d factors, d)]."""
    out = []
    q = field.order
    x = x_poly(field)
    h = x
    f = monic(a)
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = powmod(h, q, f)
        g = gcd(f, sub(h, x))
        if len(g) > 1:
            out.append((g, d))
            f = divmod_(f, g)[0]
            h = mod(h, f)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def equal_degree(a, d: int, field, rng: random.Random):
    """Cantor-Zassenhaus splitting of a product of degree-d irreducibles (odd q)."""
    f = monic(a)
    if len(f) - 1 == d:
        return [f]
    q = field.order
    e = (q ** d - 1) // 2
    while True:
        r = trim([field.random(rng) for _ in range(len(f) - 1)])
        if len(r) <= 1:
            continue
        g = gcd(f, r)
        if 1 < len(g) < len(f):
            break
        s = powmod(r, e, f)
        g = gcd(f, sub(s, [field.one]))
        if 1 < len(g) < len(f):
            break
    return (equal_degree(g, d, field, rng)
            + equal_degree(divmod_(f, g)[0], d, field, rng))


def factor(a, field, seed: int = 0):
    """Factor into monic irreducibles; returns sorted [(factor, multiplicity)]."""
    rng = random.Random(seed)
    out = []
    for g, e in squarefree_decomposition(a, field):
        for part, d in distinct_degree(g, field):
            for irr in equal_degree(part, d, field, rng):
                out.append((irr, e))
    out.sort(key=lambda fe: (len(fe[0]), [repr(c) for c in fe[0]], fe[1]))
    return out


def roots(a, field, seed: int = 0):
    """Distinct roots of a in the field."""
    a = monic(a)
    if len(a) <= 1:
        return []
    x = x_poly(field)
    g = gcd(a, sub(powmod(x, field.order, a), x))
    if len(g) <= 1:
        return []
    lin = equal_degree(g, 1, field, random.Random(seed))
    return sorted((-f[0] for f in lin), key=repr)


# --- polynomials with polynomial coefficients (bivariate helpers) -----------

def det_bareiss(mat, field):
    """Determinant of a square matrix with entries in field[x] (fraction free)."""
    m = [list(row) for row in mat]
    size = len(m)
    if size == 0:
        return [field.one]
    sign = 1
    prev = [field.one]
    for k in range(size - 1):
        if not m[k][k]:
            swap = next((r for r in range(k + 1, size) if m[r][k]), None)
            if swap is None:
                return []
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                num = sub(mul(m[i][j], m[k][k]), mul(m[i][k], m[k][j]))
                q, r = divmod_(num, prev)
                assert not r, "Bareiss division must be exact"
                m[i][j] = q
        prev = m[k][k]
    d = m[size - 1][size - 1]
    return neg(d) if sign < 0 else d


def resultant_y(f, g, field):
    """Res_y(f, g) where f, g are lists (by y-degree) of polynomials in x."""
    f = _trim_outer(f)
    g = _trim_outer(g)
    m, n = len(f) - 1, len(g) - 1
    if m < 0 or n < 0:
        return []
    if m == 0 and n == 0:
        return [field.one]
    size = m + n
    rows = []
    for i in range(n):
        row = [[] for _ in range(size)]
        for k, c in enumerate(reversed(f)):
            row[i + k] = c
        rows.append(row)
    for i in range(m):
        row = [[] for _ in range(size)]
        for k, c in enumerate(reversed(g)):
            row[i + k] = c
        rows.append(row)
    return det_bareiss(rows, field)


def _trim_outer(f):
    f = list(f)
    while f and not f[-1]:
        f.pop()
    return f
