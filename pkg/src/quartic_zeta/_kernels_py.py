"""Pure-Python versions of the hot loops.

``_kernels.pyx`` implements the same functions; :mod:`quartic_zeta.kernels`
picks whichever is available.  Z_q values are ints when n == 1 and tuples of
n ints otherwise; ``M`` is the (monic, low-first) modulus of Z_q over Z_p.
"""


def zq_mul(a, b, n, M, mod):
    if n == 1:
        return a * b % mod
    prod = [0] * (2 * n - 1)
    for i in range(n):
        x = a[i]
        if x:
            for j in range(n):
                prod[i + j] += x * b[j]
    return fold_lanes(prod, n, M, mod)


def fold_lanes(prod, n, M, mod):
    for d in range(len(prod) - 1, n - 1, -1):
        c = prod[d]
        if c:
            base = d - n
            for t in range(n):
                if M[t]:
                    prod[base + t] -= c * M[t]
    return tuple(prod[t] % mod for t in range(n))


def unpack_slots(buf, w, count):
    """Split a little-endian byte string into ``count`` unsigned w-byte ints."""
    frm = int.from_bytes
    mv = memoryview(buf)
    return [frm(mv[k:k + w], "little") for k in range(0, count * w, w)]


def gather_rows(vals, rows, L, n, M, mod):
    """Slot values (index (j*rows + i)*(2n-1) + t) -> rows x L frame values."""
    out = []
    if n == 1:
        for i in range(rows):
            out.append([v % mod for v in vals[i:L * rows:rows]])
        return out
    span = 2 * n - 1
    stride = rows * span
    for i in range(rows):
        row = []
        for j in range(L):
            base = j * stride + i * span
            row.append(fold_lanes(list(vals[base:base + span]), n, M, mod))
        out.append(row)
    return out


def fold_y(cols, g, h, cut, mod, n, M):
    """Reduce rows y^6, y^5, y^4 with y^4 = -(g y^2 + h); truncate x at ``cut``."""
    for i in (6, 5, 4):
        src = cols[i]
        lo2 = cols[i - 2]
        lo4 = cols[i - 4]
        for j in range(len(src)):
            c = src[j]
            if n == 1:
                if not c:
                    continue
                for d in range(len(g)):
                    if j + d < cut and g[d]:
                        lo2[j + d] = (lo2[j + d] - g[d] * c) % mod
                for d in range(len(h)):
                    if j + d < cut and h[d]:
                        lo4[j + d] = (lo4[j + d] - h[d] * c) % mod
            else:
                if not any(c):
                    continue
                for d in range(len(g)):
                    if j + d < cut and any(g[d]):
                        t = zq_mul(g[d], c, n, M, mod)
                        lo2[j + d] = tuple((x - y) % mod for x, y in zip(lo2[j + d], t))
                for d in range(len(h)):
                    if j + d < cut and any(h[d]):
                        t = zq_mul(h[d], c, n, M, mod)
                        lo4[j + d] = tuple((x - y) % mod for x, y in zip(lo4[j + d], t))
        cols[i] = []
    return cols[:4]


def sweep(W, table, rows, p, mod, n, M):
    """Eliminate every non-basis monomial of a dx-form, highest x-degree first.

    ``table[i][j]`` is None at basis positions, else ``(v, uinv, terms)``: the
    pivot at x^j y^i is p**v * unit with unit inverse ``uinv`` and ``terms``
    lists ``(i2, j2, coef)`` for the remaining monomials of the relation.
    W holds values scaled by a fixed power of p.  Returns (eliminations, max v).
    """
    steps = 0
    vmax = 0
    L = len(W[1])
    for j in range(L - 1, -1, -1):
        for i in rows:
            rule = table[i][j]
            if rule is None:
                continue
            c = W[i][j]
            if n == 1:
                if not c:
                    continue
            elif not any(c):
                continue
            v, uinv, terms = rule
            if v:
                pv = p ** v
                if n == 1:
                    if c % pv:
                        raise ArithmeticError("precision exhausted")
                    c = c // pv
                else:
                    if any(x % pv for x in c):
                        raise ArithmeticError("precision exhausted")
                    c = tuple(x // pv for x in c)
                if v > vmax:
                    vmax = v
            t = zq_mul(c, uinv, n, M, mod)
            for i2, j2, coef in terms:
                row = W[i2]
                if n == 1:
                    row[j2] = (row[j2] - t * coef) % mod
                else:
                    s = zq_mul(t, coef, n, M, mod)
                    row[j2] = tuple((x - y) % mod for x, y in zip(row[j2], s))
            W[i][j] = 0 if n == 1 else (0,) * n
            steps += 1
    return steps, vmax
