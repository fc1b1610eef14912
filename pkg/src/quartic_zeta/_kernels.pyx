# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops in ``_kernels_py``.

Coefficients are Python ints (they exceed 64 bits at every useful
precision), so the gain comes from typed loop indices, local list access
and skipping the interpreter's dispatch, not from machine arithmetic.
"""


cpdef object zq_mul(object a, object b, int n, object M, object mod):
    cdef int i, j
    cdef list prod
    if n == 1:
        return a * b % mod
    prod = [0] * (2 * n - 1)
    for i in range(n):
        x = a[i]
        if x:
            for j in range(n):
                prod[i + j] += x * b[j]
    return fold_lanes(prod, n, M, mod)


cpdef tuple fold_lanes(list prod, int n, object M, object mod):
    cdef int d, t, base
    for d in range(len(prod) - 1, n - 1, -1):
        c = prod[d]
        if c:
            base = d - n
            for t in range(n):
                if M[t]:
                    prod[base + t] -= c * M[t]
    return tuple([prod[t] % mod for t in range(n)])


def unpack_slots(bytes buf, int w, Py_ssize_t count):
    cdef Py_ssize_t k
    cdef list out = [None] * count
    frm = int.from_bytes
    mv = memoryview(buf)
    for k in range(count):
        out[k] = frm(mv[k * w:(k + 1) * w], "little")
    return out


def gather_rows(object vals, int rows, Py_ssize_t L, int n, object M, object mod):
    cdef int i, span, stride
    cdef Py_ssize_t j, base
    cdef list out = []
    cdef list row
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


def fold_y(list cols, object g, object h, Py_ssize_t cut, object mod, int n, object M):
    cdef int i, d, ng = len(g), nh = len(h)
    cdef Py_ssize_t j, length
    cdef list src, lo2, lo4
    for i in (6, 5, 4):
        src = cols[i]
        lo2 = cols[i - 2]
        lo4 = cols[i - 4]
        length = len(src)
        for j in range(length):
            c = src[j]
            if n == 1:
                if not c:
                    continue
                for d in range(ng):
                    if j + d < cut and g[d]:
                        lo2[j + d] = (lo2[j + d] - g[d] * c) % mod
                for d in range(nh):
                    if j + d < cut and h[d]:
                        lo4[j + d] = (lo4[j + d] - h[d] * c) % mod
            else:
                if not any(c):
                    continue
                for d in range(ng):
                    if j + d < cut and any(g[d]):
                        t = zq_mul(g[d], c, n, M, mod)
                        lo2[j + d] = tuple([(x - y) % mod for x, y in zip(lo2[j + d], t)])
                for d in range(nh):
                    if j + d < cut and any(h[d]):
                        t = zq_mul(h[d], c, n, M, mod)
                        lo4[j + d] = tuple([(x - y) % mod for x, y in zip(lo4[j + d], t)])
        cols[i] = []
    return cols[:4]


def sweep(list W, list table, object rows, object p, object mod, int n, object M):
    """Same contract as ``_kernels_py.sweep``."""
    cdef Py_ssize_t L = len(W[1]), j, j2
    cdef int i, i2, v, vmax = 0
    cdef long steps = 0
    cdef list row, trow
    cdef tuple rule, term
    zero = 0 if n == 1 else (0,) * n
    for j in range(L - 1, -1, -1):
        for i in rows:
            trow = table[i]
            rule = trow[j]
            if rule is None:
                continue
            row = W[i]
            c = row[j]
            if n == 1:
                if not c:
                    continue
            elif not any(c):
                continue
            v = rule[0]
            uinv = rule[1]
            terms = rule[2]
            if v:
                pv = p ** v
                if n == 1:
                    if c % pv:
                        raise ArithmeticError("precision exhausted")
                    c = c // pv
                else:
                    if any([x % pv for x in c]):
                        raise ArithmeticError("precision exhausted")
                    c = tuple([x // pv for x in c])
                if v > vmax:
                    vmax = v
            if n == 1:
                t = c * uinv % mod
                for term in terms:
                    i2 = term[0]
                    j2 = term[1]
                    row = W[i2]
                    row[j2] = (row[j2] - t * term[2]) % mod
            else:
                t = zq_mul(c, uinv, n, M, mod)
                for term in terms:
                    i2 = term[0]
                    j2 = term[1]
                    row = W[i2]
                    s = zq_mul(t, term[2], n, M, mod)
                    row[j2] = tuple([(x - y) % mod for x, y in zip(row[j2], s)])
            W[i][j] = zero
            steps += 1
    return steps, vmax
