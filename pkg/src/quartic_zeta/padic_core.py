"""Finite fields F_q, the truncated unramified ring Z_q / p^N, Teichmuller
lifts, the Frobenius automorphism sigma and the precision schedule.

Two representations of Z_q elements live here.

* Frame values: an ``int`` when n = 1, otherwise a tuple of n ints giving the
  coefficients of a polynomial in the generator T, reduced modulo M and a
  caller-chosen modulus p^R.  These are what the hot loops use.
* :class:`ZqScaled`: a capped-relative value ``p**val * unit`` with the unit
  known to relative precision N.  Used wherever valuations must be audited.
"""

from __future__ import annotations

import math
import random
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from . import _polyfield as pf

INF = 1 << 40  # valuation of an exact zero


class PrecisionError(ArithmeticError):
    """Raised when a value is indistinguishable from zero at the working precision."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def vp_int(x: int, p: int) -> int:
    if x == 0:
        return INF
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


# --- F_p[t] helpers on plain int lists ----------------------------------------

def _fp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a: list[int], m: Sequence[int], p: int) -> list[int]:
    a = [c % p for c in a]
    dm = len(m) - 1
    inv = pow(m[-1], -1, p)
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] * inv % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _fp_trim(a[:dm])


def _fp_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _fp_trim([c % p for c in out])


def _fp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _fp_trim(list(a)), _fp_trim(list(b))
    while b:
        a, b = b, _fp_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _fp_powmod(a: list[int], e: int, m: Sequence[int], p: int) -> list[int]:
    result, base = [1], _fp_mod(list(a), m, p)
    while e:
        if e & 1:
            result = _fp_mod(_fp_mul(result, base, p), m, p)
        e >>= 1
        if e:
            base = _fp_mod(_fp_mul(base, base, p), m, p)
    return result


def _prime_factors(k: int) -> list[int]:
    out, f = [], 2
    while f * f <= k:
        if k % f == 0:
            out.append(f)
            while k % f == 0:
                k //= f
        f += 1
    if k > 1:
        out.append(k)
    return out


def is_irreducible_fp(m: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p (coefficients low first)."""
    n = len(m) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    if _fp_trim([c % p for c in _fp_powmod(x, p ** n, m, p)]) != [0, 1]:
        return False
    for r in _prime_factors(n):
        h = _fp_powmod(x, p ** (n // r), m, p)
        h = h + [0] * max(0, 2 - len(h))
        h[1] = (h[1] - 1) % p
        if len(_fp_gcd(m, _fp_trim(h), p)) > 1:
            return False
    return True


def find_modulus(p: int, n: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree n, counting base-p digits of c0..c_{n-1}."""
    for k in range(p ** n):
        coeffs, r = [], k
        for _ in range(n):
            coeffs.append(r % p)
            r //= p
        m = tuple(coeffs) + (1,)
        if is_irreducible_fp(m, p):
            return m
    raise ValueError(f"no irreducible polynomial of degree {n} over F_{p}")


# --- contexts ------------------------------------------------------------------

class FieldContext:
    """F_q = F_p[t]/(m) together with Z_q = Z_p[T]/(M), M the canonical lift of m.

    Acts as a field object for :mod:`quartic_zeta._polyfield` and carries the
    frame arithmetic for Z_q.
    """

    def __init__(self, p: int, n: int, m: Sequence[int]):
        self.p = p
        self.n = n
        self.m = tuple(int(c) % p for c in m)
        self.M = self.m
        self.q = p ** n
        self.order = self.q
        self.char = p
        self._lock = threading.Lock()
        self._sigma_cache: tuple[int, object] | None = None
        self.zero = FqElement(self, (0,) * n)
        self.one = FqElement(self, (1,) + (0,) * (n - 1))

    def __repr__(self) -> str:
        return f"FieldContext(p={self.p}, n={self.n}, m={self.m})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldContext) and (self.p, self.m) == (other.p, other.m)

    def __hash__(self) -> int:
        return hash((self.p, self.m))

    # field protocol
    def element(self, coeffs) -> "FqElement":
        if isinstance(coeffs, int):
            coeffs = [coeffs]
        coeffs = [int(c) % self.p for c in coeffs]
        if len(coeffs) > self.n:
            coeffs = _fp_mod(coeffs, self.m, self.p)
        coeffs = coeffs + [0] * (self.n - len(coeffs))
        return FqElement(self, tuple(coeffs))

    def from_int(self, k: int) -> "FqElement":
        return self.element([k])

    def gen(self) -> "FqElement":
        if self.n == 1:
            return self.element([(-self.m[0]) % self.p])
        return self.element([0, 1])

    def random(self, rng: random.Random) -> "FqElement":
        return FqElement(self, tuple(rng.randrange(self.p) for _ in range(self.n)))

    def elements(self) -> Iterator["FqElement"]:
        for k in range(self.q):
            coeffs, r = [], k
            for _ in range(self.n):
                coeffs.append(r % self.p)
                r //= self.p
            yield FqElement(self, tuple(coeffs))

    # frame arithmetic on Z_q (ints when n == 1, tuples otherwise)
    def zfrom_int(self, k: int, mod: int):
        if self.n == 1:
            return k % mod
        return (k % mod,) + (0,) * (self.n - 1)

    def zzero(self):
        return 0 if self.n == 1 else (0,) * self.n

    def zadd(self, a, b, mod: int):
        if self.n == 1:
            return (a + b) % mod
        return tuple((x + y) % mod for x, y in zip(a, b))

    def zsub(self, a, b, mod: int):
        if self.n == 1:
            return (a - b) % mod
        return tuple((x - y) % mod for x, y in zip(a, b))

    def zneg(self, a, mod: int):
        if self.n == 1:
            return (-a) % mod
        return tuple((-x) % mod for x in a)

    def zscal(self, a, k: int, mod: int):
        if self.n == 1:
            return a * k % mod
        return tuple(x * k % mod for x in a)

    def zreduce(self, a, mod: int):
        if self.n == 1:
            return a % mod
        return tuple(x % mod for x in a)

    def zmul(self, a, b, mod: int):
        if self.n == 1:
            return a * b % mod
        n = self.n
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return self.zfold(prod, mod)

    def zfold(self, prod: list[int], mod: int):
        """Reduce a coefficient list of length <= 2n-1 modulo M and mod."""
        n, M = self.n, self.M
        for d in range(len(prod) - 1, n - 1, -1):
            c = prod[d]
            if c:
                base = d - n
                for t in range(n):
                    if M[t]:
                        prod[base + t] -= c * M[t]
        return tuple(prod[t] % mod for t in range(n))

    def zval(self, a) -> int:
        if self.n == 1:
            return vp_int(a, self.p)
        return min(vp_int(x, self.p) for x in a)

    def zis_zero(self, a) -> bool:
        return a == 0 if self.n == 1 else not any(a)

    def zdivp(self, a, k: int):
        """Exact division by p**k."""
        if k == 0:
            return a
        pk = self.p ** k
        if self.n == 1:
            return a // pk
        return tuple(x // pk for x in a)

    def zmulp(self, a, k: int, mod: int):
        return self.zscal(a, self.p ** k, mod)

    def zpow(self, a, e: int, mod: int):
        if self.n == 1:
            return pow(a, e, mod)
        result, base = self.zfrom_int(1, mod), a
        while e:
            if e & 1:
                result = self.zmul(result, base, mod)
            e >>= 1
            if e:
                base = self.zmul(base, base, mod)
        return result

    def zinv(self, a, N: int):
        """Inverse of a p-adic unit modulo p**N."""
        mod = self.p ** N
        if self.n == 1:
            return pow(a, -1, mod)
        x = self.zlift(self.zred(a).inv())
        prec = 1
        while prec < N:
            prec = min(2 * prec, N)
            m2 = self.p ** prec
            ax = self.zmul(a, x, m2)
            two_minus = self.zsub(self.zfrom_int(2, m2), ax, m2)
            x = self.zmul(x, two_minus, m2)
        return self.zreduce(x, mod)

    def zlift(self, a: "FqElement"):
        """Canonical lift with coefficients in {0..p-1}."""
        return a.c[0] if self.n == 1 else a.c

    def zred(self, a) -> "FqElement":
        if self.n == 1:
            return FqElement(self, (a % self.p,))
        return FqElement(self, tuple(x % self.p for x in a))

    def zcoeffs(self, a) -> tuple[int, ...]:
        return (a,) if self.n == 1 else tuple(a)

    def zfrom_coeffs(self, coeffs: Sequence[int], mod: int):
        if self.n == 1:
            return coeffs[0] % mod
        return tuple(c % mod for c in coeffs)

    # sigma on frame values
    def sigma_T(self, N: int):
        """sigma(T) mod p**N: the root of M congruent to T**p, by Newton."""
        with self._lock:
            cached = self._sigma_cache
            if cached is not None and cached[0] >= N:
                return self.zreduce(cached[1], self.p ** N)
            s = self._sigma_newton(max(N, 8))
            self._sigma_cache = (max(N, 8), s)
            return self.zreduce(s, self.p ** N)

    def _sigma_newton(self, N: int):
        p = self.p
        if self.n == 1:
            return 0
        T = tuple([0, 1] + [0] * (self.n - 2))
        s = self.zpow(T, p, p)
        M = self.M
        prec = 1
        while prec < N:
            prec = min(2 * prec, N)
            mod = p ** prec
            val = self.zfrom_int(0, mod)
            der = self.zfrom_int(0, mod)
            for c in reversed(M):  # Horner for M(s) and M'(s)
                der = self.zadd(self.zmul(der, s, mod), val, mod)
                val = self.zadd(self.zmul(val, s, mod), self.zfrom_int(c, mod), mod)
            step = self.zmul(val, self.zinv(der, prec), mod)
            s = self.zsub(s, step, mod)
        return s

    def zsigma(self, a, mod: int, power: int = 1):
        if self.n == 1 or power % self.n == 0:
            return self.zreduce(a, mod)
        N = vp_int(mod, self.p)
        for _ in range(power % self.n):
            sT = self.sigma_T(N)
            acc = self.zfrom_int(0, mod)
            for c in reversed(a):
                acc = self.zadd(self.zmul(acc, sT, mod), self.zfrom_int(c, mod), mod)
            a = acc
        return a


def build_context(p: int, n: int = 1, m: Sequence[int] | None = None) -> FieldContext:
    """Context for F_{p^n}; ``m`` is a monic modulus given low degree first."""
    if p == 2:
        raise ValueError("characteristic 2 unsupported")
    if not is_prime(p):
        raise ValueError(f"{p} is not a prime")
    if n < 1:
        raise ValueError("extension degree must be >= 1")
    if m is None:
        m = find_modulus(p, n)
    m = [int(c) % p for c in m]
    if len(m) != n + 1 or m[-1] != 1:
        raise ValueError(f"modulus must be monic of degree {n}")
    if not is_irreducible_fp(m, p):
        raise ValueError("modulus is reducible over F_p")
    return FieldContext(p, n, m)


class FqElement:
    """Element of F_q as a coefficient tuple in the generator t."""

    __slots__ = ("ctx", "c")

    def __init__(self, ctx: FieldContext, c: tuple[int, ...]):
        self.ctx = ctx
        self.c = c

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.c

    def _coerce(self, other) -> "FqElement":
        if isinstance(other, FqElement):
            return other
        if isinstance(other, int):
            return self.ctx.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        p = self.ctx.p
        return FqElement(self.ctx, tuple((x + y) % p for x, y in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        p = self.ctx.p
        return FqElement(self.ctx, tuple((-x) % p for x in self.c))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        ctx = self.ctx
        if ctx.n == 1:
            return FqElement(ctx, (self.c[0] * o.c[0] % ctx.p,))
        prod = _fp_mul(self.c, o.c, ctx.p)
        red = _fp_mod(prod, ctx.m, ctx.p)
        return FqElement(ctx, tuple(red + [0] * (ctx.n - len(red))))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        result, base = self.ctx.one, self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def inv(self) -> "FqElement":
        if self.is_zero():
            raise ZeroDivisionError("inversion of zero in F_q")
        ctx = self.ctx
        if ctx.n == 1:
            return FqElement(ctx, (pow(self.c[0], -1, ctx.p),))
        return self ** (ctx.q - 2)

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def frobenius(self) -> "FqElement":
        return self ** self.ctx.p

    def is_zero(self) -> bool:
        return not any(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.ctx.from_int(other)
        return isinstance(other, FqElement) and self.c == other.c

    def __hash__(self) -> int:
        return hash(self.c)

    def __repr__(self) -> str:
        if self.ctx.n == 1:
            return str(self.c[0])
        return "F(" + ",".join(map(str, self.c)) + ")"

    def to_int(self) -> int:
        """Base-p integer encoding sum c_i p^i (used as a table index)."""
        acc = 0
        for c in reversed(self.c):
            acc = acc * self.ctx.p + c
        return acc


def fq_arith(a: FqElement, b: FqElement | int | None, op: str) -> FqElement:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inv()
    if op == "pow":
        return a ** int(b)
    if op == "frobenius":
        return a.frobenius()
    raise ValueError(f"unknown operation {op!r}")


@dataclass(frozen=True)
class Embedding:
    """Ring embedding F_q -> F_{q^r} sending the generator t to ``image_t``."""

    source: FieldContext
    target: FieldContext
    image_t: FqElement

    def __call__(self, a: FqElement) -> FqElement:
        acc = self.target.zero
        for c in reversed(a.c):
            acc = acc * self.image_t + self.target.from_int(c)
        return acc


def extension_field(ctx: FieldContext, r: int) -> tuple[FieldContext, Embedding]:
    if r < 1:
        raise ValueError("extension degree r must be >= 1")
    if r == 1:
        return ctx, Embedding(ctx, ctx, ctx.gen())
    big = build_context(ctx.p, ctx.n * r)
    if ctx.n == 1:
        return big, Embedding(ctx, big, big.from_int(ctx.gen().c[0]))
    poly = [big.from_int(c) for c in ctx.m]
    rts = pf.roots(poly, big)
    if not rts:
        raise ArithmeticError("modulus has no root in the extension")
    return big, Embedding(ctx, big, rts[0])


# --- capped relative p-adic numbers ------------------------------------------------

class ZqScaled:
    """p**val * unit with the unit known modulo p**N.

    A zero is stored with ``unit`` equal to the frame zero, ``N = 0`` and
    ``val`` its absolute precision; ``val == INF`` marks an exact zero.
    """

    __slots__ = ("ctx", "val", "unit", "N")

    def __init__(self, ctx: FieldContext, val: int, unit, N: int):
        self.ctx = ctx
        self.val = val
        self.unit = unit
        self.N = N

    # constructors
    @classmethod
    def exact_zero(cls, ctx: FieldContext) -> "ZqScaled":
        return cls(ctx, INF, ctx.zzero(), 0)

    @classmethod
    def zero(cls, ctx: FieldContext, absprec: int) -> "ZqScaled":
        return cls(ctx, absprec, ctx.zzero(), 0)

    @classmethod
    def from_frame(cls, ctx: FieldContext, a, absprec: int, shift: int = 0) -> "ZqScaled":
        """Value a / p**shift, with a known modulo p**(absprec + shift)."""
        a = ctx.zreduce(a, ctx.p ** (absprec + shift)) if absprec + shift > 0 else ctx.zzero()
        v = ctx.zval(a)
        if v >= absprec + shift:
            return cls.zero(ctx, absprec)
        return cls(ctx, v - shift, ctx.zdivp(a, v), absprec + shift - v)

    @classmethod
    def from_int(cls, ctx: FieldContext, k: int, N: int) -> "ZqScaled":
        if k == 0:
            return cls.exact_zero(ctx)
        v = vp_int(k, ctx.p)
        return cls(ctx, v, ctx.zfrom_int(k // ctx.p ** v, ctx.p ** N), N)

    @classmethod
    def from_rational(cls, ctx: FieldContext, r: Fraction | int, N: int) -> "ZqScaled":
        r = Fraction(r)
        if r == 0:
            return cls.exact_zero(ctx)
        p = ctx.p
        vn, vd = vp_int(r.numerator, p), vp_int(r.denominator, p)
        num = r.numerator // p ** vn
        den = r.denominator // p ** vd
        mod = p ** N
        return cls(ctx, vn - vd, ctx.zfrom_int(num * pow(den, -1, mod), mod), N)

    # queries
    def is_zero(self) -> bool:
        return self.N == 0

    def is_exact_zero(self) -> bool:
        return self.val >= INF

    @property
    def absprec(self) -> int:
        return self.val + self.N

    def valuation(self) -> int:
        return self.val

    def reduce(self) -> FqElement:
        """Residue modulo p (requires val >= 0)."""
        if self.is_zero() or self.val > 0:
            return self.ctx.zero
        if self.val < 0:
            raise ValueError("residue of a non-integral element")
        return self.ctx.zred(self.unit)

    def to_frame(self, R: int, shift: int = 0):
        """self * p**shift as a frame value modulo p**R (must be integral)."""
        ctx = self.ctx
        mod = ctx.p ** R
        if self.is_zero():
            return ctx.zzero()
        e = self.val + shift
        if e < 0:
            raise PrecisionError("value not integral in the requested frame")
        if e >= R:
            return ctx.zzero()
        return ctx.zmulp(ctx.zreduce(self.unit, mod), e, mod)

    # arithmetic
    def _coerce(self, other) -> "ZqScaled":
        if isinstance(other, ZqScaled):
            return other
        if isinstance(other, (int, Fraction)):
            return ZqScaled.from_rational(self.ctx, other, max(self.N, 1) + 64)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        a = self
        if a.is_exact_zero():
            return b
        if b.is_exact_zero():
            return a
        ctx = a.ctx
        absp = min(a.absprec, b.absprec)
        if a.is_zero() and b.is_zero():
            return ZqScaled.zero(ctx, absp)
        vals = [x.val for x in (a, b) if not x.is_zero()]
        v = min(vals)
        R = absp - v
        if R <= 0:
            return ZqScaled.zero(ctx, absp)
        mod = ctx.p ** R
        s = ctx.zzero()
        for x in (a, b):
            if not x.is_zero() and x.val - v < R:
                s = ctx.zadd(s, ctx.zmulp(ctx.zreduce(x.unit, mod), x.val - v, mod), mod)
        k = ctx.zval(s)
        if k >= R:
            return ZqScaled.zero(ctx, absp)
        return ZqScaled(ctx, v + k, ctx.zdivp(s, k), R - k)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        return ZqScaled(self.ctx, self.val, self.ctx.zneg(self.unit, self.ctx.p ** self.N), self.N)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        b = self._coerce(other)
        a = self
        ctx = a.ctx
        if a.is_exact_zero() or b.is_exact_zero():
            return ZqScaled.exact_zero(ctx)
        if a.is_zero() or b.is_zero():
            return ZqScaled.zero(ctx, a.val + b.val)
        N = min(a.N, b.N)
        mod = ctx.p ** N
        return ZqScaled(ctx, a.val + b.val, ctx.zmul(a.unit, b.unit, mod), N)

    __rmul__ = __mul__

    def inverse(self) -> "ZqScaled":
        if self.is_zero():
            raise PrecisionError("precision exhausted: inverting an indistinguishable zero")
        return ZqScaled(self.ctx, -self.val, self.ctx.zinv(self.unit, self.N), self.N)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = ZqScaled.from_int(self.ctx, 1, max(self.N, 1))
        for _ in range(e):
            result = result * self
        return result

    def sigma(self, power: int = 1) -> "ZqScaled":
        if self.is_zero():
            return self
        mod = self.ctx.p ** self.N
        return ZqScaled(self.ctx, self.val, self.ctx.zsigma(self.unit, mod, power), self.N)

    def with_precision(self, N: int) -> "ZqScaled":
        """Cap the relative precision at N."""
        if self.is_zero() or N >= self.N:
            return self
        return ZqScaled(self.ctx, self.val, self.ctx.zreduce(self.unit, self.ctx.p ** N), N)

    def equals(self, other: "ZqScaled") -> bool:
        """Equality at the jointly known precision."""
        return (self - other).is_zero()

    def residue_mod(self, k: int) -> int:
        """Integer in [0, p^k) congruent to the value (n = 1, integral)."""
        if self.ctx.n != 1:
            raise ValueError("residue_mod needs n = 1")
        if self.val < 0 and not self.is_zero():
            raise ValueError("non-integral value")
        if self.is_zero():
            if self.val < k:
                raise PrecisionError("precision insufficient")
            return 0
        if self.absprec < k:
            raise PrecisionError("precision insufficient")
        return self.to_frame(k)

    def __repr__(self) -> str:
        if self.is_exact_zero():
            return "0"
        if self.is_zero():
            return f"O({self.ctx.p}^{self.val})"
        return f"{self.ctx.p}^{self.val}*{self.unit} (+O({self.ctx.p}^{self.absprec}))"


def zq_arith(a: ZqScaled, b: ZqScaled, op: str) -> ZqScaled:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def teichmuller_frame(ctx: FieldContext, a: FqElement, N: int):
    """Teichmuller lift of a as a frame value modulo p**N (Newton on z^q - z)."""
    p, q = ctx.p, ctx.q
    z = ctx.zlift(a)
    if a.is_zero():
        return ctx.zzero()
    prec = 1
    while prec < N:
        prec = min(2 * prec, N)
        mod = p ** prec
        zq1 = ctx.zpow(z, q - 1, mod)
        F = ctx.zsub(ctx.zmul(zq1, z, mod), z, mod)
        dF = ctx.zsub(ctx.zscal(zq1, q, mod), ctx.zfrom_int(1, mod), mod)
        z = ctx.zsub(z, ctx.zmul(F, ctx.zinv(dF, prec), mod), mod)
    return ctx.zreduce(z, p ** N)


def teichmuller(a: FqElement, N: int) -> ZqScaled:
    ctx = a.ctx
    if a.is_zero():
        return ZqScaled.exact_zero(ctx)
    return ZqScaled(ctx, 0, teichmuller_frame(ctx, a, N), N)


def sigma(a: ZqScaled, power: int = 1) -> ZqScaled:
    return a.sigma(power)


# --- precision schedule ------------------------------------------------------------

_BIAS = 1e-9


def floor_log(x: int, p: int) -> int:
    """Exact floor(log_p x) for a positive integer x."""
    if x < 1:
        raise ValueError("log of non-positive integer")
    k, acc = 0, p
    while acc <= x:
        acc *= p
        k += 1
    return k


def _log_up(x: float, p: int) -> float:
    # upward-biased real logarithm; overestimating precision is sound
    return math.log(x) / math.log(p) * (1 + _BIAS) + _BIAS


def tau(p: int) -> int:
    if p == 3:
        return 5
    if p == 5:
        return 3
    if p in (7, 11, 13):
        return 1
    return 0


@dataclass(frozen=True)
class PrecisionProfile:
    N1: int
    N2: int
    N3: int
    N4: int
    N5: int
    Delta: int
    tau: int
    c: float
    c1: float
    c2: float
    preset: str = "rigorous"

    def as_dict(self) -> dict:
        return {"N1": self.N1, "N2": self.N2, "N3": self.N3, "N4": self.N4, "N5": self.N5}


def precision_profile(p: int, n: int) -> PrecisionProfile:
    t = tau(p)
    Delta = 11 * (floor_log(63, p) + t)
    N1 = math.floor(_log_up(30, p) + 2 * n) + 1
    c1 = 6 + _log_up(80, p) + Delta
    c = math.floor(c1 + _log_up(c1 + _log_up(2 * c1, p), p)) + 1
    N2 = N1 + (6 * n - 1) * c
    c2 = c1 + N2
    inner = c2 + _log_up(2 * c2, p)
    N3 = math.floor(16 * p * inner) + 1
    N4 = math.floor(N2 + c1 + _log_up(inner, p)) + 1
    N5 = N4 + 8 * floor_log(N3, p) + 14
    return PrecisionProfile(N1, N2, N3, N4, N5, Delta, t, c, c1, c2)


def recovery_digits(p: int, n: int) -> int:
    """Least k with p^k > 12 q + 1: enough to pin every free Weil coefficient."""
    q = p ** n
    k = 1
    while p ** k <= 12 * q + 1:
        k += 1
    return k


def fast_profile(p: int, n: int) -> PrecisionProfile:
    """Small preset for tests: always paired with oracle verification."""
    base = precision_profile(p, n)
    N4 = 2 * n + 6
    N3 = 16 * p * (N4 + 2)
    N5 = N4 + 8 * floor_log(N3, p) + 14
    return PrecisionProfile(recovery_digits(p, n), N4, N3, N4, N5, base.Delta, base.tau,
                            base.c, base.c1, base.c2, preset="fast")


def custom_profile(p: int, n: int, N3: int, N4: int, N5: int) -> PrecisionProfile:
    if N5 < N4:
        raise ValueError("N5 must be >= N4")
    base = precision_profile(p, n)
    return PrecisionProfile(recovery_digits(p, n), N4, N3, N4, N5, base.Delta, base.tau,
                            base.c, base.c1, base.c2, preset="custom")


@dataclass(frozen=True)
class ConvergenceSchedule:
    """The linear decay schedule used for the Frobenius Newton solve (d = 4p)."""

    d: int

    @classmethod
    def for_prime(cls, p: int) -> "ConvergenceSchedule":
        return cls(4 * p)

    def delta(self, j: int) -> int:
        return (4 * j + 1) * self.d

    def Delta(self, i: int, j: int) -> int:
        return (i + 4 * j) * self.d

    def check_conditions(self, nmax: int = 6, jmax: int = 6) -> dict[str, bool]:
        """Check the four schedule conditions with deg h_k = (k+1)d.

        Returns per-condition flags; condition 1 and 2 hold with equality.
        """
        d = self.d
        dk = lambda k: (k + 1) * d  # noqa: E731
        c1 = all(self.Delta(n + 1, j) == max(self.Delta(n, j - l) + self.delta(l)
                                             for l in range(j + 1))
                 for n in range(1, nmax) for j in range(jmax))
        c2 = self.delta(0) == dk(0)
        c3 = all(self.delta(j) - self.delta(j - 1) >= dk(1) for j in range(1, jmax))
        c4 = all(self.delta(k - 1 + j) >= self.Delta(k, j) + dk(k)
                 for k in range(2, nmax) for j in range(jmax))
        return {"1": c1, "2": c2, "3": c3, "4": c4}
