"""Exact arithmetic in a field K holding a distinguished primitive m-th root of unity q.

Two backends are provided:

* ``cyclotomic`` -- the cyclotomic field Q(q) = Q[x]/Phi_m(x), elements stored as
  an integer coefficient vector over a common positive denominator.
* ``prime`` -- the prime field F_p with m | p - 1, q = g^((p-1)/m) for the least
  primitive root g of p.

Scalars are immutable and support the usual arithmetic operators, mixing freely
with ``int`` and ``Fraction``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from .errors import BadOrder, BadPrime, FieldMismatch

__all__ = [
    "Backend",
    "FieldContext",
    "Scalar",
    "make_field",
    "cyclotomic_polynomial",
    "euler_phi",
    "is_prime",
    "least_primitive_root",
    "parse_scalar",
    "random_scalar",
]


class Backend(str, Enum):
    CYCLOTOMIC = "cyclotomic"
    PRIME = "prime"


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def euler_phi(n: int) -> int:
    result = n
    for p in prime_factors(n):
        result -= result // p
    return result


def least_primitive_root(p: int) -> int:
    if p == 2:
        return 1
    factors = prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // ell, p) != 1 for ell in factors):
            return g
    raise BadPrime(f"no primitive root modulo {p}")


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # integer polynomials, low degree first; den monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        out[k] = c
        if c:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Phi_m as integer coefficients, lowest degree first."""
    if m < 1:
        raise BadOrder(f"cyclotomic index must be positive, got {m}")
    xm1 = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            xm1 = _poly_divexact(xm1, list(cyclotomic_polynomial(d)))
    return tuple(xm1)


@dataclass(frozen=True, eq=False)
class FieldContext:
    """A field K with a distinguished primitive m-th root of unity ``q``."""

    backend: Backend
    m: int
    p: int | None = None
    phi_m: tuple[int, ...] | None = None
    _degree: int = field(default=0, repr=False)
    _reduce: tuple = field(default=(), repr=False)
    _qpows: tuple = field(default=(), repr=False)
    _q_residue: int = field(default=0, repr=False)

    # identity is (backend, m, p); the cached tables are derived data
    def _key(self):
        return (self.backend, self.m, self.p)

    def __eq__(self, other):
        return isinstance(other, FieldContext) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.backend is Backend.PRIME:
            return f"FieldContext(prime, m={self.m}, p={self.p})"
        return f"FieldContext(cyclotomic, m={self.m})"

    @property
    def characteristic(self) -> int:
        return self.p if self.backend is Backend.PRIME else 0

    @property
    def degree(self) -> int:
        """Dimension of K over its prime field."""
        return self._degree

    @property
    def zero(self) -> Scalar:
        return self.from_int(0)

    @property
    def one(self) -> Scalar:
        return self.from_int(1)

    @property
    def q(self) -> Scalar:
        return self.q_pow(1)

    def q_pow(self, e: int) -> Scalar:
        return self._qpows[e % self.m]

    def from_int(self, n: int) -> Scalar:
        if self.backend is Backend.PRIME:
            return ModScalar(self, n % self.p)
        return CycScalar._make(self, (n,) + (0,) * (self._degree - 1), 1)

    def from_fraction(self, x: Fraction) -> Scalar:
        if self.backend is Backend.PRIME:
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return ModScalar(self, x.numerator * pow(x.denominator, -1, self.p) % self.p)
        return CycScalar._make(self, (x.numerator,) + (0,) * (self._degree - 1), x.denominator)

    def from_coeffs(self, coeffs) -> Scalar:
        """Element sum_k coeffs[k] q^k; any length, reduced modulo the field relations."""
        acc = self.zero
        for k, c in enumerate(coeffs):
            if c:
                acc = acc + self.q_pow(k) * self.coerce(c)
        return acc

    def coerce(self, x) -> Scalar:
        if isinstance(x, Scalar):
            if x.field is not self and x.field != self:
                raise FieldMismatch(f"{x.field!r} vs {self!r}")
            return x
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Fraction):
            return self.from_fraction(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self!r}")

    def parse(self, text: str) -> Scalar:
        return parse_scalar(text, self)

    def describe(self) -> dict:
        d = {"backend": self.backend.value, "m": self.m}
        if self.backend is Backend.PRIME:
            d["p"] = self.p
        return d


def make_field(backend: Backend | str = Backend.CYCLOTOMIC, m: int = 2, p: int | None = None) -> FieldContext:
    """Build the field context; ``q`` is primitive of order exactly ``m``."""
    backend = Backend(backend)
    return _make_field(backend, m, p if backend is Backend.PRIME else None)


@lru_cache(maxsize=None)
def _make_field(backend: Backend, m: int, p: int | None) -> FieldContext:
    if not isinstance(m, int) or m < 2:
        raise BadOrder(f"order of q must be >= 2, got {m}")
    if backend is Backend.PRIME:
        if p is None or not is_prime(p):
            raise BadPrime(f"{p} is not prime")
        if (p - 1) % m:
            raise BadPrime(f"m={m} does not divide p-1={p - 1}")
        g = least_primitive_root(p)
        qres = pow(g, (p - 1) // m, p)
        F = FieldContext(backend, m, p, None, 1, (), (), qres)
        object.__setattr__(F, "_qpows", tuple(ModScalar(F, pow(qres, k, p)) for k in range(m)))
        return F

    phi = cyclotomic_polynomial(m)
    k = len(phi) - 1
    # x^d mod Phi_m for d in [k, 2k-2]
    red = []
    cur = [-c for c in phi[:k]]  # x^k
    for _ in range(max(k - 1, 0)):
        red.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(k):
                cur[i] -= top * phi[i]
    F = FieldContext(backend, m, None, phi, k, tuple(red), (), 0)
    pows = []
    vec = [1] + [0] * (k - 1)
    for _ in range(m):
        pows.append(CycScalar._make(F, tuple(vec), 1))
        top = vec[-1]
        vec = [0] + vec[:-1]
        if top:
            for i in range(k):
                vec[i] -= top * phi[i]
    object.__setattr__(F, "_qpows", tuple(pows))
    return F


class Scalar:
    """Abstract field element; see :class:`CycScalar` and :class:`ModScalar`."""

    __slots__ = ()
    field: FieldContext

    def is_zero(self) -> bool:
        return not self

    def __radd__(self, other):
        return self.__add__(other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __rsub__(self, other):
        return self.field.coerce(other) - self

    def __truediv__(self, other):
        return self * self.field.coerce(other).inv()

    def __rtruediv__(self, other):
        return self.field.coerce(other) * self.inv()

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __repr__(self):
        return f"Scalar({self})"


class CycScalar(Scalar):
    __slots__ = ("field", "num", "den")

    def __init__(self, field, num, den):
        self.field = field
        self.num = num
        self.den = den

    @classmethod
    def _make(cls, F, num, den):
        if den < 0:
            num = tuple(-c for c in num)
            den = -den
        g = den
        for c in num:
            if c:
                g = math.gcd(g, c)
                if g == 1:
                    break
        if not any(num):
            return cls(F, (0,) * len(num), 1)
        if g != 1:
            num = tuple(c // g for c in num)
            den //= g
        return cls(F, tuple(num), den)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def __bool__(self):
        return any(self.num)

    def __eq__(self, other):
        if isinstance(other, CycScalar):
            return self.num == other.num and self.den == other.den and self.field == other.field
        if isinstance(other, (int, Fraction)):
            return self == self.field.coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def _other(self, other):
        if isinstance(other, CycScalar):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other
        return self.field.coerce(other)

    def __add__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        if self.den == o.den:
            return CycScalar._make(self.field, tuple(a + b for a, b in zip(self.num, o.num)), self.den)
        return CycScalar._make(
            self.field,
            tuple(a * o.den + b * self.den for a, b in zip(self.num, o.num)),
            self.den * o.den,
        )

    def __neg__(self):
        return CycScalar(self.field, tuple(-c for c in self.num), self.den)

    def __sub__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __mul__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        F = self.field
        k = F._degree
        a, b = self.num, o.num
        raw = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        raw[i + j] += ai * bj
        res = raw[:k]
        for d, c in enumerate(raw[k:]):
            if c:
                for t, r in enumerate(F._reduce[d]):
                    if r:
                        res[t] += c * r
        return CycScalar._make(F, tuple(res), self.den * o.den)

    def inv(self):
        if not self:
            raise ZeroDivisionError("inverse of zero")
        # (num/den)^-1 = den * num^-1
        num, den = _cyc_inverse(self.field, self.num)
        return CycScalar._make(self.field, tuple(c * self.den for c in num), den)

    def __str__(self):
        return _format_terms([(k, Fraction(c, self.den)) for k, c in enumerate(self.num) if c])


@lru_cache(maxsize=1 << 16)
def _cyc_inverse(F: FieldContext, num: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    # solve (sum_j x_j q^j) * a = 1 as a k x k rational linear system
    k = F._degree
    a = CycScalar(F, num, 1)
    cols = [(a * F.q_pow(j)).num for j in range(k)]
    rows = [[Fraction(cols[j][i]) for j in range(k)] + [Fraction(int(i == 0))] for i in range(k)]
    for c in range(k):
        piv = next(r for r in range(c, k) if rows[r][c] != 0)
        rows[c], rows[piv] = rows[piv], rows[c]
        pv = rows[c][c]
        rows[c] = [x / pv for x in rows[c]]
        for r in range(k):
            if r != c and rows[r][c] != 0:
                f = rows[r][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
    sol = [rows[i][k] for i in range(k)]
    den = math.lcm(*(s.denominator for s in sol))
    return tuple(int(s * den) for s in sol), den


class ModScalar(Scalar):
    __slots__ = ("field", "r")

    def __init__(self, field, r):
        self.field = field
        self.r = r

    def __bool__(self):
        return self.r != 0

    def __eq__(self, other):
        if isinstance(other, ModScalar):
            return self.r == other.r and self.field == other.field
        if isinstance(other, (int, Fraction)):
            return self == self.field.coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.r)

    def _other(self, other):
        if isinstance(other, ModScalar):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other
        return self.field.coerce(other)

    def __add__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        return ModScalar(self.field, (self.r + o.r) % self.field.p)

    def __neg__(self):
        return ModScalar(self.field, -self.r % self.field.p)

    def __sub__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        return ModScalar(self.field, (self.r - o.r) % self.field.p)

    def __mul__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        return ModScalar(self.field, self.r * o.r % self.field.p)

    def inv(self):
        if not self.r:
            raise ZeroDivisionError("inverse of zero")
        return ModScalar(self.field, pow(self.r, -1, self.field.p))

    def __str__(self):
        return str(self.r)


def _format_terms(terms: list[tuple[int, Fraction]]) -> str:
    """Render sum c_k q^k with highest power first."""
    if not terms:
        return "0"
    parts = []
    for k, c in sorted(terms, reverse=True):
        sign = "-" if c < 0 else "+"
        c = abs(c)
        mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
        if not mono:
            body = str(c)
        elif c == 1:
            body = mono
        else:
            body = f"{c}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def scalar_term_count(s: Scalar) -> int:
    if isinstance(s, CycScalar):
        return sum(1 for c in s.num if c)
    return 1 if s else 0


def parse_scalar(text: str, F: FieldContext) -> Scalar:
    """Parse Laurent-polynomial syntax such as ``1 - q^-2`` or ``(3/2)*q + 1``."""
    from .expr import parse_expression

    terms = parse_expression(text, F, None)
    return terms.get((), F.zero)


def random_scalar(F: FieldContext, rng: random.Random, nonzero: bool = True, spread: int = 3) -> Scalar:
    """Pseudo-random element; small integer coefficients on the power basis."""
    while True:
        if F.backend is Backend.PRIME:
            s = F.from_int(rng.randrange(F.p))
        else:
            s = F.from_coeffs([rng.randint(-spread, spread) for _ in range(F.degree)])
        if s or not nonzero:
            return s
