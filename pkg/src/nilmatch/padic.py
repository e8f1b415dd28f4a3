"""Truncated arithmetic in an unramified local field and its residue field.

The valued field is ``Q_p`` when ``k == 1`` and the unramified extension
``Q_p[t]/(f)`` of degree ``k`` otherwise, where ``f`` is the smallest monic
polynomial of degree ``k`` that is irreducible mod ``p``. The uniformizer is
always ``p``, and the residue field is ``F_q`` with ``q = p**k``.

Numbers come in two flavours:

* exact numbers, built from integers, fractions or residue lifts, carry their
  value in ``Q[t]/(f)`` and never lose precision;
* truncated numbers (``p^v * u + O(p^(v+r))``) carry ``r`` known unit digits
  and lose digits under additive cancellation, like capped-relative p-adics.

Mixing the two yields a truncated number.
"""

from __future__ import annotations

import itertools
import math
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .errors import DomainError, InversionOfZero, PrecisionLoss, ZeroInput

INFINITY = math.inf
DEFAULT_PRECISION = int(os.environ.get("NILMATCH_PRECISION", "32"))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def vp(n: int | Fraction, p: int) -> int | float:
    """p-adic valuation of a rational number (INFINITY for 0)."""
    if n == 0:
        return INFINITY
    n = Fraction(n)
    num, den = n.numerator, n.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


# --- polynomials over Z/p^r, coefficient lists low degree first --------------


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod_p(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_trim(out)


def _poly_divmod_p(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    inv_lead = pow(b[-1], -1, p)
    quot = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        quot[shift] = coef
        for i, y in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * y) % p
        _poly_trim(a)
    return _poly_trim(quot), a


def _poly_gcd_p(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        _, r = _poly_divmod_p(a, b, p)
        a, b = b, r
    return a


def _poly_powmod_p(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_divmod_p(base, mod, p)[1]
    while e:
        if e & 1:
            result = _poly_divmod_p(_poly_mulmod_p(result, base, p), mod, p)[1]
        base = _poly_divmod_p(_poly_mulmod_p(base, base, p), mod, p)[1]
        e >>= 1
    return result


def is_irreducible_mod_p(f: Sequence[int], p: int) -> bool:
    """Ben-Or test: f of degree k is irreducible iff gcd(f, x^(p^i) - x) = 1, i <= k/2."""
    f = _poly_trim([c % p for c in f])
    k = len(f) - 1
    if k < 1:
        return False
    x = [0, 1]
    xp = x
    for _ in range(1, k // 2 + 1):
        xp = _poly_powmod_p(xp, p, f, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        if len(_poly_gcd_p(f, _poly_trim(diff), p)) > 1:
            return False
    return True


@lru_cache(maxsize=None)
def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Monic irreducible of degree k over F_p with the smallest encoding sum c_i p^i."""
    for code in range(p**k):
        coeffs = [(code // p**i) % p for i in range(k)] + [1]
        if is_irreducible_mod_p(coeffs, p):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")  # unreachable


# --- contexts -----------------------------------------------------------------


@dataclass(frozen=True)
class FieldContext:
    p: int
    k: int = 1
    precision: int = DEFAULT_PRECISION
    irreducible_poly: tuple[int, ...] | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise DomainError(f"p = {self.p} is not prime")
        if self.p == 2:
            raise DomainError("residue characteristic 2 is not supported")
        if self.k < 1:
            raise DomainError("k must be >= 1")
        if self.precision < 1:
            raise DomainError("precision must be >= 1")
        if self.k == 1:
            if self.irreducible_poly is not None:
                raise DomainError("irreducible_poly must be absent when k = 1")
        elif self.irreducible_poly is None:
            object.__setattr__(self, "irreducible_poly", smallest_irreducible(self.p, self.k))
        else:
            poly = tuple(int(c) % self.p for c in self.irreducible_poly)
            if len(poly) != self.k + 1 or poly[-1] != 1 or not is_irreducible_mod_p(poly, self.p):
                raise DomainError(f"{self.irreducible_poly} is not monic irreducible of degree {self.k}")
            object.__setattr__(self, "irreducible_poly", poly)

    @property
    def q(self) -> int:
        return self.p**self.k

    @cached_property
    def residue_field(self) -> ResidueField:
        return ResidueField(self)

    def with_precision(self, precision: int) -> FieldContext:
        return FieldContext(self.p, self.k, precision, self.irreducible_poly)


class ResidueField:
    """F_q with elements encoded as integers sum c_i p^i, c_i in [0, p).

    The encoding doubles as the fixed enumeration order of F_q.
    """

    def __init__(self, ctx: FieldContext):
        self.ctx = ctx
        self.p = ctx.p
        self.k = ctx.k
        self.q = ctx.q
        self._log: list[int] | None = None
        self._exp: list[int] | None = None
        if self.k > 1 and self.q <= 1 << 16:
            self._build_tables()

    def coeffs(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.k)]

    def encode(self, coeffs: Iterable[int]) -> int:
        return sum((c % self.p) * self.p**i for i, c in enumerate(coeffs))

    def _mul_slow(self, a: int, b: int) -> int:
        prod = _poly_mulmod_p(_poly_trim(self.coeffs(a)), _poly_trim(self.coeffs(b)), self.p)
        _, r = _poly_divmod_p(prod, list(self.ctx.irreducible_poly), self.p)
        return self.encode(r)

    def _build_tables(self):
        order = self.q - 1
        factors = [f for f in range(2, order + 1) if order % f == 0 and is_prime(f)]
        for g in range(2, self.q):
            if all(self._pow_slow(g, order // f) != 1 for f in factors):
                break
        else:
            g = 1  # q = 2 cannot happen; kept for totality
        exp = [1] * order
        for i in range(1, order):
            exp[i] = self._mul_slow(exp[i - 1], g)
        log = [0] * self.q
        for i, e in enumerate(exp):
            log[e] = i
        self._exp, self._log = exp, log

    def _pow_slow(self, a: int, e: int) -> int:
        r, b = 1, a
        while e:
            if e & 1:
                r = self._mul_slow(r, b)
            b = self._mul_slow(b, b)
            e >>= 1
        return r

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        return self.encode(x + y for x, y in zip(self.coeffs(a), self.coeffs(b)))

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        return self.encode(-x for x in self.coeffs(a))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.k == 1:
            return a * b % self.p
        if self._exp is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._mul_slow(a, b)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if a == 0:
            return 1 if e == 0 else 0
        if self.k == 1:
            return pow(a, e, self.p)
        if self._exp is not None:
            return self._exp[(self._log[a] * e) % (self.q - 1)]
        return self._pow_slow(a, e)

    def inv(self, a: int) -> int:
        if a == 0:
            raise InversionOfZero("0 has no inverse in the residue field")
        return self.pow(a, self.q - 2)

    def elements(self) -> range:
        return range(self.q)

    def units(self) -> range:
        return range(1, self.q)


@dataclass(frozen=True)
class ResidueElement:
    value: int
    ctx: FieldContext = field(repr=False)

    def __post_init__(self):
        if not 0 <= self.value < self.ctx.q:
            object.__setattr__(self, "value", self._reduce(self.value))

    def _reduce(self, v: int) -> int:
        if self.ctx.k == 1:
            return v % self.ctx.p
        raise ValueError(f"{v} is not a reduced element of F_{self.ctx.q}")

    @property
    def _f(self) -> ResidueField:
        return self.ctx.residue_field

    def _coerce(self, other) -> ResidueElement:
        if isinstance(other, ResidueElement):
            return other
        if isinstance(other, int):
            return ResidueElement(other % self.ctx.p, self.ctx)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        return ResidueElement(self._f.add(self.value, other.value), self.ctx)

    __radd__ = __add__

    def __neg__(self):
        return ResidueElement(self._f.neg(self.value), self.ctx)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return ResidueElement(self._f.mul(self.value, other.value), self.ctx)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return ResidueElement(self._f.pow(self.value, e), self.ctx)

    def inv(self) -> ResidueElement:
        return ResidueElement(self._f.inv(self.value), self.ctx)

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def __eq__(self, other):
        if isinstance(other, int):
            other = self._coerce(other)
        if not isinstance(other, ResidueElement):
            return NotImplemented
        return self.value == other.value and self.ctx.p == other.ctx.p and self.ctx.k == other.ctx.k

    def __hash__(self):
        return hash((self.value, self.ctx.p, self.ctx.k))

    def is_zero(self) -> bool:
        return self.value == 0

    def signed(self) -> int:
        """Balanced representative in (-p/2, p/2); only meaningful for k = 1."""
        v = self.value
        return v - self.ctx.p if v > self.ctx.p // 2 else v

    def __str__(self):
        if self.ctx.k == 1:
            return str(self.signed())
        # balanced coefficients, so that -1 prints as -1 in every F_q
        p = self.ctx.p
        out = ""
        for i, c in enumerate(self._f.coeffs(self.value)):
            c = c - p if c > p // 2 else c
            if c == 0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            body = str(abs(c)) if not mono else (mono if abs(c) == 1 else f"{abs(c)}*{mono}")
            out += ("-" if c < 0 else ("+" if out else "")) + body
        return out or "0"


def residue(value: int, ctx: FieldContext) -> ResidueElement:
    return ResidueElement(value, ctx)


# --- valued field elements ----------------------------------------------------


def _frac_poly_mul_mod(a, b, f) -> tuple[Fraction, ...]:
    k = len(f) - 1
    prod = [Fraction(0)] * (2 * k - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for i in range(k):
                prod[d - k + i] -= c * f[i]
            prod[d] = Fraction(0)
    return tuple(prod[:k])


def _solve_fraction_system(m: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(m)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(m)]
    for c in range(n):
        piv = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                fac = aug[r][c]
                aug[r] = [x - fac * y for x, y in zip(aug[r], aug[c])]
    return [aug[r][n] for r in range(n)]


def _unit_mul(a, b, r: int, ctx: FieldContext) -> tuple[int, ...]:
    mod = ctx.p**r
    if ctx.k == 1:
        return (a[0] * b[0] % mod,)
    k = ctx.k
    f = ctx.irreducible_poly
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for i in range(k):
                prod[d - k + i] -= c * f[i]
    return tuple(x % mod for x in prod[:k])


def _coeff_valuation(coeffs: Sequence[int], p: int, cap: int) -> int:
    """min v_p over coefficients, capped at ``cap``."""
    v = cap
    for c in coeffs:
        if c:
            w = 0
            while c % p == 0 and w < v:
                c //= p
                w += 1
            v = min(v, w)
    return v


@dataclass(frozen=True, eq=False)
class PadicNumber:
    """``p^valuation * unit + O(p^absprec)``; ``exact`` holds the value when known exactly.

    ``unit`` is a k-tuple of integers modulo ``p^relprec`` (relprec capped at the
    context precision); for ``k == 1`` it is a 1-tuple.
    """

    valuation: int | float
    unit: tuple[int, ...]
    relprec: int
    ctx: FieldContext = field(repr=False)
    exact: tuple[Fraction, ...] | None = None
    absprec: int | float = INFINITY

    # construction ---------------------------------------------------------

    @classmethod
    def from_exact(cls, coeffs: Sequence[int | Fraction], ctx: FieldContext) -> PadicNumber:
        coeffs = tuple(Fraction(c) for c in coeffs)
        coeffs = coeffs + (Fraction(0),) * (ctx.k - len(coeffs))
        if len(coeffs) != ctx.k:
            raise ValueError(f"expected {ctx.k} coefficients")
        p, P = ctx.p, ctx.precision
        v = min((vp(c, p) for c in coeffs), default=INFINITY)
        if v == INFINITY:
            return cls(INFINITY, (0,) * ctx.k, 0, ctx, coeffs, INFINITY)
        mod = p**P
        unit = []
        for c in coeffs:
            if c == 0:
                unit.append(0)
                continue
            c = c / Fraction(p) ** v
            unit.append(c.numerator * pow(c.denominator, -1, mod) % mod)
        return cls(v, tuple(unit), P, ctx, coeffs, INFINITY)

    @classmethod
    def from_rational(cls, x: int | Fraction, ctx: FieldContext) -> PadicNumber:
        return cls.from_exact([x], ctx)

    @classmethod
    def from_digits(
        cls, valuation: int, digits: Sequence, ctx: FieldContext
    ) -> PadicNumber:
        """Truncated number ``p^valuation * sum d_i p^i + O(p^(valuation+len(digits)))``.

        Digits are ints in [0, p) for k = 1 and either residue-field encodings
        or k-tuples of ints for k > 1.
        """
        p, k = ctx.p, ctx.k
        r = min(len(digits), ctx.precision)
        if r == 0:
            raise ValueError("at least one digit is required")
        coeffs = [0] * k
        rf = ctx.residue_field
        for i, d in enumerate(digits[:r]):
            if isinstance(d, ResidueElement):
                d = d.value
            vec = rf.coeffs(d) if isinstance(d, int) and k > 1 else (list(d) if k > 1 else [d])
            for j in range(k):
                coeffs[j] += (vec[j] % p) * p**i
        lead = _coeff_valuation(coeffs, p, r)
        if lead >= r:
            return cls.zero_to(valuation + r, ctx)
        if lead > 0:
            coeffs = [c // p**lead for c in coeffs]
        return cls(valuation + lead, tuple(coeffs), r - lead, ctx, None, valuation + r)

    @classmethod
    def zero(cls, ctx: FieldContext) -> PadicNumber:
        return cls.from_exact([0], ctx)

    @classmethod
    def zero_to(cls, absprec: int, ctx: FieldContext) -> PadicNumber:
        """The inexact zero ``O(p^absprec)``."""
        return cls(INFINITY, (0,) * ctx.k, 0, ctx, None, absprec)

    @classmethod
    def one(cls, ctx: FieldContext) -> PadicNumber:
        return cls.from_exact([1], ctx)

    @classmethod
    def uniformizer(cls, ctx: FieldContext) -> PadicNumber:
        return cls.from_exact([ctx.p], ctx)

    @classmethod
    def lift(cls, u: ResidueElement) -> PadicNumber:
        """Exact lift with coefficients in [0, p)."""
        return cls.from_exact(u.ctx.residue_field.coeffs(u.value), u.ctx)

    # properties -----------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def is_zero(self) -> bool:
        return self.valuation == INFINITY

    @property
    def digits(self) -> list:
        """Unit digits, least significant first (k-tuples when k > 1)."""
        p, k = self.ctx.p, self.ctx.k
        if self.is_zero():
            return []
        out = []
        for i in range(self.relprec):
            vec = tuple((c // p**i) % p for c in self.unit)
            out.append(vec[0] if k == 1 else vec)
        return out

    def _capped(self) -> tuple[int | float, tuple[int, ...], int | float]:
        """(valuation, unit, absprec), exact numbers treated as absprec = INFINITY."""
        return self.valuation, self.unit, self.absprec

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> PadicNumber:
        if isinstance(other, PadicNumber):
            if other.ctx.p != self.ctx.p or other.ctx.k != self.ctx.k:
                raise ValueError("mixing numbers from different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return PadicNumber.from_rational(other, self.ctx)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ctx = self.ctx
        if self.is_exact and other.is_exact:
            return PadicNumber.from_exact([a + b for a, b in zip(self.exact, other.exact)], ctx)
        v1, u1, a1 = self._capped()
        v2, u2, a2 = other._capped()
        absprec = min(a1, a2)
        if v1 == INFINITY and v2 == INFINITY:
            return PadicNumber.zero_to(absprec, ctx)
        if v1 == INFINITY or v2 == INFINITY:
            v, u = (v2, u2) if v1 == INFINITY else (v1, u1)
            if v >= absprec:
                return PadicNumber.zero_to(absprec, ctx)
            r = min(ctx.precision, absprec - v)
            return PadicNumber(v, tuple(c % ctx.p**r for c in u), r, ctx, None, v + r)
        vmin = min(v1, v2)
        top = min(absprec, vmin + ctx.precision)
        width = top - vmin
        if width <= 0:
            return PadicNumber.zero_to(absprec, ctx)
        mod = ctx.p**width
        s = tuple(
            (x * ctx.p ** (v1 - vmin) + y * ctx.p ** (v2 - vmin)) % mod for x, y in zip(u1, u2)
        )
        lead = _coeff_valuation(s, ctx.p, width)
        if lead >= width:
            return PadicNumber.zero_to(top, ctx)
        v = vmin + lead
        r = top - v
        return PadicNumber(v, tuple((c // ctx.p**lead) % ctx.p**r for c in s), r, ctx, None, top)

    __radd__ = __add__

    def __neg__(self):
        if self.is_exact:
            return PadicNumber.from_exact([-c for c in self.exact], self.ctx)
        if self.is_zero():
            return self
        mod = self.ctx.p**self.relprec
        return PadicNumber(
            self.valuation, tuple(-c % mod for c in self.unit), self.relprec, self.ctx, None, self.absprec
        )

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ctx = self.ctx
        if self.is_exact and other.is_exact:
            if ctx.k == 1:
                return PadicNumber.from_exact([self.exact[0] * other.exact[0]], ctx)
            return PadicNumber.from_exact(
                _frac_poly_mul_mod(self.exact, other.exact, ctx.irreducible_poly), ctx
            )
        if self.is_zero() or other.is_zero():
            if (self.is_zero() and self.is_exact) or (other.is_zero() and other.is_exact):
                return PadicNumber.zero(ctx)
            # O(p^a) * y: the product is known to absolute precision a + v(y)
            bound = (
                self.absprec + other.absprec
                if self.is_zero() and other.is_zero()
                else (self.absprec + other.valuation if self.is_zero() else other.absprec + self.valuation)
            )
            return PadicNumber.zero_to(bound, ctx)
        r = min(self.relprec, other.relprec)
        v = self.valuation + other.valuation
        unit = _unit_mul(self.unit, other.unit, r, ctx)
        return PadicNumber(v, unit, r, ctx, None, v + r)

    __rmul__ = __mul__

    def inv(self) -> PadicNumber:
        ctx = self.ctx
        if self.is_zero():
            if self.is_exact:
                raise InversionOfZero("cannot invert 0")
            raise PrecisionLoss(f"cannot invert O({ctx.p}^{self.absprec})")
        if self.is_exact:
            if ctx.k == 1:
                return PadicNumber.from_exact([1 / self.exact[0]], ctx)
            k = ctx.k
            basis_images = []
            for j in range(k):
                e = [Fraction(0)] * k
                e[j] = Fraction(1)
                basis_images.append(_frac_poly_mul_mod(self.exact, e, ctx.irreducible_poly))
            matrix = [[basis_images[j][i] for j in range(k)] for i in range(k)]
            rhs = [Fraction(1)] + [Fraction(0)] * (k - 1)
            return PadicNumber.from_exact(_solve_fraction_system(matrix, rhs), ctx)
        r = self.relprec
        rf = ctx.residue_field
        u0 = rf.encode(self.unit)
        y = tuple(rf.coeffs(rf.inv(u0))) if ctx.k > 1 else (pow(self.unit[0], -1, ctx.p),)
        got = 1
        while got < r:
            got = min(2 * got, r)
            uy = _unit_mul(self.unit, y, got, ctx)
            two_minus = tuple(((2 if i == 0 else 0) - c) % ctx.p**got for i, c in enumerate(uy))
            y = _unit_mul(y, two_minus, got, ctx)
        y = tuple(c % ctx.p**r for c in y)
        v = -self.valuation
        return PadicNumber(v, y, r, ctx, None, v + r)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inv()

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        result = PadicNumber.one(self.ctx)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PadicNumber.from_rational(other, self.ctx)
        if not isinstance(other, PadicNumber):
            return NotImplemented
        if self.is_exact and other.is_exact:
            return self.exact == other.exact
        return (self - other).is_zero()

    def __hash__(self):
        # equality-to-precision is not transitive; only a coarse hash is consistent
        return hash((self.ctx.p, self.ctx.k))

    # presentation ---------------------------------------------------------

    def to_json(self) -> dict:
        out: dict = {"val": None if self.is_zero() else self.valuation, "digits": self.digits}
        if self.ctx.k > 1:
            out["digits"] = [list(d) for d in out["digits"]]
        if self.is_exact:
            out["exact"] = [str(c) for c in self.exact]
        elif self.is_zero():
            out["absprec"] = self.absprec
        return out

    @classmethod
    def from_json(cls, data: dict, ctx: FieldContext) -> PadicNumber:
        if "exact" in data:
            return cls.from_exact([Fraction(c) for c in data["exact"]], ctx)
        if data.get("val") is None:
            return cls.zero_to(data["absprec"], ctx) if "absprec" in data else cls.zero(ctx)
        digits = [tuple(d) if isinstance(d, list) else d for d in data["digits"]]
        return cls.from_digits(data["val"], digits, ctx)

    def __str__(self):
        p = self.ctx.p
        if self.is_zero():
            return "0" if self.is_exact else f"O({p}^{self.absprec})"
        terms = []
        digits = self.digits
        if self.is_exact:
            # drop trailing zero digits of finite expansions
            while digits and (digits[-1] == 0 or digits[-1] == (0,) * self.ctx.k):
                digits = digits[:-1]
        for i, d in enumerate(digits):
            if d == 0 or d == (0,) * self.ctx.k:
                continue
            ds = str(d) if self.ctx.k == 1 else "(" + ",".join(map(str, d)) + ")"
            terms.append(ds if i == 0 else (f"{ds}*{p}" if i == 1 else f"{ds}*{p}^{i}"))
        if not self.is_exact:
            terms.append(f"O({p}^{self.relprec})")
        return f"{p}^{self.valuation} * ({' + '.join(terms)})"

    def __repr__(self):
        return f"PadicNumber({self})"


def ord_(x: PadicNumber) -> int | float:
    return x.valuation


def ac(x: PadicNumber) -> ResidueElement:
    ctx = x.ctx
    if x.is_zero():
        return ResidueElement(0, ctx)
    return ResidueElement(ctx.residue_field.encode(c % ctx.p for c in x.unit), ctx)


def legendre(u: ResidueElement) -> int:
    """+1 if u is a nonzero square in F_q, -1 otherwise."""
    if u.is_zero():
        raise ZeroInput("legendre symbol of 0")
    t = u ** ((u.ctx.q - 1) // 2)
    return 1 if t.value == 1 else -1


def residue_power_coset_reps(m: int, ctx: FieldContext) -> list[ResidueElement]:
    """Smallest representatives (in encoding order) of F_q^x / (F_q^x)^m."""
    if m < 1:
        raise ValueError("m must be >= 1")
    rf = ctx.residue_field
    powers = {rf.pow(u, m) for u in rf.units()}
    covered: set[int] = set()
    reps = []
    for u in rf.units():
        if u in covered:
            continue
        reps.append(ResidueElement(u, ctx))
        covered.update(rf.mul(u, h) for h in powers)
    assert len(reps) == math.gcd(m, ctx.q - 1)
    return reps


def field_power_coset_reps(m: int, ctx: FieldContext) -> list[PadicNumber]:
    """Representatives p^j * lift(u_i) of F^x / (F^x)^m, j-major order."""
    reps = residue_power_coset_reps(m, ctx)
    pi = PadicNumber.uniformizer(ctx)
    return [pi**j * PadicNumber.lift(u) for j in range(m) for u in reps]


def nonsquare_residue(ctx: FieldContext) -> ResidueElement:
    rf = ctx.residue_field
    for u in rf.units():
        if legendre(ResidueElement(u, ctx)) == -1:
            return ResidueElement(u, ctx)
    raise AssertionError("F_q has no non-square")  # unreachable for odd q


def nonsquare_unit(ctx: FieldContext) -> PadicNumber:
    """The fixed non-square unit: lift of the smallest non-residue."""
    return PadicNumber.lift(nonsquare_residue(ctx))


def iter_window(
    ctx: FieldContext, val_range: tuple[int, int], digits: int, ring_only: bool = False
) -> Iterable[PadicNumber]:
    """Canonical balls p^v * (u_0 + ... + u_{r-1} p^{r-1}) with u_0 != 0, plus exact 0."""
    lo, hi = val_range
    if ring_only:
        lo = max(lo, 0)
    yield PadicNumber.zero(ctx)
    q = ctx.q
    for v in range(lo, hi + 1):
        for lead in range(1, q):
            for rest in itertools.product(range(q), repeat=digits - 1):
                yield PadicNumber.from_digits(v, (lead, *rest), ctx)


def parse_element(text: str, ctx: FieldContext) -> PadicNumber:
    """Parse a sum of signed products such as ``1+pi``, ``-eps*pi^2`` or ``3/5``.

    Factors: integers, fractions ``a/b``, ``eps`` (the fixed non-square unit)
    and ``pi`` (the uniformizer), each optionally raised to ``^e``.
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty element")
    # split before a + or - that is not part of an exponent or a fraction
    pieces = re.split(r"(?<=[^\^/*+-])(?=[+-])", s)
    total = PadicNumber.zero(ctx)
    for piece in pieces:
        total = total + _parse_product(piece.lstrip("+") if piece.startswith("+") else piece, ctx)
    return total


def _parse_product(s: str, ctx: FieldContext) -> PadicNumber:
    sign = 1
    while s.startswith("-"):
        sign, s = -sign, s[1:]
    if not s:
        raise ValueError("empty term")
    value = PadicNumber.one(ctx)
    for factor in s.split("*"):
        base, _, exp = factor.partition("^")
        try:
            e = int(exp) if exp else 1
        except ValueError:
            raise ValueError(f"cannot parse exponent in {factor!r}") from None
        if base in ("eps", "ε"):
            b = nonsquare_unit(ctx)
        elif base in ("pi", "ϖ", "p"):
            b = PadicNumber.uniformizer(ctx)
        else:
            try:
                b = PadicNumber.from_rational(Fraction(base), ctx)
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"cannot parse factor {factor!r}") from exc
        value = value * b**e
    return -value if sign < 0 else value
