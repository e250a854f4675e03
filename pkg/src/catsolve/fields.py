"""Exact coefficient arithmetic: rationals, univariate polynomials over a
field, rational functions in t, and simple algebraic extensions.

All values are immutable.  Elements interoperate through the usual numeric
dunders, with plain Python ints accepted as scalars everywhere.
"""

from __future__ import annotations

from gmpy2 import mpq, mpz


def rat(x, y=None):
    """Coerce to an exact rational (gmpy2.mpq)."""
    if y is not None:
        return mpq(x, y)
    if isinstance(x, str):
        return mpq(x)
    return mpq(x)


def rat_str(c) -> str:
    """Canonical text of a rational: `p` or `p/q`."""
    c = mpq(c)
    if c.denominator == 1:
        return str(c.numerator)
    return "%s/%s" % (c.numerator, c.denominator)


def _as_coeffs(x):
    if isinstance(x, UPoly):
        return x.coeffs
    if x:
        return (x,)
    return ()


class UPoly:
    """Dense univariate polynomial over a field, normalized (no trailing
    zeros).  The coefficient type only needs the numeric dunders."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        coeffs = list(coeffs)
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    @staticmethod
    def const(c):
        return UPoly((c,)) if c else UPoly(())

    @staticmethod
    def gen(one=None):
        one = mpq(1) if one is None else one
        return UPoly((one * 0, one))

    @property
    def degree(self):
        # degree of the zero polynomial is -1 by convention
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, UPoly):
            other = UPoly(_as_coeffs(other))
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    @property
    def lead(self):
        if not self.coeffs:
            raise ZeroDivisionError("leading coefficient of zero polynomial")
        return self.coeffs[-1]

    def __add__(self, other):
        a, b = self.coeffs, _as_coeffs(other)
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return UPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other if isinstance(other, UPoly) else UPoly(_as_coeffs(other)).__neg__())

    def __rsub__(self, other):
        return UPoly(_as_coeffs(other)) - self

    def __mul__(self, other):
        if not isinstance(other, UPoly):
            if not other:
                return UPoly(())
            return UPoly([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UPoly(())
        out = [a[0] * 0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                out[i + j] = out[i + j] + ca * cb
        return UPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative exponent")
        r = UPoly((mpq(1),)) if not self.coeffs else UPoly.const(self.coeffs[0] * 0 + 1)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def divmod(self, other):
        """Exact field divmod."""
        if not other:
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        db, lb = other.degree, other.lead
        if len(rem) - 1 < db:
            return UPoly(()), self
        quo = [rem[0] * 0] * (len(rem) - db)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if not c:
                continue
            q = c / lb
            quo[i - db] = q
            for j, cb in enumerate(other.coeffs):
                rem[i - db + j] = rem[i - db + j] - q * cb
        return UPoly(quo), UPoly(rem)

    def __truediv__(self, other):
        if isinstance(other, UPoly):
            q, r = self.divmod(other)
            if r:
                raise ValueError("inexact polynomial division")
            return q
        return self * (1 / other if not isinstance(other, int) else mpq(1, other))

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self):
        if not self:
            return self
        inv = 1 / self.lead
        return UPoly([c * inv for c in self.coeffs])

    def gcd(self, other):
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic()

    def deriv(self):
        return UPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def eval(self, x):
        r = 0
        for c in reversed(self.coeffs):
            r = r * x + c
        return r

    def shift(self, a):
        """Compose with u -> u + a."""
        r = UPoly(())
        xa = UPoly((a, a * 0 + 1))
        for c in reversed(self.coeffs):
            r = r * xa + UPoly.const(c)
        return r

    def divexact_linear(self, a):
        """Exact division by (u - a) via synthetic division."""
        if not self.coeffs:
            return self
        n = len(self.coeffs)
        out = [None] * (n - 1)
        carry = self.coeffs[-1]
        for i in range(n - 2, -1, -1):
            out[i] = carry
            carry = self.coeffs[i] + carry * a
        if carry:
            raise ValueError("division by (u - a) leaves a remainder")
        return UPoly(out)

    def content_den_clear(self):
        """Return (primitive integer-coefficient UPoly, rational content)
        with positive leading coefficient, for mpq coefficients."""
        if not self.coeffs:
            return self, mpq(1)
        from math import gcd, lcm
        den = 1
        for c in self.coeffs:
            den = lcm(den, int(mpq(c).denominator))
        nums = [int(mpq(c).numerator) * (den // int(mpq(c).denominator)) for c in self.coeffs]
        g = 0
        for v in nums:
            g = gcd(g, v)
        if g == 0:
            g = 1
        if nums[-1] < 0:
            g = -g
        cont = mpq(g, den)
        return UPoly([mpq(v, g) for v in nums]), cont

    def to_str(self, var="t"):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            if i == 0:
                parts.append(rat_str(c))
            else:
                v = var if i == 1 else "%s^%d" % (var, i)
                if c == 1:
                    parts.append(v)
                elif c == -1:
                    parts.append("-" + v)
                else:
                    parts.append("%s*%s" % (rat_str(c), v))
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        return "UPoly(%s)" % self.to_str()


class RatFunc:
    """Rational function num/den in t over Q, always reduced, den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _normalized=False):
        if not isinstance(num, UPoly):
            num = UPoly.const(mpq(num)) if num else UPoly(())
        if den is None:
            den = UPoly((mpq(1),))
        elif not isinstance(den, UPoly):
            den = UPoly.const(mpq(den))
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not _normalized:
            if not num:
                den = UPoly((mpq(1),))
            else:
                g = num.gcd(den)
                if g.degree > 0:
                    num = num / g
                    den = den / g
                lead = den.lead
                if lead != 1:
                    inv = 1 / lead
                    num = num * inv
                    den = den * inv
        self.num = num
        self.den = den

    @staticmethod
    def t():
        return RatFunc(UPoly.gen())

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        other = _ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        other = _ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        o = _ratfunc(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return _ratfunc(other) - self

    def __mul__(self, other):
        other = _ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _ratfunc(other)
        if other is NotImplemented:
            return NotImplemented
        if not other:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _ratfunc(other) / self

    def __pow__(self, e):
        if e < 0:
            return RatFunc(self.den, self.num) ** (-e)
        return RatFunc(self.num ** e, self.den ** e)

    def __str__(self):
        if self.den.degree == 0 and self.den.lead == 1:
            return "(%s)" % self.num.to_str()
        return "(%s)/(%s)" % (self.num.to_str(), self.den.to_str())

    __repr__ = __str__


def _ratfunc(x):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, (int, mpz, type(mpq(0)))):
        return RatFunc(UPoly.const(mpq(x)))
    if isinstance(x, UPoly):
        return RatFunc(x)
    return NotImplemented


class ZeroDivisorError(ArithmeticError):
    """Inversion failed in a (possibly non-field) algebraic extension."""


class AlgebraicExtension:
    """Q[theta]/(minpoly) for a squarefree minpoly over the base field.

    If minpoly is reducible the quotient is not a field; inversion then may
    raise ZeroDivisorError, which callers treat as an inconclusive result.
    """

    def __init__(self, minpoly: UPoly, base=None, name="theta"):
        if minpoly.degree < 1:
            raise ValueError("minpoly must have positive degree")
        self.minpoly = minpoly.monic()
        self.degree = self.minpoly.degree
        self.base = base
        self.name = name

    def __call__(self, coeffs):
        return AlgNum(self, coeffs)

    def const(self, c):
        return AlgNum(self, (c,))

    @property
    def gen(self):
        return AlgNum(self, (0, 1) if self.degree > 1 else (-self.minpoly[0],))

    def __eq__(self, other):
        return isinstance(other, AlgebraicExtension) and self.minpoly == other.minpoly

    def __hash__(self):
        return hash(("algext", self.minpoly))


class AlgNum:
    __slots__ = ("ext", "coeffs")

    def __init__(self, ext, coeffs):
        self.ext = ext
        coeffs = list(coeffs)
        if len(coeffs) >= ext.degree:
            p = UPoly(coeffs) % ext.minpoly
            coeffs = list(p.coeffs)
        while len(coeffs) < ext.degree:
            coeffs.append(mpq(0))
        self.coeffs = tuple(mpq(c) if isinstance(c, (int, mpz)) else c for c in coeffs)

    def _coerce(self, other):
        if isinstance(other, AlgNum):
            if other.ext != self.ext:
                raise ValueError("mixed extensions")
            return other
        if isinstance(other, (int, mpz, type(mpq(0)))):
            return self.ext.const(mpq(other))
        return None

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash((self.ext, self.coeffs))

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return AlgNum(self.ext, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return AlgNum(self.ext, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = UPoly(self.coeffs) * UPoly(o.coeffs)
        return AlgNum(self.ext, (p % self.ext.minpoly).coeffs)

    __rmul__ = __mul__

    def inv(self):
        # extended Euclid against the minpoly
        a, b = self.ext.minpoly, UPoly(self.coeffs)
        if not b:
            raise ZeroDivisionError("inversion of zero")
        s0, s1 = UPoly(()), UPoly((mpq(1),))
        while b:
            q, r = a.divmod(b)
            a, b = b, r
            s0, s1 = s1, s0 - q * s1
        if a.degree != 0:
            raise ZeroDivisorError("non-invertible element (reducible minpoly)")
        return AlgNum(self.ext, (s0 * (1 / a.lead)).coeffs)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inv()

    def __pow__(self, e):
        r = self.ext.const(mpq(1))
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def __repr__(self):
        return "AlgNum(%s; %s)" % (UPoly(self.coeffs).to_str(self.ext.name), self.ext.minpoly.to_str(self.ext.name))
