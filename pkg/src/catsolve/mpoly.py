"""Sparse multivariate polynomials over an exact coefficient field.

Monomials are exponent tuples against an immutable VarTable.  Coefficients
are gmpy2.mpq by default but anything with the numeric dunders (RatFunc,
AlgNum) works.  All operations are pure; no value is mutated after
construction.
"""

from __future__ import annotations

from gmpy2 import mpq, mpz

from .fields import rat_str

_SCALARS = (int, mpz, type(mpq(0)))


class VarTable:
    """Ordered, immutable list of variable names."""

    __slots__ = ("names", "index")

    def __init__(self, names):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        self.names = names
        self.index = {n: i for i, n in enumerate(names)}

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, VarTable) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __contains__(self, name):
        return name in self.index

    def extended(self, extra):
        return VarTable(self.names + tuple(extra))

    def __repr__(self):
        return "VarTable%r" % (self.names,)


def _drl_key(expts):
    # degrevlex-sortable key: larger key = larger monomial
    return (sum(expts),) + tuple(-e for e in reversed(expts))


class MPoly:
    __slots__ = ("vt", "terms")

    def __init__(self, vt, terms=None):
        self.vt = vt
        self.terms = {} if terms is None else terms

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(vt):
        return MPoly(vt, {})

    @staticmethod
    def const(vt, c):
        if isinstance(c, _SCALARS):
            c = mpq(c)
        if not c:
            return MPoly(vt, {})
        return MPoly(vt, {(0,) * len(vt): c})

    @staticmethod
    def gen(vt, name):
        e = [0] * len(vt)
        e[vt.index[name]] = 1
        return MPoly(vt, {tuple(e): mpq(1)})

    @staticmethod
    def gens(vt):
        return [MPoly.gen(vt, n) for n in vt.names]

    # -- predicates / accessors --------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_const(self):
        return all(not any(m) for m in self.terms)

    def const_value(self):
        if not self.terms:
            return mpq(0)
        ((m, c),) = self.terms.items()
        if any(m):
            raise ValueError("not a constant")
        return c

    def __eq__(self, other):
        if isinstance(other, _SCALARS):
            other = MPoly.const(self.vt, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        if self.vt != other.vt:
            raise ValueError("mismatched variable tables")
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.vt, frozenset(self.terms.items())))

    def degree(self, name):
        if not self.terms:
            return -1
        i = self.vt.index[name]
        return max(m[i] for m in self.terms)

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def variables(self):
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(self.vt.names[i])
        return used

    def num_terms(self):
        return len(self.terms)

    # -- ring operations ---------------------------------------------

    def _check(self, other):
        if isinstance(other, _SCALARS):
            return MPoly.const(self.vt, other)
        if isinstance(other, MPoly):
            if self.vt != other.vt:
                raise ValueError("mismatched variable tables")
            return other
        # foreign scalar type (RatFunc, AlgNum)
        return MPoly(self.vt, {(0,) * len(self.vt): other}) if other else MPoly(self.vt, {})

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return MPoly(self.vt, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.vt, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            other = mpq(other)
            if not other:
                return MPoly(self.vt, {})
            return MPoly(self.vt, {m: c * other for m, c in self.terms.items()})
        if not isinstance(other, MPoly):
            if not other:
                return MPoly(self.vt, {})
            return MPoly(self.vt, {m: c * other for m, c in self.terms.items()})
        if self.vt != other.vt:
            raise ValueError("mismatched variable tables")
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                s = out.get(m)
                if s is None:
                    out[m] = ca * cb
                else:
                    s = s + ca * cb
                    if s:
                        out[m] = s
                    else:
                        del out[m]
        return MPoly(self.vt, out)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative exponent")
        r = MPoly.const(self.vt, 1)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def __truediv__(self, other):
        if isinstance(other, _SCALARS):
            return self * (mpq(1) / mpq(other))
        if isinstance(other, MPoly):
            return self.divexact(other)
        return self * (1 / other)

    # -- calculus and substitution -----------------------------------

    def deriv(self, name):
        i = self.vt.index[name]
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if not e:
                continue
            m2 = m[:i] + (e - 1,) + m[i + 1:]
            c2 = c * e
            s = out.get(m2)
            out[m2] = c2 if s is None else s + c2
        return MPoly(self.vt, {m: c for m, c in out.items() if c})

    def eval(self, values, vt=None):
        """Substitute values (MPoly or scalar) for named variables.

        Unmapped variables must exist in the target table `vt` (defaults to
        self.vt) and map to themselves.
        """
        tgt = vt or self.vt
        subs = {}
        for i, n in enumerate(self.vt.names):
            if n in values:
                v = values[n]
                if not isinstance(v, MPoly):
                    v = MPoly.const(tgt, mpq(v)) if isinstance(v, _SCALARS) else MPoly(tgt, {(0,) * len(tgt): v} if v else {})
                subs[i] = v
            else:
                subs[i] = MPoly.gen(tgt, n)
        pow_cache = {}
        out = MPoly.zero(tgt)
        for m, c in self.terms.items():
            term = MPoly.const(tgt, 1) * c
            for i, e in enumerate(m):
                if not e:
                    continue
                key = (i, e)
                pe = pow_cache.get(key)
                if pe is None:
                    pe = subs[i] ** e
                    pow_cache[key] = pe
                term = term * pe
            out = out + term
        return out

    def rename_table(self, vt, mapping=None):
        """Move to another table; `mapping` maps old names to new names."""
        mapping = mapping or {}
        idx = [vt.index.get(mapping.get(n, n)) for n in self.vt.names]
        out = {}
        for m, c in self.terms.items():
            e = [0] * len(vt)
            for i, ei in enumerate(m):
                if ei:
                    if idx[i] is None:
                        raise ValueError("variable %r not in target table" % self.vt.names[i])
                    e[idx[i]] += ei
            out[tuple(e)] = c
        return MPoly(vt, out)

    def as_univariate(self, name):
        """Coefficient list in `name` (index = exponent), coefficients are
        MPolys in the same table with zero exponent on `name`."""
        i = self.vt.index[name]
        d = self.degree(name)
        coeffs = [MPoly.zero(self.vt) for _ in range(max(d + 1, 1))]
        for m, c in self.terms.items():
            e = m[i]
            m2 = m[:i] + (0,) + m[i + 1:]
            coeffs[e] = coeffs[e] + MPoly(self.vt, {m2: c})
        return coeffs

    def coeff_of(self, name, e):
        i = self.vt.index[name]
        out = {}
        for m, c in self.terms.items():
            if m[i] == e:
                out[m[:i] + (0,) + m[i + 1:]] = c
        return MPoly(self.vt, out)

    # -- leading-term machinery (default degrevlex) ------------------

    def lead_monomial(self):
        return max(self.terms, key=_drl_key)

    def lead_coeff(self):
        return self.terms[self.lead_monomial()]

    def divexact(self, q):
        """Exact multivariate division; raises ValueError if not exact."""
        if not q:
            raise ZeroDivisionError("division by zero polynomial")
        if not self:
            return self
        if q.is_const():
            return self * (1 / q.const_value())
        lmq = q.lead_monomial()
        lcq = q.terms[lmq]
        rem = dict(self.terms)
        out = {}
        while rem:
            lm = max(rem, key=_drl_key)
            diff = tuple(a - b for a, b in zip(lm, lmq))
            if any(d < 0 for d in diff):
                raise ValueError("inexact multivariate division")
            c = rem[lm] / lcq
            out[diff] = c
            for m, cq in q.terms.items():
                m2 = tuple(a + b for a, b in zip(diff, m))
                s = rem.get(m2)
                s = (s if s is not None else 0) - c * cq
                if s:
                    rem[m2] = s
                else:
                    rem.pop(m2, None)
        return MPoly(self.vt, out)

    def divides(self, other):
        try:
            other.divexact(self)
            return True
        except ValueError:
            return False

    # -- content / normalization (rational coefficients) -------------

    def primitive(self):
        """Return (primitive part, content): integer coefficients, gcd 1,
        positive leading (degrevlex) coefficient."""
        if not self.terms:
            return self, mpq(1)
        from math import gcd, lcm
        den = 1
        for c in self.terms.values():
            den = lcm(den, int(mpq(c).denominator))
        g = 0
        for c in self.terms.values():
            g = gcd(g, int(mpq(c).numerator) * (den // int(mpq(c).denominator)))
        if g == 0:
            g = 1
        if mpq(self.lead_coeff()) < 0:
            g = -g
        cont = mpq(g, den)
        inv = 1 / cont
        return MPoly(self.vt, {m: mpq(c) * inv for m, c in self.terms.items()}), cont

    # -- printing / parsing ------------------------------------------

    def to_str(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=_drl_key, reverse=True):
            c = self.terms[m]
            factors = []
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(self.vt.names[i])
                elif e > 1:
                    factors.append("%s^%d" % (self.vt.names[i], e))
            if isinstance(c, _SCALARS):
                cs = rat_str(c)
            else:
                cs = str(c)
            if not factors:
                parts.append(cs)
            elif cs == "1":
                parts.append("*".join(factors))
            elif cs == "-1":
                parts.append("-" + "*".join(factors))
            else:
                parts.append(cs + "*" + "*".join(factors))
        out = parts[0]
        for p in parts[1:]:
            if p.startswith("-"):
                out += " - " + p[1:]
            else:
                out += " + " + p
        return out

    def __repr__(self):
        return "MPoly(%s)" % self.to_str()

    @staticmethod
    def parse(text, vt):
        return _parse_poly(text, vt)


# ---------------------------------------------------------------------------
# polynomial expression parser (used by tests, fixtures and reports)

def _tokenize(text):
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("num", text[i:j]))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("name", text[i:j]))
            i = j
        elif ch in "+-*/^()":
            toks.append((ch, ch))
            i += 1
        else:
            raise ValueError("unexpected character %r at position %d" % (ch, i))
    toks.append(("end", ""))
    return toks


class _PolyParser:
    def __init__(self, toks, vt):
        self.toks = toks
        self.pos = 0
        self.vt = vt

    def peek(self):
        return self.toks[self.pos][0]

    def next(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expr(self):
        if self.peek() == "-":
            self.next()
            v = -self.term()
        else:
            if self.peek() == "+":
                self.next()
            v = self.term()
        while self.peek() in "+-":
            op = self.next()[0]
            t = self.term()
            v = v + t if op == "+" else v - t
        return v

    def term(self):
        v = self.factor()
        while self.peek() in "*/":
            op = self.next()[0]
            f = self.factor()
            if op == "*":
                v = v * f
            else:
                if not f.is_const():
                    raise ValueError("division only by constants in polynomial text")
                v = v * (mpq(1) / f.const_value())
        return v

    def factor(self):
        v = self.atom()
        while self.peek() == "^":
            self.next()
            neg = False
            if self.peek() == "-":
                raise ValueError("negative exponents not allowed")
            kind, val = self.next()
            if kind != "num":
                raise ValueError("exponent must be an integer")
            v = v ** int(val)
            del neg
        return v

    def atom(self):
        kind, val = self.next()
        if kind == "num":
            return MPoly.const(self.vt, int(val))
        if kind == "name":
            if val not in self.vt:
                raise ValueError("unknown variable %r" % val)
            return MPoly.gen(self.vt, val)
        if kind == "(":
            v = self.expr()
            if self.next()[0] != ")":
                raise ValueError("missing closing parenthesis")
            return v
        if kind == "-":
            return -self.atom()
        raise ValueError("unexpected token %r" % val)


def _parse_poly(text, vt):
    p = _PolyParser(_tokenize(text), vt)
    v = p.expr()
    if p.peek() != "end":
        raise ValueError("trailing input in polynomial text")
    return v


# ---------------------------------------------------------------------------
# determinants, resultants, gcd

def pdet(rows):
    """Exact determinant of a square MPoly matrix.

    Cofactor expansion up to 3x3, fraction-free Bareiss elimination above.
    """
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("non-square matrix")
    if n == 0:
        raise ValueError("empty matrix")
    vt = rows[0][0].vt
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if n == 3:
        a, b, c = rows[0]
        d, e, f = rows[1]
        g, h, i = rows[2]
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    m = [list(r) for r in rows]
    sign = 1
    prev = MPoly.const(vt, 1)
    for k in range(n - 1):
        if not m[k][k]:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return MPoly.zero(vt)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num.divexact(prev)
            m[i][k] = MPoly.zero(vt)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def cofactor_det(rows):
    """Independent cofactor-expansion determinant (test oracle)."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("non-square matrix")
    if n == 1:
        return rows[0][0]
    vt = rows[0][0].vt
    out = MPoly.zero(vt)
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * cofactor_det(minor)
        out = out + term if j % 2 == 0 else out - term
    return out


def resultant(p, q, name):
    """det of the Sylvester matrix of p, q with respect to `name`,
    rows of p first."""
    if not p or not q:
        raise ValueError("resultant of zero polynomial")
    dp, dq = p.degree(name), q.degree(name)
    if dp == 0 and dq == 0:
        raise ValueError("both inputs constant in %s" % name)
    if dp == 0:
        return p ** dq
    if dq == 0:
        return q ** dp
    cp = p.as_univariate(name)
    cq = q.as_univariate(name)
    vt = p.vt
    size = dp + dq
    zero = MPoly.zero(vt)
    rows = []
    for i in range(dq):
        row = [zero] * size
        for j, c in enumerate(cp):
            row[i + dp - j] = c  # descending powers
        rows.append(row)
    for i in range(dp):
        row = [zero] * size
        for j, c in enumerate(cq):
            row[i + dq - j] = c
        rows.append(row)
    return pdet(rows)


def pseudo_divide(p, q, name):
    """Return (quo, rem, mult) with mult*p = quo*q + rem and
    deg_name(rem) < deg_name(q); mult = lc_name(q)^(deg p - deg q + 1)."""
    if not q:
        raise ValueError("pseudo-division by zero")
    dq = q.degree(name)
    if dq <= 0:
        raise ValueError("divisor has degree zero in %s" % name)
    dp = p.degree(name)
    vt = p.vt
    if dp < dq:
        return MPoly.zero(vt), p, MPoly.const(vt, 1)
    lcq = q.coeff_of(name, dq)
    steps = dp - dq + 1
    rem = p
    quo = MPoly.zero(vt)
    xvar = MPoly.gen(vt, name)
    done = 0
    while rem and rem.degree(name) >= dq:
        dr = rem.degree(name)
        lcr = rem.coeff_of(name, dr)
        quo = quo * lcq + lcr * xvar ** (dr - dq)
        rem = rem * lcq - lcr * xvar ** (dr - dq) * q
        done += 1
    if done < steps:
        scale = lcq ** (steps - done)
        quo = quo * scale
        rem = rem * scale
    return quo, rem, lcq ** steps


def _content_wrt(p, name):
    coeffs = [c for c in p.as_univariate(name) if c]
    g = coeffs[0]
    for c in coeffs[1:]:
        g = mgcd(g, c)
        if g.is_const():
            break
    return g


def mgcd(p, q):
    """Multivariate GCD via primitive subresultant PRS, normalized to a
    primitive polynomial with positive leading coefficient."""
    if not p:
        return q.primitive()[0] if q else p
    if not q:
        return p.primitive()[0]
    if p.is_const() or q.is_const():
        return MPoly.const(p.vt, 1)
    pv, qv = p.variables(), q.variables()
    common = [n for n in p.vt.names if n in pv and n in qv]
    if not common:
        return MPoly.const(p.vt, 1)
    name = common[-1]
    if p.degree(name) < q.degree(name):
        p, q = q, p
    cont_p = _content_wrt(p, name)
    cont_q = _content_wrt(q, name)
    gc = mgcd(cont_p, cont_q)
    a = p.divexact(cont_p)
    b = q.divexact(cont_q)
    while True:
        _, r, _ = pseudo_divide(a, b, name)
        if not r:
            break
        if r.degree(name) == 0:
            b = MPoly.const(p.vt, 1)
            break
        a, b = b, r.divexact(_content_wrt(r, name))
    if b.is_const():
        return gc
    return (gc * b.primitive()[0]).primitive()[0]


def squarefree_part(p, name):
    """p / gcd(p, dp/d name), primitive with positive leading coefficient."""
    if not p:
        raise ValueError("squarefree part of zero")
    dp = p.deriv(name)
    if not dp:
        return p.primitive()[0]
    g = mgcd(p, dp)
    return p.divexact(g).primitive()[0]
