"""Truncated power-series engine.

TruncBiSeries lives in K[u][[t]] mod t^N (one u-polynomial per t power);
TruncTSeries lives in F[[t^(1/d)]] with `len(coeffs)` known slots, where F
is Q or a simple algebraic extension.

solve_series computes the unique series solution of a DDE system by the
t-adic fixed point; the default schedule extracts one exact t-coefficient
per step through cached online products, the "jacobi" schedule is the
plain simultaneous iteration (used as a cross-check oracle).
"""

from __future__ import annotations

from gmpy2 import mpq, mpz

from .fields import UPoly
from .mpoly import MPoly

_SCALARS = (int, mpz, type(mpq(0)))


class MalformedSystemError(ValueError):
    """The equations violate the DDE shape (inexact (u-a) division or a
    non-contracting t-free part)."""


def delta_upoly(p: UPoly, a) -> UPoly:
    """(p(u) - p(a)) / (u - a), exact."""
    return (p - UPoly.const(p.eval(a))).divexact_linear(a)


class TruncBiSeries:
    """Element of K[u][[t]] truncated at t^N."""

    __slots__ = ("N", "coeffs")

    def __init__(self, N, coeffs=()):
        coeffs = list(coeffs)[:N]
        while len(coeffs) < N:
            coeffs.append(UPoly(()))
        self.N = N
        self.coeffs = coeffs

    @staticmethod
    def from_upoly(p, N):
        return TruncBiSeries(N, [p])

    @staticmethod
    def const(c, N):
        return TruncBiSeries(N, [UPoly.const(mpq(c))])

    def __eq__(self, other):
        return isinstance(other, TruncBiSeries) and self.N == other.N and self.coeffs == other.coeffs

    def __bool__(self):
        return any(self.coeffs)

    def __add__(self, other):
        if isinstance(other, _SCALARS):
            other = TruncBiSeries.const(other, self.N)
        N = min(self.N, other.N)
        return TruncBiSeries(N, [self.coeffs[i] + other.coeffs[i] for i in range(N)])

    __radd__ = __add__

    def __neg__(self):
        return TruncBiSeries(self.N, [-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, _SCALARS):
            other = TruncBiSeries.const(other, self.N)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (UPoly,) + _SCALARS):
            return TruncBiSeries(self.N, [c * other for c in self.coeffs])
        N = min(self.N, other.N)
        out = [UPoly(()) for _ in range(N)]
        for i, a in enumerate(self.coeffs[:N]):
            if not a:
                continue
            for j, b in enumerate(other.coeffs[: N - i]):
                if b:
                    out[i + j] = out[i + j] + a * b
        return TruncBiSeries(N, out)

    __rmul__ = __mul__

    def __pow__(self, e):
        r = TruncBiSeries.const(1, self.N)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def shift_t(self, k):
        """Multiply by t^k."""
        return TruncBiSeries(self.N, [UPoly(())] * k + self.coeffs[: self.N - k])

    def delta(self, a):
        return TruncBiSeries(self.N, [delta_upoly(c, a) for c in self.coeffs])

    def deriv_u(self):
        return TruncBiSeries(self.N, [c.deriv() for c in self.coeffs])

    def specialize(self, a, j=0):
        """TruncTSeries of d/du^j of the series at u = a."""
        out = []
        for c in self.coeffs:
            for _ in range(j):
                c = c.deriv()
            out.append(c.eval(a) if c else mpq(0))
        return TruncTSeries(1, out)

    def compose_u(self, U: "TruncTSeries") -> "TruncTSeries":
        """Substitute u = U(t); result has U's ramification."""
        L = len(U.coeffs)
        zero = TruncTSeries(U.d, [U._zero()] * L)
        one = TruncTSeries(U.d, [U._zero() + 1] + [U._zero()] * (L - 1))
        out = zero
        for j in range(min(self.N, (L + U.d - 1) // U.d)):
            c = self.coeffs[j]
            if not c:
                continue
            val = zero
            for ck in reversed(c.coeffs):
                val = val * U + (one * ck)
            out = out + val.shift(j * U.d)
        return out

    def truncate(self, N):
        return TruncBiSeries(min(N, self.N), self.coeffs[:N])

    def to_str(self):
        parts = []
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            cs = c.to_str("u")
            if j == 0:
                parts.append(cs if c.degree <= 0 else "(%s)" % cs)
            else:
                tpow = "t" if j == 1 else "t^%d" % j
                if cs == "1":
                    parts.append(tpow)
                elif c.degree <= 0 and not cs.startswith("-"):
                    parts.append("%s*%s" % (cs, tpow))
                else:
                    parts.append("(%s)*%s" % (cs, tpow))
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return "TruncBiSeries(%s + O(t^%d))" % (self.to_str(), self.N)


class TruncTSeries:
    """Truncated series in t^(1/d) with coefficients in Q or Q[theta]."""

    __slots__ = ("d", "coeffs")

    def __init__(self, d, coeffs):
        if d < 1:
            raise ValueError("ramification must be >= 1")
        self.d = d
        self.coeffs = list(coeffs)

    def _zero(self):
        for c in self.coeffs:
            return c * 0
        return mpq(0)

    @staticmethod
    def t_series(d, L):
        """The series `t` itself with ramification d and L slots."""
        coeffs = [mpq(0)] * L
        if d < L:
            coeffs[d] = mpq(1)
        return TruncTSeries(d, coeffs)

    @staticmethod
    def const(c, L, d=1):
        coeffs = [mpq(c) * 0] * L if not isinstance(c, _SCALARS) else [mpq(0)] * L
        if L:
            coeffs[0] = mpq(c) if isinstance(c, _SCALARS) else c
        return TruncTSeries(d, coeffs)

    @property
    def prec(self):
        # known modulo t^(prec)
        return mpq(len(self.coeffs), self.d)

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, TruncTSeries):
            return NotImplemented
        a, b = _align(self, other)
        return a.coeffs == b.coeffs

    def with_ram(self, d2):
        if d2 == self.d:
            return self
        if d2 % self.d:
            raise ValueError("ramification must be a multiple")
        f = d2 // self.d
        out = [self._zero()] * (len(self.coeffs) * f)
        for i, c in enumerate(self.coeffs):
            out[i * f] = c
        return TruncTSeries(d2, out)

    def truncate(self, L):
        return TruncTSeries(self.d, self.coeffs[:L])

    def shift(self, k):
        """Multiply by t^(k/d)."""
        if k < 0:
            # exact division by t^(-k/d): leading slots must vanish
            if any(self.coeffs[: -k]):
                raise ValueError("inexact t-power division")
            return TruncTSeries(self.d, self.coeffs[-k:] + [self._zero()] * (-k))
        return TruncTSeries(self.d, ([self._zero()] * k + self.coeffs)[: len(self.coeffs)])

    def valuation(self):
        """(slot index of first nonzero coefficient) or None if zero mod
        the truncation.  The t-valuation is index/d."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def __add__(self, other):
        if isinstance(other, _SCALARS):
            other = TruncTSeries.const(other, len(self.coeffs), self.d)
        a, b = _align(self, other)
        return TruncTSeries(a.d, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return TruncTSeries(self.d, [-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, _SCALARS):
            other = TruncTSeries.const(other, len(self.coeffs), self.d)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncTSeries):
            return TruncTSeries(self.d, [c * other for c in self.coeffs])
        a, b = _align(self, other)
        L = min(len(a.coeffs), len(b.coeffs))
        zero = a._zero() if a.coeffs else b._zero()
        out = [zero] * L
        for i, x in enumerate(a.coeffs[:L]):
            if not x:
                continue
            for j, y in enumerate(b.coeffs[: L - i]):
                if y:
                    out[i + j] = out[i + j] + x * y
        return TruncTSeries(a.d, out)

    __rmul__ = __mul__

    def __pow__(self, e):
        r = TruncTSeries.const(1, len(self.coeffs), self.d)
        if not isinstance(self.coeffs[0], _SCALARS):
            r = TruncTSeries(self.d, [self._zero() + 1] + [self._zero()] * (len(self.coeffs) - 1))
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def invert_unit(self):
        """Inverse of a series with nonzero constant slot."""
        if not self.coeffs or not self.coeffs[0]:
            raise ValueError("not a unit (zero constant term)")
        c0 = self.coeffs[0]
        inv0 = 1 / c0
        L = len(self.coeffs)
        out = [inv0] + [self._zero()] * (L - 1)
        for i in range(1, L):
            s = self._zero()
            for j in range(1, i + 1):
                if self.coeffs[j]:
                    s = s + self.coeffs[j] * out[i - j]
            out[i] = -inv0 * s
        return TruncTSeries(self.d, out)

    def divide(self, other):
        """Exact division by a nonzero series (valuation shift + unit
        inversion)."""
        v = other.valuation()
        if v is None:
            raise ZeroDivisionError("division by zero series")
        a, b = _align(self, other)
        v = b.valuation()
        num = a.shift(-v) if v else a
        den = TruncTSeries(b.d, b.coeffs[v:] + [b._zero()] * v)
        return num * den.invert_unit()

    def to_str(self):
        parts = []
        from .fields import rat_str
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if self.d == 1:
                e = str(i)
            else:
                e = "%d/%d" % (i, self.d)
            cs = rat_str(c) if isinstance(c, _SCALARS) else "(%s)" % c
            if i == 0:
                parts.append(cs)
            elif cs == "1":
                parts.append("t^%s" % e if e != "1" else "t")
            else:
                parts.append("%s*t^%s" % (cs, e) if e != "1" else "%s*t" % cs)
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return "TruncTSeries(%s + O(t^%s))" % (self.to_str(), self.prec)


def _align(a: TruncTSeries, b: TruncTSeries):
    if a.d != b.d:
        from math import lcm
        d = lcm(a.d, b.d)
        a = a.with_ram(d)
        b = b.with_ram(d)
    L = min(len(a.coeffs), len(b.coeffs))
    return a.truncate(L), b.truncate(L)


# ---------------------------------------------------------------------------
# evaluation of polynomials at series

def eval_at_series(p: MPoly, bind, N) -> TruncBiSeries:
    """Exact truncated evaluation of p with every non-(t, u) variable bound
    to a TruncBiSeries (or TruncTSeries of ramification 1, or a scalar)."""
    values = {}
    for name in p.variables():
        if name in ("t", "u"):
            continue
        if name not in bind:
            raise ValueError("unbound variable %r" % name)
    for name, v in bind.items():
        if isinstance(v, TruncTSeries):
            if v.d != 1:
                raise ValueError("ramified series cannot bind a bivariate evaluation")
            values[name] = TruncBiSeries(min(N, len(v.coeffs)), [UPoly.const(c) for c in v.coeffs])
        elif isinstance(v, TruncBiSeries):
            values[name] = v.truncate(N)
        else:
            values[name] = TruncBiSeries.const(v, N)
    u = UPoly.gen()
    pow_cache = {}
    out = TruncBiSeries(N)
    for m, c in p.terms.items():
        term = None
        et = eu = 0
        for i, e in enumerate(m):
            if not e:
                continue
            name = p.vt.names[i]
            if name == "t":
                et = e
                continue
            if name == "u":
                eu = e
                continue
            key = (name, e)
            pe = pow_cache.get(key)
            if pe is None:
                pe = values[name] ** e
                pow_cache[key] = pe
            term = pe if term is None else term * pe
        if term is None:
            term = TruncBiSeries.const(1, N)
        term = term * (u ** eu * c) if eu else term * c
        if et:
            term = term.shift_t(et)
        out = out + term
    return out


def eval_at_tseries(p: MPoly, bind) -> TruncTSeries:
    """Evaluate p with every variable (including t and u) bound to a
    TruncTSeries over a common field."""
    values = dict(bind)
    ref = None
    for v in values.values():
        ref = v if ref is None else ref
    if ref is None:
        raise ValueError("empty binding")
    for name in p.variables():
        if name == "t" and "t" not in values:
            from math import lcm
            d = max(v.d for v in values.values())
            L = max(len(v.with_ram(d).coeffs) for v in values.values())
            values["t"] = TruncTSeries.t_series(d, L)
        elif name not in values:
            raise ValueError("unbound variable %r" % name)
    pow_cache = {}
    out = None
    for m, c in p.terms.items():
        term = None
        for i, e in enumerate(m):
            if not e:
                continue
            name = p.vt.names[i]
            key = (name, e)
            pe = pow_cache.get(key)
            if pe is None:
                pe = values[name] ** e
                pow_cache[key] = pe
            term = pe if term is None else term * pe
        if term is None:
            some = next(iter(values.values()))
            term = some * 0 + 1 if not isinstance(some.coeffs[0], _SCALARS) else TruncTSeries.const(1, len(some.coeffs), some.d)
        term = term * c
        out = term if out is None else out + term
    if out is None:
        some = next(iter(values.values()))
        out = some * 0
    return out


def specialize(series: TruncBiSeries, a, j=0) -> TruncTSeries:
    """d^j/du^j of the series evaluated at u = a."""
    if j < 0:
        raise ValueError("derivative order must be >= 0")
    return series.specialize(mpq(a), j)


# ---------------------------------------------------------------------------
# series solution of DDE systems

class _ProdNode:
    __slots__ = ("a", "b", "cache")

    def __init__(self, a, b):
        self.a = a
        self.b = b
        self.cache = []

    def coeff(self, j):
        while len(self.cache) <= j:
            jj = len(self.cache)
            s = UPoly(())
            for i in range(jj + 1):
                x = self.a.coeff(i)
                if not x:
                    continue
                y = self.b.coeff(jj - i)
                if y:
                    s = s + x * y
            self.cache.append(s)
        return self.cache[j]


class _ViewNode:
    """Delta^l applied to unknown m (coefficient-wise in t)."""

    __slots__ = ("F", "m", "l", "a", "cache")

    def __init__(self, F, m, l, a):
        self.F = F
        self.m = m
        self.l = l
        self.a = a
        self.cache = []

    def coeff(self, j):
        while len(self.cache) <= j:
            c = self.F[self.m][len(self.cache)]
            for _ in range(self.l):
                try:
                    c = delta_upoly(c, self.a)
                except ValueError:
                    raise MalformedSystemError("discrete derivative left a remainder")
            self.cache.append(c)
        return self.cache[j]


def _compile_equation(sys, i, F, nodes, a):
    """Term list [(coeff UPoly-in-u, et, node or (m 'linear'))]."""
    num = sys.rhs[i].num
    vt = num.vt
    t_ix = vt.index["t"]
    u_ix = vt.index["u"]
    yinfo = sys.yvar_map  # name -> (m, l)
    terms = []
    for mono, c in num.terms.items():
        et = mono[t_ix]
        eu = mono[u_ix]
        factors = []
        for ix, e in enumerate(mono):
            if not e or ix in (t_ix, u_ix):
                continue
            name = vt.names[ix]
            if name not in yinfo:
                raise MalformedSystemError("unbound parameter %s" % name)
            m, l = yinfo[name]
            factors.extend([(m, l)] * e)
        upart = UPoly([mpq(0)] * eu + [mpq(c)])
        if not factors:
            terms.append((upart, et, None))
            continue
        if et == 0:
            if len(factors) != 1 or factors[0][1] != 0:
                raise MalformedSystemError(
                    "equation %d: t-free part must be linear in the unknowns" % (i + 1))
        key = tuple(sorted(factors))
        node = nodes.get(key)
        if node is None:
            node = _ViewNode(F, key[0][0], key[0][1], a)
            nodes[(key[0],)] = nodes.get((key[0],), node)
            node = nodes[(key[0],)]
            for f in key[1:]:
                single = nodes.get((f,))
                if single is None:
                    single = _ViewNode(F, f[0], f[1], a)
                    nodes[(f,)] = single
                node = _ProdNode(node, single)
            nodes[key] = node
        terms.append((upart, et, node))
    return terms


def _topo_order(sys):
    """Order unknowns so that t-free linear couplings point backwards."""
    n = sys.n
    deps = [set() for _ in range(n)]
    for i in range(n):
        num = sys.rhs[i].num
        vt = num.vt
        t_ix = vt.index["t"]
        for mono, _ in num.terms.items():
            if mono[t_ix]:
                continue
            for ix, e in enumerate(mono):
                name = vt.names[ix]
                if e and name in sys.yvar_map:
                    m, l = sys.yvar_map[name]
                    deps[i].add(m)
    order = []
    done = set()
    while len(order) < n:
        progressed = False
        for i in range(n):
            if i in done:
                continue
            if deps[i] <= done:
                order.append(i)
                done.add(i)
                progressed = True
        if not progressed:
            raise MalformedSystemError("cyclic t-free coupling between unknowns")
    return order


def solve_series(sys, N, schedule="direct"):
    """Unique truncated series solution (F_1, ..., F_n) mod t^N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if schedule == "jacobi":
        return _solve_jacobi(sys, N)
    a = mpq(sys.a)
    n = sys.n
    F = [[] for _ in range(n)]
    nodes = {}
    eq_terms = [_compile_equation(sys, i, F, nodes, a) for i in range(n)]
    order = _topo_order(sys)
    for j in range(N):
        for i in order:
            val = UPoly(())
            for upart, et, node in eq_terms[i]:
                jj = j - et
                if jj < 0:
                    continue
                if node is None:
                    if jj == 0:
                        val = val + upart
                    continue
                s = node.coeff(jj)
                if s:
                    val = val + upart * s
            for _ in range(sys.rhs[i].pow):
                try:
                    val = val.divexact_linear(a)
                except ValueError:
                    raise MalformedSystemError("division by (u - a) leaves a remainder")
            F[i].append(val)
    return [TruncBiSeries(N, F[i]) for i in range(n)]


def _bind_for(sys, sol):
    bind = {}
    for name, (m, l) in sys.yvar_map.items():
        v = sol[m]
        for _ in range(l):
            v = v.delta(mpq(sys.a))
        bind[name] = v
    return bind


def _solve_jacobi(sys, N):
    a = mpq(sys.a)
    n = sys.n
    sol = [TruncBiSeries(N) for _ in range(n)]
    for _ in range((N + 1) * (n + 1)):
        bind = _bind_for(sys, sol)
        new = []
        for i in range(n):
            v = eval_at_series(sys.rhs[i].num, bind, N)
            coeffs = v.coeffs
            for _ in range(sys.rhs[i].pow):
                try:
                    coeffs = [c.divexact_linear(a) for c in coeffs]
                except ValueError:
                    raise MalformedSystemError("division by (u - a) leaves a remainder")
            new.append(TruncBiSeries(N, coeffs))
        if new == sol:
            break
        sol = new
    return sol


def residuals(sys, sol):
    """RHS_i(solution) - F_i for each equation; all-zero certifies the
    solution."""
    N = sol[0].N
    a = mpq(sys.a)
    bind = _bind_for(sys, sol)
    out = []
    for i in range(sys.n):
        v = eval_at_series(sys.rhs[i].num, bind, N)
        coeffs = v.coeffs
        for _ in range(sys.rhs[i].pow):
            coeffs = [c.divexact_linear(a) for c in coeffs]
        out.append(TruncBiSeries(N, coeffs) - sol[i])
    return out


# ---------------------------------------------------------------------------
# fast specialized solver (values and z-series only), order k <= 1

def _degree_bound(sys, N):
    """Rigorous linear bound A + s*j on deg_u of the t^j coefficient."""
    A = 1
    s = 1
    lin_extra = 0
    for i in range(sys.n):
        num = sys.rhs[i].num
        vt = num.vt
        t_ix, u_ix = vt.index["t"], vt.index["u"]
        for mono, _ in num.terms.items():
            et, eu = mono[t_ix], mono[u_ix]
            ydeg = sum(e for ix, e in enumerate(mono)
                       if e and ix not in (t_ix, u_ix) and vt.names[ix] in sys.yvar_map)
            if et == 0:
                if ydeg:
                    lin_extra = max(lin_extra, eu)
                else:
                    A = max(A, eu)
    A = A + sys.n * lin_extra + 1
    for i in range(sys.n):
        num = sys.rhs[i].num
        vt = num.vt
        t_ix, u_ix = vt.index["t"], vt.index["u"]
        for mono, _ in num.terms.items():
            et, eu = mono[t_ix], mono[u_ix]
            ydeg = sum(e for ix, e in enumerate(mono)
                       if e and ix not in (t_ix, u_ix) and vt.names[ix] in sys.yvar_map)
            if et >= 1:
                need = eu + (ydeg - 1) * A
                s = max(s, -(-need // et))
    return A + s * N + 2


class _PtProd:
    __slots__ = ("a", "b", "cache")

    def __init__(self, a, b):
        self.a = a
        self.b = b
        self.cache = []

    def coeff(self, j):
        while len(self.cache) <= j:
            jj = len(self.cache)
            s = mpq(0)
            for i in range(jj + 1):
                x = self.a.coeff(i)
                if x:
                    y = self.b.coeff(jj - i)
                    if y:
                        s += x * y
            self.cache.append(s)
        return self.cache[j]


class _PtView:
    __slots__ = ("F", "z", "m", "l", "denom", "cache")

    def __init__(self, F, z, m, l, denom):
        self.F = F        # per-point value series, list of lists
        self.z = z        # interpolated z-series, list of lists
        self.m = m
        self.l = l
        self.denom = denom  # u_p - a
        self.cache = []

    def coeff(self, j):
        while len(self.cache) <= j:
            jj = len(self.cache)
            if self.l == 0:
                self.cache.append(self.F[self.m][jj])
            else:
                self.cache.append((self.F[self.m][jj] - self.z[self.m][jj]) / self.denom)
        return self.cache[j]


def solve_specialized(sys, N):
    """Series F_i(t, a) mod t^N via pointwise evaluation + interpolation.

    Much faster than the full bivariate solve for large N.  Supports
    systems of order k <= 1; falls back to the caller for higher order.
    """
    if sys.k > 1:
        sol = solve_series(sys, N)
        return [s.specialize(mpq(sys.a), 0) for s in sol]
    a = mpq(sys.a)
    n = sys.n
    D = _degree_bound(sys, N)
    pts = []
    v = 0
    while len(pts) < D + 1:
        for cand in (mpq(v), mpq(-v)) if v else (mpq(0),):
            if cand != a and cand not in pts:
                pts.append(cand)
            if len(pts) == D + 1:
                break
        v += 1
    # barycentric weights for evaluation at u = a
    weights = []
    for p in pts:
        w = mpq(1)
        for q in pts:
            if q != p:
                w *= (p - q)
        weights.append(1 / w)
    lag = [w / (a - p) for w, p in zip(weights, pts)]
    lag_total = sum(lag)
    lag = [x / lag_total for x in lag]

    z = [[] for _ in range(n)]          # F_m(t, a) coefficients
    order = _topo_order(sys)
    per_point = []
    for p in pts:
        F = [[] for _ in range(n)]
        nodes = {}
        eqs = []
        for i in range(n):
            num = sys.rhs[i].num
            vt = num.vt
            t_ix, u_ix = vt.index["t"], vt.index["u"]
            terms = []
            for mono, c in num.terms.items():
                et, eu = mono[t_ix], mono[u_ix]
                factors = []
                for ix, e in enumerate(mono):
                    if not e or ix in (t_ix, u_ix):
                        continue
                    name = vt.names[ix]
                    if name not in sys.yvar_map:
                        raise MalformedSystemError("unbound parameter %s" % name)
                    m, l = sys.yvar_map[name]
                    factors.extend([(m, l)] * e)
                scal = mpq(c) * p ** eu
                if not factors:
                    terms.append((scal, et, None))
                    continue
                if et == 0 and (len(factors) != 1 or factors[0][1] != 0):
                    raise MalformedSystemError(
                        "equation %d: t-free part must be linear in the unknowns" % (i + 1))
                key = tuple(sorted(factors))
                node = nodes.get(key)
                if node is None:
                    node = nodes.get((key[0],))
                    if node is None:
                        node = _PtView(F, z, key[0][0], key[0][1], p - a)
                        nodes[(key[0],)] = node
                    for f in key[1:]:
                        single = nodes.get((f,))
                        if single is None:
                            single = _PtView(F, z, f[0], f[1], p - a)
                            nodes[(f,)] = single
                        node = _PtProd(node, single)
                    nodes[key] = node
                terms.append((scal, et, node))
            eqs.append(terms)
        per_point.append((p, F, eqs))

    for j in range(N):
        for i in order:
            for p, F, eqs in per_point:
                val = mpq(0)
                for scal, et, node in eqs[i]:
                    jj = j - et
                    if jj < 0:
                        continue
                    if node is None:
                        if jj == 0:
                            val += scal
                        continue
                    s = node.coeff(jj)
                    if s:
                        val += scal * s
                val = val / (p - a) ** sys.rhs[i].pow
                F[i].append(val)
            # interpolate the new coefficient of F_i at u = a
            z[i].append(sum(l * per_point[pi][1][i][j] for pi, l in enumerate(lag)))
    return [TruncTSeries(1, z[i]) for i in range(n)]
