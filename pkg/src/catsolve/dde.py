"""Frontend for systems of discrete differential equations.

Input files look like

    system { unknowns F1, F2; catalytic u; point a = 1; param s = 2;
      F1 = 1 + t*(u + 2*u*F1^2 + 2*u*F2(a) + u*(F1 - u*F1(a))/(u-1));
      F2 = t*(2*u*F1*F2 + u*F1 + u*F2(a) + u*(F2 - u*F2(a))/(u-1)); }

`F(a)` is the specialization at the catalytic point, `D[F]` / `D^j[F]` the
discrete derivative (F(t,u) - F(t,a))/(u-a) iterated j times, and `t` is
reserved.  Division is only allowed by constants and powers of (u - a):
that is exactly what keeps the right-hand sides inside the DDE shape.

Internally each right-hand side is stored as a fraction num/(u-a)^pow
where num is a polynomial in t, u and the placeholders Y<i>_<l> standing
for the l-th discrete derivative of unknown i.  `F(a)` is canonicalized to
Y<i>_0 - (u-a)*Y<i>_1 during parsing.
"""

from __future__ import annotations

from gmpy2 import mpq

from .fields import UPoly, rat_str
from .mpoly import MPoly, VarTable


class DDEParseError(ValueError):
    def __init__(self, msg, pos=None):
        super().__init__(msg if pos is None else "%s (at %s)" % (msg, pos))
        self.pos = pos


class DDEShapeError(ValueError):
    """Equations that parse but violate the F = f(u) + t*Q(...) shape."""


class UnboundParameterError(ValueError):
    pass


def _yname(i, l):
    return "Y%d_%d" % (i + 1, l)


# ---------------------------------------------------------------------------
# fractions with denominator (u - a)^pow

class UAFrac:
    """num / (u - a)^pow with num an MPoly; the only denominators a DDE
    right-hand side may carry."""

    __slots__ = ("num", "pow", "a", "vt")

    def __init__(self, num, pow=0, a=mpq(0)):
        self.num = num
        self.pow = pow
        self.a = a
        self.vt = num.vt

    def reduced(self):
        num, p = self.num, self.pow
        while p > 0:
            q = _div_linear_u(num, self.a)
            if q is None:
                break
            num, p = q, p - 1
        return UAFrac(num, p, self.a)

    def __add__(self, other):
        if not isinstance(other, UAFrac):
            other = UAFrac(MPoly.const(self.vt, mpq(other)), 0, self.a)
        p = max(self.pow, other.pow)
        ua = _ua_power(self.vt, self.a, 1)
        n1 = self.num * ua ** (p - self.pow)
        n2 = other.num * ua ** (p - other.pow)
        return UAFrac(n1 + n2, p, self.a)

    __radd__ = __add__

    def __neg__(self):
        return UAFrac(-self.num, self.pow, self.a)

    def __sub__(self, other):
        if not isinstance(other, UAFrac):
            other = UAFrac(MPoly.const(self.vt, mpq(other)), 0, self.a)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, UAFrac):
            return UAFrac(self.num * other, self.pow, self.a)
        return UAFrac(self.num * other.num, self.pow + other.pow, self.a)

    __rmul__ = __mul__

    def __pow__(self, e):
        return UAFrac(self.num ** e, self.pow * e, self.a)

    def __truediv__(self, other):
        if not isinstance(other, UAFrac):
            return UAFrac(self.num * (1 / mpq(other)), self.pow, self.a)
        inv = other._inverse()
        return (self * inv).reduced()

    def _inverse(self):
        """Invert c*(u-a)^p / (u-a)^q; anything else is not DDE-shaped."""
        num = self.num
        c = None
        p = 0
        work = num
        while True:
            if work.is_const():
                c = work.const_value()
                break
            q = _div_linear_u(work, self.a)
            if q is None:
                raise DDEShapeError(
                    "division only allowed by constants and powers of (u - %s)"
                    % rat_str(self.a))
            work, p = q, p + 1
        if not c:
            raise ZeroDivisionError("division by zero")
        ua = _ua_power(self.vt, self.a, self.pow)
        return UAFrac(ua * (1 / mpq(c)), p, self.a)

    def to_str(self):
        ns = self.num.to_str()
        if self.pow == 0:
            return ns
        den = "(u - %s)" % rat_str(self.a) if self.a else "u"
        if self.pow > 1:
            den += "^%d" % self.pow
        return "(%s)/%s" % (ns, den)

    def __repr__(self):
        return "UAFrac(%s)" % self.to_str()


def _ua_power(vt, a, p):
    u = MPoly.gen(vt, "u")
    base = u - MPoly.const(vt, mpq(a)) if a else u
    return base ** p if p != 1 else base


def _div_linear_u(p: MPoly, a):
    """p / (u - a) if exact, else None (synthetic division in u)."""
    cs = p.as_univariate("u")
    if len(cs) == 1:
        return None if cs[0] else MPoly.zero(p.vt)
    carry = MPoly.zero(p.vt)
    out = [None] * (len(cs) - 1)
    for j in range(len(cs) - 1, 0, -1):
        carry = cs[j] + carry * mpq(a) if j < len(cs) - 1 else cs[j]
        out[j - 1] = carry
    rem = cs[0] + carry * mpq(a)
    if rem:
        return None
    u = MPoly.gen(p.vt, "u")
    acc = MPoly.zero(p.vt)
    for j, c in enumerate(out):
        acc = acc + c * u ** j
    return acc


# ---------------------------------------------------------------------------
# tokenizer / parser

_PUNCT = ("+", "-", "*", "/", "^", "(", ")", "[", "]", "{", "}", ",", ";", "=")


def _tokenize(text):
    toks = []
    i, line = 0, 1
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            continue
        if ch == "#":
            while i < len(text) and text[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(("num", text[i:j], line))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("id", text[i:j], line))
            i = j
            continue
        if ch in _PUNCT:
            toks.append((ch, ch, line))
            i += 1
            continue
        raise DDEParseError("unexpected character %r" % ch, "line %d" % line)
    toks.append(("eof", "", line))
    return toks


class _Parser:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind, what=None):
        t = self.next()
        if t[0] != kind or (what is not None and t[1] != what):
            raise DDEParseError("expected %r, found %r" % (what or kind, t[1]),
                                "line %d" % t[2])
        return t

    def rational(self):
        neg = False
        while self.peek()[0] == "-":
            self.next()
            neg = not neg
        num = self.expect("num")
        val = mpq(num[1])
        if self.peek()[0] == "/":
            self.next()
            den = self.expect("num")
            val = val / mpq(den[1])
        return -val if neg else val

    # expression -> AST of nested tuples
    def expr(self):
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            rhs = self.term()
            node = (op, node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] in ("*", "/"):
            op = self.next()[0]
            rhs = self.factor()
            node = (op, node, rhs)
        return node

    def factor(self):
        if self.peek()[0] == "-":
            self.next()
            return ("neg", self.factor())
        node = self.atom()
        if self.peek()[0] == "^":
            self.next()
            e = self.expect("num")
            node = ("pow", node, int(e[1]))
        return node

    def atom(self):
        t = self.next()
        if t[0] == "num":
            return ("const", mpq(t[1]))
        if t[0] == "(":
            node = self.expr()
            self.expect(")")
            return node
        if t[0] == "id":
            name = t[1]
            if name == "D":
                order = 1
                if self.peek()[0] == "^":
                    self.next()
                    order = int(self.expect("num")[1])
                self.expect("[")
                target = self.expect("id")[1]
                self.expect("]")
                return ("delta", target, order, t[2])
            if self.peek()[0] == "(":
                self.next()
                arg = self.next()
                self.expect(")")
                return ("call", name, arg[1], t[2])
            return ("sym", name, t[2])
        raise DDEParseError("unexpected token %r" % t[1], "line %d" % t[2])


# ---------------------------------------------------------------------------
# the system

class DDESystem:
    """Parsed system: n unknowns F_i(t, u) = rhs_i where each rhs is the
    full right-hand side f_i(u) + t*Q_i(...) as a UAFrac over the
    placeholder variables Y<i>_<l>."""

    def __init__(self, names, catalytic, a, params, rhs, k, source=None):
        self.names = list(names)
        self.n = len(names)
        self.catalytic = catalytic
        self.a = mpq(a)
        self.params = dict(params)
        self.rhs = rhs
        self.k = k
        self.source = source
        self.yvar_map = {}
        for i in range(self.n):
            for l in range(k + 1):
                self.yvar_map[_yname(i, l)] = (i, l)

    def __repr__(self):
        return "DDESystem(n=%d, k=%d, a=%s)" % (self.n, self.k, rat_str(self.a))

    def znames(self):
        kk = max(self.k, 1)
        return ["z%d" % j for j in range(self.n * kk)]

    def xnames(self):
        return ["x%d" % (i + 1) for i in range(self.n)]

    def shift_to_zero(self):
        """Translate u -> u + a so the catalytic point becomes 0."""
        if self.a == 0:
            return self
        a = self.a
        rhs = []
        for fr in self.rhs:
            vt = fr.vt
            u = MPoly.gen(vt, "u")
            shifted = fr.num.eval({"u": u + MPoly.const(vt, a)}, vt)
            rhs.append(UAFrac(shifted, fr.pow, mpq(0)))
        return DDESystem(self.names, self.catalytic, 0, self.params, rhs,
                         self.k, self.source)

    def to_dsl(self):
        lines = ["system {"]
        lines.append("  unknowns %s;" % ", ".join(self.names))
        lines.append("  catalytic %s;" % self.catalytic)
        lines.append("  point a = %s;" % rat_str(self.a))
        for pname, pval in self.params.items():
            if pval is None:
                lines.append("  param %s;" % pname)
            else:
                lines.append("  param %s = %s;" % (pname, rat_str(pval)))
        for i, fr in enumerate(self.rhs):
            expr = _frac_to_dsl(fr, self)
            lines.append("  %s = %s;" % (self.names[i], expr))
        lines.append("}")
        return "\n".join(lines)


def _frac_to_dsl(fr: UAFrac, sys: DDESystem):
    parts = []
    names = fr.vt.names
    for mono, c in sorted(fr.num.terms.items(),
                          key=lambda kv: tuple(reversed(kv[0]))):
        facs = []
        cc = mpq(c)
        for ix, e in enumerate(mono):
            if not e:
                continue
            name = names[ix]
            if name in sys.yvar_map:
                i, l = sys.yvar_map[name]
                base = sys.names[i] if l == 0 else (
                    "D[%s]" % sys.names[i] if l == 1 else
                    "D^%d[%s]" % (l, sys.names[i]))
            else:
                base = name
            facs.append(base if e == 1 else "%s^%d" % (base, e))
        if cc == 1 and facs:
            pass
        elif cc == -1 and facs:
            facs.insert(0, "-1")
        else:
            facs.insert(0, rat_str(cc))
        parts.append("*".join(facs))
    body = " + ".join(parts) if parts else "0"
    if fr.pow:
        den = ("(u - %s)" % rat_str(fr.a)) if fr.a else "u"
        if fr.pow > 1:
            den += "^%d" % fr.pow
        body = "(%s)/%s" % (body, den)
    return body


def parse_dde(text) -> DDESystem:
    """Parse the DSL into a DDESystem; the discrete-derivative order k is
    inferred from the highest D-power (F(a) alone implies k = 1)."""
    p = _Parser(_tokenize(text))
    p.expect("id", "system")
    p.expect("{")
    names = []
    catalytic = None
    a = None
    point_name = None
    params = {}
    equations = []
    while p.peek()[0] != "}":
        t = p.peek()
        if t[0] != "id":
            raise DDEParseError("expected a statement", "line %d" % t[2])
        if t[1] == "unknowns":
            p.next()
            names.append(p.expect("id")[1])
            while p.peek()[0] == ",":
                p.next()
                names.append(p.expect("id")[1])
            p.expect(";")
        elif t[1] == "catalytic":
            p.next()
            catalytic = p.expect("id")[1]
            p.expect(";")
        elif t[1] == "point":
            p.next()
            point_name = p.expect("id")[1]
            p.expect("=")
            a = p.rational()
            p.expect(";")
        elif t[1] == "param":
            p.next()
            pname = p.expect("id")[1]
            if p.peek()[0] == "=":
                p.next()
                params[pname] = p.rational()
            else:
                params[pname] = None
            p.expect(";")
        else:
            lhs = p.expect("id")
            if p.peek()[0] == "(":
                p.next()
                p.expect("id")
                p.expect(")")
            p.expect("=")
            ast = p.expr()
            p.expect(";")
            equations.append((lhs[1], ast, lhs[2]))
    p.expect("}")
    p.expect("eof")

    if not names:
        raise DDEParseError("no unknowns declared")
    if catalytic is None:
        catalytic = "u"
    if catalytic == "t":
        raise DDEParseError("t is reserved for the size variable")
    if a is None:
        a = mpq(0)
        point_name = point_name or "a"
    if len(equations) != len(names):
        raise DDEParseError("expected one equation per unknown (%d != %d)"
                            % (len(equations), len(names)))
    order = {nm: i for i, nm in enumerate(names)}
    if len(order) != len(names):
        raise DDEParseError("duplicate unknown names")
    eq_by_name = {}
    for lhs, ast, line in equations:
        if lhs not in order:
            raise DDEParseError("equation for undeclared unknown %r" % lhs,
                                "line %d" % line)
        if lhs in eq_by_name:
            raise DDEParseError("duplicate equation for %r" % lhs,
                                "line %d" % line)
        eq_by_name[lhs] = ast

    # infer k: highest D-order, or 1 if only F(a) specializations appear
    def scan(node, acc):
        if not isinstance(node, tuple):
            return
        if node[0] == "delta":
            acc[0] = max(acc[0], node[2])
        elif node[0] == "call":
            acc[0] = max(acc[0], 1)
        for child in node[1:]:
            scan(child, acc)
    acc = [0]
    for ast in eq_by_name.values():
        scan(ast, acc)
    k = acc[0]

    vt = VarTable(["t", catalytic if catalytic == "u" else "u"]
                  + [_yname(i, l) for i in range(len(names))
                     for l in range(k + 1)])
    env = _EvalEnv(vt, names, order, catalytic, point_name, mpq(a), params, k)
    rhs = []
    for nm in names:
        fr = env.eval(eq_by_name[nm]).reduced()
        rhs.append(fr)
    sys = DDESystem(names, "u", a, params, rhs, k, source=text)
    _check_shape(sys)
    return sys


class _EvalEnv:
    def __init__(self, vt, names, order, catalytic, point_name, a, params, k):
        self.vt = vt
        self.names = names
        self.order = order
        self.catalytic = catalytic
        self.point_name = point_name
        self.a = a
        self.params = params
        self.k = k

    def _const(self, c):
        return UAFrac(MPoly.const(self.vt, mpq(c)), 0, self.a)

    def eval(self, node):
        op = node[0]
        if op == "const":
            return self._const(node[1])
        if op == "sym":
            name = node[1]
            if name == "t":
                return UAFrac(MPoly.gen(self.vt, "t"), 0, self.a)
            if name == self.catalytic:
                return UAFrac(MPoly.gen(self.vt, "u"), 0, self.a)
            if name in self.order:
                return UAFrac(MPoly.gen(self.vt, _yname(self.order[name], 0)),
                              0, self.a)
            if name == self.point_name:
                return self._const(self.a)
            if name in self.params:
                if self.params[name] is None:
                    raise UnboundParameterError("unbound parameter %s" % name)
                return self._const(self.params[name])
            raise DDEParseError("unknown symbol %r" % name, "line %d" % node[2])
        if op == "call":
            fname, arg = node[1], node[2]
            if fname not in self.order:
                raise DDEParseError("unknown function %r" % fname,
                                    "line %d" % node[3])
            if arg != self.point_name and mpq(arg if arg.isdigit() else -10**9) != self.a:
                raise DDEParseError(
                    "specialization point must be the declared point %r"
                    % self.point_name, "line %d" % node[3])
            i = self.order[fname]
            # F(a) = F - (u - a) * D[F]
            y0 = MPoly.gen(self.vt, _yname(i, 0))
            y1 = MPoly.gen(self.vt, _yname(i, 1))
            ua = _ua_power(self.vt, self.a, 1)
            return UAFrac(y0 - ua * y1, 0, self.a)
        if op == "delta":
            fname, order = node[1], node[2]
            if fname not in self.order:
                raise DDEParseError("unknown function %r" % fname,
                                    "line %d" % node[3])
            if order > self.k or order < 1:
                raise DDEParseError("derivative order %d out of range" % order,
                                    "line %d" % node[3])
            return UAFrac(MPoly.gen(self.vt, _yname(self.order[fname], order)),
                          0, self.a)
        if op == "neg":
            return -self.eval(node[1])
        if op == "pow":
            return self.eval(node[1]) ** node[2]
        if op == "+":
            return self.eval(node[1]) + self.eval(node[2])
        if op == "-":
            return self.eval(node[1]) - self.eval(node[2])
        if op == "*":
            return self.eval(node[1]) * self.eval(node[2])
        if op == "/":
            return self.eval(node[1]) / self.eval(node[2])
        raise DDEParseError("malformed expression node %r" % (op,))


def _check_shape(sys: DDESystem):
    """Every monomial involving the unknowns must carry a factor t, except
    plain linear occurrences of another unknown (acyclic coupling, checked
    later by the series solver)."""
    for i, fr in enumerate(sys.rhs):
        vt = fr.vt
        t_ix = vt.index["t"]
        for mono, _ in fr.num.terms.items():
            if mono[t_ix]:
                continue
            ys = [(vt.names[ix], e) for ix, e in enumerate(mono)
                  if e and vt.names[ix] in sys.yvar_map]
            if not ys:
                continue
            if len(ys) == 1 and ys[0][1] == 1 and sys.yvar_map[ys[0][0]][1] == 0:
                continue
            raise DDEShapeError(
                "equation for %s: the part without a t-factor may only "
                "contain u and plain linear unknowns" % sys.names[i])


# ---------------------------------------------------------------------------
# numerator system

class NumeratorSystem:
    """Polynomial equations E_i = (u-a)^{m_i} (rhs_i - x_i) over the
    variables x_1..x_n, z_0..z_{nk-1}, u, t after replacing the discrete
    derivatives by their divided-difference expressions in x and z."""

    def __init__(self, E, m, a, vt, n, k, a_shifted=False, epsilon_symbolic=False):
        self.E = E
        self.m = list(m)
        self.M = sum(m)
        self.a = mpq(a)
        self.vt = vt
        self.n = n
        self.k = k
        self.a_shifted = a_shifted
        self.epsilon_symbolic = epsilon_symbolic

    def xnames(self):
        return ["x%d" % (i + 1) for i in range(self.n)]

    def znames(self):
        return ["z%d" % j for j in range(self.n * self.k)]

    def __repr__(self):
        return "NumeratorSystem(n=%d, k=%d, m=%s, a=%s)" % (
            self.n, self.k, self.m, rat_str(self.a))


def expand_delta(i, j, k, n, a=mpq(0), vt=None):
    """The divided-difference expression for the j-th discrete derivative
    of unknown i (1-based):

        (x_i - z_{k(i-1)} - (u-a) z_{k(i-1)+1} - ... -
         ((u-a)^{j-1}/(j-1)!) z_{k(i-1)+j-1}) / (u-a)^j
    """
    if not (1 <= j <= k):
        raise ValueError("derivative order %d out of range 1..%d" % (j, k))
    if vt is None:
        vt = VarTable(["x%d" % (m + 1) for m in range(n)]
                      + ["z%d" % m for m in range(n * k)] + ["u", "t"])
    a = mpq(a)
    x = MPoly.gen(vt, "x%d" % i)
    num = x
    fact = mpq(1)
    for l in range(j):
        if l:
            fact *= l
        z = MPoly.gen(vt, "z%d" % (k * (i - 1) + l))
        num = num - z * _ua_power(vt, a, l) * (1 / fact) if l else num - z
    return UAFrac(num, j, a)


def normalize(sys: DDESystem, mode="minimal") -> NumeratorSystem:
    """Clear denominators into polynomial equations.

    mode "minimal" takes the least m_i; mode "deformation_ready" enforces
    m_i >= k and first shifts u so the catalytic point is 0."""
    if mode not in ("minimal", "deformation_ready"):
        raise ValueError("unknown mode %r" % mode)
    for pname, pval in sys.params.items():
        if pval is None:
            raise UnboundParameterError("unbound parameter %s" % pname)
    shifted = False
    if mode == "deformation_ready" and sys.a != 0:
        sys = sys.shift_to_zero()
        shifted = True
    n, k = sys.n, max(sys.k, 1)
    a = sys.a
    extra = ["eps"] if any("eps" in fr.vt.index for fr in sys.rhs) else []
    vt = VarTable(sys.xnames() + ["z%d" % j for j in range(n * k)]
                  + ["u", "t"] + extra)
    E = []
    m = []
    for i, fr in enumerate(sys.rhs):
        bind = {"t": UAFrac(MPoly.gen(vt, "t"), 0, a),
                "u": UAFrac(MPoly.gen(vt, "u"), 0, a)}
        for e in extra:
            bind[e] = UAFrac(MPoly.gen(vt, e), 0, a)
        for name, (j, l) in sys.yvar_map.items():
            if l == 0:
                bind[name] = UAFrac(MPoly.gen(vt, "x%d" % (j + 1)), 0, a)
            else:
                bind[name] = expand_delta(j + 1, l, k, n, a, vt)
        val = _eval_frac(fr.num, bind, vt, a) * UAFrac(MPoly.const(vt, mpq(1)), fr.pow, a)
        x = UAFrac(MPoly.gen(vt, "x%d" % (i + 1)), 0, a)
        diff = (val - x).reduced()
        mi = diff.pow
        if mode == "minimal":
            mi = max(mi, 1)
        else:
            mi = max(mi, k)
        Ei = diff.num * _ua_power(vt, a, mi - diff.pow)
        E.append(Ei)
        m.append(mi)
    return NumeratorSystem(E, m, a, vt, n, k, a_shifted=shifted,
                           epsilon_symbolic=bool(extra))


def _eval_frac(p: MPoly, bind, vt, a) -> UAFrac:
    """Evaluate p with every variable bound to a UAFrac over vt."""
    pow_cache = {}
    out = UAFrac(MPoly.zero(vt), 0, a)
    for m, c in p.terms.items():
        term = UAFrac(MPoly.const(vt, mpq(c)), 0, a)
        for i, e in enumerate(m):
            if not e:
                continue
            key = (i, e)
            pe = pow_cache.get(key)
            if pe is None:
                pe = bind[p.vt.names[i]] ** e
                pow_cache[key] = pe
            term = term * pe
        out = out + term
    return out


# ---------------------------------------------------------------------------
# deformation

class DeformationParams:
    __slots__ = ("alpha", "beta", "gamma", "epsilon")

    def __init__(self, alpha, beta, gamma, epsilon):
        self.alpha = alpha
        self.beta = beta
        self.gamma = gamma  # n x n list of MPoly-printable strings
        self.epsilon = epsilon

    def __repr__(self):
        return "DeformationParams(alpha=%d, beta=%d, epsilon=%s)" % (
            self.alpha, self.beta, self.epsilon)


def deform(sys: DDESystem, epsilon=mpq(1)):
    """The deformed system: t is replaced by t^alpha inside the original
    right-hand sides and the coupling term

        t * eps^k * sum_j gamma_{i,j} * D^k[G_j]

    is added, with gamma_{i,i} = i^k, gamma_{i,j} = t^beta off-diagonal,
    beta = floor(2M/k) and alpha = n^2 k (beta+1) + n M.  epsilon=None
    keeps a symbolic `eps` (construction only; series arithmetic requires
    a rational)."""
    if epsilon is not None and mpq(epsilon) == 0:
        raise ValueError("epsilon must be nonzero")
    base = sys.shift_to_zero()
    ns = normalize(base, "deformation_ready")
    n, k = base.n, max(base.k, 1)
    M = ns.M
    beta = (2 * M) // k
    alpha = n * n * k * (beta + 1) + n * M

    names = [_yname(i, l) for i in range(n) for l in range(k + 1)]
    extra = ["eps"] if epsilon is None else []
    vt = VarTable(["t", "u"] + names + extra)
    t = MPoly.gen(vt, "t")
    rhs = []
    gamma_desc = []
    for i in range(n):
        fr = base.rhs[i]
        # t -> t^alpha in f_i + t*Q_i (f_i is t-free, so this realizes
        # f_i + t^alpha Q_i(..., t^alpha, u))
        num = MPoly.zero(vt)
        src = fr.num
        t_ix = src.vt.index["t"]
        for mono, c in src.terms.items():
            newm = {}
            for ix, e in enumerate(mono):
                if not e:
                    continue
                name = src.vt.names[ix]
                newm[name] = e * alpha if ix == t_ix else e
            term = MPoly.const(vt, mpq(c))
            for name, e in newm.items():
                term = term * MPoly.gen(vt, name) ** e
            num = num + term
        if epsilon is None:
            epsk = MPoly.gen(vt, "eps") ** k
        else:
            epsk = MPoly.const(vt, mpq(epsilon) ** k)
        row = []
        for j in range(n):
            if i == j:
                g = MPoly.const(vt, mpq((i + 1) ** k))
                row.append(rat_str(mpq((i + 1) ** k)))
            else:
                g = t ** beta
                row.append("t^%d" % beta)
            num = num + t * epsk * g * MPoly.gen(vt, _yname(j, k))
        gamma_desc.append(row)
        rhs.append(UAFrac(num, fr.pow, mpq(0)))
    newsys = DDESystem(base.names, "u", 0, base.params, rhs, k,
                       source=base.source)
    return newsys, DeformationParams(alpha, beta, gamma_desc, epsilon)
