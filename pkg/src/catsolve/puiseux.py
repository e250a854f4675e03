"""Puiseux expansions of roots u(t) of a bivariate polynomial p(u, t).

Classical Newton-polygon recursion: pick a lower-hull edge, solve the edge
polynomial for the leading coefficient, substitute u = t^gamma (c + v) and
recurse on the tail.  Only roots with nonnegative t-valuation are expanded
(the ones living in K[[t^(1/d)]]); downhill edges are counted and reported.

Leading coefficients are found exactly: squarefree (Yun) split, then
rational roots; an irrational simple factor is handled by adjoining one
root of it.  Since we cannot factor over Q, that adjoined polynomial may
be reducible, in which case arithmetic can hit a zero divisor -- such
branches are reported as inconclusive rather than guessed at.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from gmpy2 import mpq, mpz

from .fields import UPoly, AlgebraicExtension, AlgNum, ZeroDivisorError
from .series import TruncTSeries

_SCALARS = (int, mpz, type(mpq(0)))


class PuiseuxRoot:
    """One expansion branch: terms [(exponent Fraction, coeff)], counted
    `conjugates` times if the leading coefficient generates an extension."""

    __slots__ = ("terms", "multiplicity", "conjugates", "status", "ext")

    def __init__(self, terms, multiplicity, conjugates=1, status="ok", ext=None):
        self.terms = list(terms)
        self.multiplicity = multiplicity
        self.conjugates = conjugates
        self.status = status  # "ok" | "exact" | "truncated" | "unseparated"
        self.ext = ext

    @property
    def valuation(self):
        return self.terms[0][0] if self.terms else None

    @property
    def leading(self):
        return self.terms[0] if self.terms else None

    def series(self, prec) -> TruncTSeries:
        """The branch as a TruncTSeries known mod t^prec."""
        d = 1
        for e, _ in self.terms:
            d = lcm(d, e.denominator)
        L = int(Fraction(prec) * d)
        zero = self.ext.const(mpq(0)) if self.ext is not None else mpq(0)
        coeffs = [zero] * L
        for e, c in self.terms:
            slot = int(e * d)
            if slot < L:
                coeffs[slot] = coeffs[slot] + c
        return TruncTSeries(d, coeffs)

    def __repr__(self):
        body = " + ".join("(%s)*t^%s" % (c, e) for e, c in self.terms) or "0"
        return "PuiseuxRoot(%s, mult=%d, %s)" % (body, self.multiplicity, self.status)


class PuiseuxReport:
    __slots__ = ("roots", "degree", "excluded_negative", "messages")

    def __init__(self, roots, degree, excluded_negative, messages):
        self.roots = roots
        self.degree = degree
        self.excluded_negative = excluded_negative
        self.messages = messages

    @property
    def status(self):
        if any(r.status == "unseparated" for r in self.roots) or self.messages:
            return "inconclusive"
        return "ok"

    def found(self):
        return sum(r.multiplicity * r.conjugates for r in self.roots)

    def distinct_nonzero(self):
        """Number of simple nonzero-root branches (conjugates counted)."""
        return sum(r.conjugates for r in self.roots
                   if r.multiplicity == 1 and r.terms)

    @property
    def certified(self):
        return (self.status == "ok"
                and self.found() + self.excluded_negative == self.degree)

    def __repr__(self):
        return "PuiseuxReport(%d/%d roots, %d negative-valuation, %s)" % (
            self.found(), self.degree, self.excluded_negative, self.status)


def _tval(p: UPoly):
    for i, c in enumerate(p.coeffs):
        if c:
            return i
    return None


def newton_polygon(points):
    """Lower convex hull of (i, v) pairs, left to right."""
    pts = sorted(points)
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def squarefree_decomposition(p: UPoly):
    """Yun's algorithm: [(factor, multiplicity)] with factors monic and
    pairwise coprime."""
    p = p.monic()
    if p.degree < 1:
        return []
    out = []
    dp = p.deriv()
    g = p.gcd(dp)
    w = p / g
    y = dp / g
    m = 1
    while w.degree > 0:
        z = y - w.deriv()
        f = w.gcd(z)
        if f.degree > 0:
            out.append((f.monic(), m))
        w = w / f
        y = z / f
        m += 1
    return out


# ---------------------------------------------------------------------------
# exact rational roots

def _factor_int(n):
    """Prime factorization dict via trial division + Pollard-Brent rho."""
    n = int(abs(n))
    fac = {}
    for p in (2, 3, 5, 7, 11, 13):
        while n % p == 0:
            fac[p] = fac.get(p, 0) + 1
            n //= p
    d = 17
    while d * d <= n and d < 100000:
        while n % d == 0:
            fac[d] = fac.get(d, 0) + 1
            n //= d
        d += 2
    if n == 1:
        return fac
    stack = [n]
    import random
    rng = random.Random(0xC0FFEE)
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_probable_prime(m):
            fac[m] = fac.get(m, 0) + 1
            continue
        d = _pollard_brent(m, rng)
        stack.append(d)
        stack.append(m // d)
    return fac


def _is_probable_prime(n):
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n, rng):
    if n % 2 == 0:
        return 2
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g


def _divisors(n, cap=20000):
    if n == 0:
        return []
    fac = _factor_int(n)
    divs = [1]
    for p, e in fac.items():
        new = []
        pe = 1
        for _ in range(e + 1):
            for d in divs:
                new.append(d * pe)
            pe *= p
        divs = new
        if len(divs) > cap:
            return None
    return sorted(divs)


def rational_roots(p: UPoly):
    """All rational roots of p (over Q) with multiplicities."""
    roots = []
    v = _tval(p)
    if v is None:
        raise ValueError("zero polynomial")
    if v:
        roots.append((mpq(0), v))
        p = UPoly(p.coeffs[v:])
    # integer-primitive form
    den = 1
    for c in p.coeffs:
        den = lcm(den, mpq(c).denominator)
    ic = [mpz(mpq(c) * den) for c in p.coeffs]
    g = 0
    for c in ic:
        g = gcd(g, int(c))
    ic = [c // g for c in ic]
    c0, cn = int(ic[0]), int(ic[-1])
    num_divs = _divisors(c0)
    den_divs = _divisors(cn)
    if num_divs is None or den_divs is None:
        return roots, False  # too many divisor candidates
    seen = set()
    for q in den_divs:
        for r in num_divs:
            if gcd(r, q) != 1:
                continue
            for cand in (mpq(r, q), mpq(-r, q)):
                if cand in seen:
                    continue
                seen.add(cand)
                if p.eval(cand) == 0:
                    m = 0
                    q2 = p
                    while True:
                        try:
                            q2 = q2.divexact_linear(cand)
                            m += 1
                        except ValueError:
                            break
                    roots.append((cand, m))
    return roots, True


# ---------------------------------------------------------------------------
# main recursion

def _edge_roots(phi: UPoly, ext, messages):
    """Roots of an edge polynomial over the current field.

    Returns (roots [(c, mult, conjugates, new_ext)], missing_count)."""
    out = []
    missing = 0
    if ext is None:
        try:
            parts = squarefree_decomposition(phi)
        except (ZeroDivisorError, ZeroDivisionError):
            messages.append("squarefree split failed on an edge polynomial")
            return [], phi.degree
        for f, m in parts:
            roots, complete = rational_roots(f)
            left = f
            for c, _ in roots:
                if c:
                    out.append((c, m, 1, None))
                    left = left.divexact_linear(c)
            if not complete:
                messages.append("rational root search overflowed a divisor cap")
                missing += left.degree * m
            elif left.degree >= 1:
                # adjoin one root of the (squarefree, possibly reducible)
                # remainder; all its conjugates share the expansion shape
                newext = AlgebraicExtension(left)
                out.append((newext.gen, m, left.degree, newext))
    else:
        try:
            parts = squarefree_decomposition(phi)
        except (ZeroDivisorError, ZeroDivisionError):
            messages.append("zero divisor met in the extension field "
                            "(adjoined polynomial was reducible)")
            return [], phi.degree
        for f, m in parts:
            if f.degree == 1:
                out.append((-f[0] / f[1], m, 1, ext))
            else:
                messages.append("nonlinear edge polynomial over an extension field")
                missing += f.degree * m
    return out, missing


def _lift_coeffs(cs, ext):
    """Map rational t-coefficients into an extension field."""
    out = []
    for c in cs:
        out.append(UPoly([ext.const(mpq(x)) for x in c.coeffs]))
    return out


def _substitute(cs, q, c, ext):
    """p(u, t) -> p(t^q (c + v), t) / t^min, as a list over v-powers."""
    n = len(cs) - 1
    one = ext.const(mpq(1)) if ext is not None else mpq(1)
    new = [UPoly(()) for _ in range(n + 1)]
    for i, ci in enumerate(cs):
        if not ci:
            continue
        w = UPoly([one * 0] * (q * i) + list(ci.coeffs))
        # distribute (c + v)^i
        binom = one
        cpow = [one]
        for _ in range(i):
            cpow.append(cpow[-1] * c)
        b = 1
        for j in range(i + 1):
            coeff = cpow[i - j] * b
            new[j] = new[j] + w * coeff
            b = b * (i - j) // (j + 1)
    vmin = None
    for ci in new:
        v = _tval(ci)
        if v is not None:
            vmin = v if vmin is None else min(vmin, v)
    vmin = vmin or 0
    if vmin:
        new = [UPoly(ci.coeffs[vmin:]) if ci else ci for ci in new]
    return new, vmin


def _ramify(cs, e):
    out = []
    for ci in cs:
        coeffs = [ci.coeffs[0] * 0] * (ci.degree * e + 1) if ci else []
        for i, c in enumerate(ci.coeffs):
            if c:
                coeffs[i * e] = c
        out.append(UPoly(coeffs))
    return out


def _expand(cs, ext, ram, base_exp, prec, depth, messages, top=False, T=None):
    """PuiseuxRoot branches of the polynomial given by cs (list of
    t-polynomials indexed by the u-power), with accumulated exponent
    offset base_exp (Fraction, in original t units).

    Below the top level only strictly positive slopes are followed: after
    the substitution u = t^q (c + v) the transformed polynomial still
    carries every root of the original one, but the tails belonging to
    this branch are exactly the roots with positive valuation.

    T, if given, is the t-truncation of the coefficients in current units:
    a zero coefficient then only means "zero mod t^T", so exactness claims
    are weakened accordingly."""
    out = []
    negative = 0
    missing = 0
    lowest = next((i for i, ci in enumerate(cs) if ci), None)
    if lowest is None:
        messages.append("polynomial vanished identically mod the truncation"
                        if T is not None else "polynomial vanished identically")
        return (out, (missing, negative)) if top else (out, missing)
    if lowest > 0:
        # v = 0 is a root of multiplicity `lowest` (exact when coefficients
        # are exact; otherwise only certified up to the truncation)
        out.append(PuiseuxRoot([], lowest, 1,
                               "exact" if T is None else "truncated", ext))
        cs = cs[lowest:]
    pts = [(i, _tval(ci)) for i, ci in enumerate(cs) if ci]
    if len(pts) > 1:
        hull = newton_polygon(pts)
        if T is not None:
            # a coefficient that vanishes mod t^T could hide a point below
            # the hull only if the hull line at its index reaches T
            hx = [p[0] for p in hull]
            for i, ci in enumerate(cs):
                if ci or i >= hull[-1][0]:
                    continue
                import bisect
                j = bisect.bisect_right(hx, i) - 1
                (x1, y1), (x2, y2) = hull[j], hull[j + 1]
                line = Fraction(y1 * (x2 - i) + y2 * (i - x1), x2 - x1)
                if line >= T:
                    messages.append("truncation too low to certify the "
                                    "Newton polygon")
                    break
        one = ext.const(mpq(1)) if ext is not None else mpq(1)
        for (i0, v0), (i1, v1) in zip(hull, hull[1:]):
            if v1 > v0 or (v1 == v0 and not top):
                negative += i1 - i0
                continue
            gamma = Fraction(v0 - v1, i1 - i0)
            e = gamma.denominator
            if e > 1:
                cs_r = _ramify(cs, e)
                ram_r = ram * e
                v0r, v1r = v0 * e, v1 * e
            else:
                cs_r, ram_r, v0r, v1r = cs, ram, v0, v1
            T_r = None if T is None else T * e
            q = (v0r - v1r) // (i1 - i0)
            # edge polynomial from the points on the hull line
            phi_coeffs = {}
            for i, ci in enumerate(cs_r):
                if not ci:
                    continue
                vi = _tval(ci)
                if i0 <= i <= i1 and (i - i0) * (v1r - v0r) == (vi - v0r) * (i1 - i0):
                    phi_coeffs[i - i0] = ci.coeffs[vi]
            maxe = max(phi_coeffs)
            phi = UPoly([phi_coeffs.get(j, one * 0) for j in range(maxe + 1)])
            roots, miss = _edge_roots(phi, ext, messages)
            missing += miss
            for c, m, conj, newext in roots:
                cs_b, ext_b = cs_r, ext
                if newext is not None and ext is None:
                    cs_b = _lift_coeffs(cs_r, newext)
                    ext_b = newext
                term_exp = base_exp + Fraction(q, ram_r)
                done_prec = term_exp >= prec
                out_of_trunc = T_r is not None and q + 1 >= T_r
                if done_prec or out_of_trunc or depth <= 1:
                    status = "ok" if m == 1 else "unseparated"
                    if not done_prec and not out_of_trunc:
                        status = "truncated" if m == 1 else "unseparated"
                    out.append(PuiseuxRoot([(term_exp, c)], m, conj, status, ext_b))
                    continue
                sub, vmin = _substitute(cs_b, q, c, ext_b)
                T_sub = None if T_r is None else T_r - vmin
                if T_sub is not None:
                    sub = [UPoly(ci.coeffs[:T_sub]) for ci in sub]
                try:
                    tails = _expand(sub, ext_b, ram_r, term_exp, prec,
                                    depth - 1, messages, T=T_sub)
                    tails, tmiss = tails
                except (ZeroDivisorError, ZeroDivisionError):
                    messages.append("zero divisor met while expanding a branch")
                    out.append(PuiseuxRoot([(term_exp, c)], m, conj,
                                           "unseparated", ext_b))
                    continue
                missing += tmiss
                got = 0
                for tail in tails:
                    terms = [(term_exp, c)] + tail.terms
                    got += tail.multiplicity
                    out.append(PuiseuxRoot(terms, tail.multiplicity, conj,
                                           tail.status, ext_b))
                if got < m:
                    # tails lost to a failed root search inside the branch
                    out.append(PuiseuxRoot([(term_exp, c)], m - got, conj,
                                           "unseparated", ext_b))
    if top:
        return out, (missing, negative)
    return out, missing


def puiseux_roots(p, uname="u", tname="t", prec=2, max_depth=16,
                  trunc=None) -> PuiseuxReport:
    """Expand the nonnegative-valuation roots u(t) of p to t-precision
    `prec`.  Accepts an MPoly in (uname, tname), a UPoly whose coefficients
    are UPoly's in t, or a TruncBiSeries (whose truncation caps what can be
    certified).  `trunc` marks exact inputs as known only mod t^trunc."""
    from .series import TruncBiSeries
    if isinstance(p, TruncBiSeries):
        trunc = p.N if trunc is None else min(trunc, p.N)
        du = max((c.degree for c in p.coeffs if c), default=-1)
        cs = [UPoly([p.coeffs[j][i] for j in range(p.N)]) for i in range(du + 1)]
    else:
        cs = _to_coeff_list(p, uname, tname)
    while cs and not cs[-1]:
        cs.pop()
    if len(cs) <= 1:
        return PuiseuxReport([], 0, 0, ["no u-dependence mod the truncation"]
                             if trunc is not None else [])
    messages = []
    if trunc is not None:
        prec = min(Fraction(prec), Fraction(trunc))
    depth = max(2, min(max_depth, int(Fraction(prec)) * (len(cs) - 1) + 4))
    branches, (missing, negative) = _expand(cs, None, 1, Fraction(0), prec,
                                            depth, messages, top=True, T=trunc)
    branches = [b for b in branches if b.multiplicity or b.terms]
    if missing:
        messages.append("%d root(s) not identified exactly" % missing)
    roots = sorted(branches, key=lambda r: (r.valuation is None, r.valuation or 0))
    return PuiseuxReport(roots, len(cs) - 1, negative, messages)


def _to_coeff_list(p, uname, tname):
    if isinstance(p, UPoly):
        return list(p.coeffs)
    cs = []
    for i in range(p.degree(uname) + 1):
        ci = p.coeff_of(uname, i)
        extra = [v for v in ci.variables() if v != tname]
        if extra:
            raise ValueError("unexpected variables %s" % (extra,))
        t_ix = ci.vt.index[tname]
        coeffs = [mpq(0)] * (ci.degree(tname) + 1)
        for m, c in ci.terms.items():
            coeffs[m[t_ix]] = mpq(c)
        cs.append(UPoly(coeffs))
    return cs


def eval_at_root(p, root: TruncTSeries, uname="u", tname="t") -> TruncTSeries:
    """p(u(t), t) truncated, for checking candidate roots."""
    cs = _to_coeff_list(p, uname, tname)
    L = len(root.coeffs)
    zero = root._zero()
    acc = TruncTSeries(root.d, [zero] * L)
    for c in reversed(cs):
        ct = TruncTSeries(root.d, [zero] * L)
        for i, x in enumerate(c.coeffs):
            if x and i * root.d < L:
                ct.coeffs[i * root.d] = ct.coeffs[i * root.d] + (zero + x)
        acc = acc * root + ct
    return acc
