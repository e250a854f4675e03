"""Buchberger engine over an abstract coefficient field.

Internally polynomials are dicts from packed-integer monomials to
coefficients; packing 16 bits per variable makes monomial products plain
integer additions and divisibility a mask test.  The engine is generic in
the coefficient type (mpq, RatFunc) through the numeric dunders.

Pair handling uses the normal selection strategy (minimal lcm in the
active order) with Gebauer-Moeller redundant-pair elimination.  Resource
budgets abort with GBBudgetExceeded rather than running unbounded.
"""

from __future__ import annotations

import heapq
import time

from gmpy2 import mpq, mpz

from .fields import RatFunc, UPoly
from .mpoly import MPoly, VarTable
from .orders import Block, DegRevLex, elimination_order, product_order_t_last

_BITS = 16
_MAXE = (1 << (_BITS - 1)) - 1
_QTYPES = (int, mpz, type(mpq(0)))


class GBBudgetExceeded(RuntimeError):
    def __init__(self, reason, pairs_done, seconds):
        super().__init__("Groebner budget exceeded: %s (pairs=%d, %.1fs)" % (reason, pairs_done, seconds))
        self.reason = reason
        self.pairs_done = pairs_done
        self.seconds = seconds


class GBBudget:
    def __init__(self, max_pairs=200_000, max_seconds=600.0):
        if max_pairs <= 0 or max_seconds <= 0:
            raise ValueError("budgets must be positive")
        self.max_pairs = max_pairs
        self.max_seconds = max_seconds


class _Packer:
    def __init__(self, nvars):
        self.nvars = nvars
        self.guard = sum(1 << (_BITS * i + _BITS - 1) for i in range(nvars))
        self.shifts = [_BITS * i for i in range(nvars)]

    def pack(self, expts):
        m = 0
        for e, s in zip(expts, self.shifts):
            if e > _MAXE:
                raise OverflowError("exponent too large to pack")
            m |= e << s
        return m

    def unpack(self, m):
        return tuple((m >> s) & 0xFFFF for s in self.shifts)

    def divides(self, a, b):
        d = b - a
        return d >= 0 and not (d & self.guard)

    def lcm(self, a, b):
        ea, eb = self.unpack(a), self.unpack(b)
        return self.pack(tuple(max(x, y) for x, y in zip(ea, eb)))

    def coprime(self, a, b):
        ea, eb = self.unpack(a), self.unpack(b)
        return all(x == 0 or y == 0 for x, y in zip(ea, eb))


class BadPrimeError(ArithmeticError):
    """A denominator vanished modulo the chosen prime."""


class _Engine:
    def __init__(self, vt, order, budget=None, modulus=None):
        self.vt = vt
        self.order = order
        self.packer = _Packer(len(vt))
        self.budget = budget or GBBudget()
        self.modulus = modulus
        self._keymemo = {}
        self._negmemo = {}
        self.pairs_done = 0
        self.start = time.monotonic()

    def key(self, m):
        k = self._keymemo.get(m)
        if k is None:
            k = self.order.key(self.packer.unpack(m))
            self._keymemo[m] = k
        return k

    # -- conversions --------------------------------------------------

    def from_mpoly(self, p):
        pk = self.packer.pack
        mod = self.modulus
        if mod is None:
            return {pk(m): c for m, c in p.terms.items()}
        out = {}
        for m, c in p.terms.items():
            num, den = int(c.numerator), int(c.denominator)
            if den % mod == 0:
                raise BadPrimeError("denominator divisible by %d" % mod)
            v = num * pow(den, -1, mod) % mod
            if v:
                out[pk(m)] = v
        return out

    def to_mpoly(self, d):
        up = self.packer.unpack
        return MPoly(self.vt, {up(m): c for m, c in d.items()})

    # -- basic polynomial ops on dicts --------------------------------

    def lead(self, p):
        return max(p, key=self.key)

    def normalize(self, p):
        """Scale to canonical form: integer-primitive with positive leading
        coefficient over Q, monic otherwise."""
        if not p:
            return p
        if self.modulus is not None:
            inv = pow(p[self.lead(p)], -1, self.modulus)
            mod = self.modulus
            return {m: c * inv % mod for m, c in p.items()}
        some = next(iter(p.values()))
        if isinstance(some, _QTYPES):
            from math import gcd, lcm
            den = 1
            for c in p.values():
                den = lcm(den, int(c.denominator))
            g = 0
            for c in p.values():
                g = gcd(g, int(c.numerator) * (den // int(c.denominator)))
            if g == 0:
                g = 1
            if p[self.lead(p)] < 0:
                g = -g
            scale = mpq(den, g)
            return {m: c * scale for m, c in p.items()}
        inv = 1 / p[self.lead(p)]
        return {m: c * inv for m, c in p.items()}

    def negkey(self, m):
        # heap-friendly inverse of the order key (heapq is a min-heap)
        k = self._negmemo.get(m)
        if k is None:
            k = tuple(-x for x in self.key(m))
            self._negmemo[m] = k
        return k

    def normal_form(self, p, basis):
        """Full normal form of dict p against [(lm, lc, terms), ...]."""
        lms = [b[0] for b in basis]
        lcs = [b[1] for b in basis]
        polys = [b[2] for b in basis]
        return self._nf(p, lms, lcs, polys, None)

    def _nf(self, p, lms, lcs, polys, cache, top=False):
        """Full normal form against parallel basis lists.

        Monomials are visited in decreasing order through a lazy-deletion
        heap, so each one is examined once instead of rescanning the
        whole support for its maximum at every reduction step.  When the
        basis only ever grows (the Buchberger main loop), `cache` memoizes
        the divisor index per monomial; a recorded miss stores how much of
        the basis was scanned so only newer elements are retried."""
        self._tick(0)
        p = dict(p)
        out = {}
        negkey = self.negkey
        guard = self.packer.guard
        heap = [(negkey(m), m) for m in p]
        heapq.heapify(heap)
        push = heapq.heappush
        pop = heapq.heappop
        nb = len(lms)
        mod = self.modulus
        while heap:
            _, lm = pop(heap)
            c = p.pop(lm, None)
            if c is None:
                continue
            idx = -1
            start = 0
            if cache is not None:
                ent = cache.get(lm)
                if ent is not None:
                    idx, start = ent
            if idx < 0:
                for i in range(start, nb):
                    d = lm - lms[i]
                    if d >= 0 and not (d & guard):
                        idx = i
                        break
                if cache is not None:
                    cache[lm] = (idx, nb)
            if idx < 0:
                out[lm] = c
                if top:
                    # leading monomial settled: keep the tail unreduced
                    out.update(p)
                    return out
                continue
            glm = lms[idx]
            gterms = polys[idx]
            shift = lm - glm
            if mod is not None:
                coef = c * pow(lcs[idx], -1, mod) % mod
                for m, cg in gterms.items():
                    if m == glm:
                        continue
                    mm = m + shift
                    s = p.get(mm)
                    if s is None:
                        p[mm] = -coef * cg % mod
                        push(heap, (negkey(mm), mm))
                    else:
                        s = (s - coef * cg) % mod
                        if s:
                            p[mm] = s
                        else:
                            del p[mm]
                continue
            coef = c / lcs[idx]
            for m, cg in gterms.items():
                if m == glm:
                    continue
                mm = m + shift
                s = p.get(mm)
                if s is None:
                    p[mm] = -coef * cg
                    push(heap, (negkey(mm), mm))
                else:
                    s = s - coef * cg
                    if s:
                        p[mm] = s
                    else:
                        del p[mm]
        return out

    def _tick(self, npairs):
        self.pairs_done += npairs
        if self.pairs_done > self.budget.max_pairs:
            raise GBBudgetExceeded("pair limit", self.pairs_done, time.monotonic() - self.start)
        if time.monotonic() - self.start > self.budget.max_seconds:
            raise GBBudgetExceeded("time limit", self.pairs_done, time.monotonic() - self.start)

    # -- Buchberger ----------------------------------------------------

    def buchberger(self, polys):
        G = []            # list of dicts
        lms = []
        lcs = []
        heap = []         # (lcm key, counter, i, j, lcm)
        counter = 0
        nfcache = {}      # sound because G only grows during the run

        def add_poly(h):
            nonlocal counter
            h = self.normalize(h)
            lmh = self.lead(h)
            t = len(G)
            # Gebauer-Moeller: prune old pairs strictly reducible via lmh
            keep = []
            for entry in heap:
                _, _, i, j, l = entry
                if (self.packer.divides(lmh, l)
                        and self.packer.lcm(lms[i], lmh) != l
                        and self.packer.lcm(lms[j], lmh) != l):
                    continue
                keep.append(entry)
            heap[:] = keep
            heapq.heapify(heap)
            # build new pairs
            new = []
            for i in range(t):
                new.append((i, self.packer.lcm(lms[i], lmh)))
            # drop new pairs whose lcm is a proper multiple of another new lcm
            pruned = []
            for i, l in new:
                redundant = False
                for j, l2 in new:
                    if j == i:
                        continue
                    if l2 != l and self.packer.divides(l2, l):
                        redundant = True
                        break
                    if l2 == l and j < i:
                        redundant = True
                        break
                if not redundant:
                    pruned.append((i, l))
            for i, l in pruned:
                if self.packer.coprime(lms[i], lmh):
                    continue  # product criterion
                counter += 1
                heapq.heappush(heap, (self.key(l), counter, i, t, l))
            G.append(h)
            lms.append(lmh)
            lcs.append(h[lmh])

        # deterministic seeding: reduce each generator against the ones
        # already accepted, skip those that reduce to zero
        for p in sorted((dict(p) for p in polys if p), key=lambda q: self.key(self.lead(q))):
            h = self._nf(p, lms, lcs, G, nfcache)
            if h:
                add_poly(h)

        while heap:
            self._tick(1)
            _, _, i, j, l = heapq.heappop(heap)
            gi, gj = G[i], G[j]
            lmi, lmj = lms[i], lms[j]
            # s-polynomial
            si = l - lmi
            sj = l - lmj
            ci = gi[lmi]
            cj = gj[lmj]
            s = {}
            if self.modulus is not None:
                mod = self.modulus
                inv_i = pow(ci, -1, mod)
                inv_j = pow(cj, -1, mod)
                for m, c in gi.items():
                    s[m + si] = c * inv_i % mod
                for m, c in gj.items():
                    mm = m + sj
                    v = s.get(mm)
                    v = (-c * inv_j if v is None else v - c * inv_j) % mod
                    if v:
                        s[mm] = v
                    else:
                        s.pop(mm, None)
            else:
                for m, c in gi.items():
                    s[m + si] = c / ci
                for m, c in gj.items():
                    mm = m + sj
                    v = s.get(mm)
                    v = -c / cj if v is None else v - c / cj
                    if v:
                        s[mm] = v
                    else:
                        s.pop(mm, None)
            h = self._nf(s, lms, lcs, G, nfcache)
            if h:
                add_poly(h)

        return self._reduce_basis(G, lms)

    def _reduce_basis(self, G, lms):
        # minimal basis
        order_ix = sorted(range(len(G)), key=lambda i: self.key(lms[i]))
        minimal = []
        for i in order_ix:
            if any(self.packer.divides(lms[j], lms[i]) for j in minimal if j != i):
                continue
            minimal.append(i)
        # tail reduction
        final = []
        for idx, i in enumerate(minimal):
            others = [(lms[j], G[j][lms[j]], G[j]) for j in minimal if j != i]
            h = self.normal_form(G[i], others)
            if h:
                final.append(self.normalize(h))
        final.sort(key=lambda p: self.key(self.lead(p)))
        return final


# ---------------------------------------------------------------------------
# public API on MPoly


class Ideal:
    def __init__(self, gens, order, basis_status="raw"):
        gens = [g for g in gens if g]
        if not gens:
            raise ValueError("ideal needs at least one nonzero generator")
        self.gens = list(gens)
        self.order = order
        self.basis_status = basis_status
        self.vt = gens[0].vt

    def __repr__(self):
        return "Ideal(%d gens, %r, %s)" % (len(self.gens), self.order, self.basis_status)


def buchberger(gens, order, budget=None):
    """Reduced Groebner basis of the given generators; deterministic for a
    fixed input and order."""
    ideal = gens if isinstance(gens, Ideal) else Ideal(gens, order)
    eng = _Engine(ideal.vt, order, budget)
    basis = eng.buchberger([eng.from_mpoly(g) for g in ideal.gens])
    out = Ideal([eng.to_mpoly(p) for p in basis], order, basis_status="groebner")
    return out


def modp_buchberger(gens, order, p, budget=None):
    """Reduced Groebner basis modulo the prime p.

    Input generators have rational coefficients; the result is an Ideal
    whose MPoly coefficients are plain integers in [1, p).  Raises
    BadPrimeError when a denominator vanishes mod p.  This is an internal
    acceleration device: callers must reconstruct or verify exact results
    themselves."""
    ideal = gens if isinstance(gens, Ideal) else Ideal(gens, order)
    eng = _Engine(ideal.vt, order, budget, modulus=p)
    basis = eng.buchberger([eng.from_mpoly(g) for g in ideal.gens])
    return Ideal([eng.to_mpoly(b) for b in basis], order,
                 basis_status="groebner")


def normal_form(p, ideal):
    eng = _Engine(ideal.vt, ideal.order)
    basis = []
    for g in ideal.gens:
        d = eng.from_mpoly(g)
        lm = eng.lead(d)
        basis.append((lm, d[lm], d))
    return eng.to_mpoly(eng.normal_form(eng.from_mpoly(p), basis))


def s_polynomial(f, g, order):
    eng = _Engine(f.vt, order)
    df, dg = eng.from_mpoly(f), eng.from_mpoly(g)
    lf, lg = eng.lead(df), eng.lead(dg)
    l = eng.packer.lcm(lf, lg)
    s = {}
    for m, c in df.items():
        s[m + l - lf] = c / df[lf]
    for m, c in dg.items():
        mm = m + l - lg
        v = s.get(mm)
        v = -c / dg[lg] if v is None else v - c / dg[lg]
        if v:
            s[mm] = v
        else:
            s.pop(mm, None)
    return eng.to_mpoly(s)


def eliminate(ideal, keep, budget=None):
    """Generators of the elimination ideal keeping only `keep` variables.

    An empty result signals a positive-dimensional projection and is a
    valid outcome.
    """
    keep = set(keep)
    vt = ideal.vt
    if not keep <= set(vt.names):
        raise ValueError("keep-set contains unknown variables")
    drop = [n for n in vt.names if n not in keep]
    order = elimination_order(vt, drop)
    gb = buchberger(ideal.gens, order, budget)
    out = [g for g in gb.gens if g.variables() <= keep]
    return out


def saturate(ideal, g, budget=None, order=None):
    """I : g^infinity via the Rabinowitsch trick (fresh inverse variable)."""
    if not g:
        raise ValueError("saturation by zero")
    vt = ideal.vt
    wname = "_w"
    while wname in vt:
        wname += "_"
    evt = vt.extended([wname])
    lifted = [p.rename_table(evt) for p in ideal.gens]
    lifted.append(MPoly.gen(evt, wname) * g.rename_table(evt) - 1)
    eideal = Ideal(lifted, elimination_order(evt, [wname]))
    kept = eliminate(eideal, set(vt.names), budget)
    gens = [p.rename_table(vt) for p in kept]
    if not gens:
        gens = [MPoly.const(vt, 1)]
    out_order = order or ideal.order
    return buchberger(gens, out_order, budget)


class DimensionResult:
    def __init__(self, kind, degree=None, witness=None):
        self.kind = kind  # "zero" or "positive"
        self.degree = degree
        self.witness = witness

    @property
    def is_zero_dimensional(self):
        return self.kind == "zero"

    def __repr__(self):
        if self.kind == "zero":
            return "ZeroDimensional(degree=%d)" % self.degree
        return "PositiveDimensional(witness=%r)" % (self.witness,)


def dimension_check(ideal, variables):
    """Zero-dimensionality test over the basis' coefficient field.

    Requires a Groebner basis.  ZeroDimensional iff every variable in
    `variables` has a pure-power leading monomial; the degree is the number
    of standard monomials.
    """
    if ideal.basis_status != "groebner":
        raise ValueError("dimension_check requires a Groebner basis")
    variables = [n for n in ideal.vt.names if n in set(variables)]
    vt = ideal.vt
    ix = [vt.index[n] for n in variables]
    lms = []
    for g in ideal.gens:
        m = max(g.terms, key=lambda mm: ideal.order.key(mm))
        lms.append(tuple(m[i] for i in ix))
    if any(not any(m) for m in lms):
        # 1 in the ideal: empty variety, degree 0, still zero-dimensional
        return DimensionResult("zero", degree=0)
    bounds = {}
    for v_i in range(len(ix)):
        pure = [m[v_i] for m in lms if sum(m) == m[v_i] and m[v_i] > 0]
        if pure:
            bounds[v_i] = min(pure)
    if len(bounds) < len(ix):
        # witness: maximal variable set carrying no leading monomial
        witness = []
        support_sets = [frozenset(i for i, e in enumerate(m) if e) for m in lms]
        for v_i in range(len(ix)):
            trial = set(witness) | {v_i}
            if not any(s <= trial for s in support_sets):
                witness.append(v_i)
        return DimensionResult("positive", witness=tuple(variables[i] for i in witness))
    # count standard monomials by bounded enumeration
    count = 0
    nvars = len(ix)
    stack = [(0, ())]
    while stack:
        v_i, prefix = stack.pop()
        if v_i == nvars:
            m = prefix
            if not any(all(l[i] <= m[i] for i in range(nvars)) for l in lms):
                count += 1
            continue
        for e in range(bounds[v_i]):
            stack.append((v_i + 1, prefix + (e,)))
    return DimensionResult("zero", degree=count)


# ---------------------------------------------------------------------------
# bases over Q(t) through the product order

def groebner_over_t(gens, budget=None, tname="t"):
    """Reduced Groebner basis over Q(t) of polynomials given in Q[vars, t].

    Computed with a product order (t in the bottom block) over Q, then read
    with RatFunc coefficients in the table without t and inter-reduced.
    """
    vt = gens[0].vt
    order = product_order_t_last(vt, tname)
    gb = buchberger(gens, order, budget)
    sub_names = tuple(n for n in vt.names if n != tname)
    svt = VarTable(sub_names)
    tix = vt.index[tname]
    out = []
    for g in gb.gens:
        grouped = {}
        for m, c in g.terms.items():
            xm = tuple(e for i, e in enumerate(m) if i != tix)
            grouped.setdefault(xm, {})[m[tix]] = c
        terms = {}
        for xm, tcoeffs in grouped.items():
            size = max(tcoeffs) + 1
            coeffs = [tcoeffs.get(i, mpq(0)) for i in range(size)]
            terms[xm] = RatFunc(UPoly(coeffs))
        out.append(MPoly(svt, terms))
    sub_order = DegRevLex()
    ideal = Ideal(out, sub_order, basis_status="groebner")
    return _interreduce(ideal)


def _interreduce(ideal):
    eng = _Engine(ideal.vt, ideal.order)
    polys = [eng.from_mpoly(g) for g in ideal.gens]
    basis = eng._reduce_basis(polys, [eng.lead(p) for p in polys])
    return Ideal([eng.to_mpoly(p) for p in basis], ideal.order, basis_status="groebner")
