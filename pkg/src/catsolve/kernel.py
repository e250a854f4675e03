"""Kernel-method pipeline for systems of discrete differential equations.

From the polynomial equations E_i produced by `dde.normalize` this module
builds the Jacobian determinant Det and its companion polynomial P,
duplicates the system over the expected number of catalytic roots,
certifies genericity (zero-dimensionality over Q(t)), eliminates down to
an annihilating polynomial for the chosen specialized unknown, and drives
the whole solve with guessing and certification."""

from __future__ import annotations

import math
import time

from gmpy2 import mpq

from .mpoly import MPoly, VarTable, pdet, resultant, mgcd, _content_wrt
from .groebner import (Ideal, GBBudget, GBBudgetExceeded, BadPrimeError,
                       _Engine, eliminate, groebner_over_t, dimension_check)
from .orders import DegRevLex, elimination_order
from .dde import normalize, deform, NumeratorSystem
from .series import solve_series, solve_specialized, specialize
from .guess import guess_sweep, verify_annihilation, certify_divides
from .puiseux import _is_probable_prime


def build_det(ns: NumeratorSystem) -> MPoly:
    """Determinant of the Jacobian of (E_1, ..., E_n) with respect to the
    specialized unknowns x_1, ..., x_n."""
    n = ns.n
    rows = [[ns.E[i].deriv("x%d" % (j + 1)) for j in range(n)]
            for i in range(n)]
    return pdet(rows)


def build_p(ns: NumeratorSystem) -> MPoly:
    """Companion determinant: the last Jacobian column is replaced by the
    u-derivatives of the equations."""
    n = ns.n
    rows = []
    for i in range(n):
        row = [ns.E[i].deriv("x%d" % (j + 1)) for j in range(n - 1)]
        row.append(ns.E[i].deriv("u"))
        rows.append(row)
    return pdet(rows)


class KernelSystem:
    """E_i together with Det and P in the variables of the numerator
    system."""

    __slots__ = ("ns", "det", "p")

    def __init__(self, ns: NumeratorSystem):
        self.ns = ns
        self.det = build_det(ns)
        self.p = build_p(ns)

    def __repr__(self):
        return "KernelSystem(n=%d, k=%d)" % (self.ns.n, self.ns.k)


class DuplicatedSystem:
    """nk copies of (E_1..E_n, Det, P), one per expected catalytic root:
    copy c lives in fresh variables x_{nc+1}..x_{nc+n} and u_{c+1} while
    the z's and t are shared."""

    __slots__ = ("gens", "vt", "ns", "copies", "unames")

    def __init__(self, gens, vt, ns, copies, unames):
        self.gens = gens
        self.vt = vt
        self.ns = ns
        self.copies = copies
        self.unames = unames

    def __repr__(self):
        return "DuplicatedSystem(%d copies, %d gens)" % (
            self.copies, len(self.gens))


def duplicate(ks: KernelSystem) -> DuplicatedSystem:
    ns = ks.ns
    n, k = ns.n, ns.k
    copies = n * k
    xnames = ["x%d" % (c * n + i + 1) for c in range(copies)
              for i in range(n)]
    unames = ["u%d" % (c + 1) for c in range(copies)]
    extra = ["eps"] if "eps" in ns.vt.index else []
    vt = VarTable(xnames + ns.znames() + unames + ["t"] + extra)
    gens = []
    polys = list(ns.E) + [ks.det, ks.p]
    for c in range(copies):
        mapping = {"u": "u%d" % (c + 1)}
        for i in range(n):
            mapping["x%d" % (i + 1)] = "x%d" % (c * n + i + 1)
        for p in polys:
            gens.append(p.rename_table(vt, mapping))
    return DuplicatedSystem(gens, vt, ns, copies, unames)


def _with_distinctness(ds: DuplicatedSystem):
    """Generators extended (Rabinowitsch) to force the catalytic roots
    pairwise distinct; returns them unchanged for a single copy."""
    if ds.copies < 2:
        return list(ds.gens), ds.vt
    wname = "w0"
    while wname in ds.vt:
        wname += "_"
    evt = ds.vt.extended([wname])
    gens = [g.rename_table(evt) for g in ds.gens]
    prod = MPoly.const(evt, 1)
    for i in range(ds.copies):
        for j in range(i + 1, ds.copies):
            prod = prod * (MPoly.gen(evt, ds.unames[i])
                           - MPoly.gen(evt, ds.unames[j]))
    gens.append(MPoly.gen(evt, wname) * prod - 1)
    return gens, evt


# ---------------------------------------------------------------------------
# Modular acceleration: arithmetic in GF(p)[x] on plain coefficient lists.
# The exact results are reconstructed by Chinese remaindering plus rational
# reconstruction and then cross-checked against an independent prime, so
# these remain internal devices, not part of the interface.


def _prime_stream():
    """Deterministic decreasing stream of 62-bit primes."""
    c = (1 << 62) - 1
    while True:
        if _is_probable_prime(c):
            yield c
        c -= 2


def _up_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _up_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _up_trim(out)


def _up_divmod(a, b, p):
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    inv = pow(b[-1], -1, p)
    for i in range(len(a) - len(b), -1, -1):
        f = a[i + len(b) - 1] * inv % p
        if f:
            q[i] = f
            for j, y in enumerate(b):
                a[i + j] = (a[i + j] - f * y) % p
    return q, _up_trim(a[: len(b) - 1])


def _up_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _up_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def _up_eval(a, x, p):
    v = 0
    for c in reversed(a):
        v = (v * x + c) % p
    return v


def _lagrange(xs, ys, p):
    """Interpolating polynomial through (xs, ys) via Newton's form."""
    n = len(xs)
    divided = list(ys)
    for k in range(1, n):
        for i in range(n - 1, k - 1, -1):
            divided[i] = ((divided[i] - divided[i - 1])
                          * pow(xs[i] - xs[i - k], -1, p)) % p
    poly = []
    for i in range(n - 1, -1, -1):
        poly = _up_mul(poly, [-xs[i] % p, 1], p)
        if poly:
            poly[0] = (poly[0] + divided[i]) % p
        elif divided[i]:
            poly = [divided[i]]
    return poly


def _up_sub(a, b, p):
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _up_trim([(x - y) % p for x, y in zip(a, b)])


def _cauchy(xs, ys, dn, p):
    """Rational function num/den with deg num <= dn interpolating the
    points, via the extended Euclidean scheme; None when impossible."""
    modpoly = [1]
    for x in xs:
        modpoly = _up_mul(modpoly, [-x % p, 1], p)
    r0, r1 = modpoly, _lagrange(xs, ys, p)
    s0, s1 = [], [1]
    while r1 and len(r1) - 1 > dn:
        q, r = _up_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _up_sub(s0, _up_mul(q, s1, p), p)
    if not s1:
        return None
    g = _up_gcd(r1, s1, p) if r1 else s1
    if len(g) > 1:
        return None
    inv = pow(s1[-1], -1, p)
    num = [c * inv % p for c in r1]
    den = [c * inv % p for c in s1]
    for x, y in zip(xs, ys):
        dv = _up_eval(den, x, p)
        if dv == 0 or _up_eval(num, x, p) != dv * y % p:
            return None
    return num, den


def _rat_recon(r, m):
    """Rational number a/b with a = r*b mod m and |a|, b <= sqrt(m/2)."""
    r %= m
    bound = math.isqrt(m // 2)
    a0, a1 = m, r
    b0, b1 = 0, 1
    while a1 > bound:
        q = a0 // a1
        a0, a1 = a1, a0 - q * a1
        b0, b1 = b1, b0 - q * b1
    if b1 == 0 or abs(b1) > bound or math.gcd(a1, abs(b1)) != 1:
        return None
    if b1 < 0:
        a1, b1 = -a1, -b1
    return mpq(a1, b1)


def _crt(r1, m1, r2, m2):
    d = pow(m1, -1, m2) * (r2 - r1) % m2
    return (r1 + m1 * d) % (m1 * m2)


class _SpecTemplate:
    """Generators of the duplicated (saturated) ideal preprocessed for
    fast specialization t -> tau modulo a prime."""

    def __init__(self, gens, evt, tname="t"):
        self.evt = evt
        self.svt = VarTable([n for n in evt.names if n != tname])
        tix = evt.index[tname]
        keep = [i for i in range(len(evt)) if i != tix]
        self.terms = []
        for g in gens:
            grouped = {}
            for m, c in g.terms.items():
                xm = tuple(m[i] for i in keep)
                grouped.setdefault(xm, []).append((m[tix], c))
            self.terms.append(grouped)

    def at(self, tau, p):
        eng = _Engine(self.svt, DegRevLex(), modulus=p)
        pk = eng.packer.pack
        dicts = []
        for grouped in self.terms:
            d = {}
            for xm, parts in grouped.items():
                v = 0
                for et, c in parts:
                    num, den = int(c.numerator), int(c.denominator)
                    if den % p == 0:
                        raise BadPrimeError("denominator divisible by %d" % p)
                    v += num * pow(den, -1, p) * pow(tau, et, p)
                v %= p
                if v:
                    d[pk(xm)] = v
            if d:
                dicts.append(d)
        return dicts


def _point_gb(tmpl, tau, p, budget):
    """Reduced degrevlex basis of the specialization t=tau mod p, or None
    when the specialized ideal is not zero-dimensional."""
    dicts = tmpl.at(tau, p)
    eng = _Engine(tmpl.svt, DegRevLex(), budget, modulus=p)
    basis = eng.buchberger(dicts)
    lms = [eng.lead(b) for b in basis]
    pure = set()
    for lm in lms:
        e = eng.packer.unpack(lm)
        nz = [i for i, x in enumerate(e) if x]
        if len(nz) == 1:
            pure.add(nz[0])
        elif not nz:
            return eng, basis, []     # ideal is the whole ring
    if pure < set(range(len(tmpl.svt))):
        return None
    # standard monomials (finite since all variables have pure powers)
    stack = [[0] * len(tmpl.svt)]
    seen = {tuple(stack[0])}
    std = []
    divides = eng.packer.divides
    while stack:
        e = stack.pop()
        m = eng.packer.pack(tuple(e))
        if any(divides(lm, m) for lm in lms):
            continue
        std.append(m)
        for i in range(len(e)):
            e2 = list(e)
            e2[i] += 1
            t2 = tuple(e2)
            if t2 not in seen:
                seen.add(t2)
                stack.append(e2)
    return eng, basis, std


def _point_minpoly(tmpl, target, tau, p, budget):
    """Monic minimal polynomial (coefficient list) of the image of
    `target` in the zero-dimensional quotient at t=tau mod p, or None."""
    res = _point_gb(tmpl, tau, p, budget)
    if res is None:
        return None
    eng, basis, std = res
    if not std:
        return None
    triples = [(eng.lead(b), b[eng.lead(b)], b) for b in basis]
    zix = tmpl.svt.index[target]
    zmono = eng.packer.pack(tuple(1 if i == zix else 0
                                  for i in range(len(tmpl.svt))))
    # incremental echelon over the standard-monomial coordinates
    pivots = []        # (pivot monomial, row dict, combination list)
    cur = {0: 1}
    for j in range(len(std) + 1):
        v = dict(cur)
        comb = [0] * j + [1]
        changed = True
        while changed and v:
            changed = False
            for pm, row, pcomb in pivots:
                c = v.get(pm)
                if c:
                    for m, x in row.items():
                        s = (v.get(m, 0) - c * x) % p
                        if s:
                            v[m] = s
                        else:
                            v.pop(m, None)
                    for i, x in enumerate(pcomb):
                        comb[i] = (comb[i] - c * x) % p
                    changed = True
        if not v:
            inv = pow(comb[j], -1, p)
            return [c * inv % p for c in comb]
        pm = max(v)
        inv = pow(v[pm], -1, p)
        v = {m: c * inv % p for m, c in v.items()}
        comb = [c * inv % p for c in comb]
        pivots.append((pm, v, comb))
        # next power: multiply by the target variable and reduce
        nxt = {m + zmono: c for m, c in cur.items()}
        cur = eng._nf(nxt, [t[0] for t in triples], [t[1] for t in triples],
                      [t[2] for t in triples], None)
    raise RuntimeError("no minimal polynomial within the quotient degree")


def _sub_budget(budget, t0, pairs_used=0):
    remaining = budget.max_seconds - (time.monotonic() - t0)
    if remaining <= 0:
        raise GBBudgetExceeded("time limit", pairs_used,
                               time.monotonic() - t0)
    return GBBudget(budget.max_pairs, remaining)


def genericity_check(ds: DuplicatedSystem, budget=None, method="modular"):
    """Zero-dimensionality of the duplicated system over Q(t), with the
    catalytic roots forced pairwise distinct.

    The default method probes random-looking but fixed specializations
    (t -> tau, coefficients mod p) with a degrevlex basis; a
    zero-dimensional specialization certifies zero-dimensionality over
    Q(t) outside finitely many bad (p, tau), while a positive verdict is
    confirmed on a second independent probe.  method="exact" runs the
    product-order basis over Q(t) instead."""
    budget = budget or GBBudget()
    gens, evt = _with_distinctness(ds)
    if method == "exact":
        gb = groebner_over_t(gens, budget)
        return dimension_check(gb, [n for n in evt.names if n != "t"])
    tmpl = _SpecTemplate(gens, evt)
    stream = _prime_stream()
    probes = ((next(stream), 17), (next(stream), -23))
    t0 = time.monotonic()
    last = None
    for p, tau in probes:
        eng = _Engine(tmpl.svt, DegRevLex(), _sub_budget(budget, t0),
                      modulus=p)
        basis = eng.buchberger(tmpl.at(tau % p, p))
        ideal = Ideal([eng.to_mpoly(b) for b in basis], DegRevLex(),
                      basis_status="groebner")
        last = dimension_check(ideal, tmpl.svt.names)
        if last.is_zero_dimensional:
            return last
    return last


def _eliminant_images(tmpl, target, p, npoints, budget, t0, images):
    """Extend `images` (tau -> monic minpoly coefficient list) until it
    holds npoints entries; False when the first probes all fail."""
    tau = max(images) if images else 0
    misses = 0
    while len(images) < npoints:
        tau += 1
        m = _point_minpoly(tmpl, target, tau % p, p,
                           _sub_budget(budget, t0))
        if m is None:
            misses += 1
            if misses > 5 and not images:
                return False
            continue
        images[tau] = m
    return True


def eliminant(ds: DuplicatedSystem, target="z0", budget=None,
              method="modular"):
    """Primitive generator (in Q[target, t]) of the contraction of the
    elimination ideal over Q(t); None when the projection is
    positive-dimensional.

    The default method specializes t pointwise modulo a 62-bit prime,
    computes the minimal polynomial of `target` in each zero-dimensional
    quotient, reconstructs the t-dependence by rational-function
    interpolation and the integer coefficients by rational
    reconstruction, then cross-checks the result at fresh points modulo
    an independent prime.  method="exact" performs the block-order
    elimination over Q instead."""
    if target not in ds.vt.index:
        raise ValueError("unknown target variable %s" % target)
    budget = budget or GBBudget()
    gens, evt = _with_distinctness(ds)
    if method == "exact":
        ideal = Ideal(gens, elimination_order(
            evt, [n for n in evt.names if n not in (target, "t")]))
        kept = eliminate(ideal, {target, "t"}, budget)
        if not kept:
            return None
        g = kept[0]
        for h in kept[1:]:
            g = mgcd(g, h)
        cont = _content_wrt(g, target)
        if not cont.is_const():
            g = g.divexact(cont)
        g, _ = g.primitive()
        return g.rename_table(VarTable([target, "t"]))

    t0 = time.monotonic()
    tmpl = _SpecTemplate(gens, evt)
    primes = _prime_stream()
    acc = None          # (ez, et) -> residue
    modulus = 1
    for _attempt, p in zip(range(8), primes):
        image = _eliminant_modp(tmpl, target, p, budget, t0)
        if image is None:
            return None
        if acc is None:
            acc, modulus = dict(image), p
        elif set(acc) != set(image):
            # an unlucky prime produced a different support; keep the
            # higher-degree reconstruction and restart accumulation
            if max(image) > max(acc):
                acc, modulus = dict(image), p
        else:
            acc = {m: _crt(acc[m], modulus, image[m], p) for m in acc}
            modulus *= p
        cand = {}
        for m, r in acc.items():
            q = _rat_recon(r, modulus)
            if q is None:
                cand = None
                break
            cand[m] = q
        if cand is None:
            continue
        vt2 = VarTable([target, "t"])
        poly = MPoly(vt2, {m: c for m, c in cand.items() if c})
        poly, _ = poly.primitive()
        if _spot_check(tmpl, target, poly, next(primes), budget, t0):
            return poly
    raise GBBudgetExceeded("modular reconstruction did not stabilize", 0,
                           time.monotonic() - t0)


def _eliminant_modp(tmpl, target, p, budget, t0):
    """Image mod p of the eliminant, normalized so its leading
    z-coefficient is monic in t; dict (ez, et) -> residue."""
    bound = 16
    images = {}
    while True:
        npoints = 2 * bound + 4
        if not _eliminant_images(tmpl, target, p, npoints, budget, t0,
                                 images):
            return None
        dz = max(len(m) - 1 for m in images.values())
        good = {tau: m for tau, m in images.items() if len(m) - 1 == dz}
        taus = sorted(good)
        fit, check = taus[:-2], taus[-2:]
        xs = [tau % p for tau in fit]
        coeffs = []
        ok = True
        for i in range(dz):
            ys = [good[tau][i] for tau in fit]
            rec = _cauchy(xs, ys, bound, p)
            if rec is None:
                ok = False
                break
            num, den = rec
            for tau in check:
                dv = _up_eval(den, tau % p, p)
                if dv == 0 or _up_eval(num, tau % p, p) != \
                        dv * good[tau][i] % p:
                    ok = False
                    break
            if not ok:
                break
            coeffs.append((num, den))
        if ok:
            break
        bound *= 2
        if bound > 256:
            raise GBBudgetExceeded("interpolation degree bound", 0,
                                   time.monotonic() - t0)
    # common denominator: the leading z-coefficient of the eliminant
    denom = [1]
    for _, den in coeffs:
        g = _up_gcd(denom, den, p)
        denom = _up_divmod(_up_mul(denom, den, p), g, p)[0]
    out = {}
    for j, c in enumerate(denom):
        if c:
            out[(dz, j)] = c
    for i, (num, den) in enumerate(coeffs):
        mult = _up_divmod(denom, den, p)[0]
        full = _up_mul(num, mult, p)
        for j, c in enumerate(full):
            if c:
                out[(i, j)] = c
    return out


def _spot_check(tmpl, target, poly, p, budget, t0, points=(101, 102, 103)):
    """Verify the reconstructed eliminant against freshly computed point
    minpolys modulo an independent prime."""
    vt2 = poly.vt
    zix, tix = vt2.index[target], vt2.index["t"]
    dz = poly.degree(target)
    verified = 0
    for tau in points:
        m = _point_minpoly(tmpl, target, tau % p, p,
                           _sub_budget(budget, t0))
        if m is None:
            continue
        if len(m) - 1 != dz:
            return False
        # image of poly at t=tau mod p, normalized monic
        vals = [0] * (dz + 1)
        for mono, c in poly.terms.items():
            num, den = int(c.numerator), int(c.denominator)
            vals[mono[zix]] = (vals[mono[zix]] + num * pow(den, -1, p)
                               * pow(tau, mono[tix], p)) % p
        if vals[dz] == 0:
            return False
        inv = pow(vals[dz], -1, p)
        vals = [v * inv % p for v in vals]
        if vals != [x % p for x in m]:
            return False
        verified += 1
    return verified > 0


def reduce_to_scalar(ns: NumeratorSystem) -> MPoly:
    """One polynomial in (x_1, z, u, t) from the system by iterated
    resultants in x_2, ..., x_n, with any factor shared with Det removed."""
    det = build_det(ns)
    r = ns.E[0]
    for j in range(2, ns.n + 1):
        r = resultant(r, ns.E[j - 1], "x%d" % j)
        if not r:
            raise ValueError("resultant vanished; equations share a factor")
    r, _ = r.primitive()
    g = mgcd(r, det)
    while g.total_degree() > 0:
        r = r.divexact(g)
        g = mgcd(r, det)
    r, _ = r.primitive()
    return r


def degree_bound(n, k, delta):
    """A-priori bound on the degree of the annihilating polynomial of a
    specialized unknown: (2nk delta)^(2n^3 k^2 + 2n) / (nk)!^(nk),
    rounded up."""
    import math
    if n < 1 or k < 1 or delta < 1:
        raise ValueError("arguments must be positive")
    num = (2 * n * k * delta) ** (2 * n ** 3 * k ** 2 + 2 * n)
    den = math.factorial(n * k) ** (n * k)
    return -(-num // den)


class SolveReport:
    """Everything the solve driver learned: genericity diagnosis,
    deformation parameters when used, the eliminant if elimination
    finished, the guessed annihilating candidate, and the certification
    level."""

    def __init__(self):
        self.target = "z0"
        self.order = 0
        self.genericity = None            # DimensionResult on the input
        self.genericity_deformed = None   # DimensionResult after deforming
        self.deformation_used = False
        self.deformation = None           # DeformationParams
        self.eliminant = None             # MPoly in [target, t]
        self.candidate = None             # GuessCandidate
        self.minimal = None               # candidate poly once it divides
        self.certificate = "None"         # None/SeriesVerified/Both
        self.budget_error = None
        self.messages = []
        self.counters = {}

    @property
    def certified(self):
        return self.certificate in ("SeriesVerified", "Both")

    @property
    def exit_code(self):
        # a refused deformation leaves the non-generic diagnosis in
        # charge even when a series-verified guess exists: nothing ties
        # the guess to a zero-dimensional ideal
        if (self.genericity is not None
                and not self.genericity.is_zero_dimensional
                and not self.deformation_used):
            return 3
        if self.certified:
            return 0
        return 2

    def __repr__(self):
        return ("SolveReport(certificate=%s, genericity=%r, deformed=%s)"
                % (self.certificate, self.genericity, self.deformation_used))


def _target_series(sys, target, k, N):
    j = int(target[1:])
    i, l = divmod(j, k)
    if k == 1:
        return solve_specialized(sys, N)[i]
    sol = solve_series(sys, N)
    return specialize(sol[i], mpq(sys.a), l)


def solve(sys, order=None, target="z0", deform_mode="auto", epsilon=mpq(1),
          budget=None, max_dz=10, max_dt=12, guard=8):
    """Full pipeline: normalize, duplicate, check genericity (deforming on
    demand), eliminate within budget, guess an annihilating polynomial
    from the series, and certify."""
    if deform_mode not in ("off", "on", "auto"):
        raise ValueError("deform_mode must be off, on or auto")
    budget = budget or GBBudget()
    rep = SolveReport()
    rep.target = target

    ns = normalize(sys, "minimal")
    k = ns.k
    if not target.startswith("z") or not target[1:].isdigit() \
            or int(target[1:]) >= ns.n * k:
        raise ValueError("target must be one of z0..z%d" % (ns.n * k - 1))
    ds = duplicate(KernelSystem(ns))
    rep.counters["equations"] = len(ds.gens)
    rep.counters["variables"] = len(ds.vt)

    try:
        rep.genericity = genericity_check(ds, budget)
    except GBBudgetExceeded as e:
        rep.budget_error = str(e)
        rep.messages.append("genericity check ran out of budget")

    active = None
    if rep.genericity is not None and rep.genericity.is_zero_dimensional \
            and deform_mode != "on":
        active = ds
    elif deform_mode in ("on", "auto") and (
            deform_mode == "on"
            or (rep.genericity is not None
                and not rep.genericity.is_zero_dimensional)):
        dsys, dparams = deform(sys, epsilon)
        rep.deformation_used = True
        rep.deformation = dparams
        dns = normalize(dsys, "deformation_ready")
        dds = duplicate(KernelSystem(dns))
        rep.counters["deformed_equations"] = len(dds.gens)
        try:
            rep.genericity_deformed = genericity_check(dds, budget)
            if rep.genericity_deformed.is_zero_dimensional:
                active = dds
            else:
                rep.messages.append(
                    "deformed system still positive-dimensional")
        except GBBudgetExceeded as e:
            rep.budget_error = str(e)
            rep.messages.append("deformed genericity check ran out of budget")
    elif rep.genericity is not None \
            and not rep.genericity.is_zero_dimensional:
        rep.messages.append(
            "system is non-generic and deformation is disabled")

    # Elimination only makes sense on the undeformed system: after the
    # deformation the eliminated variable belongs to the deformed series.
    if active is ds:
        try:
            rep.eliminant = eliminant(active, target, budget)
            if rep.eliminant is not None:
                rep.counters["eliminant_degree"] = [
                    rep.eliminant.degree(target), rep.eliminant.degree("t")]
        except GBBudgetExceeded as e:
            rep.budget_error = str(e)
            rep.messages.append("elimination ran out of budget")
    elif rep.deformation_used:
        rep.messages.append(
            "eliminant skipped: it would annihilate the deformed series")

    N = order or 64
    rep.order = N
    zser = _target_series(sys, target, k, N)
    rep.candidate = guess_sweep(zser, max_dz, max_dt, guard, zname=target)
    rep.counters["series_order"] = N
    if rep.candidate is not None:
        rep.certificate = "SeriesVerified"
        if rep.eliminant is not None:
            if certify_divides(rep.candidate.poly, rep.eliminant,
                               zname=target):
                rep.certificate = "Both"
                rep.minimal = rep.candidate.poly
            else:
                rep.messages.append(
                    "guessed candidate does not divide the eliminant")
    elif rep.eliminant is not None:
        if verify_annihilation(rep.eliminant, zser, N, zname=target):
            rep.certificate = "SeriesVerified"
            rep.candidate = None
            rep.messages.append(
                "no smaller candidate found; the eliminant itself "
                "annihilates the series")
    return rep
