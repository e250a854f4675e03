"""End-to-end acceptance checks, one per shipped guarantee.  Each test
prints a single pass line; the eliminant computation for the two-unknown
lattice-walk fixture is marked slow (deselected by default, run with
`pytest -m slow`)."""

import math
import random
import time

import pytest
from gmpy2 import mpq

from catsolve.dde import deform, normalize, parse_dde
from catsolve.groebner import (GBBudget, Ideal, buchberger, dimension_check,
                               eliminate, normal_form, s_polynomial, saturate)
from catsolve.guess import (certify_divides, guess_minpoly, verify_annihilation)
from catsolve.kernel import (KernelSystem, build_det, build_p, degree_bound,
                             duplicate, eliminant, genericity_check,
                             reduce_to_scalar)
from catsolve.mpoly import MPoly, VarTable, mgcd, pseudo_divide, resultant, \
    _content_wrt
from catsolve.orders import DegRevLex
from catsolve.puiseux import puiseux_roots
from catsolve.series import (eval_at_series, residuals, solve_series,
                             solve_specialized, specialize)

from conftest import load_fixture

CUBIC_TEXT = ("64*t^3*z0^3 + (48*t^3 - 72*t^2 + 2*t)*z0^2"
              " - (15*t^3 - 9*t^2 - 19*t + 1)*z0 + t^3 + 27*t^2 - 19*t + 1")


def _ex11():
    return parse_dde(load_fixture("ex11.dde"))


def _series_binding(sys, N):
    sol = solve_series(sys, N)
    k = max(sys.k, 1)
    bind = {}
    for i in range(sys.n):
        bind["x%d" % (i + 1)] = sol[i]
        for l in range(k):
            bind["z%d" % (k * i + l)] = specialize(sol[i], sys.a, l)
    return bind


def test_criterion_01_normalized_equations():
    t0 = time.monotonic()
    ns = normalize(_ex11())
    E1 = MPoly.parse(
        "(1 - x1)*(u - 1) + t*(2*u^2*x1^2 - u^2*z0 + 2*u^2*z1"
        " - 2*u*x1^2 + u^2 + u*x1 - 2*u*z1 - u)", ns.vt)
    E2 = MPoly.parse(
        "x2*(1 - u) + t*(2*u^2*x1*x2 + u^2*x1 - 2*u*x1*x2 - u*x1"
        " + u*x2 - u*z1)", ns.vt)
    assert ns.E[0] == E1
    assert ns.E[1] == E2
    assert time.monotonic() - t0 < 1.0
    print("criterion 1 (normalized equations): PASS")


def test_criterion_02_kernel_determinants():
    t0 = time.monotonic()
    ns = normalize(_ex11())
    det = build_det(ns)
    f1 = MPoly.parse("4*t*u^2*x1 - 4*t*u*x1 + t*u - u + 1", ns.vt)
    f2 = MPoly.parse("2*t*u^2*x1 - 2*t*u*x1 + t*u - u + 1", ns.vt)
    assert det == f1 * f2
    p = build_p(ns)
    u0 = p.as_univariate("u")[0]
    assert u0 == MPoly.parse("-2*t*x1*x2 - t*x1 + t*x2 - t*z1 - x2", ns.vt)
    assert time.monotonic() - t0 < 1.0
    print("criterion 2 (kernel determinants): PASS")


@pytest.mark.slow
def test_criterion_03_full_eliminant():
    t0 = time.monotonic()
    ds = duplicate(KernelSystem(normalize(_ex11())))
    g = eliminant(ds, "z0", budget=GBBudget(2_000_000, 3500))
    assert g.degree("z0") == 13
    assert g.degree("t") == 14
    cubic = MPoly.parse(CUBIC_TEXT, VarTable(["z0", "t"]))
    assert certify_divides(cubic, g)
    assert time.monotonic() - t0 < 3600
    print("criterion 3 (full eliminant): PASS")


def test_criterion_04_guess_minimal_polynomial():
    t0 = time.monotonic()
    s = solve_specialized(_ex11(), 40)[0]
    cand = guess_minpoly(s, 3, 3)
    assert cand is not None
    cubic = MPoly.parse(CUBIC_TEXT, cand.poly.vt)
    assert cand.poly == cubic or cand.poly == -cubic
    assert verify_annihilation(cand.poly, s, 40)
    assert time.monotonic() - t0 < 60
    print("criterion 4 (guessed minimal polynomial): PASS")


def test_criterion_05_genericity_diagnosis():
    budget = GBBudget(1_000_000, 590)
    t0 = time.monotonic()
    res = genericity_check(duplicate(KernelSystem(normalize(_ex11()))),
                           budget)
    assert res.is_zero_dimensional
    assert time.monotonic() - t0 < 600

    t0 = time.monotonic()
    sys = parse_dde(load_fixture("hard.dde"))
    res = genericity_check(duplicate(KernelSystem(normalize(sys))), budget)
    assert not res.is_zero_dimensional
    assert res.witness
    assert time.monotonic() - t0 < 600
    print("criterion 5 (genericity diagnosis): PASS")


def test_criterion_06_deformation():
    t0 = time.monotonic()
    sys = parse_dde(load_fixture("hard.dde"))
    dsys, params = deform(sys, mpq(1))
    assert params.beta == 4
    assert params.alpha == 24
    ns = normalize(dsys, "deformation_ready")
    det = build_det(ns)
    N = 8
    curve = eval_at_series(det, _series_binding(dsys, N), N)
    rep = puiseux_roots(curve, prec=2)
    nk = dsys.n * max(dsys.k, 1)
    assert rep.distinct_nonzero() == nk
    simple = [r for r in rep.roots if r.multiplicity == 1 and r.terms]
    assert all(r.valuation == 1 for r in simple)
    assert sorted(c for r in simple for (e, c) in [r.leading]) == \
        [mpq(1), mpq(2)]
    assert time.monotonic() - t0 < 300
    print("criterion 6 (deformation): PASS")


def test_criterion_07_scalar_reduction():
    t0 = time.monotonic()
    sys = _ex11()
    ns = normalize(sys)
    R = reduce_to_scalar(ns)
    assert set(R.variables()) <= {"x1", "z0", "z1", "u", "t"}
    dR = R.deriv("x1")
    N = 8
    bind = _series_binding(sys, N)
    curve = eval_at_series(build_det(ns), bind, N)
    rep = puiseux_roots(curve, prec=3)
    certified = [r for r in rep.roots if r.status in ("ok", "exact")
                 and r.multiplicity == 1]
    assert certified
    S = eval_at_series(dR, bind, N)
    for r in certified:
        val = S.compose_u(r.series(4))
        v = val.valuation()
        assert v is None or mpq(v, val.d) >= 2
    assert time.monotonic() - t0 < 300
    print("criterion 7 (scalar reduction): PASS")


def test_criterion_08_scalar_pipeline_vs_classical():
    t0 = time.monotonic()
    sys = parse_dde(load_fixture("scalar.dde"))
    ns = normalize(sys)
    E = ns.E[0]
    ideal = Ideal([E, E.deriv("x1"), E.deriv("u")], DegRevLex())
    kept = eliminate(ideal, {"z0", "t"})
    classical = kept[0]
    for g in kept[1:]:
        classical = mgcd(classical, g)
    classical, _ = classical.primitive()
    cont = _content_wrt(classical, "z0")
    if not cont.is_const():
        classical = classical.divexact(cont)
    classical, _ = classical.primitive()

    ds = duplicate(KernelSystem(ns))
    g = eliminant(ds, "z0")
    cvt = classical.rename_table(g.vt)
    assert g == cvt or g == -cvt

    s = solve_specialized(sys, 30)[0]
    assert verify_annihilation(g, s, 30)
    assert time.monotonic() - t0 < 120
    print("criterion 8 (scalar pipeline vs classical): PASS")


def test_criterion_09_property_suites():
    # fixed-point residuals vanish on every fixture
    for name in ("scalar.dde", "ex11.dde", "geometric.dde", "hard.dde"):
        sys = parse_dde(load_fixture(name))
        sol = solve_series(sys, 8)
        assert not any(residuals(sys, sol)), name

    # S-polynomials of a Groebner basis reduce to zero
    vt = VarTable(["x", "y", "z"])
    gens = [MPoly.parse(s, vt) for s in
            ("x^2 + y^2 + z^2 - 1", "x*y - z", "x - y + z^2")]
    gb = buchberger(gens, DegRevLex())
    for i in range(len(gb.gens)):
        for j in range(i + 1, len(gb.gens)):
            s = s_polynomial(gb.gens[i], gb.gens[j], DegRevLex())
            if s:
                assert not normal_form(s, gb)

    # saturation is idempotent
    ideal = Ideal([MPoly.parse("x*y", vt), MPoly.parse("x*z", vt)],
                  DegRevLex())
    x = MPoly.gen(vt, "x")
    sat1 = saturate(ideal, x)
    sat2 = saturate(sat1, x)
    assert [g.to_str() for g in sat1.gens] == [g.to_str() for g in sat2.gens]

    # the resultant lies in the elimination ideal
    rng = random.Random(31)
    from test_mpoly import rand_poly
    done = 0
    while done < 3:
        f = rand_poly(rng, vt, nterms=3, maxdeg=2)
        g = rand_poly(rng, vt, nterms=3, maxdeg=2)
        if f.degree("x") < 1 or g.degree("x") < 1:
            continue
        r = resultant(f, g, "x")
        gb = buchberger([f, g], DegRevLex(), GBBudget(10_000, 60))
        assert not normal_form(r, gb)
        done += 1

    # pseudo-division re-expands exactly
    done = 0
    while done < 5:
        p = rand_poly(rng, vt, nterms=5, maxdeg=3)
        q = rand_poly(rng, vt, nterms=3, maxdeg=2)
        if q.degree("x") < 1:
            continue
        quo, rem, mult = pseudo_divide(p, q, "x")
        assert mult * p == quo * q + rem
        done += 1

    # twenty randomized guess-and-recover round trips
    from test_guess import eval_series, newton_root, random_annihilator
    rng = random.Random(2024)
    for _ in range(20):
        p, c0 = random_annihilator(rng)
        s = newton_root(p, c0, 24)
        assert not eval_series(p, s)
        cand = guess_minpoly(s, 2, 2)
        assert cand is not None and verify_annihilation(cand.poly, s, 24)
        assert certify_divides(cand.poly, p)
    print("criterion 9 (property suites): PASS")


def test_criterion_10_degree_bound():
    from fractions import Fraction
    t0 = time.monotonic()
    assert degree_bound(1, 1, 2) == 256
    rng = random.Random(5)
    for _ in range(5):
        n = rng.randrange(1, 3)
        k = rng.randrange(1, 3)
        delta = rng.randrange(1, 6)
        expected = math.ceil(Fraction(
            (2 * n * k * delta) ** (2 * n ** 3 * k ** 2 + 2 * n),
            math.factorial(n * k) ** (n * k)))
        assert degree_bound(n, k, delta) == expected
    assert time.monotonic() - t0 < 1.0
    print("criterion 10 (degree bound): PASS")
