from fractions import Fraction

from gmpy2 import mpq

from catsolve.mpoly import MPoly, VarTable
from catsolve.puiseux import eval_at_root, puiseux_roots

VT = VarTable(["u", "t"])


def P(text):
    return MPoly.parse(text, VT)


def test_two_simple_rational_branches():
    rep = puiseux_roots(P("(u - t)*(u - 2*t)"), prec=3)
    assert rep.degree == 2
    assert rep.found() == 2
    assert rep.certified
    leads = sorted(c for r in rep.roots for (e, c) in [r.leading])
    assert leads == [mpq(1), mpq(2)]
    assert all(r.valuation == Fraction(1) for r in rep.roots)


def test_ramified_square_root():
    rep = puiseux_roots(P("u^2 - t"), prec=3)
    assert rep.found() == 2
    root = rep.roots[0]
    assert root.valuation == Fraction(1, 2)


def test_negative_valuation_excluded():
    rep = puiseux_roots(P("t*u - 1"), prec=2)
    assert rep.excluded_negative == 1
    assert rep.found() == 0
    assert rep.certified


def test_double_root_multiplicity():
    rep = puiseux_roots(P("(u - t)^2"), prec=3)
    assert rep.found() == 2
    assert any(r.multiplicity == 2 for r in rep.roots)


def test_roots_annihilate_the_polynomial():
    p = P("(u - t)*(u - 2*t)*(u - t^2) ")
    rep = puiseux_roots(p, prec=4)
    assert rep.found() == 3
    for r in rep.roots:
        val = eval_at_root(p, r.series(4))
        assert val.valuation() is None


def test_higher_order_expansion_terms():
    # u = t/(1-t) = t + t^2 + t^3 + ...
    rep = puiseux_roots(P("(1 - t)*u - t"), prec=4)
    assert rep.found() == 1
    terms = dict(rep.roots[0].terms)
    assert terms[Fraction(1)] == 1
    assert terms[Fraction(2)] == 1
    assert terms[Fraction(3)] == 1
