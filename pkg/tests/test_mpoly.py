import random

import pytest
from gmpy2 import mpq

from catsolve.mpoly import (MPoly, VarTable, cofactor_det, mgcd, pdet,
                            pseudo_divide, resultant, squarefree_part)

VT = VarTable(["x", "y", "t"])


def rand_poly(rng, vt=VT, nterms=4, maxdeg=3, maxc=9):
    terms = {}
    for _ in range(nterms):
        m = tuple(rng.randrange(maxdeg + 1) for _ in vt.names)
        c = mpq(rng.randrange(-maxc, maxc + 1))
        if c:
            terms[m] = terms.get(m, mpq(0)) + c
    return MPoly(vt, {m: c for m, c in terms.items() if c})


def test_ring_axioms_randomized():
    rng = random.Random(7)
    for _ in range(25):
        a, b, c = (rand_poly(rng) for _ in range(3))
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) * c == a * c + b * c
        assert (a * b) * c == a * (b * c)
        assert a - a == MPoly.zero(VT)
        assert a * MPoly.const(VT, 1) == a


def test_parse_roundtrip():
    rng = random.Random(11)
    for _ in range(20):
        p = rand_poly(rng)
        assert MPoly.parse(p.to_str(), VT) == p
    assert MPoly.parse("(x + y)^2 - x^2 - 2*x*y", VT) == \
        MPoly.gen(VT, "y") ** 2
    assert MPoly.parse("0", VT) == MPoly.zero(VT)
    assert MPoly.parse("-3/2*t", VT) == MPoly.gen(VT, "t") * mpq(-3, 2)


def test_deriv_product_rule():
    rng = random.Random(3)
    for _ in range(10):
        f, g = rand_poly(rng), rand_poly(rng)
        lhs = (f * g).deriv("x")
        rhs = f.deriv("x") * g + f * g.deriv("x")
        assert lhs == rhs


def test_eval_homomorphism():
    rng = random.Random(5)
    vals = {"x": mpq(2, 3), "y": mpq(-1), "t": mpq(5)}
    evt = VarTable([])
    for _ in range(10):
        f, g = rand_poly(rng), rand_poly(rng)
        fg = (f * g).eval(vals, evt)
        assert fg == f.eval(vals, evt) * g.eval(vals, evt)


def test_pdet_matches_cofactor_expansion():
    rng = random.Random(13)
    for size in (2, 3, 4):
        rows = [[rand_poly(rng, nterms=2, maxdeg=1) for _ in range(size)]
                for _ in range(size)]
        assert pdet(rows) == cofactor_det(rows)


def test_pdet_alternating_and_multilinear():
    rng = random.Random(17)
    rows = [[rand_poly(rng, nterms=2, maxdeg=1) for _ in range(3)]
            for _ in range(3)]
    swapped = [rows[1], rows[0], rows[2]]
    assert pdet(swapped) == -pdet(rows)
    dup = [rows[0], rows[0], rows[2]]
    assert pdet(dup) == MPoly.zero(VT)
    scaled = [[p * 3 for p in rows[0]], rows[1], rows[2]]
    assert pdet(scaled) == pdet(rows) * 3


def test_resultant_common_factor_vanishes():
    x = MPoly.gen(VT, "x")
    y = MPoly.gen(VT, "y")
    h = x - y
    f = h * (x + 1)
    g = h * (x * y + 2)
    assert resultant(f, g, "x") == MPoly.zero(VT)


def test_resultant_multiplicative():
    rng = random.Random(19)
    for _ in range(5):
        f = rand_poly(rng, nterms=3, maxdeg=2)
        g1 = rand_poly(rng, nterms=3, maxdeg=2)
        g2 = rand_poly(rng, nterms=3, maxdeg=2)
        if f.degree("x") < 1 or g1.degree("x") < 1 or g2.degree("x") < 1:
            continue
        assert resultant(f, g1 * g2, "x") == \
            resultant(f, g1, "x") * resultant(f, g2, "x")


def test_pseudo_divide_reexpansion():
    rng = random.Random(23)
    done = 0
    while done < 10:
        p = rand_poly(rng, nterms=5, maxdeg=3)
        q = rand_poly(rng, nterms=3, maxdeg=2)
        if q.degree("x") < 1:
            continue
        quo, rem, mult = pseudo_divide(p, q, "x")
        assert mult * p == quo * q + rem
        assert rem.degree("x") < q.degree("x")
        done += 1


def test_divexact_and_primitive():
    rng = random.Random(29)
    for _ in range(10):
        a = rand_poly(rng)
        b = rand_poly(rng)
        if not a or not b:
            continue
        prod = a * b
        assert prod.divexact(a) == b
        prim, cont = prod.primitive()
        assert prim * MPoly.const(VT, cont) == prod


def test_mgcd_divides_both():
    x = MPoly.gen(VT, "x")
    y = MPoly.gen(VT, "y")
    h = x * y + 1
    f = h * (x + 2)
    g = h * (y - 3)
    d = mgcd(f, g)
    f.divexact(d)
    g.divexact(d)
    assert d.total_degree() >= h.total_degree()


def test_squarefree_part():
    x = MPoly.gen(VT, "x")
    p = (x + 1) ** 2 * (x - 2)
    sq = squarefree_part(p, "x")
    expected = (x + 1) * (x - 2)
    prim, _ = sq.primitive()
    eprim, _ = expected.primitive()
    assert prim == eprim


def test_degree_queries():
    p = MPoly.parse("x^3*y + t^2*x - 4", VT)
    assert p.degree("x") == 3
    assert p.degree("y") == 1
    assert p.degree("t") == 2
    assert p.total_degree() == 4
    assert p.variables() == {"x", "y", "t"}


def test_as_univariate_reassembles():
    p = MPoly.parse("x^2*y - x*t + y^2 + 7", VT)
    cs = p.as_univariate("x")
    x = MPoly.gen(VT, "x")
    acc = MPoly.zero(VT)
    for i, c in enumerate(cs):
        acc = acc + c * x ** i
    assert acc == p


def test_divexact_rejects_nonfactor():
    x = MPoly.gen(VT, "x")
    with pytest.raises(ValueError):
        (x ** 2 + 1).divexact(x + 1)
