import pytest
from gmpy2 import mpq

from catsolve.groebner import (BadPrimeError, GBBudget, GBBudgetExceeded,
                               Ideal, buchberger, dimension_check, eliminate,
                               groebner_over_t, modp_buchberger, normal_form,
                               s_polynomial, saturate)
from catsolve.mpoly import MPoly, VarTable
from catsolve.orders import DegRevLex, Lex

VT = VarTable(["x", "y", "z"])


def P(text, vt=VT):
    return MPoly.parse(text, vt)


def test_buchberger_known_basis():
    # <y - x^2, z - x^3> in lex x > y > z contains the twisted-cubic
    # relations among y and z after eliminating x
    gb = buchberger([P("y - x^2"), P("z - x^3")], Lex())
    polys = set(g.to_str() for g in gb.gens)
    assert "y^3 - z^2" in polys


def test_spolynomials_reduce_to_zero():
    gens = [P("x^2 + y^2 + z^2 - 1"), P("x*y - z"), P("x - y + z^2")]
    for order in (DegRevLex(), Lex()):
        gb = buchberger(gens, order)
        for i in range(len(gb.gens)):
            for j in range(i + 1, len(gb.gens)):
                s = s_polynomial(gb.gens[i], gb.gens[j], order)
                if s:
                    assert not normal_form(s, gb)


def test_ideal_membership():
    gens = [P("x^2 - y"), P("y^2 - z")]
    gb = buchberger(gens, DegRevLex())
    member = gens[0] * P("x*y + 3") + gens[1] * P("z - x")
    assert not normal_form(member, gb)
    assert normal_form(P("x"), gb)


def test_saturation_removes_component_and_is_idempotent():
    # <x*y, x*z> = <x> intersect <y, z>; saturating by x leaves <y, z>
    gens = [P("x*y"), P("x*z")]
    ideal = Ideal(gens, DegRevLex())
    sat1 = saturate(ideal, P("x"))
    assert set(g.to_str() for g in sat1.gens) == {"y", "z"}
    sat2 = saturate(sat1, P("x"))
    assert [g.to_str() for g in sat2.gens] == [g.to_str() for g in sat1.gens]


def test_eliminate_projection():
    gens = [P("x^2 - y"), P("x^3 - z")]
    ideal = Ideal(gens, DegRevLex())
    out = eliminate(ideal, {"y", "z"})
    assert len(out) == 1
    assert out[0].primitive()[0].to_str() in ("y^3 - z^2", "-y^3 + z^2")


def test_eliminate_positive_dimensional_is_empty():
    ideal = Ideal([P("x - y")], DegRevLex())
    assert eliminate(ideal, {"z"}) == []


def test_dimension_check_zero_dimensional():
    gb = buchberger([P("x^2 - 1"), P("y^3 - x"), P("z - x*y")], DegRevLex())
    res = dimension_check(gb, ["x", "y", "z"])
    assert res.is_zero_dimensional
    assert res.degree == 6


def test_dimension_check_positive_dimensional():
    gb = buchberger([P("x*y")], DegRevLex())
    res = dimension_check(gb, ["x", "y", "z"])
    assert not res.is_zero_dimensional
    assert res.witness


def test_dimension_check_unit_ideal():
    gb = buchberger([P("x"), P("x - 1")], DegRevLex())
    res = dimension_check(gb, ["x", "y", "z"])
    assert res.is_zero_dimensional
    assert res.degree == 0


def test_budget_exceeded():
    gens = [P("x^2 + y^2 + z^2 - 1"), P("x*y*z - 1"), P("x^3 - y + z")]
    with pytest.raises(GBBudgetExceeded):
        buchberger(gens, DegRevLex(), GBBudget(max_pairs=1, max_seconds=600))


def test_modp_matches_exact_basis_image():
    p = 2147483647
    gens = [P("x^2 + y^2 + z^2 - 1"), P("x*y - z"), P("x - y + z^2")]
    exact = buchberger(gens, DegRevLex())
    mod = modp_buchberger(gens, DegRevLex(), p)

    def image(poly):
        out = {}
        for m, c in poly.terms.items():
            q = mpq(c)
            r = int(q.numerator) * pow(int(q.denominator), p - 2, p) % p
            if r:
                out[m] = r
        lead = max(out, key=lambda mm: DegRevLex().key(mm))
        inv = pow(out[lead], p - 2, p)
        return {m: c * inv % p for m, c in out.items()}

    exact_imgs = sorted(sorted(d.items()) for d in map(image, exact.gens))
    mod_imgs = sorted(sorted(image(g).items()) for g in mod.gens)
    assert exact_imgs == mod_imgs


def test_modp_bad_prime():
    p = 5
    gens = [P("x^2 - y") * mpq(1, 5), P("y - 1")]
    with pytest.raises(BadPrimeError):
        modp_buchberger(gens, DegRevLex(), p)


def test_groebner_over_t():
    vt = VarTable(["x", "y", "t"])
    gens = [MPoly.parse("t*x - 1", vt), MPoly.parse("y - x^2", vt)]
    gb = groebner_over_t(gens)
    # over Q(t) the ideal is <x - 1/t, y - 1/t^2>: zero-dimensional of
    # degree 1
    res = dimension_check(gb, ["x", "y"])
    assert res.is_zero_dimensional
    assert res.degree == 1
