import random

from catsolve.mpoly import VarTable
from catsolve.orders import (Block, DegRevLex, Lex, elimination_order,
                             product_order_t_last)


def rand_mono(rng, n):
    return tuple(rng.randrange(5) for _ in range(n))


def check_order_axioms(order, n, rng):
    zero = (0,) * n
    for _ in range(50):
        a, b, c = (rand_mono(rng, n) for _ in range(3))
        ka, kb = order.key(a), order.key(b)
        # total: equal keys only for equal monomials
        assert (ka == kb) == (a == b)
        # compatible with multiplication
        ab = tuple(x + y for x, y in zip(a, c))
        bb = tuple(x + y for x, y in zip(b, c))
        assert (ka < kb) == (order.key(ab) < order.key(bb))
        # 1 is smallest
        if a != zero:
            assert order.key(zero) < ka


def test_order_axioms():
    rng = random.Random(1)
    for order in (Lex(), DegRevLex()):
        check_order_axioms(order, 4, rng)


def test_lex_and_degrevlex_disagree():
    # x^3 vs x*y*z: lex prefers x^3, degrevlex ties on degree then
    # compares reversed exponents
    a, b = (3, 0, 0), (1, 1, 1)
    assert Lex().key(a) > Lex().key(b)
    assert DegRevLex().key(a) > DegRevLex().key(b)
    # y^2*z vs x*z^2: same degree; degrevlex picks the one with the
    # smaller last exponent as larger
    a, b = (0, 2, 1), (1, 0, 2)
    assert DegRevLex().key(a) > DegRevLex().key(b)
    assert Lex().key(a) < Lex().key(b)


def test_elimination_order_blocks():
    vt = VarTable(["x", "y", "z", "t"])
    order = elimination_order(vt, ["x", "y"])
    # any monomial containing an eliminated variable beats any monomial
    # in the kept block only
    assert order.key((1, 0, 0, 0)) > order.key((0, 0, 9, 9))
    assert order.key((0, 1, 0, 0)) > order.key((0, 0, 9, 9))
    rng = random.Random(3)
    check_order_axioms(order, 4, rng)


def test_product_order_t_last():
    vt = VarTable(["x", "y", "t"])
    order = product_order_t_last(vt)
    # t is infinitely small: x beats any pure power of t
    assert order.key((1, 0, 0)) > order.key((0, 0, 9))
    rng = random.Random(5)
    check_order_axioms(order, 3, rng)


def test_block_order_composition():
    o = Block([((0, 1), Lex()), ((2, 3), DegRevLex())])
    rng = random.Random(7)
    check_order_axioms(o, 4, rng)
    # first block decides
    assert o.key((1, 0, 0, 0)) > o.key((0, 0, 9, 9))
