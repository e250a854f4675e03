import random

import pytest
from gmpy2 import mpq

from catsolve.guess import (InsufficientTruncationError, certify_divides,
                            guess_minpoly, guess_sweep, verify_annihilation)
from catsolve.mpoly import MPoly, VarTable
from catsolve.series import TruncTSeries, eval_at_tseries

VT = VarTable(["z0", "t"])


def geometric(N):
    return TruncTSeries(1, [mpq(1)] * N)


def eval_series(p, s):
    N = len(s.coeffs)
    return eval_at_tseries(p, {"z0": s, "t": TruncTSeries.t_series(1, N)})


def newton_root(p, c0, N):
    """The unique series root of p(z, t) with z(0) = c0, via Newton
    iteration (requires dp/dz(c0, 0) != 0)."""
    dp = p.deriv("z0")
    s = TruncTSeries.const(c0, N)
    prec = 1
    while prec < N:
        prec = min(2 * prec, N)
        s = s - eval_series(p, s).divide(eval_series(dp, s))
    return s


def random_annihilator(rng):
    """A bidegree-(2, 2) polynomial with a series root at a random rational
    center."""
    while True:
        c0 = mpq(rng.randrange(-4, 5), rng.randrange(1, 4))
        terms = {}
        for i in range(3):
            for j in range(3):
                c = rng.randrange(-9, 10)
                if c:
                    terms[(i, j)] = mpq(c)
        p = MPoly(VT, terms)
        if p.degree("z0") != 2 or p.degree("t") != 2:
            continue
        shift = p.eval({"z0": c0, "t": mpq(0)}, VarTable([]))
        p = p - MPoly.const(VT, shift.const_value())
        dz = p.deriv("z0").eval({"z0": c0, "t": mpq(0)}, VarTable([]))
        if not dz.const_value():
            continue
        return p, c0


def test_guess_recover_roundtrip_randomized():
    rng = random.Random(2024)
    N = 24
    for _ in range(20):
        p, c0 = random_annihilator(rng)
        s = newton_root(p, c0, N)
        assert not eval_series(p, s)
        cand = guess_minpoly(s, 2, 2)
        assert cand is not None
        assert verify_annihilation(cand.poly, s, N)
        assert certify_divides(cand.poly, p)


def test_guess_geometric():
    s = geometric(20)
    cand = guess_minpoly(s, 1, 1)
    assert cand is not None
    expected = MPoly.parse("z0*t - z0 + 1", VT)
    assert cand.poly == expected or cand.poly == -expected


def test_guess_sweep_finds_minimal_bidegree():
    s = geometric(30)
    cand = guess_sweep(s, 3, 3)
    assert cand is not None
    assert cand.poly.degree("z0") == 1
    assert cand.poly.degree("t") == 1


def test_insufficient_truncation():
    s = geometric(6)
    with pytest.raises(InsufficientTruncationError):
        guess_minpoly(s, 2, 2)


def test_verify_annihilation_negative():
    s = geometric(12)
    p = MPoly.parse("z0^2 - t", VT)
    assert not verify_annihilation(p, s, 12)


def test_certify_divides():
    a = MPoly.parse("z0*t - z0 + 1", VT)
    cof = MPoly.parse("z0^2 + t^2 + 3", VT)
    assert certify_divides(a, a * cof)
    assert not certify_divides(a, a * cof + MPoly.const(VT, 1))


def test_guess_rejects_pure_noise():
    rng = random.Random(99)
    coeffs = [mpq(rng.randrange(-10 ** 6, 10 ** 6),
                  rng.randrange(1, 1000)) for _ in range(26)]
    cand = guess_minpoly(TruncTSeries(1, coeffs), 2, 2)
    assert cand is None or not verify_annihilation(cand.poly,
                                                   TruncTSeries(1, coeffs), 26)
