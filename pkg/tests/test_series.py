from gmpy2 import mpq

from catsolve.dde import parse_dde
from catsolve.series import (TruncTSeries, residuals, solve_series,
                             solve_specialized, specialize)

from conftest import load_fixture

FIXTURES = ["scalar.dde", "ex11.dde", "geometric.dde", "hard.dde"]


def test_geometric_closed_form():
    sys = parse_dde(load_fixture("geometric.dde"))
    sol = solve_series(sys, 12)
    s = specialize(sol[0], 0)
    assert s.coeffs == [mpq(1)] * 12


def test_residuals_vanish_on_fixtures():
    for name in FIXTURES:
        sys = parse_dde(load_fixture(name))
        sol = solve_series(sys, 10)
        for r in residuals(sys, sol):
            assert not r, name


def test_unbound_parameter_rejected():
    import pytest

    from catsolve.dde import UnboundParameterError

    with pytest.raises(UnboundParameterError):
        parse_dde(load_fixture("hard_unbound.dde"))


def test_schedule_equivalence():
    for name in FIXTURES:
        sys = parse_dde(load_fixture(name))
        direct = solve_series(sys, 8, schedule="direct")
        jacobi = solve_series(sys, 8, schedule="jacobi")
        assert direct == jacobi, name


def test_specialized_solver_agrees_with_generic():
    for name in ("scalar.dde", "ex11.dde"):
        sys = parse_dde(load_fixture(name))
        fast = solve_specialized(sys, 20)
        sol = solve_series(sys, 20)
        for i in range(sys.n):
            assert fast[i] == specialize(sol[i], sys.a), name


def test_truncated_series_arithmetic():
    N = 16
    one = TruncTSeries.const(1, N)
    t = TruncTSeries.t_series(1, N)
    geom = (one - t).invert_unit()
    assert geom.coeffs == [mpq(1)] * N
    assert (geom * (one - t)).coeffs == [mpq(1)] + [mpq(0)] * (N - 1)
    sq = geom * geom
    assert sq.coeffs == [mpq(i + 1) for i in range(N)]


def test_series_shift_and_valuation():
    N = 8
    t = TruncTSeries.t_series(1, N)
    cube = t * t * t
    assert cube.valuation() == 3
    assert cube.shift(-3).coeffs[0] == 1
    assert (t.shift(2)).valuation() == 3
