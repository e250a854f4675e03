import pytest
from gmpy2 import mpq

from catsolve.dde import (DDESystem, UAFrac, UnboundParameterError, deform,
                          normalize, parse_dde)
from catsolve.mpoly import MPoly, VarTable
from catsolve.series import solve_series

from conftest import load_fixture


def test_parse_basic_shape():
    sys = parse_dde(load_fixture("ex11.dde"))
    assert sys.n == 2
    assert sys.k == 1
    assert sys.a == 1
    assert sys.names == ["F1", "F2"]

    sys = parse_dde(load_fixture("scalar.dde"))
    assert (sys.n, sys.k, sys.a) == (1, 1, 0)

    sys = parse_dde(load_fixture("geometric.dde"))
    assert (sys.n, sys.k) == (1, 0)


def test_parse_unbound_parameter():
    with pytest.raises(UnboundParameterError):
        parse_dde(load_fixture("hard_unbound.dde"))


def test_dsl_roundtrip():
    for name in ("ex11.dde", "scalar.dde", "hard.dde"):
        sys = parse_dde(load_fixture(name))
        again = parse_dde(sys.to_dsl())
        assert again.n == sys.n and again.k == sys.k and again.a == sys.a
        assert solve_series(again, 8) == solve_series(sys, 8)


def test_normalize_scalar():
    sys = parse_dde(load_fixture("scalar.dde"))
    ns = normalize(sys)
    assert (ns.n, ns.k, ns.m, ns.M) == (1, 1, [1], 1)
    vt = ns.vt
    assert list(vt.names) == ["x1", "z0", "u", "t"]
    # E1 = u*(1 + t*(u*x1^2 + (x1 - z0)/u)) - u*x1
    expected = MPoly.parse("u + t*u^2*x1^2 + t*x1 - t*z0 - u*x1", vt)
    assert ns.E[0] == expected


def test_normalize_modes():
    sys = parse_dde(load_fixture("ex11.dde"))
    mins = normalize(sys, "minimal")
    assert mins.a == 1 and not mins.a_shifted
    ready = normalize(sys, "deformation_ready")
    assert ready.a == 0 and ready.a_shifted
    assert all(mi >= ready.k for mi in ready.m)


def test_deform_parameters_hard():
    sys = parse_dde(load_fixture("hard.dde"))
    dsys, params = deform(sys)
    assert params.beta == 4
    assert params.alpha == 24
    assert params.gamma == [["1", "t^4"], ["t^4", "2"]]
    assert params.epsilon == 1
    assert dsys.a == 0
    sol = solve_series(dsys, 6)
    assert len(sol) == 2


def test_deform_rejects_zero_epsilon():
    sys = parse_dde(load_fixture("scalar.dde"))
    with pytest.raises(ValueError):
        deform(sys, mpq(0))


def test_deform_recovery_at_epsilon_zero():
    # with the coupling switched off the deformed system is the original
    # in the variable t^alpha, so its solution is F(t^alpha, u)
    sys = parse_dde(load_fixture("scalar.dde"))
    dsys, params = deform(sys, epsilon=None)
    alpha = params.alpha
    rhs0 = []
    for fr in dsys.rhs:
        vt0 = VarTable([n for n in fr.vt.names if n != "eps"])
        num0 = fr.num.eval({"eps": mpq(0)}, vt0)
        rhs0.append(UAFrac(num0, fr.pow, fr.a))
    sys0 = DDESystem(dsys.names, "u", 0, dsys.params, rhs0, dsys.k)

    N = 3 * alpha + 1
    G = solve_series(sys0, N)[0]
    F = solve_series(sys, 4)[0]
    for j in range(N):
        if j % alpha == 0:
            assert G.coeffs[j] == F.coeffs[j // alpha]
        else:
            assert not G.coeffs[j]
