"""Guessing annihilating polynomials from truncated series, and the two
certification layers: re-verification at higher order and exact
divisibility against an eliminant."""

from __future__ import annotations

from gmpy2 import mpq

from .mpoly import MPoly, VarTable, pseudo_divide
from .series import TruncTSeries


class InsufficientTruncationError(ValueError):
    pass


class GuessCandidate:
    """An annihilating polynomial candidate P(z, t) with the degree bounds
    used for the ansatz and the order to which it was verified."""

    __slots__ = ("poly", "dz", "dt", "verified_order", "zname")

    def __init__(self, poly, dz, dt, verified_order, zname="z0"):
        self.poly = poly
        self.dz = dz
        self.dt = dt
        self.verified_order = verified_order
        self.zname = zname

    def __repr__(self):
        return "GuessCandidate(deg=(%d, %d), verified_order=%d)" % (
            self.poly.degree(self.zname), self.poly.degree("t"),
            self.verified_order)


def _series_powers(s: TruncTSeries, dz, N):
    one = TruncTSeries.const(1, N)
    powers = [one]
    cur = one
    base = s.truncate(N)
    for _ in range(dz):
        cur = cur * base
        powers.append(cur)
    return powers


def _nullspace(rows, ncols):
    """Basis of the right nullspace of the rational matrix given as a list
    of rows, via exact Gaussian elimination."""
    mat = [list(r) for r in rows]
    nrows = len(mat)
    pivots = []  # (row, col)
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if mat[i][c]:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append((r, c))
        r += 1
        if r == nrows:
            break
    pivot_cols = {c for _, c in pivots}
    basis = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        v = [mpq(0)] * ncols
        v[free] = mpq(1)
        for rr, cc in pivots:
            v[cc] = -mat[rr][free]
        basis.append(v)
    return basis


def guess_minpoly(s: TruncTSeries, dz, dt, guard=8, zname="z0"):
    """Search for P(z, t) of bidegree at most (dz, dt) with P(s, t) = 0 mod
    the available truncation.

    The ansatz coefficients come from the exact nullspace of the linear
    system matching at least (dz+1)(dt+1) + guard series coefficients;
    among the solutions the one of minimal (deg_z, deg_t) is returned
    (None when the nullspace is trivial)."""
    if s.d != 1:
        raise ValueError("ramified series not supported")
    need = (dz + 1) * (dt + 1) + guard
    if len(s.coeffs) < need:
        raise InsufficientTruncationError(
            "need %d series coefficients for bidegree (%d, %d), have %d"
            % (need, dz, dt, len(s.coeffs)))
    N = len(s.coeffs)
    powers = _series_powers(s, dz, N)
    cols = [(i, j) for i in range(dz + 1) for j in range(dt + 1)]
    rows = []
    for r in range(N):
        row = []
        for i, j in cols:
            row.append(powers[i].coeffs[r - j] if r >= j else mpq(0))
        rows.append(row)
    basis = _nullspace(rows, len(cols))
    if not basis:
        return None
    vt = VarTable([zname, "t"])
    cands = []
    for v in basis:
        terms = {}
        for (i, j), c in zip(cols, v):
            if c:
                terms[(i, j)] = c
        p = MPoly(vt, terms)
        cands.append((p.degree(zname), p.degree("t"), p.to_str(), p))
    cands.sort(key=lambda x: x[:3])
    best = cands[0][3]
    best, _ = best.primitive()
    return GuessCandidate(best, dz, dt, N, zname)


def guess_sweep(s: TruncTSeries, max_dz, max_dt, guard=8, zname="z0"):
    """Diagonal search over bidegrees (dz + dt ascending, then dz): the
    first candidate that verifies at the full available order wins."""
    N = len(s.coeffs)
    tried = set()
    for total in range(2, max_dz + max_dt + 1):
        for dz in range(1, min(total, max_dz) + 1):
            dt = total - dz
            if dt > max_dt or (dz, dt) in tried:
                continue
            tried.add((dz, dt))
            if (dz + 1) * (dt + 1) + guard > N:
                continue
            cand = guess_minpoly(s, dz, dt, guard, zname)
            if cand is not None and verify_annihilation(cand.poly, s, N, zname):
                cand.verified_order = N
                return cand
    return None


def verify_annihilation(p: MPoly, s: TruncTSeries, order, zname=None):
    """Exact check that p(z := s, t) vanishes mod t^order."""
    if not p:
        raise ValueError("zero polynomial")
    if order > len(s.coeffs):
        raise ValueError("order exceeds the series truncation")
    if zname is None:
        zs = [v for v in p.variables() if v != "t"]
        if len(zs) > 1:
            raise ValueError("polynomial must involve one variable besides t")
        zname = zs[0] if zs else "z0"
    dz = p.degree(zname)
    powers = _series_powers(s, dz, order)
    z_ix = p.vt.index.get(zname)
    t_ix = p.vt.index["t"]
    acc = [mpq(0)] * order
    for m, c in p.terms.items():
        i = m[z_ix] if z_ix is not None else 0
        j = m[t_ix]
        pw = powers[i].coeffs
        for r in range(j, order):
            if pw[r - j]:
                acc[r] += mpq(c) * pw[r - j]
    return not any(acc)


def certify_divides(candidate: MPoly, eliminant: MPoly, zname="z0"):
    """True iff candidate divides eliminant in Q(t)[z]: pseudo-division in
    z leaves no remainder and the leading-coefficient multiplier divides
    the pseudo-quotient exactly."""
    if not candidate or not eliminant:
        raise ValueError("zero input")
    if candidate.degree(zname) < 1:
        raise ValueError("candidate must have positive degree in %s" % zname)
    if candidate.vt != eliminant.vt:
        eliminant = eliminant.rename_table(candidate.vt)
    quo, rem, mult = pseudo_divide(eliminant, candidate, zname)
    if rem:
        return False
    if mult.is_const():
        return True
    try:
        quo.divexact(mult)
    except ValueError:
        return False
    return True
