"""Independent reference computations used to cross-check the library.

Nothing here goes through cremona's polynomial layer: maps are converted to
plain sympy expressions (through their printed form) and contraction is
decided numerically by sampling complex points on each candidate curve.
"""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import sympy as sp

X0, X1, X2, Y0, Y1 = sp.symbols("x0 x1 x2 y0 y1")
P2_VARS = (X0, X1, X2)
P1P1_VARS = (X0, X1, Y0, Y1)


def to_expr(poly) -> sp.Expr:
    return sp.sympify(str(poly).replace("^", "**"), locals={v.name: v for v in P1P1_VARS + (X2,)})


def components(f):
    return [to_expr(F) for F in f.components]


# ---------------------------------------------------------------------------
# contraction by sampling


def _roots_in(expr, var, subs):
    poly = sp.Poly(expr.subs(subs), var)
    coeffs = [complex(c) for c in poly.all_coeffs()]
    if len(coeffs) < 2:
        return []
    return list(np.roots(coeffs))


def _sample_p2(g, rng, n=4):
    pts = []
    for var in (X1, X0, X2):
        if sp.degree(g, var) > 0:
            others = [v for v in P2_VARS if v != var]
            while len(pts) < n:
                subs = {v: complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for v in others}
                for r in _roots_in(g, var, subs)[:1]:
                    pts.append({**subs, var: r})
            return pts
    raise ValueError("constant curve")


def _sample_p1p1(g, rng, n=4):
    pts = []
    if sp.degree(g, Y0) + sp.degree(g, Y1) > 0:
        solve, pair, other = Y0, (Y0, Y1), (X0, X1)
    else:
        solve, pair, other = X0, (X0, X1), (Y0, Y1)
    while len(pts) < n:
        subs = {other[0]: complex(rng.uniform(-2, 2), rng.uniform(-2, 2)), other[1]: 1.0, pair[1]: 1.0}
        roots = _roots_in(g, solve, subs)
        if not roots:  # the curve is the line pair[1] = 0 itself
            subs[pair[1]] = 0.0
            roots = [1.0]
        pts.append({**subs, solve: roots[0]})
    return pts


def _collapsed(vectors, tol=1e-7):
    M = np.array([v / np.linalg.norm(v) for v in vectors])
    s = np.linalg.svd(M, compute_uv=False)
    return s[1] / s[0] < tol


def is_contracted(f, g_expr, seed=0) -> bool:
    """True when the map sends every sampled point of {g = 0} to one point."""
    rng = random.Random(seed)
    comps = components(f)
    if f.ambient.name == "P2":
        fn = sp.lambdify(P2_VARS, comps, "numpy")
        pts = _sample_p2(g_expr, rng)
        imgs = [np.array(fn(*(p[v] for v in P2_VARS)), dtype=complex) for p in pts]
        return _collapsed(imgs)
    fn = sp.lambdify(P1P1_VARS, comps, "numpy")
    pts = _sample_p1p1(g_expr, rng)
    imgs = [np.array(fn(*(p[v] for v in P1P1_VARS)), dtype=complex) for p in pts]
    return _collapsed([v[:2] for v in imgs]) and _collapsed([v[2:] for v in imgs])


def candidate_curves(f):
    """Irreducible curves that could be contracted: Jacobian and pole loci."""
    comps = components(f)
    if f.ambient.name == "P2":
        J = sp.Matrix([[sp.diff(F, v) for v in P2_VARS] for F in comps]).det()
        cands = {fac for fac, _ in sp.factor_list(sp.expand(J))[1]}
        return sorted(cands, key=sp.default_sort_key)
    x, y = sp.symbols("x y")
    aff = {X0: x, X1: 1, Y0: y, Y1: 1}
    U = sp.cancel(comps[0].subs(aff) / comps[1].subs(aff))
    V = sp.cancel(comps[2].subs(aff) / comps[3].subs(aff))
    J = sp.cancel(sp.diff(U, x) * sp.diff(V, y) - sp.diff(U, y) * sp.diff(V, x))
    pieces = [sp.numer(J), sp.denom(J), sp.denom(U), sp.denom(V), sp.numer(U), sp.numer(V)]
    cands = set()
    for p in pieces:
        for fac, _ in sp.factor_list(sp.expand(p))[1]:
            if fac.free_symbols:
                dx, dy = sp.degree(fac, x), sp.degree(fac, y)
                cands.add(sp.expand(X1**dx * Y1**dy * fac.subs({x: X0 / X1, y: Y0 / Y1})))
    cands |= {X1, Y1}
    return sorted(cands, key=sp.default_sort_key)


def contracted_count(f, seed=0) -> int:
    return sum(is_contracted(f, g, seed) for g in candidate_curves(f))


# ---------------------------------------------------------------------------
# affine forms of maps


def affine_form(f):
    """(X(x, y), Y(x, y)) as reduced sympy rational functions."""
    x, y = sp.symbols("x y")
    c = components(f)
    if f.ambient.name == "P2":
        sub = {X0: x, X1: y, X2: 1}
        return sp.cancel(c[0].subs(sub) / c[2].subs(sub)), sp.cancel(c[1].subs(sub) / c[2].subs(sub))
    sub = {X0: x, X1: 1, Y0: y, Y1: 1}
    return sp.cancel(c[0].subs(sub) / c[1].subs(sub)), sp.cancel(c[2].subs(sub) / c[3].subs(sub))


def affine_compose(F, G):
    x, y = sp.symbols("x y")
    return tuple(sp.cancel(h.subs({x: G[0], y: G[1]}, simultaneous=True)) for h in F)


# ---------------------------------------------------------------------------
# Mobius orbits and Farey matrices


def mobius_orbit_finite(M, p, steps=500) -> bool:
    """Brute-force iteration on P1(Q) with cycle detection; p=None is infinity."""
    (a, b), (c, d) = M

    def act(z):
        if z is None:
            return None if c == 0 else Fraction(a, c)
        den = c * z + d
        return None if den == 0 else (a * z + b) / den

    seen = {p}
    z = p
    for _ in range(steps):
        z = act(z)
        if z in seen:
            return True
        seen.add(z)
    return False


def solve_endpoint_system(src, dst):
    """All integer 2x2 matrices sending the endpoint vectors of src to those of dst.

    Solved with sympy linear algebra over Q; returns the list of integral
    solutions (at most one, since the endpoint vectors form a basis).
    """
    a, b, c, d = sp.symbols("a b c d")
    M = sp.Matrix([[a, b], [c, d]])
    eqs = []
    for s, t in zip(src, dst):
        s, t = Fraction(s), Fraction(t)
        img = M * sp.Matrix([s.numerator, s.denominator])
        eqs += [img[0] - t.numerator, img[1] - t.denominator]
    sols = sp.solve(eqs, [a, b, c, d], dict=True)
    out = []
    for sol in sols:
        vals = [sol.get(v) for v in (a, b, c, d)]
        if all(v is not None and v.is_integer for v in vals):
            out.append(((int(vals[0]), int(vals[1])), (int(vals[2]), int(vals[3]))))
    return out
