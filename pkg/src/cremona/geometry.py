"""Ambient surfaces, closed points, curves, and a zero-dimensional solver.

Two ambients are supported: the plane with coordinates ``x0, x1, x2`` and
the quadric P1xP1 with coordinate groups ``(x0, x1)`` and ``(y0, y1)``.
Points defined over a number field are stored as a triangular system:
the field Q[t]/(m) with one coordinate equal to ``t`` and the others as
polynomials in ``t``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    AlgebraicAnchorUnsupported,
    EliminationFailure,
    MathDomainError,
    VariableMismatch,
)
from .exactmath import AlgebraicField, MultiPoly, factor, gcd, resultant

T = "t"
_TV = (T,)


@dataclass(frozen=True)
class Ambient:
    name: str
    groups: tuple[tuple[str, ...], ...]

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(v for g in self.groups for v in g)

    def gens(self) -> tuple[MultiPoly, ...]:
        return MultiPoly.gens(self.variables)

    def group_degrees(self, p: MultiPoly) -> tuple[int, ...]:
        return tuple(p.group_degree(g) for g in self.groups)

    def is_homogeneous(self, p: MultiPoly) -> bool:
        return p.is_homogeneous(self.groups)

    def __str__(self):
        return self.name

    def __repr__(self):
        return f"Ambient({self.name})"


P2 = Ambient("P2", (("x0", "x1", "x2"),))
P1xP1 = Ambient("P1xP1", (("x0", "x1"), ("y0", "y1")))
AMBIENTS = {"P2": P2, "P1xP1": P1xP1}


def ambient_named(name: str) -> Ambient:
    key = name.replace("×", "x").replace("¹", "1").replace("²", "2")
    try:
        return AMBIENTS[key]
    except KeyError:
        raise VariableMismatch(f"unknown ambient {name!r}") from None


# ---------------------------------------------------------------------------
# points


class ClosedPoint:
    """Base class for closed points; see `RationalPoint` and `GaloisPoint`."""

    ambient: Ambient

    @property
    def degree(self) -> int:
        raise NotImplementedError

    def sort_key(self):
        raise NotImplementedError


def _normalize_group(coords):
    coords = [Fraction(c) for c in coords]
    lead = next((c for c in coords if c != 0), None)
    if lead is None:
        raise MathDomainError("projective point with all coordinates zero")
    return tuple(c / lead for c in coords)


@dataclass(frozen=True)
class RationalPoint(ClosedPoint):
    ambient: Ambient
    coords: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def make(cls, ambient: Ambient, coords) -> "RationalPoint":
        if len(ambient.groups) == 1 and not isinstance(coords[0], (tuple, list)):
            coords = (coords,)
        if [len(c) for c in coords] != [len(g) for g in ambient.groups]:
            raise VariableMismatch(f"wrong coordinate shape for {ambient}")
        return cls(ambient, tuple(_normalize_group(c) for c in coords))

    @property
    def degree(self) -> int:
        return 1

    @property
    def flat(self) -> tuple[Fraction, ...]:
        return tuple(c for g in self.coords for c in g)

    def as_dict(self) -> dict[str, Fraction]:
        return dict(zip(self.ambient.variables, self.flat))

    def sort_key(self):
        return (1, tuple(_frac_key(c) for c in self.flat))

    def __str__(self):
        groups = ["[" + " : ".join(str(c) for c in g) + "]" for g in self.coords]
        return groups[0] if len(groups) == 1 else "(" + ", ".join(groups) + ")"

    def to_record(self):
        return {"kind": "rational", "ambient": self.ambient.name,
                "coords": [[str(c) for c in g] for g in self.coords]}


def _frac_key(c: Fraction):
    return (c == 0, abs(c.numerator) + c.denominator, c.denominator, c < 0, abs(c.numerator))


@dataclass(frozen=True)
class GaloisPoint(ClosedPoint):
    """A Galois orbit of points, all conjugate over Q.

    One coordinate equals the generator ``t`` of ``field``; the rest are
    polynomials in ``t`` of degree below the field degree.
    """

    ambient: Ambient
    field: AlgebraicField
    coords: tuple[tuple[MultiPoly, ...], ...]

    @classmethod
    def make(cls, ambient: Ambient, field: AlgebraicField, coords) -> ClosedPoint:
        """Canonicalize; a degree-one system is returned as a `RationalPoint`."""
        normed = []
        for g in coords:
            g = [field.reduce(c) for c in g]
            lead = next((c for c in g if not c.is_zero()), None)
            if lead is None:
                raise MathDomainError("projective point with all coordinates zero")
            inv = field.inv(lead)
            normed.append(tuple(field.mul(c, inv) for c in g))
        if field.degree == 1:
            return RationalPoint.make(ambient, [[c.constant_value() for c in g] for g in normed])
        flat = [c for g in normed for c in g]
        gen = next((c for c in flat if not c.is_constant() and field.generates(c)), None)
        if gen is None:
            raise AlgebraicAnchorUnsupported(
                "no single coordinate generates the residue field of this point"
            )
        new, image = field.reparametrize(gen)
        moved = tuple(
            tuple(new.reduce(c.subs({T: image})) for c in g) for g in normed
        )
        return cls(ambient, new, moved)

    @property
    def degree(self) -> int:
        return self.field.degree

    def sort_key(self):
        flat = [c for g in self.coords for c in g]
        return (self.degree, str(self.field.modulus), tuple(str(c) for c in flat))

    def conjugates_evaluate(self, poly: MultiPoly) -> MultiPoly:
        """poly at the point, as an element of the field."""
        mapping = dict(zip(self.ambient.variables, (c for g in self.coords for c in g)))
        return self.field.reduce(poly.subs(mapping))

    def __str__(self):
        groups = ["[" + " : ".join(str(c) for c in g) + "]" for g in self.coords]
        body = groups[0] if len(groups) == 1 else "(" + ", ".join(groups) + ")"
        return f"{{{self.field.modulus} = 0: {body}}}"

    def to_record(self):
        return {"kind": "galois", "ambient": self.ambient.name,
                "modulus": str(self.field.modulus),
                "coords": [[str(c) for c in g] for g in self.coords]}


def point_on(p: ClosedPoint, poly: MultiPoly) -> bool:
    if isinstance(p, RationalPoint):
        return poly.evaluate(p.as_dict()) == 0
    return p.conjugates_evaluate(poly).is_zero()


def sort_points(points):
    return sorted(set(points), key=lambda p: p.sort_key())


# ---------------------------------------------------------------------------
# curves


@dataclass(frozen=True)
class CurveOnX:
    ambient: Ambient
    poly: MultiPoly

    @classmethod
    def make(cls, ambient: Ambient, poly: MultiPoly, check: bool = True) -> "CurveOnX":
        if poly.variables != ambient.variables:
            poly = poly.in_variables(ambient.variables)
        if poly.is_constant():
            raise MathDomainError("a curve needs a non-constant equation")
        if not ambient.is_homogeneous(poly):
            raise MathDomainError(f"{poly} is not (bi)homogeneous on {ambient}")
        if check:
            fl = factor(poly)
            if len(fl) != 1 or fl[0][1] != 1:
                raise MathDomainError(f"{poly} is not irreducible over Q")
        return cls(ambient, poly.normalized())

    @property
    def degree(self):
        d = self.ambient.group_degrees(self.poly)
        return d[0] if len(d) == 1 else d

    def sort_key(self):
        return self.poly.sort_key()

    def __str__(self):
        return f"{{{self.poly} = 0}}"

    def to_record(self):
        return {"ambient": self.ambient.name, "equation": str(self.poly)}


# ---------------------------------------------------------------------------
# zero-dimensional solving


def _charts(ambient: Ambient):
    """Affine charts covering the ambient.

    For each group we pick the last nonzero coordinate k, set it to 1 and the
    later ones to 0; the earlier ones are free.  Yields (fixed, free) where
    fixed maps variable -> value and free lists free variables.
    """
    per_group = []
    for g in ambient.groups:
        opts = []
        for k in range(len(g) - 1, -1, -1):
            fixed = {g[k]: 1}
            fixed.update({v: 0 for v in g[k + 1:]})
            opts.append((fixed, list(g[:k])))
        per_group.append(opts)
    for combo in itertools.product(*per_group):
        fixed, free = {}, []
        for f, fr in combo:
            fixed.update(f)
            free.extend(fr)
        yield fixed, free


def common_zeros(ambient: Ambient, polys, seed: int = 0, retries: int = 8) -> list[ClosedPoint]:
    """All common zeros of (bi)homogeneous polynomials, assumed finitely many."""
    polys = [p for p in polys if not p.is_zero()]
    rng = random.Random(seed)
    out = []
    for fixed, free in _charts(ambient):
        fv = tuple(free)
        local = []
        for p in polys:
            if fv:
                q = p.subs({v: MultiPoly.var(fv, v) if v in fv else fixed[v] for v in p.variables})
            else:
                q = MultiPoly.const(("_",), p.evaluate(fixed))
            if not q.is_zero():
                local.append(q)
        for field, sol in _solve_affine(local, fv, rng, retries):
            coords = []
            for g in ambient.groups:
                coords.append(tuple(sol[v] if v in sol else field.element(fixed[v]) for v in g))
            out.append(GaloisPoint.make(ambient, field, coords))
    return sort_points(out)


_Q = AlgebraicField(MultiPoly(_TV, {(1,): 1}))  # Q itself, as Q[t]/(t)


def _solve_affine(polys, fv, rng, retries):
    """Yield (field, {var: element}) for each closed point of the affine system."""
    if any(p.is_constant() for p in polys):
        return
    if not fv:
        yield _Q, {}
        return
    if not polys:
        raise EliminationFailure("system has a positive-dimensional solution set")
    if len(fv) == 1:
        yield from _solve_univariate(polys, fv[0])
        return
    yield from _solve_bivariate(polys, fv, rng, retries)


def _as_t(p: MultiPoly) -> MultiPoly:
    return MultiPoly(_TV, {e: c for e, c in p.terms().items()})


def _solve_univariate(polys, v):
    g = polys[0]
    for p in polys[1:]:
        g = gcd(g, p)
    if g.is_constant():
        return
    for m, _ in factor(g):
        field = AlgebraicField(_as_t(m)) if m.total_degree > 1 else None
        if field is None:
            root = -m.coefficient((0,)) / m.coefficient((1,))
            yield _Q, {v: _Q.element(root)}
        else:
            yield field, {v: field.gen()}


def _solve_bivariate(polys, fv, rng, retries):
    u, w = fv
    if len(polys) < 2 and not polys[0].is_constant():
        raise EliminationFailure("system has a positive-dimensional solution set")
    lam = 0
    for attempt in range(retries + 1):
        try:
            yield from _solve_bivariate_once(polys, u, w, lam, rng)
            return
        except _Retry:
            lam = rng.randint(1, 7 + attempt * 5) * rng.choice((-1, 1))
    raise EliminationFailure("bivariate elimination stayed degenerate after retries")


class _Retry(Exception):
    pass


def _solve_bivariate_once(polys, u, w, lam, rng):
    fv = (u, w)
    U, W = MultiPoly.gens(fv)
    # New coordinates (u, w') with w' = w + lam*u.
    moved = [p.subs({u: U, w: W - U.scale(lam)}) for p in polys] if lam else list(polys)
    combos = moved if len(moved) == 2 else None
    for _ in range(4):
        if combos is None:
            A = sum((p.scale(rng.randint(-9, 9)) for p in moved), MultiPoly.const(fv, 0))
            B = sum((p.scale(rng.randint(-9, 9)) for p in moved), MultiPoly.const(fv, 0))
        else:
            A, B = combos
            combos = None
        if A.is_zero() or B.is_zero():
            continue
        R = resultant(A, B, u)
        if not R.is_zero():
            break
    else:
        raise _Retry()
    if R.is_constant():
        return
    results = []
    for m, _ in factor(R):
        mt = _as_t(m.in_variables((w,)) if m.variables != (w,) else m)
        if mt.total_degree == 1:
            beta = -mt.coefficient((0,)) / mt.coefficient((1,))
            line = [p.subs({w: beta}).in_variables((u,)) for p in moved]
            line = [q for q in line if not q.is_zero()]
            if not line:
                raise _Retry()
            for field, sol in _solve_univariate(line, u):
                wv = field.element(beta)
                results.append((field, sol[u], wv))
        else:
            field = AlgebraicField(mt)
            g = None
            for p in moved:
                cs = _coeffs_over_field(p, u, w, field)
                if cs:
                    g = _kgcd(g, cs, field)
            if g is None:
                raise EliminationFailure("system has a positive-dimensional solution set")
            if len(g) == 1:
                continue
            if len(g) > 2:
                raise _Retry()
            # g = [c1, c0] monic -> u = -c0
            results.append((field, field.reduce(-g[1]), field.gen()))
    for field, uval, wval in results:
        yield field, {u: uval, w: field.reduce(wval - uval.scale(lam))}


def _coeffs_over_field(p: MultiPoly, u, w, field):
    """Coefficients in u (highest first) as field elements, w -> generator."""
    iu, iw = p.variables.index(u), p.variables.index(w)
    deg = p.degree(u)
    cs = [{} for _ in range(deg + 1)]
    for e, c in p.terms().items():
        cs[deg - e[iu]][(e[iw],)] = c
    out = [field.reduce(MultiPoly(_TV, d)) for d in cs]
    while out and out[0].is_zero():
        out.pop(0)
    return out


def _kgcd(a, b, field):
    """Monic gcd of univariate polynomials over a number field (coefficient lists)."""
    if a is None:
        a, b = b, []
    while b:
        if len(a) < len(b):
            a, b = b, a
        a = _krem(a, b, field)
        a, b = b, a
    if not a:
        return [field.element(1)]
    inv = field.inv(a[0])
    return [field.mul(c, inv) for c in a]


def _krem(a, b, field):
    a = list(a)
    inv = field.inv(b[0])
    while len(a) >= len(b) and a:
        q = field.mul(a[0], inv)
        for i in range(len(b)):
            a[i] = field.reduce(a[i] - q * b[i])
        a.pop(0)
        while a and a[0].is_zero():
            a.pop(0)
    return a
