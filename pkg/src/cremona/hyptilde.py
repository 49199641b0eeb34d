"""Action of birational maps on curves of all birational models.

An element is either a curve on the base surface (`Concrete`) or an
exceptional curve lying over a point (`Virtual`).  A virtual element is
named by its anchor point together with the infinitely near directions
one blows up, level by level, to reach it: an empty tower means the
exceptional curve of the blow-up of the anchor itself.

Pushforward works through divisorial valuations.  The valuation of the
source element is composed with the map, and the centre of the result is
located on the target: first on the surface, then on successive blow-ups.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .birmap import BirMap, _contracted_image, compose, exc, identity, image_of_curve
from .config import DEFAULT, Config
from .errors import (
    AlgebraicAnchorUnsupported,
    CremonaError,
    JetDepthExceeded,
    MathDomainError,
    NotInverse,
)
from .exactmath import MultiPoly, factor, rational_nullspace
from .geometry import P2, Ambient, ClosedPoint, CurveOnX, RationalPoint

__all__ = [
    "Direction",
    "Concrete",
    "Virtual",
    "pushforward",
    "commensuration_defect",
    "length",
    "orbit_trace",
    "defect_growth",
    "OrbitTrace",
]


@dataclass(frozen=True)
class Direction:
    """Tangent direction at a point, as the slope of the second local coordinate
    over the first; ``None`` stands for the vertical direction."""

    slope: Fraction | None

    def __str__(self):
        return "oo" if self.slope is None else str(self.slope)


@dataclass(frozen=True)
class Concrete:
    curve: CurveOnX
    is_concrete = True

    def __str__(self):
        return str(self.curve)


@dataclass(frozen=True)
class Virtual:
    anchor: ClosedPoint
    tower: tuple[Direction, ...] = ()
    is_concrete = False

    @property
    def depth(self) -> int:
        return len(self.tower) + 1

    def __str__(self):
        if not self.tower:
            return f"E({self.anchor})"
        return f"E({self.anchor}; " + ", ".join(str(d) for d in self.tower) + ")"


HypElement = Concrete | Virtual


# ---------------------------------------------------------------------------
# valuations


class _CurveValuation:
    """Order of vanishing along an irreducible curve {g = 0}."""

    def __init__(self, g: MultiPoly):
        self.g = g

    def pull(self, P: MultiPoly) -> MultiPoly:
        return P

    def val(self, P):
        return float("inf") if P.is_zero() else P.multiplicity(self.g)

    def ratio(self, A, B):
        """Constant value of A/B on the centre (equal valuations), or None."""
        rA = A.strip(self.g)[0].rem(self.g)
        rB = B.strip(self.g)[0].rem(self.g)
        c = rA.leading_coefficient() / rB.leading_coefficient()
        return c if rA == rB.scale(c) else None


_ST = ("s", "t")


class _TowerValuation:
    """Valuation of an exceptional curve, through an explicit parametrization.

    Source coordinates are written as polynomials in (s, t) such that the
    exceptional curve is {s = 0}; values are s-orders.
    """

    def __init__(self, ambient: Ambient, anchor: RationalPoint, tower):
        S, Tt = MultiPoly.gens(_ST)
        u, v = S, S * Tt
        for d in reversed(tower):
            if d.slope is None:
                u, v = u * v, u
            else:
                u, v = u, u * (v + d.slope)
        local = iter((u, v))
        images = {}
        for grp, coords in zip(ambient.groups, anchor.coords):
            k = next(i for i, c in enumerate(coords) if c != 0)
            for i, (var, c) in enumerate(zip(grp, coords)):
                images[var] = MultiPoly.const(_ST, 1) if i == k else next(local) + c
        self.images = images

    def pull(self, P: MultiPoly) -> MultiPoly:
        return P.subs(self.images)

    @staticmethod
    def _lowest(P):
        terms = P.terms()
        m = min(e[0] for e in terms)
        return m, MultiPoly(("t",), {(e[1],): c for e, c in terms.items() if e[0] == m})

    def val(self, P):
        return float("inf") if P.is_zero() else self._lowest(P)[0]

    def ratio(self, A, B):
        rA, rB = self._lowest(A)[1], self._lowest(B)[1]
        c = rA.leading_coefficient() / rB.leading_coefficient()
        return c if rA == rB.scale(c) else None

    def residue(self, P):
        return self._lowest(P)[1]


def _valuation(ambient, e):
    if isinstance(e, Concrete):
        return _CurveValuation(e.curve.poly)
    if not isinstance(e.anchor, RationalPoint):
        raise AlgebraicAnchorUnsupported(
            f"jet expansion at the non-rational point {e.anchor} is not implemented"
        )
    return _TowerValuation(ambient, e.anchor, e.tower)


# ---------------------------------------------------------------------------
# pushforward


def pushforward(f: BirMap, e: HypElement, config: Config = DEFAULT) -> HypElement:
    """Image of an element of the colimit under f."""
    amb = f.ambient
    if isinstance(e, Concrete):
        if e.curve.ambient != amb:
            raise MathDomainError("curve and map live on different surfaces")
        q = _contracted_image(f, e.curve.poly)
        if q is None:
            return Concrete(image_of_curve(f, e.curve))
    V = _valuation(amb, e)
    comps = [[V.pull(F) for F in grp] for grp in f.parts]
    centre = []
    for grp in comps:
        vals = [V.val(F) for F in grp]
        m = min(vals)
        k = vals.index(m)
        coords = []
        for F, v in zip(grp, vals):
            if v > m:
                coords.append(Fraction(0))
            else:
                coords.append(V.ratio(F, grp[k]))
        centre.append(coords)
    if any(c is None for g in centre for c in g):
        if isinstance(V, _CurveValuation):  # pragma: no cover - handled above
            return Concrete(image_of_curve(f, e.curve))
        return Concrete(_implicitize_residues(amb, V, comps))
    q = RationalPoint.make(amb, centre)
    return Virtual(q, _tower_at(q, comps, V, config.jet_depth))


def _local_coordinates(q: RationalPoint, comps):
    """Pullbacks of the local coordinates at q as (numerator, denominator)."""
    out = []
    for grp, coords in zip(comps, q.coords):
        k = next(i for i, c in enumerate(coords) if c != 0)
        for j, c in enumerate(coords):
            if j != k:
                out.append((grp[j] - grp[k].scale(c), grp[k]))
    return out


def _tower_at(q, comps, V, jet_depth):
    (n1, d1), (n2, d2) = _local_coordinates(q, comps)
    tower = []
    while True:
        v1 = V.val(n1) - V.val(d1)
        v2 = V.val(n2) - V.val(d2)
        if v1 == v2:
            c = V.ratio(n2 * d1, d2 * n1)
            if c is None:
                return tuple(tower)
            tower.append(Direction(c))
            # sigma2 <- sigma2/sigma1 - c
            n2, d2 = n2 * d1 - (d2 * n1).scale(c), d2 * n1
        elif v1 < v2:
            tower.append(Direction(Fraction(0)))
            n2, d2 = n2 * d1, d2 * n1
        else:
            tower.append(Direction(None))
            (n1, d1), (n2, d2) = (n2, d2), (n1 * d2, d1 * n2)
        if len(tower) >= jet_depth:
            raise JetDepthExceeded(f"centre still a point after {jet_depth} blow-ups")


def _implicitize_residues(amb: Ambient, V: _TowerValuation, comps) -> CurveOnX:
    """Equation of the curve parametrized by the leading residues in t."""
    params = []
    for grp in comps:
        vals = [V.val(F) for F in grp]
        m = min(vals)
        params.append([V.residue(F) if v == m else MultiPoly.const(("t",), 0) for F, v in zip(grp, vals)])
    bound = max(p.total_degree for g in params for p in g) + 1
    if amb is P2:
        shapes = [(d,) for d in range(1, bound + 1)]
    else:
        shapes = sorted(((a, b) for a in range(bound + 1) for b in range(bound + 1) if a + b),
                        key=lambda s: (s[0] + s[1], s[0]))
    from .birmap import _exponents

    for shape in shapes:
        monos = list(itertools.product(*[_exponents(len(g), d) for g, d in zip(amb.groups, shape)]))
        images, keys = [], {}
        for mono in monos:
            val = MultiPoly.const(("t",), 1)
            for g, exps in zip(params, mono):
                for r, k in zip(g, exps):
                    if k:
                        val = val * r**k
            terms = val.terms()
            images.append(terms)
            for key in terms:
                keys.setdefault(key, len(keys))
        rows = [[im.get(key, 0) for im in images] for key in keys]
        ns = rational_nullspace(rows, len(monos))
        if ns:
            h = MultiPoly(amb.variables, {
                tuple(k for exps in mono for k in exps): c for c, mono in zip(ns[0], monos) if c
            })
            fl = factor(h)
            for q, _ in fl:
                if _vanishes_on(q, amb, params):
                    return CurveOnX(amb, q)
    raise MathDomainError("could not implicitize the image of an exceptional curve")


def _vanishes_on(q, amb, params):
    mapping = dict(zip(amb.variables, (r for g in params for r in g)))
    return q.subs(mapping).is_zero()


# ---------------------------------------------------------------------------
# defect and orbits


def _require_inverse(f: BirMap) -> BirMap:
    if f.inverse is None:
        raise NotInverse("this operation needs a map with a certified inverse")
    return f.inverse


def commensuration_defect(f: BirMap) -> int:
    """Number of curves contracted by f plus those contracted by its inverse."""
    g = _require_inverse(f)
    return exc(f) + exc(g)


length = commensuration_defect


@dataclass
class OrbitTrace:
    map: BirMap
    seed: HypElement
    entries: list = field(default_factory=list)  # (n, element or None, tag)
    status: str = "complete"

    def tags(self) -> dict[int, str]:
        return {n: tag for n, _, tag in self.entries}

    def to_record(self) -> list[dict]:
        return [{"n": n, "tag": tag, "element": str(e) if e is not None else None}
                for n, e, tag in self.entries]


def orbit_trace(f: BirMap, C: CurveOnX, n_back: int, n_fwd: int, config: Config = DEFAULT) -> OrbitTrace:
    """Elements f^n(C) for n in [-n_back, n_fwd], tagged concrete or virtual."""
    if n_back < 0 or n_fwd < 0:
        raise ValueError("counts must be nonnegative")
    g = _require_inverse(f)
    seed = Concrete(C)
    trace = OrbitTrace(f, seed)
    fwd, back = [(0, seed, "concrete")], []
    for step_map, count, sign, out in ((f, n_fwd, 1, fwd), (g, n_back, -1, back)):
        e = seed
        for i in range(1, count + 1):
            try:
                e = pushforward(step_map, e, config)
            except CremonaError as err:
                out.append((sign * i, None, f"error: {err}"))
                trace.status = "truncated"
                break
            out.append((sign * i, e, "concrete" if e.is_concrete else "virtual"))
    trace.entries = sorted(back + fwd, key=lambda x: x[0])
    return trace


def defect_growth(f: BirMap, n: int, config: Config = DEFAULT) -> list[int]:
    """length(f^k) for k = 1..n."""
    _require_inverse(f)
    out, h = [], identity(f.ambient)
    for _ in range(n):
        h = compose(f, h, config)
        out.append(length(h))
    return out
