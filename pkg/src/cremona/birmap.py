"""Birational self-maps of P2 and P1xP1.

A map is stored per coordinate group: three forms for the plane, and two
pairs of bihomogeneous forms for P1xP1.  Maps are immutable apart from the
certified-inverse link, which `verify_inverse` sets once both composites
have been checked to be the identity.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cached_property
from math import gcd as igcd, lcm as ilcm

from .config import DEFAULT, Config
from .errors import (
    AlgebraicAnchorUnsupported,
    IndeterminatePoint,
    MathDomainError,
    NotBirational,
    NotInverse,
    ResourceCapExceeded,
    VariableMismatch,
)
from .exactmath import MultiPoly, factor, gcd, rational_nullspace
from .geometry import (
    P1xP1,
    P2,
    Ambient,
    ClosedPoint,
    CurveOnX,
    GaloisPoint,
    RationalPoint,
    ambient_named,
    common_zeros,
    sort_points,
)

__all__ = [
    "BirMap",
    "saturate",
    "compose",
    "jacobian",
    "image_of_curve",
    "contracted_curves",
    "exc",
    "indeterminacy_points",
    "verify_inverse",
    "degree_sequence",
    "apply_to_point",
    "identity",
    "sigma2",
    "monomial_map",
    "linear_map",
    "power",
]


def _normalize_tuple(polys):
    """Scale a tuple jointly to primitive integers, first nonzero lead positive."""
    den, num = 1, 0
    for p in polys:
        for c in p.terms().values():
            den = ilcm(den, c.denominator)
    for p in polys:
        for c in p.terms().values():
            num = igcd(num, c.numerator * (den // c.denominator))
    scale = Fraction(den, num)
    lead = next(p for p in polys if not p.is_zero())
    if lead.leading_coefficient() < 0:
        scale = -scale
    return tuple(p.scale(scale) for p in polys)


class BirMap:
    """A birational self-map given by (bi)homogeneous forms.

    Build instances with `saturate`, `compose` or the family constructors;
    the constructor itself trusts its input.
    """

    def __init__(self, ambient: Ambient, parts):
        self.ambient = ambient
        self.parts = tuple(tuple(g) for g in parts)
        self._inverse = None
        self._hint_source = None

    # -- basic data -----------------------------------------------------
    @property
    def components(self) -> tuple[MultiPoly, ...]:
        return tuple(p for g in self.parts for p in g)

    @property
    def inverse(self) -> "BirMap | None":
        return self._inverse

    @property
    def degree(self):
        """Algebraic degree; for P1xP1 the pair of bidegrees of the two parts."""
        if self.ambient is P2:
            return _first_nonzero(self.parts[0]).total_degree
        return tuple(self.ambient.group_degrees(_first_nonzero(g)) for g in self.parts)

    @property
    def total_degree(self) -> int:
        return max(p.total_degree for p in self.components)

    def is_identity(self) -> bool:
        return self.parts == identity(self.ambient).parts

    def __eq__(self, other):
        return isinstance(other, BirMap) and self.ambient == other.ambient and self.parts == other.parts

    def __hash__(self):
        return hash((self.ambient, self.parts))

    def __str__(self):
        groups = ["[" + " : ".join(str(p) for p in g) + "]" for g in self.parts]
        return groups[0] if len(groups) == 1 else "(" + ", ".join(groups) + ")"

    def __repr__(self):
        return f"BirMap({self.ambient.name}, {self})"

    def to_record(self, with_inverse: bool = True) -> dict:
        rec = {"ambient": self.ambient.name, "components": [[str(p) for p in g] for g in self.parts]}
        if with_inverse and self._inverse is not None:
            rec["inverse"] = self._inverse.to_record(with_inverse=False)
        return rec

    @classmethod
    def from_record(cls, rec: dict, config: Config = DEFAULT) -> "BirMap":
        from .formula import parse_polynomial

        amb = ambient_named(rec["ambient"])
        parts = [[parse_polynomial(s, amb.variables) for s in g] for g in rec["components"]]
        f = saturate(amb, parts, config)
        if rec.get("inverse"):
            verify_inverse(f, cls.from_record(rec["inverse"], config))
        return f

    # -- cached geometry ------------------------------------------------
    @cached_property
    def jacobian(self) -> MultiPoly:
        return jacobian(self)

    @cached_property
    def jacobian_factors(self) -> tuple[MultiPoly, ...]:
        J = self.jacobian
        found = []
        for h in self._hints():
            J, k = J.strip(h)
            if k:
                found.append(h)
        if not J.is_constant():
            found.extend(q for q, _ in factor(J))
        return tuple(sorted(set(found), key=lambda p: p.sort_key()))

    def _hints(self):
        """Candidate Jacobian factors inherited from a composition f o g."""
        if self._hint_source is None:
            return []
        f, g = self._hint_source
        out = [C.poly for C, _ in g.contracted]
        if g.inverse is not None:
            for E, _ in f.contracted:
                img = image_of_curve(g.inverse, E)
                if isinstance(img, CurveOnX):
                    out.append(img.poly)
        return out

    @cached_property
    def contracted(self) -> tuple[tuple[CurveOnX, ClosedPoint], ...]:
        out = []
        for h in self.jacobian_factors:
            C = CurveOnX(self.ambient, h)
            img = _contracted_image(self, h)
            if img is None:
                raise NotBirational(
                    f"Jacobian factor {h} is not contracted by {self}; "
                    "the map is not birational (or the characteristic assumption fails)"
                )
            out.append((C, img))
        return tuple(out)

    @cached_property
    def indeterminacy(self) -> tuple[ClosedPoint, ...]:
        pts = []
        for g in self.parts:
            pts.extend(common_zeros(self.ambient, g, seed=DEFAULT.seed, retries=DEFAULT.elimination_retries))
        return tuple(sort_points(pts))


def _first_nonzero(polys):
    return next(p for p in polys if not p.is_zero())


# ---------------------------------------------------------------------------
# construction


def saturate(ambient: Ambient, raw, config: Config = DEFAULT) -> BirMap:
    """Remove common factors per coordinate group and check dominance."""
    if len(raw) != len(ambient.groups):
        if len(ambient.groups) == 1 and len(raw) == 3:
            raw = [raw]
        else:
            raise VariableMismatch(f"expected {len(ambient.groups)} coordinate groups for {ambient}")
    parts = []
    for grp, comps in zip(ambient.groups, raw):
        comps = [c if c.variables == ambient.variables else c.in_variables(ambient.variables) for c in comps]
        if len(comps) != len(grp):
            raise VariableMismatch(f"expected {len(grp)} components per group on {ambient}")
        nz = [c for c in comps if not c.is_zero()]
        if not nz:
            raise NotBirational("all components are zero")
        degs = {ambient.group_degrees(c) for c in nz}
        if len(degs) > 1 or not all(ambient.is_homogeneous(c) for c in nz):
            raise MathDomainError("components must be (bi)homogeneous of equal (bi)degree")
        g = nz[0]
        for c in nz[1:]:
            g = gcd(g, c)
        if not g.is_constant():
            comps = [c.exquo(g) if not c.is_zero() else c for c in comps]
        parts.append(_normalize_tuple(comps))
    f = BirMap(ambient, parts)
    _check_caps(f, config)
    if f.jacobian.is_zero():
        raise NotBirational(f"{f} is not dominant (components are dependent)")
    return f


def _check_caps(f: BirMap, config: Config):
    if f.total_degree > config.max_degree:
        raise ResourceCapExceeded(f"degree {f.total_degree} exceeds cap {config.max_degree}")
    terms = sum(len(p) for p in f.components)
    if terms > config.max_terms:
        raise ResourceCapExceeded(f"{terms} terms exceed cap {config.max_terms}")


def identity(ambient: Ambient = P2) -> BirMap:
    f = BirMap(ambient, [MultiPoly.gens(ambient.variables)[i:i + len(g)]
                         for i, g in zip(_offsets(ambient), ambient.groups)])
    f._inverse = f
    return f


def _offsets(ambient):
    out, k = [], 0
    for g in ambient.groups:
        out.append(k)
        k += len(g)
    return out


def _compose_raw(f: BirMap, g: BirMap, config: Config) -> BirMap:
    if f.ambient != g.ambient:
        raise VariableMismatch(f"cannot compose maps of {f.ambient} and {g.ambient}")
    mapping = {}
    for grp, comps in zip(f.ambient.groups, g.parts):
        mapping.update(zip(grp, comps))
    raw = []
    for comps in f.parts:
        grp = [c.subs(mapping) for c in comps]
        if sum(len(c) for c in grp) > config.max_terms:
            raise ResourceCapExceeded("raw composite exceeds the term cap")
        raw.append(grp)
    h = saturate(f.ambient, raw, config)
    h._hint_source = (f, g)
    return h


def compose(f: BirMap, g: BirMap, config: Config = DEFAULT) -> BirMap:
    """f o g, saturated.  Certified inverses compose to a certified inverse."""
    h = _compose_raw(f, g, config)
    if f.inverse is not None and g.inverse is not None:
        if h.is_identity():
            h._inverse = h
        else:
            hi = _compose_raw(g.inverse, f.inverse, config)
            h._inverse, hi._inverse = hi, h
    return h


def power(f: BirMap, n: int, config: Config = DEFAULT) -> BirMap:
    """f^n for any integer n (negative powers need a certified inverse)."""
    if n < 0:
        if f.inverse is None:
            raise NotInverse("negative power of a map without certified inverse")
        f, n = f.inverse, -n
    h = identity(f.ambient)
    for _ in range(n):
        h = compose(f, h, config)
    return h


def verify_inverse(f: BirMap, g: BirMap, config: Config = DEFAULT):
    """Certify that g = f^-1 and link the two maps."""
    if f.ambient != g.ambient:
        raise VariableMismatch("maps live on different surfaces")
    if not (_compose_raw(f, g, config).is_identity() and _compose_raw(g, f, config).is_identity()):
        raise NotInverse(f"{f} and {g} are not mutually inverse")
    f._inverse, g._inverse = g, f
    return f, g


def degree_sequence(f: BirMap, n: int, config: Config = DEFAULT) -> list:
    if n < 1:
        raise ValueError("n must be at least 1")
    out, h = [], f
    for k in range(n):
        if k:
            h = compose(f, h, config)
        out.append(h.degree)
    return out


# ---------------------------------------------------------------------------
# Jacobian, contraction, strict transforms


def jacobian(f: BirMap) -> MultiPoly:
    """Jacobian determinant.

    For P1xP1 this is the bihomogeneous determinant built from the two
    affine-chart derivatives of each factor; it vanishes exactly on the
    ramification curve and has bidegree 2(a+c-1, b+e-1).
    """
    vs = f.ambient.variables
    if f.ambient is P2:
        M = [[F.diff(v) for v in vs] for F in f.parts[0]]
        return (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
                - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
                + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))
    (X0, X1), (Y0, Y1) = f.parts
    x1 = MultiPoly.var(vs, "x1")
    y1 = MultiPoly.var(vs, "y1")

    def wedge(A, B, v):
        return B * A.diff(v) - A * B.diff(v)

    AX, BX = wedge(X0, X1, "x0").exquo(x1), wedge(X0, X1, "y0").exquo(y1)
    AY, BY = wedge(Y0, Y1, "x0").exquo(x1), wedge(Y0, Y1, "y0").exquo(y1)
    return AX * BY - BX * AY


def _group_constant_on(comps, g: MultiPoly) -> bool:
    vs = g.variables
    grads = {v: g.diff(v) for v in vs}
    fields = [(a, b) for a, b in itertools.combinations(vs, 2) if grads[a] or grads[b]]
    for a, b in fields:
        ga, gb = grads[a], grads[b]
        T = [gb * F.diff(a) - ga * F.diff(b) for F in comps]
        for i, j in itertools.combinations(range(len(comps)), 2):
            if not g.divides(comps[i] * T[j] - comps[j] * T[i]):
                return False
    return True


def _group_value_on(comps, g: MultiPoly):
    rems = [F.rem(g) for F in comps]
    k = next(i for i, r in enumerate(rems) if not r.is_zero())
    base = rems[k]
    lc = base.leading_coefficient()
    vals = []
    for r in rems:
        c = r.leading_coefficient() / lc if not r.is_zero() else Fraction(0)
        if r != base.scale(c):
            return None
        vals.append(c)
    return vals


def _contracted_image(f: BirMap, g: MultiPoly):
    """Image point of {g=0} if f contracts it, else None."""
    if not all(_group_constant_on(comps, g) for comps in f.parts):
        return None
    coords = []
    for comps in f.parts:
        vals = _group_value_on(comps, g)
        if vals is None:
            # constant on the curve yet not rational: conjugate components
            raise AlgebraicAnchorUnsupported(
                f"{g} is contracted onto points defined over an extension of Q"
            )
        coords.append(vals)
    return RationalPoint.make(f.ambient, coords)


def image_of_curve(f: BirMap, C: CurveOnX):
    """The image point if C is contracted, else the strict transform."""
    if C.ambient != f.ambient:
        raise VariableMismatch("curve and map live on different surfaces")
    img = _contracted_image(f, C.poly)
    if img is not None:
        return img
    if f.inverse is not None:
        G = f.inverse
        mapping = {}
        for grp, comps in zip(f.ambient.groups, G.parts):
            mapping.update(zip(grp, comps))
        h = C.poly.subs(mapping)
        for E, _ in G.contracted:
            h, _ = h.strip(E.poly)
        return CurveOnX(f.ambient, h.normalized())
    return _implicitize(f, C)


def _implicitize(f: BirMap, C: CurveOnX) -> CurveOnX:
    """Equation of minimal (bi)degree vanishing on f(C), by linear algebra."""
    amb, g = f.ambient, C.poly
    bound = g.total_degree * f.total_degree + 2
    if amb is P2:
        shapes = [(e,) for e in range(1, bound + 1)]
    else:
        shapes = sorted(
            ((a, b) for a in range(bound + 1) for b in range(bound + 1) if 0 < a + b <= bound),
            key=lambda s: (s[0] + s[1], s[0]),
        )
    for shape in shapes:
        monos = list(itertools.product(*[_exponents(len(grp), d) for grp, d in zip(amb.groups, shape)]))
        images, keys = [], {}
        for mono in monos:
            val = MultiPoly.const(amb.variables, 1)
            for comps, exps in zip(f.parts, mono):
                for F, k in zip(comps, exps):
                    if k:
                        val = val * F**k
            r = val.rem(g).terms()
            images.append(r)
            for e in r:
                keys.setdefault(e, len(keys))
        rows = [[im.get(e, 0) for im in images] for e in keys]
        ns = rational_nullspace(rows, len(monos))
        if ns:
            terms = {}
            for coef, mono in zip(ns[0], monos):
                if coef:
                    terms[tuple(k for exps in mono for k in exps)] = coef
            h = MultiPoly(amb.variables, terms)
            return CurveOnX.make(amb, h)
    raise MathDomainError("implicitization did not terminate within the degree bound")


def _exponents(n, d):
    if n == 1:
        yield (d,)
        return
    for k in range(d, -1, -1):
        for rest in _exponents(n - 1, d - k):
            yield (k,) + rest


def contracted_curves(f: BirMap):
    return list(f.contracted)


def exc(f: BirMap) -> int:
    return len(f.contracted)


def indeterminacy_points(f: BirMap, config: Config = DEFAULT):
    """Ind(f); the seed only steers the elimination, never the answer."""
    if config.seed == DEFAULT.seed and config.elimination_retries == DEFAULT.elimination_retries:
        return list(f.indeterminacy)
    pts = []
    for g in f.parts:
        pts.extend(common_zeros(f.ambient, g, seed=config.seed, retries=config.elimination_retries))
    return sort_points(pts)


def apply_to_point(f: BirMap, p: ClosedPoint) -> ClosedPoint:
    """f(p) for p outside Ind(f)."""
    if p.ambient != f.ambient:
        raise VariableMismatch("point and map live on different surfaces")
    if isinstance(p, RationalPoint):
        pt = p.as_dict()
        coords = [[F.evaluate(pt) for F in g] for g in f.parts]
        if any(all(c == 0 for c in g) for g in coords):
            raise IndeterminatePoint(f"{p} is an indeterminacy point of {f}")
        return RationalPoint.make(f.ambient, coords)
    assert isinstance(p, GaloisPoint)
    coords = [[p.conjugates_evaluate(F) for F in g] for g in f.parts]
    if any(all(c.is_zero() for c in g) for g in coords):
        raise IndeterminatePoint(f"{p} is an indeterminacy point of {f}")
    return GaloisPoint.make(f.ambient, p.field, coords)


# ---------------------------------------------------------------------------
# families with known inverses


def sigma2() -> BirMap:
    """The standard quadratic involution [x1*x2 : x0*x2 : x0*x1]."""
    f = monomial_map([[-1, 0], [0, -1]], P2)
    return f


def _laurent(ambient: Ambient, exps):
    """Affine Laurent monomial x^a y^b as (numerator, denominator) forms."""
    a, b = exps
    vs = ambient.variables
    if ambient is P2:
        e = [a, b, -a - b]
    else:
        e = [a, -a, b, -b]
    num = MultiPoly.monomial(vs, [max(k, 0) for k in e])
    den = MultiPoly.monomial(vs, [max(-k, 0) for k in e])
    return num, den


def from_affine(ambient: Ambient, fractions, config: Config = DEFAULT) -> BirMap:
    """Map from affine rational coordinates given as homogenized (num, den) pairs.

    On P2 the affine chart is x = x0/x2, y = x1/x2; on P1xP1 it is
    x = x0/x1, y = y0/y1.  Each pair must have equal (bi)degree.
    """
    (n1, d1), (n2, d2) = fractions
    if ambient is P2:
        return saturate(ambient, [[n1 * d2, n2 * d1, d1 * d2]], config)
    return saturate(ambient, [[n1, d1], [n2, d2]], config)


def monomial_map(matrix, ambient: Ambient = P2, certify: bool = True) -> BirMap:
    """(x, y) -> (x^a y^b, x^c y^d) for an integer matrix [[a, b], [c, d]] of det +-1."""
    (a, b), (c, d) = matrix
    det = a * d - b * c
    if det not in (1, -1):
        raise NotBirational(f"monomial matrix has determinant {det}, not +-1")
    f = from_affine(ambient, [_laurent(ambient, (a, b)), _laurent(ambient, (c, d))])
    if certify:
        inv = [[d * det, -b * det], [-c * det, a * det]]
        g = monomial_map(inv, ambient, certify=False) if inv != [[a, b], [c, d]] else f
        verify_inverse(f, g)
    return f


def linear_map(matrix, certify: bool = True) -> BirMap:
    """Projective linear map of P2 from an invertible 3x3 rational matrix."""
    vs = P2.variables
    xs = MultiPoly.gens(vs)
    M = [[Fraction(c) for c in row] for row in matrix]
    comps = [sum((xs[j].scale(M[i][j]) for j in range(3)), MultiPoly.const(vs, 0)) for i in range(3)]
    f = saturate(P2, [comps])
    if certify:
        adj = [[M[(j + 1) % 3][(i + 1) % 3] * M[(j + 2) % 3][(i + 2) % 3]
                - M[(j + 1) % 3][(i + 2) % 3] * M[(j + 2) % 3][(i + 1) % 3]
                for j in range(3)] for i in range(3)]
        verify_inverse(f, linear_map(adj, certify=False))
    return f
