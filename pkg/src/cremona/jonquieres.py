"""Fibered maps of P1xP1 and the transfixing test.

A Jonquieres map has the form (x, y) -> (M(x), (A(x)y + B(x)) / (C(x)y + D(x)))
with M a Mobius transformation of the base line.  Whether it transfixes the
set of curves comes down to the orbit of the base points under M, once the
map is known to be algebraically stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd as igcd, isqrt

from .birmap import BirMap, apply_to_point, saturate, verify_inverse
from .config import DEFAULT, Config
from .errors import CremonaError, MathDomainError, NotBirational
from .exactmath import MultiPoly, factor, gcd
from .geometry import P1xP1, GaloisPoint, RationalPoint

__all__ = [
    "MobiusMap",
    "Classification",
    "FixedPoints",
    "BasePoint",
    "JonqMap",
    "mobius_classify",
    "fixed_points",
    "finite_orbit",
    "ind_base_projection",
    "algebraic_stability_check",
    "transfix_verdict",
    "Stability",
    "TransfixVerdict",
]

_X = ("x",)


def _fmt(p):
    return "oo" if p is None else str(p)


@dataclass(frozen=True)
class MobiusMap:
    """x -> (a x + b) / (c x + d); entries primitive integers, first nonzero positive."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def make(cls, matrix) -> "MobiusMap":
        (a, b), (c, d) = matrix
        es = [Fraction(v) for v in (a, b, c, d)]
        if es[0] * es[3] - es[1] * es[2] == 0:
            raise NotBirational("Mobius matrix is singular")
        den = 1
        for e in es:
            den = den * e.denominator // igcd(den, e.denominator)
        ints = [int(e * den) for e in es]
        g = 0
        for v in ints:
            g = igcd(g, v)
        lead = next(v for v in ints if v)
        sign = 1 if lead > 0 else -1
        return cls(*(sign * v // g for v in ints))

    @property
    def matrix(self):
        return ((self.a, self.b), (self.c, self.d))

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def __call__(self, p):
        """Image of p in Q or None (infinity)."""
        if p is None:
            return None if self.c == 0 else Fraction(self.a, self.c)
        num, den = self.a * p + self.b, self.c * p + self.d
        return None if den == 0 else Fraction(num) / den

    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        (a, b), (c, d) = self.matrix
        (e, f), (g, h) = other.matrix
        return MobiusMap.make(((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h)))

    def inverse(self) -> "MobiusMap":
        return MobiusMap.make(((self.d, -self.b), (-self.c, self.a)))

    def is_identity(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def power(self, k: int) -> "MobiusMap":
        out = MobiusMap(1, 0, 0, 1)
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            out = base @ out
        return out

    def __str__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


@dataclass(frozen=True)
class Classification:
    kind: str  # FiniteOrder, Parabolic, Loxodromic, EllipticInfinite
    order: int | None = None

    def __str__(self):
        return f"FiniteOrder({self.order})" if self.kind == "FiniteOrder" else self.kind


_ORDERS = {Fraction(0): 2, Fraction(1): 3, Fraction(2): 4, Fraction(3): 6}


def mobius_classify(M: MobiusMap) -> Classification:
    r = Fraction(M.trace**2, M.det)
    if r == 4:
        return Classification("FiniteOrder", 1) if M.is_identity() else Classification("Parabolic")
    if r in _ORDERS:
        k = _ORDERS[r]
        if not M.power(k).is_identity():  # pragma: no cover - algebraically impossible
            raise MathDomainError(f"{M} failed the order-{k} check")
        return Classification("FiniteOrder", k)
    if r < 0 or r > 4:
        return Classification("Loxodromic")
    return Classification("EllipticInfinite")


@dataclass(frozen=True)
class FixedPoints:
    rational: tuple  # Fractions, None meaning infinity
    discriminant: Fraction | None = None  # set when an irrational pair is present
    everything: bool = False

    def __str__(self):
        if self.everything:
            return "all points"
        parts = [_fmt(p) for p in self.rational]
        if self.discriminant is not None:
            parts.append(f"irrational pair (disc {self.discriminant})")
        return "{" + ", ".join(parts) + "}"


def _fixed_quadratic(M: MobiusMap) -> tuple[int, int, int]:
    # c x^2 + (d - a) x - b = 0
    return M.c, M.d - M.a, -M.b


def _rational_sqrt(q: Fraction):
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    return Fraction(n, d) if n * n == q.numerator and d * d == q.denominator else None


def fixed_points(M: MobiusMap) -> FixedPoints:
    if M.is_identity():
        return FixedPoints((), everything=True)
    A, B, C = _fixed_quadratic(M)
    if A == 0:
        return FixedPoints((Fraction(-C, B), None) if B else (None,))
    disc = Fraction(B * B - 4 * A * C)
    root = _rational_sqrt(disc)
    if root is None:
        return FixedPoints((), discriminant=disc)
    roots = sorted({(-B + root) / (2 * A), (-B - root) / (2 * A)})
    return FixedPoints(tuple(roots))


@dataclass(frozen=True)
class BasePoint:
    """A closed point of the base line: rational (value, None = infinity) or a
    conjugate set given by its minimal polynomial in x."""

    value: Fraction | None = None
    minpoly: MultiPoly | None = None

    @property
    def is_rational(self) -> bool:
        return self.minpoly is None

    def sort_key(self):
        if self.is_rational:
            return (0, self.value is None, self.value if self.value is not None else 0)
        return (1, 0, str(self.minpoly))

    def __str__(self):
        return _fmt(self.value) if self.is_rational else f"{{{self.minpoly} = 0}}"


def finite_orbit(M: MobiusMap, p) -> tuple[bool, str]:
    """Whether the forward orbit of p under M is finite, with the reason.

    For a map of infinite order the periodic points are exactly the fixed
    points, and an orbit reaching a fixed point started there, so the orbit
    is finite iff M has finite order or p is fixed.
    """
    cls = mobius_classify(M)
    if cls.kind == "FiniteOrder":
        return True, f"map has finite order {cls.order}"
    if isinstance(p, BasePoint):
        if not p.is_rational:
            A, B, C = _fixed_quadratic(M)
            q = MultiPoly(_X, {(2,): A, (1,): B, (0,): C})
            if not q.is_zero() and p.minpoly.divides(q):
                return True, "conjugate fixed points"
            return False, f"{cls} map, points not fixed"
        p = p.value
    if M(p) == p:
        return True, "fixed point"
    return False, f"{cls} map, point not fixed"


# ---------------------------------------------------------------------------
# fibered maps


def _homogenize(p: MultiPoly, e: int) -> MultiPoly:
    """x1^e p(x0/x1) in the variables of P1xP1."""
    vs = P1xP1.variables
    terms = {}
    for (k,), c in p.terms().items():
        terms[(k, e - k, 0, 0)] = c
    return MultiPoly(vs, terms)


def _dehomogenize(p: MultiPoly) -> MultiPoly:
    """p(x, 1) for p in x0, x1 only."""
    terms = {}
    for e, c in p.terms().items():
        if e[2] or e[3]:
            raise MathDomainError(f"{p} depends on the fiber coordinate")
        terms[(e[0],)] = terms.get((e[0],), 0) + c
    return MultiPoly(_X, terms)


class JonqMap:
    """(x, y) -> (base(x), (A y + B) / (C y + D)) with A..D polynomials in x."""

    def __init__(self, base: MobiusMap, fiber):
        (A, B), (C, D) = fiber
        ents = [e if isinstance(e, MultiPoly) else MultiPoly.const(_X, e) for e in (A, B, C, D)]
        if (ents[0] * ents[3] - ents[1] * ents[2]).is_zero():
            raise NotBirational("fiber matrix is singular")
        nz = [e for e in ents if not e.is_zero()]
        g = nz[0]
        for e in nz[1:]:
            g = gcd(g, e)
        ents = [e.exquo(g) for e in ents]
        lead = next(e for e in ents if not e.is_zero())
        c = lead.content() * (1 if lead.leading_coefficient() > 0 else -1)
        ents = [e.scale(1 / c) for e in ents]
        self.base = base
        self.fiber = ((ents[0], ents[1]), (ents[2], ents[3]))
        self._birmap = None

    @property
    def fiber_det(self) -> MultiPoly:
        (A, B), (C, D) = self.fiber
        return A * D - B * C

    @property
    def fiber_degree(self) -> int:
        return max(e.total_degree for row in self.fiber for e in row)

    def _homogeneous_fiber(self):
        e = self.fiber_degree
        return tuple(tuple(_homogenize(p, e) for p in row) for row in self.fiber)

    def to_birmap(self, config: Config = DEFAULT) -> BirMap:
        """Bihomogeneous model with its certified inverse."""
        if self._birmap is not None:
            return self._birmap
        x0, x1, y0, y1 = P1xP1.gens()
        a, b, c, d = self.base.a, self.base.b, self.base.c, self.base.d
        (A, B), (C, D) = self._homogeneous_fiber()
        f = saturate(P1xP1, [[x0.scale(a) + x1.scale(b), x0.scale(c) + x1.scale(d)],
                             [A * y0 + B * y1, C * y0 + D * y1]], config)
        # inverse: base M^-1 and adjugate fiber evaluated at M^-1(x)
        lin = {"x0": x0.scale(d) - x1.scale(b), "x1": x1.scale(a) - x0.scale(c)}
        Ai, Bi, Ci, Di = (p.subs(lin) for p in (A, B, C, D))
        g = saturate(P1xP1, [[x0.scale(d) - x1.scale(b), x1.scale(a) - x0.scale(c)],
                             [Di * y0 - Bi * y1, Ai * y1 - Ci * y0]], config)
        verify_inverse(f, g, config)
        self._birmap = f
        return f

    @classmethod
    def from_birmap(cls, f: BirMap) -> "JonqMap":
        """Recognize a fibered map preserving the first projection."""
        if f.ambient is not P1xP1:
            raise MathDomainError("fibered maps live on P1xP1")
        (X0, X1), (Y0, Y1) = f.parts
        for P in (X0, X1):
            if P.total_degree > 1 or any(e[2] or e[3] for e in P.terms()):
                raise MathDomainError(f"{f} does not act on the base line by a Mobius map")
        if any(P.group_degree(("y0", "y1")) > 1 for P in (Y0, Y1) if not P.is_zero()):
            raise MathDomainError(f"{f} is not fiberwise Mobius")

        def coeff(P, e):
            return P.coefficient(e)

        base = MobiusMap.make(((coeff(X0, (1, 0, 0, 0)), coeff(X0, (0, 1, 0, 0))),
                               (coeff(X1, (1, 0, 0, 0)), coeff(X1, (0, 1, 0, 0)))))

        def split(P):
            ty0, ty1 = {}, {}
            for e, c in P.terms().items():
                (ty0 if e[2] else ty1)[(e[0], e[1], 0, 0)] = c
            vs = P1xP1.variables
            return _dehomogenize(MultiPoly(vs, ty0)), _dehomogenize(MultiPoly(vs, ty1))

        A, B = split(Y0)
        C, D = split(Y1)
        return cls(base, ((A, B), (C, D)))

    def __str__(self):
        (A, B), (C, D) = self.fiber
        return f"Jonq(base {self.base}, fiber [[{A}, {B}], [{C}, {D}]])"


def _base_of(point) -> BasePoint:
    g = point.coords[0]
    if isinstance(point, RationalPoint):
        return BasePoint(None if g[1] == 0 else g[0] / g[1])
    # g = (1, c) with c in the residue field: x = 1 / c
    field = point.field
    if g[1].is_zero():
        return BasePoint(None)
    x = field.inv(g[1])
    if x.is_constant():
        return BasePoint(x.constant_value())
    m = field.minimal_polynomial(x, "x")
    return BasePoint(minpoly=m.normalized())


def ind_base_projection(f: JonqMap, config: Config = DEFAULT) -> list[BasePoint]:
    """Projection to the base of Ind(f), together with the zeros of det(fiber)."""
    F = f.to_birmap(config)
    pts = {_base_of(p) for p in F.indeterminacy}
    (A, B), (C, D) = f._homogeneous_fiber()
    det = A * D - B * C
    for q, _ in factor(det):
        q = q.in_variables(("x0", "x1"))
        if q.total_degree == 1:
            a, b = q.coefficient((1, 0)), q.coefficient((0, 1))
            pts.add(BasePoint(None if a == 0 else -b / a))
        else:
            m = MultiPoly(_X, {(e[0],): c for e, c in q.terms().items()})
            pts.add(BasePoint(minpoly=m.normalized()))
    return sorted(pts, key=lambda p: p.sort_key())


@dataclass(frozen=True)
class Stability:
    stable: bool
    n: int  # N checked when stable, offending step otherwise

    def __str__(self):
        return f"Stable({self.n})" if self.stable else f"Unstable({self.n})"


def algebraic_stability_check(f, N: int | None = None, config: Config = DEFAULT) -> Stability:
    """Follow Ind(f^-1) forward for N steps looking for a point of Ind(f)."""
    N = config.stability_n if N is None else N
    if N < 1:
        raise ValueError("N must be at least 1")
    F = f.to_birmap(config) if isinstance(f, JonqMap) else f
    if F.inverse is None:
        raise MathDomainError("stability check needs a certified inverse")
    ind = set(F.indeterminacy)
    for q in F.inverse.indeterminacy:
        seen = set()
        for k in range(N):
            if q in ind:
                return Stability(False, k)
            if q in seen:
                break
            seen.add(q)
            q = apply_to_point(F, q)
    return Stability(True, N)


@dataclass(frozen=True)
class TransfixVerdict:
    outcome: str  # Transfixes, NotTransfixes, Unknown
    evidence: tuple  # (BasePoint, finite?, reason)
    stability: Stability | None
    note: str = ""

    def to_record(self) -> dict:
        return {
            "outcome": self.outcome,
            "stability": str(self.stability) if self.stability else None,
            "evidence": [{"point": str(p), "finite_orbit": fin, "reason": why}
                         for p, fin, why in self.evidence],
            "note": self.note,
        }


def transfix_verdict(f: JonqMap, N: int | None = None, config: Config = DEFAULT) -> TransfixVerdict:
    """Decide whether f transfixes the set of curves of P1xP1."""
    N = config.stability_n if N is None else N
    try:
        stab = algebraic_stability_check(f, N, config)
    except CremonaError as err:
        return TransfixVerdict("Unknown", (), None, f"stability undecided: {err}")
    evidence = tuple((p, *finite_orbit(f.base, p)) for p in ind_base_projection(f, config))
    if not stab.stable:
        return TransfixVerdict("Unknown", evidence, stab,
                               "map is not algebraically stable; the orbit criterion does not apply")
    outcome = "Transfixes" if all(fin for _, fin, _ in evidence) else "NotTransfixes"
    return TransfixVerdict(outcome, evidence, stab)
