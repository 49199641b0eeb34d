"""Farey and dyadic subdivisions of the circle and piecewise maps between them.

The circle is [0, 1] with 0 and 1 glued.  A point p/q of [0, 1] is also the
primitive vector (p, q) with q > 0, so that 0 = (0, 1) and 1 = (1, 1); an
integer matrix acts on such vectors, and a Farey piece is a standard
interval together with the matrix that carries its endpoint vectors onto
the endpoint vectors of the image.  Dyadic pieces carry an affine map
x -> a*x + b with a = +-2^m.

Toric boundaries enter through rays: primitive vectors of Z^2 up to
positive scaling.  Blowing up the corner between two consecutive rays
inserts their sum, which on the label circle is the mediant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd as igcd

__all__ = [
    "Frac",
    "mediant",
    "is_standard",
    "farey_level",
    "dyadic_level",
    "fib",
    "dyadic_to_farey",
    "farey_to_dyadic",
    "matrix_for_interval_pair",
    "Affine",
    "PiecewiseCircleMap",
    "BoundaryCycleGraph",
    "blow_up_node",
    "monomial_boundary_action",
    "simulate_label_action",
]


# ---------------------------------------------------------------------------
# fractions with infinity


@dataclass(frozen=True, order=False)
class Frac:
    """p/q in lowest terms with q >= 0; infinity is 1/0."""

    p: int
    q: int

    @classmethod
    def make(cls, p, q=1) -> "Frac":
        if isinstance(p, Fraction) and q == 1:
            p, q = p.numerator, p.denominator
        if p == 0 and q == 0:
            raise ValueError("0/0 is not a point of the projective line")
        g = igcd(p, q)
        p, q = p // g, q // g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        return cls(p, q)

    @classmethod
    def of(cls, x) -> "Frac":
        return x if isinstance(x, Frac) else cls.make(Fraction(x))

    @property
    def value(self) -> Fraction | None:
        return None if self.q == 0 else Fraction(self.p, self.q)

    @property
    def vector(self) -> tuple[int, int]:
        return (self.p, self.q)

    def _key(self):
        return (1, 0) if self.q == 0 else (0, Fraction(self.p, self.q))

    def __lt__(self, other):
        return self._key() < Frac.of(other)._key()

    def __le__(self, other):
        return self._key() <= Frac.of(other)._key()

    def __gt__(self, other):
        return self._key() > Frac.of(other)._key()

    def __ge__(self, other):
        return self._key() >= Frac.of(other)._key()

    def __str__(self):
        if self.q == 0:
            return "1/0"
        return str(self.p) if self.q == 1 else f"{self.p}/{self.q}"


def is_standard(a: Frac, b: Frac) -> bool:
    """ps - qr = -1 for a = p/q, b = r/s."""
    return a.p * b.q - a.q * b.p == -1


def mediant(a: Frac, b: Frac) -> Frac:
    if not is_standard(a, b):
        raise ValueError(f"[{a}, {b}] is not a standard Farey pair")
    return Frac(a.p + b.p, a.q + b.q)


def farey_level(k: int) -> list[Frac]:
    """Far(k): k-1 rounds of mediant insertion starting from {0, 1}."""
    if k < 1:
        raise ValueError("levels start at 1")
    pts = [Frac(0, 1), Frac(1, 1)]
    for _ in range(k - 1):
        nxt = [pts[0]]
        for a, b in zip(pts, pts[1:]):
            nxt += [mediant(a, b), b]
        pts = nxt
    return pts


def dyadic_level(k: int) -> list[Fraction]:
    """Dyad(k) = {n / 2^(k-1)}, indexed to match `farey_level`."""
    if k < 1:
        raise ValueError("levels start at 1")
    d = 2 ** (k - 1)
    return [Fraction(n, d) for n in range(d + 1)]


def fib(n: int) -> int:
    """Fibonacci numbers with fib(1) = fib(2) = 1."""
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def _is_dyadic(x: Fraction) -> bool:
    d = x.denominator
    return d & (d - 1) == 0


def dyadic_to_farey(x) -> Frac:
    """The conjugacy sending Dyad(k) onto Far(k) in order, for every k."""
    x = Fraction(x)
    if not _is_dyadic(x) or not 0 <= x <= 1:
        raise ValueError(f"{x} is not a dyadic rational of [0, 1]")
    lo, hi, dlo, dhi = Frac(0, 1), Frac(1, 1), Fraction(0), Fraction(1)
    while True:
        if x == dlo:
            return lo
        if x == dhi:
            return hi
        mid, med = (dlo + dhi) / 2, mediant(lo, hi)
        if x == mid:
            return med
        if x < mid:
            hi, dhi = med, mid
        else:
            lo, dlo = med, mid


def farey_to_dyadic(x) -> Fraction:
    """Inverse of `dyadic_to_farey`."""
    x = Frac.of(x)
    if x.q == 0 or not 0 <= x.value <= 1:
        raise ValueError(f"{x} is not a rational of [0, 1]")
    lo, hi, dlo, dhi = Frac(0, 1), Frac(1, 1), Fraction(0), Fraction(1)
    while True:
        if x == lo:
            return dlo
        if x == hi:
            return dhi
        mid, med = (dlo + dhi) / 2, mediant(lo, hi)
        if x == med:
            return mid
        if x < med:
            hi, dhi = med, mid
        else:
            lo, dlo = med, mid


# ---------------------------------------------------------------------------
# integer matrices


def _mul(A, B):
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def _det(A):
    return A[0][0] * A[1][1] - A[0][1] * A[1][0]


def _inv(A):
    d = _det(A)
    if d not in (1, -1):
        raise ValueError(f"matrix {A} is not invertible over the integers")
    return ((A[1][1] * d, -A[0][1] * d), (-A[1][0] * d, A[0][0] * d))


def _apply(A, v):
    return (A[0][0] * v[0] + A[0][1] * v[1], A[1][0] * v[0] + A[1][1] * v[1])


def _cols(u, v):
    return ((u[0], v[0]), (u[1], v[1]))


def matrix_for_interval_pair(src, dst):
    """Integer matrix sending src = [p/q, r/s] onto dst endpoint by endpoint.

    Both intervals must be standard; dst may be listed in decreasing order,
    which gives an orientation-reversing matrix.  Endpoint vectors go to
    endpoint vectors, hence mediants to mediants at every depth.
    """
    (a, b), (c, d) = [tuple(Frac.of(x) for x in iv) for iv in (src, dst)]
    if not (is_standard(a, b) and is_standard(min(c, d), max(c, d))):
        raise ValueError("both intervals must be standard Farey intervals")
    return _mul(_cols(c.vector, d.vector), _inv(_cols(a.vector, b.vector)))


# ---------------------------------------------------------------------------
# piecewise maps


def _vec(x: Fraction):
    return (x.numerator, x.denominator)


def _farey_apply(A, x: Fraction) -> Fraction:
    p, q = _apply(A, _vec(x))
    if q <= 0 or p < 0:
        raise ValueError(f"matrix {A} does not keep {x} inside the label circle")
    return Fraction(p, q)


@dataclass(frozen=True)
class Affine:
    """x -> scale * x + shift, with scale = +-2^m and dyadic shift."""

    scale: Fraction
    shift: Fraction

    def __call__(self, x):
        return self.scale * x + self.shift

    def inverse(self) -> "Affine":
        return Affine(1 / self.scale, -self.shift / self.scale)

    def after(self, other: "Affine") -> "Affine":
        return Affine(self.scale * other.scale, self.scale * other.shift + self.shift)

    @property
    def sign(self) -> int:
        return 1 if self.scale > 0 else -1

    @property
    def exponent(self) -> int:
        a = abs(self.scale)
        return a.numerator.bit_length() - 1 if a >= 1 else -(a.denominator.bit_length() - 1)

    def to_record(self):
        return {"sign": self.sign, "exponent": self.exponent, "shift": str(self.shift)}

    def __str__(self):
        return f"x -> {self.scale}*x + {self.shift}"


FAREY, DYADIC = "farey", "dyadic"


def _split(mode, lo: Fraction, hi: Fraction) -> Fraction:
    if mode == FAREY:
        return Fraction(lo.numerator + hi.numerator, lo.denominator + hi.denominator)
    return (lo + hi) / 2


def _standard(mode, lo: Fraction, hi: Fraction) -> bool:
    if mode == FAREY:
        return lo.numerator * hi.denominator - lo.denominator * hi.numerator == -1
    w = hi - lo
    return w > 0 and w.numerator == 1 and _is_dyadic(w) and (lo / w).denominator == 1


@dataclass(frozen=True)
class PiecewiseCircleMap:
    """Piecewise map of the circle; `pieces` are (lo, hi, action) with lo < hi.

    In Farey mode actions are integer matrices, in dyadic mode `Affine`.
    Instances built through `make` are normalized, so == is equality of maps.
    """

    mode: str
    pieces: tuple

    @classmethod
    def make(cls, mode, pieces, check: bool = True) -> "PiecewiseCircleMap":
        pieces = [(Fraction(lo), Fraction(hi), act) for lo, hi, act in pieces]
        pieces.sort(key=lambda p: p[0])
        f = cls(mode, tuple(pieces))
        if check:
            f.check()
        return f.normalize()

    @classmethod
    def identity(cls, mode=FAREY) -> "PiecewiseCircleMap":
        act = ((1, 0), (0, 1)) if mode == FAREY else Affine(Fraction(1), Fraction(0))
        return cls(mode, ((Fraction(0), Fraction(1), act),))

    # -- evaluation -----------------------------------------------------
    def _act(self, act, x):
        return _farey_apply(act, x) if self.mode == FAREY else act(x)

    def image(self, piece):
        lo, hi, act = piece
        return self._act(act, lo), self._act(act, hi)

    def __call__(self, x) -> Fraction:
        """Image of a point of the circle, as a representative in [0, 1)."""
        x = Fraction(x) % 1
        for lo, hi, act in self.pieces:
            if lo <= x <= hi:
                return self._act(act, x) % 1
        raise ValueError(f"{x} not covered")  # pragma: no cover

    def check(self):
        """Raise if pieces do not form a continuous bijection of the circle."""
        if not self.pieces or self.pieces[0][0] != 0 or self.pieces[-1][1] != 1:
            raise ValueError("pieces must cover [0, 1]")
        for (_, h1, _), (l2, _, _) in zip(self.pieces, self.pieces[1:]):
            if h1 != l2:
                raise ValueError("pieces must tile [0, 1] without gaps")
        images = []
        for piece in self.pieces:
            lo, hi, _ = piece
            if not _standard(self.mode, lo, hi):
                raise ValueError(f"[{lo}, {hi}] is not a standard {self.mode} interval")
            a, b = self.image(piece)
            if not _standard(self.mode, min(a, b), max(a, b)):
                raise ValueError(f"image of [{lo}, {hi}] is not standard")
            images.append((a, b))
        for (_, b), (a, _) in zip(images, images[1:] + images[:1]):
            if a % 1 != b % 1:
                raise ValueError("adjacent pieces disagree at a shared endpoint")
        total = sum(abs(b - a) for a, b in images)
        if total != 1:
            raise ValueError("the map is not a bijection of the circle")

    # -- canonical form ---------------------------------------------------
    def normalize(self) -> "PiecewiseCircleMap":
        """Coarsest standard subdivision with the action constant on each piece."""
        breaks = {Fraction(0)}
        for (_, _, a1), (l2, _, a2) in zip(self.pieces, self.pieces[1:]):
            if a1 != a2:
                breaks.add(l2)
        out = []

        def walk(lo, hi):
            act = None
            if not any(lo < b < hi for b in breaks):
                act = next(a for l, h, a in self.pieces if l <= lo < h)
                a, b = self._act(act, lo), self._act(act, hi)
                if not _standard(self.mode, min(a, b), max(a, b)):
                    act = None  # dyadic images must stay standard too
            if act is None:
                mid = _split(self.mode, lo, hi)
                walk(lo, mid)
                walk(mid, hi)
            else:
                out.append((lo, hi, act))

        walk(Fraction(0), Fraction(1))
        return PiecewiseCircleMap(self.mode, tuple(out))

    # -- group operations -----------------------------------------------
    def _inverse_act(self, act):
        return _inv(act) if self.mode == FAREY else act.inverse()

    def _then(self, outer, inner):
        return _mul(outer, inner) if self.mode == FAREY else outer.after(inner)

    def compose(self, g: "PiecewiseCircleMap") -> "PiecewiseCircleMap":
        """self o g."""
        if g.mode != self.mode:
            raise ValueError("cannot compose maps of different modes")
        out = []
        for piece in g.pieces:
            lo, hi, A = piece
            a, b = g.image(piece)
            klo, khi = min(a, b), max(a, b)
            Ainv = g._inverse_act(A)
            for jlo, jhi, B in self.pieces:
                if jlo <= klo and khi <= jhi:
                    out.append((lo, hi, self._then(B, A)))
                    break
                if klo <= jlo and jhi <= khi:
                    p, q = self._act(Ainv, jlo), self._act(Ainv, jhi)
                    out.append((min(p, q), max(p, q), self._then(B, A)))
                elif jlo < khi and klo < jhi:
                    raise ValueError("standard intervals overlap without nesting; corrupted input")
        return PiecewiseCircleMap.make(self.mode, out)

    def invert(self) -> "PiecewiseCircleMap":
        out = []
        for piece in self.pieces:
            a, b = self.image(piece)
            out.append((min(a, b), max(a, b), self._inverse_act(piece[2])))
        return PiecewiseCircleMap.make(self.mode, out)

    def is_identity(self) -> bool:
        return self == PiecewiseCircleMap.identity(self.mode)

    # -- conversions ------------------------------------------------------
    def to_dyadic(self) -> "PiecewiseCircleMap":
        if self.mode == DYADIC:
            return self
        out = []
        for piece in self.pieces:
            lo, hi, _ = piece
            a, b = self.image(piece)
            dlo, dhi = farey_to_dyadic(lo), farey_to_dyadic(hi)
            da, db = farey_to_dyadic(a), farey_to_dyadic(b)
            scale = (db - da) / (dhi - dlo)
            out.append((dlo, dhi, Affine(scale, da - scale * dlo)))
        return PiecewiseCircleMap.make(DYADIC, out)

    def to_farey(self) -> "PiecewiseCircleMap":
        if self.mode == FAREY:
            return self
        out = []
        for piece in self.pieces:
            lo, hi, _ = piece
            a, b = self.image(piece)
            src = [dyadic_to_farey(lo).vector, dyadic_to_farey(hi).vector]
            dst = [dyadic_to_farey(a).vector, dyadic_to_farey(b).vector]
            M = _mul(_cols(*dst), _inv(_cols(*src)))
            out.append((dyadic_to_farey(lo).value, dyadic_to_farey(hi).value, M))
        return PiecewiseCircleMap.make(FAREY, out)

    def to_record(self) -> dict:
        pieces = []
        for piece in self.pieces:
            lo, hi, act = piece
            a, b = self.image(piece)
            rec = {"source": [str(lo), str(hi)], "target": [str(a), str(b)]}
            rec["action"] = [list(r) for r in act] if self.mode == FAREY else act.to_record()
            pieces.append(rec)
        return {"mode": self.mode, "pieces": pieces}

    def __str__(self):
        rows = []
        for piece in self.pieces:
            lo, hi, act = piece
            a, b = self.image(piece)
            rows.append(f"[{lo}, {hi}] -> [{a}, {b}] by {act}")
        return "\n".join(rows)


# ---------------------------------------------------------------------------
# boundary cycles


@dataclass(frozen=True)
class Vertex:
    label: Frac
    self_intersection: int
    ray: tuple[int, int]


_ONE = Frac(1, 1)


@dataclass(frozen=True)
class BoundaryCycleGraph:
    """Cyclic dual graph of a toric boundary, labels increasing from 0."""

    vertices: tuple[Vertex, ...]
    level: int = 1

    @classmethod
    def p2_triangle(cls) -> "BoundaryCycleGraph":
        rays = [(1, 0), (0, 1), (-1, -1)]
        labels = [Frac(0, 1), Frac(1, 2), Frac(2, 3)]
        return cls(tuple(Vertex(l, 1, r) for l, r in zip(labels, rays)))

    @classmethod
    def square(cls) -> "BoundaryCycleGraph":
        """Boundary of P1xP1: four curves of self-intersection 0."""
        rays = [(1, 0), (0, 1), (-1, 0), (0, -1)]
        return cls(tuple(Vertex(l, 0, r) for l, r in zip(farey_level(3)[:-1], rays)))

    def __len__(self):
        return len(self.vertices)

    def labels(self) -> list[Frac]:
        return [v.label for v in self.vertices]

    def edge_labels(self, i: int) -> tuple[Frac, Frac]:
        a = self.vertices[i].label
        b = self.vertices[(i + 1) % len(self)].label if i + 1 < len(self) else _ONE
        return a, b

    def sweep(self) -> "BoundaryCycleGraph":
        """Blow up every corner once."""
        G = self
        for i in reversed(range(len(self))):
            G = blow_up_node(G, i)
        return BoundaryCycleGraph(G.vertices, self.level + 1)

    def label_of_ray(self, ray) -> Frac:
        """Label of a primitive ray, found by descending from the corners."""
        n = len(self)
        for i in range(n):
            u, v = self.vertices[i].ray, self.vertices[(i + 1) % n].ray
            a, b = self.edge_labels(i)
            if ray == u:
                return a
            coef = _apply(_inv(_cols(u, v)), ray)
            if coef[0] >= 0 and coef[1] > 0:
                return _descend(u, v, a, b, ray)
        raise ValueError(f"{ray} is not a primitive ray")  # pragma: no cover

    def to_record(self):
        return {"level": self.level, "vertices": [
            {"label": str(v.label), "self_intersection": v.self_intersection, "ray": list(v.ray)}
            for v in self.vertices]}


def _descend(u, v, a, b, ray):
    while True:
        if ray == v:
            return b
        w = (u[0] + v[0], u[1] + v[1])
        m = mediant(a, b)
        if ray == w:
            return m
        c = _apply(_inv(_cols(u, v)), ray)
        if c[0] > c[1]:
            v, b = w, m
        else:
            u, a = w, m


def blow_up_node(G: BoundaryCycleGraph, i: int) -> BoundaryCycleGraph:
    """Blow up the corner between vertex i and the next one."""
    n = len(G)
    if not 0 <= i < n:
        raise ValueError(f"no corner {i} in a cycle of length {n}")
    j = (i + 1) % n
    a, b = G.edge_labels(i)
    vi, vj = G.vertices[i], G.vertices[j]
    new = Vertex(mediant(a, b), -1, (vi.ray[0] + vj.ray[0], vi.ray[1] + vj.ray[1]))
    vs = list(G.vertices)
    vs[i] = Vertex(vi.label, vi.self_intersection - 1, vi.ray)
    vs[j] = Vertex(vj.label, vj.self_intersection - 1, vj.ray)
    vs.insert(i + 1, new)
    return BoundaryCycleGraph(tuple(vs), G.level)


# ---------------------------------------------------------------------------
# monomial maps on the circle of rays


_FAN = BoundaryCycleGraph.square()


def _cone_data():
    vs = _FAN.vertices
    n = len(vs)
    out = []
    for i in range(n):
        u, v = vs[i].ray, vs[(i + 1) % n].ray
        a, b = _FAN.edge_labels(i)
        N = _mul(_cols(a.vector, b.vector), _inv(_cols(u, v)))
        out.append((u, v, N))
    return out


def _in_cone(u, v, w) -> bool:
    c = _apply(_inv(_cols(u, v)), w)
    return c[0] >= 0 and c[1] >= 0


def monomial_boundary_action(M) -> PiecewiseCircleMap:
    """Circle map induced by v -> M v on rays, in Farey mode."""
    M = tuple(tuple(int(c) for c in row) for row in M)
    if _det(M) not in (1, -1):
        raise ValueError("monomial matrix must have determinant +-1")
    cones = _cone_data()
    pieces = []
    for u0, v0, Ni in cones:
        Ni_inv = _inv(Ni)
        stack = [(u0, v0)]
        while stack:
            u, v = stack.pop()
            mu, mv = _apply(M, u), _apply(M, v)
            j = next((j for j, (a, b, _) in enumerate(cones) if _in_cone(a, b, mu) and _in_cone(a, b, mv)), None)
            if j is None:
                w = (u[0] + v[0], u[1] + v[1])
                stack += [(w, v), (u, w)]
                continue
            A = _mul(_mul(cones[j][2], M), Ni_inv)
            lo, hi = _apply(Ni, u), _apply(Ni, v)
            pieces.append((Fraction(*lo), Fraction(*hi), A))
    return PiecewiseCircleMap.make(FAREY, pieces)


def simulate_label_action(M, k: int) -> dict[Frac, Frac]:
    """Labels of level-k boundary curves and of their images under M.

    The image label is read off the blown-up boundary, independently of
    the matrices used by `monomial_boundary_action`.
    """
    G = BoundaryCycleGraph.square()
    for _ in range(k - 1):
        G = G.sweep()
    out = {}
    for v in G.vertices:
        img = _apply(M, v.ray)
        lab = G.label_of_ray(img)
        out[v.label] = Frac(0, 1) if lab == _ONE else lab
    return out
