"""Shared test corpus of certified birational maps."""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

from cremona import (
    P1xP1,
    P2,
    compose,
    identity,
    linear_map,
    monomial_map,
    parse_map,
    sigma2,
)
from cremona.jonquieres import JonqMap

JONQ_FORMULAS = [
    "(2*x, x*y)",
    "(2*x, (x+1)*y)",
    "(x+1, x*y)",
    "(-x, x/y)",
    "(1/x, y)",
    "(x+1, (x+1)*y/x)",
]


def gl2_matrices(bound=3):
    """Integer matrices of determinant +-1 with entries in [-bound, bound]."""
    rng = range(-bound, bound + 1)
    for a, b, c, d in itertools.product(rng, repeat=4):
        if a * d - b * c in (1, -1):
            yield ((a, b), (c, d))


def jonq(text):
    f = parse_map(text, ambient=P1xP1)
    return JonqMap.from_birmap(f).to_birmap()


def random_linear(rng, bound=2):
    while True:
        M = [[rng.randint(-bound, bound) for _ in range(3)] for _ in range(3)]
        det = (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
               - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
               + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))
        if det:
            return linear_map(M)


def random_vertex_fixing_linear(rng):
    """Linear map fixing [0:0:1], so that sigma2 o L o sigma2 drops to degree 3."""
    while True:
        M = [[rng.randint(-2, 2) for _ in range(3)] for _ in range(2)] + [[0, 0, 1]]
        M[0][2] = M[1][2] = 0
        if M[0][0] * M[1][1] - M[0][1] * M[1][0]:
            return linear_map(M)


def random_quadratic(rng):
    return compose(random_linear(rng), compose(sigma2(), random_linear(rng)))


def random_cubic(rng):
    s = sigma2()
    return compose(random_linear(rng, 1), compose(s, compose(random_vertex_fixing_linear(rng), s)))


@lru_cache(maxsize=None)
def certified_corpus(seed=0, n_random=4):
    """(label, map) pairs; every map carries a certified inverse."""
    rng = random.Random(seed)
    out = [("sigma2", sigma2()), ("id", identity(P2))]
    for M in [((1, 0), (1, 1)), ((2, 1), (1, 1)), ((0, -1), (1, 0)), ((3, 2), (1, 1)),
              ((-1, 3), (0, 1)), ((1, 3), (0, 1))]:
        out.append((f"monomial {M}", monomial_map(M)))
    out.append(("monomial P1xP1 ((1,1),(0,1))", monomial_map(((1, 1), (0, 1)), P1xP1)))
    for text in JONQ_FORMULAS[:3]:
        out.append((f"jonq {text}", jonq(text)))
    for i in range(n_random):
        out.append((f"random quadratic {i}", random_quadratic(rng)))
        out.append((f"random sigma2 L sigma2 {i}", random_cubic(rng)))
    return tuple(out)


def plane_corpus(seed=0):
    return [(k, f) for k, f in certified_corpus(seed) if f.ambient is P2]


def random_curve(rng, ambient=P2, max_degree=3, avoid=()):
    """Random irreducible curve of degree <= max_degree, not in `avoid`."""
    from cremona.errors import MathDomainError
    from cremona.exactmath import MultiPoly
    from cremona.geometry import CurveOnX

    vs = ambient.variables
    while True:
        if ambient is P2:
            d = rng.randint(1, max_degree)
            monos = [(a, b, d - a - b) for a in range(d + 1) for b in range(d + 1 - a)]
        else:
            d1, d2 = rng.randint(0, 2), rng.randint(0, 2)
            if d1 + d2 == 0 or d1 + d2 > max_degree:
                continue
            monos = [(a, d1 - a, b, d2 - b) for a in range(d1 + 1) for b in range(d2 + 1)]
        terms = {m: rng.randint(-3, 3) for m in rng.sample(monos, min(len(monos), 3))}
        p = MultiPoly(vs, terms)
        if p.is_zero() or p.is_constant():
            continue
        try:
            C = CurveOnX.make(ambient, p)
        except MathDomainError:
            continue
        if C not in avoid:
            return C


def farey_generators():
    """Four piecewise circle maps: a rotation, a Thompson-type map, two monomial actions."""
    from fractions import Fraction as Q

    from cremona.fareycircle import PiecewiseCircleMap, matrix_for_interval_pair, monomial_boundary_action

    def from_pairs(pairs):
        pieces = [(Q(a), Q(b), matrix_for_interval_pair((Q(a), Q(b)), (Q(c), Q(d)))) for (a, b), (c, d) in pairs]
        return PiecewiseCircleMap.make("farey", pieces)

    rotation = from_pairs([(("0", "1/2"), ("1/2", "1")), (("1/2", "1"), ("0", "1/2"))])
    thompson = from_pairs([(("0", "1/2"), ("0", "1/3")), (("1/2", "2/3"), ("1/3", "1/2")),
                           (("2/3", "1"), ("1/2", "1"))])
    return [rotation, thompson, monomial_boundary_action(((1, 0), (1, 1))),
            monomial_boundary_action(((0, -1), (1, 0)))]
