import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from corpus import farey_generators, gl2_matrices
from cremona.fareycircle import (
    Affine,
    BoundaryCycleGraph,
    Frac,
    PiecewiseCircleMap,
    blow_up_node,
    dyadic_level,
    dyadic_to_farey,
    farey_level,
    farey_to_dyadic,
    fib,
    is_standard,
    matrix_for_interval_pair,
    mediant,
    monomial_boundary_action,
    simulate_label_action,
)

GENS = farey_generators()


def test_mediant_examples():
    assert mediant(Frac(0, 1), Frac(1, 1)) == Frac(1, 2)
    assert mediant(Frac(0, 1), Frac(1, 0)) == Frac(1, 1)
    assert mediant(Frac(1, 3), Frac(1, 2)) == Frac(2, 5)
    with pytest.raises(ValueError):
        mediant(Frac(0, 1), Frac(2, 3))


def test_levels():
    assert [str(x) for x in farey_level(3)] == ["0", "1/3", "1/2", "2/3", "1"]
    assert dyadic_level(3) == [Q(0), Q(1, 4), Q(1, 2), Q(3, 4), Q(1)]
    assert max(x.q for x in farey_level(4)) == 5 == fib(5)
    assert [fib(n) for n in range(1, 8)] == [1, 1, 2, 3, 5, 8, 13]


@pytest.mark.parametrize("k", range(1, 13))
def test_level_invariants(k):
    far = farey_level(k)
    assert len(far) == len(dyadic_level(k)) == 2 ** (k - 1) + 1
    assert all(is_standard(a, b) for a, b in zip(far, far[1:]))
    assert max(x.q for x in far) == fib(k + 1)
    assert [dyadic_to_farey(x) for x in dyadic_level(k)] == far


def test_conjugacy_examples():
    assert dyadic_to_farey(Q(1, 2)) == Frac(1, 2)
    assert dyadic_to_farey(Q(1, 4)) == Frac(1, 3)
    assert dyadic_to_farey(Q(3, 4)) == Frac(2, 3)
    assert farey_to_dyadic(Q(2, 5)) == Q(3, 8)
    with pytest.raises(ValueError):
        dyadic_to_farey(Q(1, 3))


def test_interval_pair_examples():
    assert matrix_for_interval_pair((0, 1), (0, 1)) == ((1, 0), (0, 1))
    M = matrix_for_interval_pair((0, 1), (Q(1, 2), 1))
    assert M == ((0, 1), (-1, 2))
    N = matrix_for_interval_pair((0, Q(1, 2)), (0, 1))
    assert N == ((1, 0), (-1, 1))
    h = PiecewiseCircleMap.make("farey", [(0, 1, M)], check=False)
    assert h._act(M, Q(1, 2)) == Q(2, 3)
    with pytest.raises(ValueError):
        matrix_for_interval_pair((0, Q(2, 3)), (0, 1))


@st.composite
def standard_intervals(draw):
    k = draw(st.integers(1, 8))
    far = farey_level(k)
    i = draw(st.integers(0, len(far) - 2))
    return far[i], far[i + 1]


@settings(max_examples=60, deadline=None)
@given(standard_intervals(), standard_intervals())
def test_interval_pair_is_the_unique_solution(src, dst):
    M = matrix_for_interval_pair(src, dst)
    assert abs(M[0][0] * M[1][1] - M[0][1] * M[1][0]) == 1
    assert oracles.solve_endpoint_system([s.value for s in src], [d.value for d in dst]) == [M]


def test_identity_and_inverse():
    for g in GENS:
        assert g.compose(g.invert()).is_identity()
        assert g.invert().compose(g).is_identity()
    assert PiecewiseCircleMap.identity().is_identity()


def test_rotation_composition():
    r = GENS[0]
    assert len(r.pieces) == 2
    assert r.compose(r).is_identity()
    assert len(r.compose(GENS[1]).pieces) <= len(r.pieces) + len(GENS[1].pieces)


def test_piece_action_on_third():
    r = GENS[0]
    (a, b), (c, d) = r.pieces[0][2]
    assert r(Q(1, 3)) == Q(a * 1 + b * 3, c * 1 + d * 3)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 7), min_size=1, max_size=6))
def test_words_respect_group_axioms(word):
    elems = GENS + [g.invert() for g in GENS]
    w = PiecewiseCircleMap.identity()
    for i in word:
        w = w.compose(elems[i])
    inv = PiecewiseCircleMap.identity()
    for i in reversed(word):
        inv = inv.compose(elems[(i + 4) % 8])
    assert w.compose(inv).is_identity()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
def test_associativity(i, j, k):
    f, g, h = GENS[i], GENS[j], GENS[k]
    assert f.compose(g).compose(h) == f.compose(g.compose(h))


def test_pieces_map_standard_to_standard():
    for g in GENS:
        for lo, hi, act in g.pieces:
            far = [x.value for x in farey_level(6) if lo <= x.value <= hi]
            for a, b in zip(far, far[1:]):
                p, q = sorted((g._act(act, a), g._act(act, b)))
                assert is_standard(Frac.of(p), Frac.of(q))


def test_dyadic_round_trip():
    for g in GENS:
        d = g.to_dyadic()
        assert d.mode == "dyadic" and d.to_farey() == g
        for x in dyadic_level(5):
            assert farey_to_dyadic(Frac.of(g(dyadic_to_farey(x).value))) == d(x)


def test_affine_pieces():
    a = Affine(Q(2), Q(-1, 2))
    assert a(Q(1, 2)) == Q(1, 2) and a.inverse()(Q(1, 2)) == Q(1, 2)
    assert a.exponent == 1 and a.sign == 1


def test_cycle_examples():
    T = BoundaryCycleGraph.p2_triangle()
    assert [(str(v.label), v.self_intersection) for v in T.vertices] == [("0", 1), ("1/2", 1), ("2/3", 1)]
    B = blow_up_node(T, 0)
    assert [(str(v.label), v.self_intersection) for v in B.vertices] == [
        ("0", 0), ("1/3", -1), ("1/2", 0), ("2/3", 1)]
    S = BoundaryCycleGraph.square()
    for k in range(1, 5):
        S2 = S.sweep()
        assert len(S2) == 2 * len(S)
        for i, v in enumerate(S2.vertices):
            if v.label not in S.labels():
                a = S2.vertices[i - 1].label
                b = S2.vertices[(i + 1) % len(S2)].label if i + 1 < len(S2) else Frac(1, 1)
                assert v.label == mediant(a, b)
        S = S2
    assert S.labels() == farey_level(S.level + 2)[:-1]


def test_monomial_action_examples():
    assert monomial_boundary_action(((1, 0), (0, 1))).is_identity()
    h = monomial_boundary_action(((1, 0), (1, 1)))
    fixed = [x for x in farey_level(3)[:-1] if h(x.value) == x.value]
    assert [str(x) for x in fixed] == ["1/3", "2/3"]  # the rays (0, 1) and (0, -1)


@pytest.mark.parametrize("M", [((1, 0), (1, 1)), ((2, 1), (1, 1)), ((0, -1), (1, 0)), ((0, 1), (1, 0)), ((-1, 0), (0, -1))])
def test_simulator_matches_matrix_action(M):
    h = monomial_boundary_action(M)
    for k in range(1, 6):
        for lab, img in simulate_label_action(M, k).items():
            assert h(lab.value) == img.value


def test_monomial_action_is_a_homomorphism():
    mats = list(gl2_matrices(1))
    rng = random.Random(0)
    for _ in range(20):
        A, B = rng.choice(mats), rng.choice(mats)
        AB = tuple(tuple(sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2)) for i in range(2))
        assert monomial_boundary_action(A).compose(monomial_boundary_action(B)) == monomial_boundary_action(AB)
