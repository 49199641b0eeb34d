"""
Boundary circles and the Farey tessellation
===========================================

A toric surface has a cycle of boundary curves.  Blowing up corners
inserts mediants, so the labels fill in the Farey sequence, and a
monomial map acts on the labels by a piecewise projective homeomorphism.
"""

from fractions import Fraction

from cremona import (
    BoundaryCycleGraph,
    PiecewiseCircleMap,
    dyadic_level,
    dyadic_to_farey,
    farey_level,
    matrix_for_interval_pair,
    monomial_boundary_action,
    simulate_label_action,
)

for k in range(1, 6):
    print(k, " ".join(str(x) for x in farey_level(k)))

# Minkowski's question mark, restricted to dyadics, lines the two grids up.
print([str(dyadic_to_farey(x)) for x in dyadic_level(4)])

# Sweeping the square fan twice.
S = BoundaryCycleGraph.square()
for _ in range(2):
    S = S.sweep()
print([(str(v.label), v.self_intersection) for v in S.vertices])

# A piecewise map built from two standard intervals: swap the halves.
M1 = matrix_for_interval_pair((0, Fraction(1, 2)), (Fraction(1, 2), 1))
M2 = matrix_for_interval_pair((Fraction(1, 2), 1), (0, Fraction(1, 2)))
r = PiecewiseCircleMap.make("farey", [(Fraction(0), Fraction(1, 2), M1), (Fraction(1, 2), Fraction(1), M2)])
print("swap:", r, " squared is identity:", r.compose(r).is_identity())

# The shear (x, xy) moves boundary labels; the simulator on the resolved
# cycle agrees with the matrix action.
M = ((1, 0), (1, 1))
h = monomial_boundary_action(M)
for lab, img in simulate_label_action(M, 3).items():
    print(f"  {lab!s:>4} -> {img!s:<4} (matrix: {h(lab.value)})")
