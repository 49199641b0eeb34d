"""
The standard quadratic involution
=================================

Walk through what the library sees in sigma2 = [x1 x2 : x0 x2 : x0 x1]:
its base points, the three lines it collapses, how those lines come back
as exceptional curves, and what happens to the defect under composition.
"""

from cremona import (
    Concrete,
    commensuration_defect,
    compose,
    degree_sequence,
    exc,
    linear_map,
    parse_curve,
    pushforward,
    sigma2,
)

s = sigma2()
print("map:", s)
print("degree:", s.degree)
print("base points:", [str(p) for p in s.indeterminacy])

# Each coordinate line is squeezed to the opposite vertex.
for C, p in s.contracted:
    print(f"  {C} -> {p}")
print("exc(f) =", exc(s), " exc(f^-1) =", exc(s.inverse))
print("defect =", commensuration_defect(s))

# A line through no vertex becomes a conic through all three.
L = parse_curve("{x0 + 2*x1 + 3*x2 = 0}")
print("image of", L, "is", pushforward(s, Concrete(L)))

# The line {x0 = 0} leaves the plane and lands on the exceptional curve
# over [1:0:0]; applying sigma2 again brings it back.
E = pushforward(s, Concrete(parse_curve("{x0 = 0}")))
print("{x0 = 0} ->", E, "->", pushforward(s, E))

# Conjugating by a generic linear map keeps the degree; composing with one
# that moves the base points gives growth.
A = linear_map(((1, 1, 0), (0, 1, 1), (1, 0, 2)))
g = compose(A, s)
print("degrees of (A o sigma2)^n:", degree_sequence(g, 5))
print("defect of A o sigma2:", commensuration_defect(g))
