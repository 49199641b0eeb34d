"""
Fibered maps of P1 x P1
=======================

Maps of the form (x, y) -> (m(x), a(x) y) preserve the vertical ruling.
Whether such a map fixes a finite-difference copy of the set of actual
curves depends on how the base Mobius map m moves the fibres it blows up.
"""

from cremona import (
    JonqMap,
    P1xP1,
    defect_growth,
    mobius_classify,
    orbit_trace,
    parse_curve,
    parse_map,
    transfix_verdict,
)

examples = ["(2*x, x*y)", "(2*x, (x+1)*y)", "(x+1, x*y)"]

for text in examples:
    j = JonqMap.from_birmap(parse_map(text, ambient=P1xP1))
    v = transfix_verdict(j)
    print(f"{text:16s} base {mobius_classify(j.base)!s:12s} -> {v.outcome}")
    for point, finite, _ in v.evidence:
        print(f"    fibre over {point}: {'finite' if finite else 'infinite'} orbit")

# The defect of f^n tells the same story numerically.
for text in examples:
    f = JonqMap.from_birmap(parse_map(text, ambient=P1xP1)).to_birmap()
    print(text, defect_growth(f, 8))

# Following {x = 0} under the translation x -> x + 1: backwards it stays a
# curve, forwards it disappears into a point blown up over y = 0.
f = JonqMap.from_birmap(parse_map("(x+1, x*y)", ambient=P1xP1)).to_birmap()
for n, elem, tag in orbit_trace(f, parse_curve("{x = 0}", P1xP1), 3, 3).entries:
    print(f"  n={n:+d}  {tag:8s} {elem}")
