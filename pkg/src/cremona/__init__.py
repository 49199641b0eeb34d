"""Exact workbench for plane birational maps and the curves they move.

Maps of P2 and P1xP1 are handled with exact rational arithmetic.  The
package computes contracted curves, indeterminacy points and the defect
exc(f) + exc(f^-1), tracks orbits of curves through blow-ups, decides the
transfixing question for fibered maps, and models the piecewise circle
maps that monomial maps induce on boundary cycles.
"""

__version__ = "0.1.0"

from .config import DEFAULT, Config
from .errors import (
    AlgebraicAnchorUnsupported,
    CremonaError,
    EliminationFailure,
    IndeterminatePoint,
    JetDepthExceeded,
    MathDomainError,
    NotBirational,
    NotInverse,
    ParseError,
    ResourceCapExceeded,
    UnknownVerdict,
    VariableMismatch,
)
from .geometry import P1xP1, P2, CurveOnX, GaloisPoint, RationalPoint
from .birmap import (
    BirMap,
    apply_to_point,
    compose,
    contracted_curves,
    degree_sequence,
    exc,
    identity,
    image_of_curve,
    indeterminacy_points,
    jacobian,
    linear_map,
    monomial_map,
    power,
    saturate,
    sigma2,
    verify_inverse,
)
from .formula import parse_curve, parse_map, parse_polynomial
from .hyptilde import (
    Concrete,
    Direction,
    Virtual,
    commensuration_defect,
    defect_growth,
    length,
    orbit_trace,
    pushforward,
)
from .jonquieres import (
    JonqMap,
    MobiusMap,
    algebraic_stability_check,
    fixed_points,
    ind_base_projection,
    mobius_classify,
    transfix_verdict,
)
from .fareycircle import (
    BoundaryCycleGraph,
    Frac,
    PiecewiseCircleMap,
    dyadic_level,
    dyadic_to_farey,
    farey_level,
    farey_to_dyadic,
    matrix_for_interval_pair,
    monomial_boundary_action,
    simulate_label_action,
)
