import itertools
from fractions import Fraction

import pytest

from cremona import P1xP1, P2, monomial_map, sigma2
from cremona.errors import MathDomainError, ParseError
from cremona.exactmath import MultiPoly
from cremona.formula import parse_curve, parse_map, parse_polynomial, tokenize


def test_affine_pair_is_homogenized():
    f = parse_map("(x, x*y)")
    assert str(f) == "[x0*x2 : x0*x1 : x2^2]"


def test_bracket_form_sigma2():
    assert parse_map("[x1*x2 : x0*x2 : x0*x1]") == sigma2()


def test_p1xp1_suffix_and_unicode():
    f = parse_map("(x+1, x*y) on P1xP1")
    assert f.ambient is P1xP1
    assert str(f) == "([x0 + x1 : x1], [x0*y0 : x1*y1])"
    assert parse_map("(x+1, x*y) on P¹×P¹") == f


def test_division_and_powers():
    f = parse_map("(1/x, y/x)")
    assert f == monomial_map(((-1, 0), (-1, 1)))
    assert parse_map("(x**2*y, x*y)") == parse_map("(x^2*y, x*y)")


def test_common_factors_are_saturated():
    f = parse_map("[x0*x2^2 : x1*x2^2 : x2^3]")
    assert str(f) == "[x0 : x1 : x2]"


@pytest.mark.parametrize("text, pos", [
    ("(x, 2y)", 5),
    ("(x, y", 5),
    ("(x, y) on P7", None),
    ("(x0, y)", 1),
    ("(x, y/(x-x))", 5),
])
def test_parse_errors_report_positions(text, pos):
    with pytest.raises(ParseError) as err:
        parse_map(text)
    assert err.value.position == pos


def test_mixed_surfaces_rejected():
    with pytest.raises(ParseError):
        parse_map("[x0*y0 : x1 : x2]")


def test_non_birational_rejected():
    with pytest.raises(MathDomainError):
        parse_map("(x, x)")


def test_parse_polynomial():
    p = parse_polynomial("x0^2 - x1*x2/2", ("x0", "x1", "x2"))
    x0, x1, x2 = MultiPoly.gens(("x0", "x1", "x2"))
    assert p == x0**2 - (x1 * x2).scale(Fraction(1, 2))
    with pytest.raises(ParseError):
        parse_polynomial("1/x0", ("x0",))


def test_curves():
    C = parse_curve("{x=0}")
    assert str(C) == "{x0 = 0}"
    assert str(parse_curve("{y = x^2}")) == "{x0^2 - x1*x2 = 0}"
    assert str(parse_curve("{x - 1}", P1xP1)) == "{x0 - x1 = 0}"
    with pytest.raises(ParseError):
        parse_curve("{x*y = 0}")


def test_tokenize_positions():
    toks = tokenize("(x0 ** 2)")
    assert [t[1] for t in toks] == ["(", "x0", "^", "2", ")", ""]
    assert toks[2][2] == 4


def _corpus():
    out = []
    for a, b, c, d in itertools.product(range(-1, 3), repeat=4):
        if a * d - b * c in (1, -1) and len(out) < 30:
            out.append(monomial_map(((a, b), (c, d))))
    for text in ["(x+1, x*y)", "(2*x, (x+1)*y)", "(x, y + x^2)", "(x + y^3, y)", "(-x, x/y)",
                 "(1/x, y)", "(x/(x+1), y)", "(x*y, y)", "(x + 1/2, 3*y)", "(y, x)"]:
        out.append(parse_map(text))
        out.append(parse_map(text + " on P1xP1"))
    return out


def test_round_trip_corpus():
    corpus = _corpus()
    assert len(corpus) >= 50
    for f in corpus:
        g = parse_map(str(f))
        assert g == f and g.ambient is f.ambient
