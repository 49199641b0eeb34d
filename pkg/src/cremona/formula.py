"""Text formulas for polynomials, maps, and curves.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | factor
    factor := atom ('^' uint)?
    atom   := uint | var | '(' expr ')'
    map    := '(' expr ',' expr ')' ['on' ambient]
            | '[' expr ':' expr ':' expr ']'
            | '(' '[' expr ':' expr ']' ',' '[' expr ':' expr ']' ')'
    curve  := '{' expr ['=' expr] '}'

Affine variables ``x, y`` are homogenized (x = x0/x2, y = x1/x2 on P2 and
x = x0/x1, y = y0/y1 on P1xP1).  Implicit multiplication is rejected.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .config import DEFAULT, Config
from .errors import MathDomainError, ParseError
from .exactmath import MultiPoly, gcd
from .geometry import P1xP1, P2, Ambient, CurveOnX, ambient_named

__all__ = ["parse_polynomial", "parse_map", "parse_curve", "tokenize"]

AFFINE = {"x", "y"}
HOMOGENEOUS = {P2: set(P2.variables), P1xP1: set(P1xP1.variables)}

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_¹²]*)|(\*\*|[-+*/^(),:\[\]{}=×]))")


def tokenize(text: str):
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        kind = ("num", "name", "op")[m.lastindex - 1]
        val = m.group(m.lastindex)
        if val == "**":
            val = "^"
        out.append((kind, val, start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, val):
        t = self.next()
        if t[1] != val:
            raise ParseError(f"expected {val!r}, found {t[1] or 'end of input'!r}", t[2])
        return t

    def at(self, val):
        return self.peek()[1] == val and self.peek()[0] in ("op", "name")

    def finish(self):
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected trailing {t[1]!r}", t[2])

    # expressions produce small AST tuples
    def expr(self):
        node = self.term()
        while self.at("+") or self.at("-"):
            op = self.next()[1]
            node = ("add" if op == "+" else "sub", node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.at("*") or self.at("/"):
            _, op, pos = self.next()
            node = ("mul", node, self.unary()) if op == "*" else ("div", node, self.unary(), pos)
        return node

    def unary(self):
        if self.at("-"):
            self.next()
            return ("neg", self.unary())
        if self.at("+"):
            self.next()
            return self.unary()
        return self.factor()

    def factor(self):
        node = self.atom()
        if self.at("^"):
            self.next()
            kind, val, pos = self.next()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer", pos)
            node = ("pow", node, int(val))
        nxt = self.peek()
        if nxt[0] in ("num", "name") and nxt[1] != "on" or nxt[1] == "(":
            raise ParseError("implicit multiplication is not allowed; use '*'", nxt[2])
        return node

    def atom(self):
        kind, val, pos = self.next()
        if kind == "num":
            return ("num", Fraction(int(val)))
        if kind == "name":
            return ("var", val, pos)
        if val == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)


def _variables(node, acc=None):
    acc = set() if acc is None else acc
    if node[0] == "var":
        acc.add((node[1], node[2]))
    elif node[0] != "num":
        for child in node[1:]:
            if isinstance(child, tuple):
                _variables(child, acc)
    return acc


def _env(ambient: Ambient, affine: bool):
    vs = ambient.variables
    gens = dict(zip(vs, MultiPoly.gens(vs)))
    one = MultiPoly.const(vs, 1)
    if not affine:
        return {v: (g, one) for v, g in gens.items()}
    if ambient is P2:
        return {"x": (gens["x0"], gens["x2"]), "y": (gens["x1"], gens["x2"])}
    return {"x": (gens["x0"], gens["x1"]), "y": (gens["y0"], gens["y1"])}


def _eval(node, env, vs):
    """Evaluate to a (numerator, denominator) pair of polynomials."""
    tag = node[0]
    if tag == "num":
        return MultiPoly.const(vs, node[1]), MultiPoly.const(vs, 1)
    if tag == "var":
        if node[1] not in env:
            raise ParseError(f"unknown variable {node[1]!r}", node[2])
        return env[node[1]]
    if tag == "neg":
        n, d = _eval(node[1], env, vs)
        return -n, d
    if tag == "pow":
        n, d = _eval(node[1], env, vs)
        return n ** node[2], d ** node[2]
    a, b = _eval(node[1], env, vs), _eval(node[2], env, vs)
    if tag in ("add", "sub"):
        nb = b[0] if tag == "add" else -b[0]
        if a[1] == b[1]:
            return a[0] + nb, a[1]
        return a[0] * b[1] + nb * a[1], a[1] * b[1]
    if tag == "mul":
        return a[0] * b[0], a[1] * b[1]
    if b[0].is_zero():
        raise ParseError("division by a zero expression", node[3])
    return a[0] * b[1], a[1] * b[0]


def _reduce(n, d):
    if n.is_zero():
        return n, MultiPoly.const(n.variables, 1)
    g = gcd(n, d)
    n, d = n.exquo(g), d.exquo(g)
    c = d.leading_coefficient()
    return n.scale(1 / c), d.scale(1 / c)


def _classify(nodes, forced: Ambient | None):
    """Decide (ambient, affine) from the variables used."""
    used = set()
    for n in nodes:
        used |= _variables(n)
    names = {v for v, _ in used}
    if names & AFFINE and names - AFFINE:
        pos = min(p for v, p in used if v not in AFFINE)
        raise ParseError("affine and homogeneous variables are mixed", pos)
    if names <= AFFINE:
        return forced or P2, True
    for amb in ([forced] if forced else [P2, P1xP1]):
        if names <= HOMOGENEOUS[amb]:
            return amb, False
    bad = sorted(used, key=lambda vp: vp[1])
    for v, p in bad:
        if not any(v in HOMOGENEOUS[a] for a in ([forced] if forced else [P2, P1xP1])):
            raise ParseError(f"unknown variable {v!r}", p)
    raise ParseError("variables from different surfaces are mixed", bad[0][1])


def parse_polynomial(text: str, variables) -> MultiPoly:
    """Parse a polynomial in the given variables (division by constants only)."""
    p = _Parser(text)
    node = p.expr()
    p.finish()
    vs = tuple(variables)
    gens = dict(zip(vs, MultiPoly.gens(vs)))
    one = MultiPoly.const(vs, 1)
    n, d = _reduce(*_eval(node, {v: (g, one) for v, g in gens.items()}, vs))
    if not d.is_constant():
        raise ParseError(f"{text!r} is not a polynomial")
    return n.scale(1 / d.constant_value())


def _parse_ambient(p: _Parser):
    if p.at("on"):
        p.next()
        parts = []
        while p.peek()[0] != "end":
            parts.append(p.next()[1])
        name = "".join(parts)
        try:
            return ambient_named(name)
        except MathDomainError:
            raise ParseError(f"unknown surface {name!r}") from None
    return None


def parse_map(text: str, config: Config = DEFAULT, ambient: Ambient | None = None):
    """Parse a map formula into a saturated `BirMap` (inverse not attached)."""
    from .birmap import saturate

    p = _Parser(text)
    if p.at("["):
        groups = [_bracket(p)]
        forced = _parse_ambient(p) or ambient or P2
        kind = "P2h"
    elif p.at("(") and p.toks[1][1] == "[":
        p.next()
        g1 = _bracket(p)
        p.expect(",")
        g2 = _bracket(p)
        p.expect(")")
        groups = [g1, g2]
        forced = _parse_ambient(p) or ambient or P1xP1
        kind = "P1h"
    else:
        p.expect("(")
        a = p.expr()
        p.expect(",")
        b = p.expr()
        p.expect(")")
        groups = [[a, b]]
        forced = _parse_ambient(p) or ambient
        kind = "affine"
    p.finish()
    nodes = [n for g in groups for n in g]
    amb, affine = _classify(nodes, forced)
    if kind == "affine" and not affine:
        raise ParseError("pair notation '(f, g)' expects affine variables x, y")
    if kind == "P2h" and (amb is not P2 or len(groups[0]) != 3):
        raise ParseError("bracket notation '[a : b : c]' describes a map of P2")
    if kind == "P1h" and (amb is not P1xP1 or [len(g) for g in groups] != [2, 2]):
        raise ParseError("'([a : b], [c : d])' describes a map of P1xP1")
    vs = amb.variables
    env = _env(amb, affine)
    vals = [[_reduce(*_eval(n, env, vs)) for n in g] for g in groups]
    if kind == "affine":
        (n1, d1), (n2, d2) = vals[0]
        raw = [[n1 * d2, n2 * d1, d1 * d2]] if amb is P2 else [[n1, d1], [n2, d2]]
    else:
        raw = [_clear(g) for g in vals]
    for g in raw:
        nz = [c for c in g if not c.is_zero()]
        if not nz:
            raise ParseError("all components of a coordinate group vanish")
        if len({amb.group_degrees(c) for c in nz}) > 1 or not all(amb.is_homogeneous(c) for c in nz):
            raise ParseError("components are not (bi)homogeneous of equal degree")
    return saturate(amb, raw, config)


def _bracket(p: _Parser):
    p.expect("[")
    out = [p.expr()]
    while p.at(":"):
        p.next()
        out.append(p.expr())
    p.expect("]")
    return out


def _clear(pairs):
    L = pairs[0][1]
    for _, d in pairs[1:]:
        L = (L * d).exquo(gcd(L, d))
    return [n * L.exquo(d) for n, d in pairs]


def parse_curve(text: str, ambient: Ambient = P2) -> CurveOnX:
    """Parse ``{lhs = rhs}`` (or ``{expr}``) into an irreducible curve."""
    p = _Parser(text)
    p.expect("{")
    lhs = p.expr()
    rhs = ("num", Fraction(0))
    if p.at("="):
        p.next()
        rhs = p.expr()
    p.expect("}")
    p.finish()
    node = ("sub", lhs, rhs)
    amb, affine = _classify([node], ambient)
    n, _ = _reduce(*_eval(node, _env(amb, affine), amb.variables))
    if n.is_zero() or n.is_constant():
        raise ParseError(f"{text!r} does not define a curve")
    try:
        return CurveOnX.make(amb, n)
    except MathDomainError as e:
        raise ParseError(str(e)) from None
