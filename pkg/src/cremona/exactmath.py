"""Exact rational arithmetic and multivariate polynomials over Q.

`MultiPoly` is an immutable polynomial over a fixed, ordered tuple of
variable names.  Arithmetic is carried by sympy's sparse polynomial rings
(gmpy2-backed rationals when available); the public surface speaks
`fractions.Fraction` and plain tuples of exponents.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd as _igcd, lcm as _ilcm
from numbers import Rational as _RationalABC

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyRing

from .errors import MathDomainError, VariableMismatch

__all__ = [
    "Rational",
    "MultiPoly",
    "AlgebraicField",
    "gcd",
    "factor",
    "squarefree",
    "resultant",
    "rational_nullspace",
    "as_fraction",
]

Rational = Fraction


def as_fraction(c) -> Fraction:
    """Convert an int / Fraction / gmpy2 / sympy rational to a Fraction."""
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, _RationalABC) or hasattr(c, "numerator"):
        return Fraction(int(c.numerator), int(c.denominator))
    raise TypeError(f"not an exact rational: {c!r}")


def _qq(c):
    c = as_fraction(c)
    return QQ(c.numerator, c.denominator)


@lru_cache(maxsize=None)
def _ring(variables: tuple[str, ...]) -> PolyRing:
    return PolyRing(variables, QQ, lex)


class MultiPoly:
    """Polynomial with rational coefficients in an ordered list of variables.

    >>> x0, x1 = MultiPoly.gens(("x0", "x1"))
    >>> str((x0 + x1) * (x0 - x1))
    'x0^2 - x1^2'
    """

    __slots__ = ("variables", "_p", "_hash")

    def __init__(self, variables, terms=None):
        variables = tuple(variables)
        R = _ring(variables)
        p = R.zero
        if terms:
            p = R({tuple(e): _qq(c) for e, c in terms.items() if c != 0})
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "_p", p)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    # -- construction -------------------------------------------------
    @classmethod
    def _wrap(cls, variables, p) -> "MultiPoly":
        obj = cls.__new__(cls)
        object.__setattr__(obj, "variables", tuple(variables))
        object.__setattr__(obj, "_p", p)
        object.__setattr__(obj, "_hash", None)
        return obj

    @classmethod
    def const(cls, variables, c) -> "MultiPoly":
        variables = tuple(variables)
        return cls._wrap(variables, _ring(variables)(_qq(c)))

    @classmethod
    def var(cls, variables, name) -> "MultiPoly":
        variables = tuple(variables)
        if name not in variables:
            raise VariableMismatch(f"{name!r} not among {variables}")
        R = _ring(variables)
        return cls._wrap(variables, R.gens[variables.index(name)])

    @classmethod
    def gens(cls, variables) -> tuple["MultiPoly", ...]:
        variables = tuple(variables)
        return tuple(cls._wrap(variables, g) for g in _ring(variables).gens)

    @classmethod
    def monomial(cls, variables, exps, c=1) -> "MultiPoly":
        return cls(variables, {tuple(exps): c})

    # -- inspection ---------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.variables)

    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return {e: as_fraction(c) for e, c in self._p.items()}

    def coefficient(self, exps) -> Fraction:
        return as_fraction(self._p.get(tuple(exps), QQ.zero))

    def __len__(self):
        return len(self._p)

    def is_zero(self) -> bool:
        return not self._p

    def __bool__(self):
        return bool(self._p)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._p)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise MathDomainError(f"{self} is not constant")
        return self.coefficient((0,) * self.nvars)

    @property
    def total_degree(self) -> int:
        """Maximal total degree; -1 for the zero polynomial."""
        if not self._p:
            return -1
        return max(sum(e) for e in self._p)

    def degree(self, var) -> int:
        i = self._index(var)
        if not self._p:
            return -1
        return max(e[i] for e in self._p)

    def group_degree(self, group) -> int:
        idx = [self._index(v) for v in group]
        if not self._p:
            return -1
        return max(sum(e[i] for i in idx) for e in self._p)

    def is_homogeneous(self, groups=None) -> bool:
        """Homogeneity in each group of variables (all variables by default)."""
        if not self._p:
            return True
        groups = groups or (self.variables,)
        for group in groups:
            idx = [self._index(v) for v in group]
            if len({sum(e[i] for i in idx) for e in self._p}) > 1:
                return False
        return True

    def involves(self, var) -> bool:
        return self.degree(var) > 0

    def leading_coefficient(self) -> Fraction:
        """Coefficient of the lexicographically largest exponent vector."""
        if not self._p:
            return Fraction(0)
        return as_fraction(self._p[max(self._p)])

    def _index(self, var) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise VariableMismatch(f"{var!r} not among {self.variables}") from None

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise VariableMismatch(
                    f"variable lists differ: {self.variables} vs {other.variables}"
                )
            return other._p
        if isinstance(other, (int, Fraction)) or hasattr(other, "denominator"):
            return _ring(self.variables)(_qq(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return MultiPoly._wrap(self.variables, self._p + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return MultiPoly._wrap(self.variables, self._p - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return MultiPoly._wrap(self.variables, o - self._p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return MultiPoly._wrap(self.variables, self._p * o)

    __rmul__ = __mul__

    def __neg__(self):
        return MultiPoly._wrap(self.variables, -self._p)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        return MultiPoly._wrap(self.variables, self._p**n)

    def scale(self, c) -> "MultiPoly":
        return MultiPoly._wrap(self.variables, self._p * _qq(c))

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self._p == other._p
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.coefficient((0,) * self.nvars) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            h = hash((self.variables, frozenset(self._p.items())))
            object.__setattr__(self, "_hash", h)
        return self._hash

    def diff(self, var) -> "MultiPoly":
        i = self._index(var)
        return MultiPoly._wrap(self.variables, self._p.diff(self._p.ring.gens[i]))

    def exquo(self, other: "MultiPoly") -> "MultiPoly":
        """Exact quotient; raises if `other` does not divide `self`."""
        o = self._coerce(other)
        q, r = self._p.div(o)
        if r:
            raise MathDomainError(f"{other} does not divide {self}")
        return MultiPoly._wrap(self.variables, q)

    def divides(self, other: "MultiPoly") -> bool:
        """True iff self divides other."""
        if not self._p:
            return not other._p
        return not other._p.rem(self._coerce(self))

    def rem(self, g: "MultiPoly") -> "MultiPoly":
        """Normal form modulo the principal ideal (g); linear in self."""
        return MultiPoly._wrap(self.variables, self._p.rem(self._coerce(g)))

    def multiplicity(self, g: "MultiPoly") -> int:
        """Largest k with g^k | self (self nonzero, g non-constant)."""
        if not self._p:
            raise MathDomainError("multiplicity in the zero polynomial")
        k, p, gp = 0, self._p, self._coerce(g)
        while True:
            q, r = p.div(gp)
            if r:
                return k
            k, p = k + 1, q

    def strip(self, g: "MultiPoly") -> tuple["MultiPoly", int]:
        """Remove every factor g; return (cofactor, multiplicity)."""
        k, p, gp = 0, self._p, self._coerce(g)
        while p:
            q, r = p.div(gp)
            if r:
                break
            k, p = k + 1, q
        return MultiPoly._wrap(self.variables, p), k

    # -- substitution / evaluation -------------------------------------
    def subs(self, mapping) -> "MultiPoly":
        """Simultaneous substitution.

        `mapping` sends variable names to MultiPoly (all over one common
        target variable list) or to rationals.  Variables not mentioned are
        kept, which requires them to exist in the target list.
        """
        targets = {v.variables for v in mapping.values() if isinstance(v, MultiPoly)}
        if len(targets) > 1:
            raise VariableMismatch("substituted values use different variable lists")
        tvars = targets.pop() if targets else self.variables
        R = _ring(tvars)
        images = []
        for v in self.variables:
            if v in mapping:
                val = mapping[v]
                images.append(val._p if isinstance(val, MultiPoly) else R(_qq(val)))
            else:
                if v not in tvars:
                    raise VariableMismatch(f"{v!r} has no image in {tvars}")
                images.append(R.gens[tvars.index(v)])
        return MultiPoly._wrap(tvars, _evaluate_terms(self._p, images, R))

    def evaluate(self, point) -> Fraction:
        """Value at a point given as a dict var -> rational or a sequence."""
        if not isinstance(point, dict):
            point = dict(zip(self.variables, point))
        vals = [as_fraction(point[v]) for v in self.variables]
        total = Fraction(0)
        for e, c in self._p.items():
            term = as_fraction(c)
            for x, k in zip(vals, e):
                if k:
                    term *= x**k
            total += term
        return total

    def in_variables(self, variables) -> "MultiPoly":
        """Re-express over another variable list containing every used variable."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        pos = []
        for i, v in enumerate(self.variables):
            if v in variables:
                pos.append(variables.index(v))
            else:
                if any(e[i] for e in self._p):
                    raise VariableMismatch(f"{v!r} is used but absent from {variables}")
                pos.append(None)
        out = {}
        for e, c in self._p.items():
            ne = [0] * len(variables)
            for i, k in enumerate(e):
                if pos[i] is not None:
                    ne[pos[i]] = k
            out[tuple(ne)] = c
        return MultiPoly._wrap(variables, _ring(variables)(out))

    # -- normal forms ---------------------------------------------------
    def content(self) -> Fraction:
        if not self._p:
            return Fraction(0)
        cs = [as_fraction(c) for c in self._p.values()]
        den = 1
        for c in cs:
            den = _ilcm(den, c.denominator)
        num = 0
        for c in cs:
            num = _igcd(num, c.numerator * (den // c.denominator))
        return Fraction(num, den)

    def normalized(self) -> "MultiPoly":
        """Primitive integer coefficients, lex-leading coefficient positive."""
        if not self._p:
            return self
        c = self.content()
        if self.leading_coefficient() < 0:
            c = -c
        return self.scale(1 / c)

    def monic(self) -> "MultiPoly":
        return self.scale(1 / self.leading_coefficient())

    def sort_key(self):
        return (self.total_degree, sorted(((e, self.coefficient(e)) for e in self._p), reverse=True))

    # -- rendering ------------------------------------------------------
    def __str__(self):
        if not self._p:
            return "0"
        parts = []
        for e in sorted(self._p, reverse=True):
            c = as_fraction(self._p[e])
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            parts.append((c < 0, body))
        out = ("-" if parts[0][0] else "") + parts[0][1]
        for neg, body in parts[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def __repr__(self):
        return f"MultiPoly({self.variables!r}, {str(self)!r})"


def _evaluate_terms(p, images, R):
    """sum c * prod images[i]^e_i with cached powers, in ring R."""
    cache: dict[tuple[int, int], object] = {}

    def power(i, k):
        key = (i, k)
        if key not in cache:
            cache[key] = images[i] if k == 1 else power(i, k - 1) * images[i]
        return cache[key]

    total = R.zero
    for e, c in p.items():
        term = R(c)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        total += term
    return total


def _check_same(a: MultiPoly, b: MultiPoly):
    if a.variables != b.variables:
        raise VariableMismatch(f"variable lists differ: {a.variables} vs {b.variables}")


def gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Greatest common divisor, normalized."""
    _check_same(a, b)
    if a.is_zero() and b.is_zero():
        raise MathDomainError("gcd of two zero polynomials")
    return MultiPoly._wrap(a.variables, a._p.gcd(b._p)).normalized()


def factor(p: MultiPoly) -> list[tuple[MultiPoly, int]]:
    """Irreducible factorization over Q.

    Returns normalized irreducible factors with multiplicities, sorted
    canonically; the product reproduces `p` up to a rational scalar.
    """
    if p.is_zero():
        raise MathDomainError("cannot factor the zero polynomial")
    if p.is_constant():
        return []
    _, fl = p._p.factor_list()
    out = [(MultiPoly._wrap(p.variables, f).normalized(), k) for f, k in fl]
    out.sort(key=lambda fk: fk[0].sort_key())
    return out


def squarefree(p: MultiPoly) -> list[tuple[MultiPoly, int]]:
    """Square-free decomposition (pairwise coprime parts with multiplicity)."""
    if p.is_zero():
        raise MathDomainError("square-free decomposition of zero")
    _, fl = p._p.sqf_list()
    return [(MultiPoly._wrap(p.variables, f).normalized(), k) for f, k in fl]


def resultant(a: MultiPoly, b: MultiPoly, var: str) -> MultiPoly:
    """Sylvester resultant eliminating `var`, expressed over the same variables."""
    _check_same(a, b)
    vs = a.variables
    if var not in vs:
        raise VariableMismatch(f"{var!r} not among {vs}")
    order = (var,) + tuple(v for v in vs if v != var)
    r = a.in_variables(order)._p.resultant(b.in_variables(order)._p)
    rest = order[1:]
    if not rest:
        return MultiPoly.const(vs, as_fraction(r))
    # sympy drops the eliminated generator from the ring of the result
    r = _ring(rest)(dict(r.items())) if hasattr(r, "items") else _ring(rest)(r)
    return MultiPoly._wrap(rest, r).in_variables(vs)


def rational_nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the right nullspace of a rational matrix."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    M = DomainMatrix([[_qq(c) for c in r] for r in rows], (len(rows), ncols), QQ)
    ns = M.nullspace()
    return [[as_fraction(c) for c in row] for row in ns.to_Matrix().tolist()] if ns.shape[0] else []


class AlgebraicField:
    """The number field Q[t]/(m) for an irreducible univariate m.

    Elements are `MultiPoly` objects over ``(var,)`` reduced modulo m.
    """

    def __init__(self, modulus: MultiPoly):
        if modulus.nvars != 1 or modulus.total_degree < 1:
            raise MathDomainError("modulus must be a non-constant univariate polynomial")
        self.modulus = modulus.monic()
        self.var = modulus.variables[0]

    @property
    def degree(self) -> int:
        return self.modulus.total_degree

    def __eq__(self, other):
        return isinstance(other, AlgebraicField) and self.modulus == other.modulus

    def __hash__(self):
        return hash(self.modulus)

    def __repr__(self):
        return f"AlgebraicField({self.modulus})"

    def gen(self) -> MultiPoly:
        return self.reduce(MultiPoly.var((self.var,), self.var))

    def element(self, c) -> MultiPoly:
        return MultiPoly.const((self.var,), c)

    def reduce(self, e: MultiPoly) -> MultiPoly:
        return e.rem(self.modulus)

    def mul(self, a, b):
        return self.reduce(a * b)

    def inv(self, a: MultiPoly) -> MultiPoly:
        a = self.reduce(a)
        if a.is_zero():
            raise ZeroDivisionError("inverse of zero in a number field")
        s, _, h = a._p.gcdex(self.modulus._p)
        return self.reduce(MultiPoly._wrap((self.var,), s).scale(1 / as_fraction(h.LC)))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power_basis_coords(self, e: MultiPoly) -> list[Fraction]:
        e = self.reduce(e)
        return [e.coefficient((i,)) for i in range(self.degree)]

    def minimal_polynomial(self, e: MultiPoly, var: str = "t") -> MultiPoly:
        """Monic minimal polynomial of e over Q, in variable `var`."""
        e = self.reduce(e)
        powers = [self.element(1)]
        for k in range(1, self.degree + 1):
            powers.append(self.mul(powers[-1], e))
            cols = [self.power_basis_coords(p) for p in powers]
            rows = [[cols[j][i] for j in range(len(cols))] for i in range(self.degree)]
            ns = rational_nullspace(rows, len(cols))
            if ns:
                vec = ns[0]
                lead = vec[-1]
                return MultiPoly((var,), {(j,): c / lead for j, c in enumerate(vec) if c})
        raise MathDomainError("minimal polynomial search failed")  # pragma: no cover

    def generates(self, e: MultiPoly) -> bool:
        return self.minimal_polynomial(e).total_degree == self.degree

    def reparametrize(self, e: MultiPoly):
        """Use e as the new generator.

        Returns ``(new_field, old_gen_image)`` where ``old_gen_image`` is the
        old generator written in the new field, so that any old element q(t)
        maps to ``new_field.reduce(q.subs({t: old_gen_image}))``.
        """
        if not self.generates(e):
            raise MathDomainError(f"{e} does not generate {self}")
        new = AlgebraicField(self.minimal_polynomial(e, self.var))
        n = self.degree
        powers = [self.element(1)]
        for _ in range(1, n):
            powers.append(self.mul(powers[-1], e))
        # Solve sum_j c_j e^j = t in the old power basis.
        cols = [self.power_basis_coords(p) for p in powers]
        target = self.power_basis_coords(self.gen())
        rows = [[cols[j][i] for j in range(n)] + [-target[i]] for i in range(n)]
        ns = rational_nullspace(rows, n + 1)
        vec = next(v for v in ns if v[-1] != 0)
        cs = [c / vec[-1] for c in vec[:-1]]
        image = MultiPoly((self.var,), {(j,): c for j, c in enumerate(cs) if c})
        return new, new.reduce(image)
