"""
Exact univariate polynomials over the integers and the factored-polynomial
grammar of the fixture files.

Arithmetic and gcds run on sympy ``Poly`` objects over ZZ/QQ; the wrapper
keeps polynomials as immutable ascending coefficient tuples so they hash,
compare and print predictably.

Grammar (whitespace-insensitive)::

    expr  := term ("*" term)*
    term  := [sign] int ["^" uint] | [sign] "(" poly ")" ["^" uint]
    poly  := [sign] mono (sign mono)*
    mono  := int ["*"] X ["^" uint] | X ["^" uint] | int

``-2^4`` is -(2^4); ``2X^2`` and ``2*X^2`` are the same monomial.
"""

import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union

import pyparsing as pp
from sympy import Poly, QQ, ZZ, Symbol

from .errors import (
    NonIntegerCoefficientError,
    PolynomialSyntaxError,
    ZeroFactorError,
)
from .permcore import CycleType

logger = logging.getLogger(__name__)

X = Symbol("X")


class IntegerPolynomial:
    """Dense polynomial with integer coefficients, ascending degree.

    The zero polynomial has no coefficients and degree -inf.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = [int(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: Tuple[int, ...] = tuple(c)

    @classmethod
    def constant(cls, value: int) -> "IntegerPolynomial":
        return cls((value,))

    @classmethod
    def monomial(cls, coefficient: int, exponent: int) -> "IntegerPolynomial":
        return cls([0] * exponent + [coefficient])

    @classmethod
    def from_poly(cls, p: Poly) -> "IntegerPolynomial":
        if p.is_zero:
            return cls()
        return cls(int(v) for v in reversed(p.all_coeffs()))

    def to_poly(self, domain=ZZ) -> Poly:
        return Poly(list(reversed(self.coeffs)) or [0], X, domain=domain)

    @property
    def degree(self) -> Union[int, float]:
        return len(self.coeffs) - 1 if self.coeffs else -math.inf

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __add__(self, other: "IntegerPolynomial") -> "IntegerPolynomial":
        return add(self, other)

    def __sub__(self, other: "IntegerPolynomial") -> "IntegerPolynomial":
        return subtract(self, other)

    def __mul__(self, other: "IntegerPolynomial") -> "IntegerPolynomial":
        return multiply(self, other)

    def __neg__(self) -> "IntegerPolynomial":
        return IntegerPolynomial(-v for v in self.coeffs)

    def __pow__(self, k: int) -> "IntegerPolynomial":
        return IntegerPolynomial.from_poly(self.to_poly() ** k)

    def scale(self, k: int) -> "IntegerPolynomial":
        return IntegerPolynomial(k * v for v in self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntegerPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"IntegerPolynomial({format_polynomial(self)!r})"


# ============================================================
# ARITHMETIC
# ============================================================


def add(a: IntegerPolynomial, b: IntegerPolynomial) -> IntegerPolynomial:
    n = max(len(a.coeffs), len(b.coeffs))
    ca = a.coeffs + (0,) * (n - len(a.coeffs))
    cb = b.coeffs + (0,) * (n - len(b.coeffs))
    return IntegerPolynomial(u + v for u, v in zip(ca, cb))


def subtract(a: IntegerPolynomial, b: IntegerPolynomial) -> IntegerPolynomial:
    return add(a, -b)


def multiply(a: IntegerPolynomial, b: IntegerPolynomial) -> IntegerPolynomial:
    if a.is_zero() or b.is_zero():
        return IntegerPolynomial()
    return IntegerPolynomial.from_poly(a.to_poly() * b.to_poly())


def derivative(a: IntegerPolynomial) -> IntegerPolynomial:
    return IntegerPolynomial(i * v for i, v in enumerate(a.coeffs) if i)


def evaluate_at_rational(a: IntegerPolynomial, point: Union[int, Fraction]) -> Fraction:
    r = Fraction(point)
    acc = Fraction(0)
    for v in reversed(a.coeffs):
        acc = acc * r + v
    return acc


def content(a: IntegerPolynomial) -> int:
    """gcd of the coefficients, signed like the leading coefficient."""
    if a.is_zero():
        return 0
    c = math.gcd(*a.coeffs)
    return c if a.leading > 0 else -c


def primitive_part(a: IntegerPolynomial) -> IntegerPolynomial:
    """a / content(a): coprime coefficients, positive leading coefficient."""
    if a.is_zero():
        return a
    c = content(a)
    return IntegerPolynomial(v // c for v in a.coeffs)


def _rational_coeffs(p: Poly) -> List[Fraction]:
    """Ascending coefficients of a QQ polynomial as Fractions."""
    return [Fraction(int(v.p), int(v.q)) for v in reversed(p.all_coeffs())]


def exact_quotient(a: IntegerPolynomial, b: IntegerPolynomial) -> IntegerPolynomial:
    """a / b over ZZ; raises ValueError when b does not divide a."""
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    q, r = a.to_poly(QQ).div(b.to_poly(QQ))
    if not r.is_zero:
        raise ValueError("polynomial division is not exact")
    coeffs = _rational_coeffs(q)
    if any(v.denominator != 1 for v in coeffs):
        raise ValueError("quotient has non-integer coefficients")
    return IntegerPolynomial(int(v) for v in coeffs)


def poly_gcd(a: IntegerPolynomial, b: IntegerPolynomial) -> IntegerPolynomial:
    """Primitive gcd with positive leading coefficient."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    if b.is_zero():
        return primitive_part(a)
    if a.is_zero():
        return primitive_part(b)
    return primitive_part(IntegerPolynomial.from_poly(a.to_poly().gcd(b.to_poly())))


def _from_rational_poly(p: Poly) -> IntegerPolynomial:
    """Primitive integer polynomial proportional to a nonzero QQ polynomial."""
    coeffs = _rational_coeffs(p)
    denom = math.lcm(*(c.denominator for c in coeffs))
    return primitive_part(IntegerPolynomial(int(c * denom) for c in coeffs))


def squarefree_decomposition(a: IntegerPolynomial) -> List[Tuple[IntegerPolynomial, int]]:
    """Yun's algorithm: a = c * prod(a_i^i), a_i squarefree and pairwise coprime.

    Only nonconstant a_i are returned, each primitive with positive leading
    coefficient, ordered by multiplicity. The constant is
    ``squarefree_constant(a, parts)``.
    """
    if a.is_zero():
        raise ValueError("square-free decomposition of the zero polynomial")
    if a.is_constant():
        return []
    f = a.to_poly(QQ)
    df = f.diff(X)
    g = f.gcd(df)
    b = f.exquo(g)
    c = df.exquo(g)
    d = c - b.diff(X)
    parts = []
    i = 1
    while b.degree() > 0:
        h = b.gcd(d)
        b = b.exquo(h)
        c = d.exquo(h)
        d = c - b.diff(X)
        if h.degree() > 0:
            parts.append((_from_rational_poly(h), i))
        i += 1
    logger.debug("yun: degree %s -> %s", a.degree, [(p.degree, m) for p, m in parts])
    return parts


def squarefree_constant(a: IntegerPolynomial, parts: Sequence[Tuple[IntegerPolynomial, int]]) -> Fraction:
    denom = 1
    for p, m in parts:
        denom *= p.leading ** m
    return Fraction(a.leading, denom)


@dataclass(frozen=True)
class MultiplicityMultiset:
    """Root multiplicities of a polynomial, one part per distinct root."""

    parts: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(sorted(self.parts, reverse=True)))

    @property
    def total(self) -> int:
        return sum(self.parts)

    def with_part(self, multiplicity: int) -> "MultiplicityMultiset":
        return MultiplicityMultiset(self.parts + (multiplicity,))

    def as_cycle_type(self) -> CycleType:
        return CycleType(self.parts)

    def __str__(self) -> str:
        return str(CycleType(self.parts)) if self.parts else "(empty)"


def multiplicity_multiset(a: IntegerPolynomial) -> MultiplicityMultiset:
    parts: List[int] = []
    for p, m in squarefree_decomposition(a):
        parts.extend([m] * int(p.degree))
    return MultiplicityMultiset(tuple(parts))


def format_polynomial(a: IntegerPolynomial) -> str:
    if a.is_zero():
        return "0"
    out = []
    for k in range(len(a.coeffs) - 1, -1, -1):
        v = a.coeffs[k]
        if v == 0:
            continue
        sign = "-" if v < 0 else "+"
        mag = abs(v)
        if k == 0:
            body = str(mag)
        else:
            xpart = "X" if k == 1 else f"X^{k}"
            body = xpart if mag == 1 else f"{mag}*{xpart}"
        if not out:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f"{sign} {body}")
    return " ".join(out)


# ============================================================
# FACTORED FORM
# ============================================================


@dataclass(frozen=True)
class FactoredPolynomial:
    constant: Fraction
    factors: Tuple[Tuple[IntegerPolynomial, int], ...] = ()

    @property
    def degree(self) -> int:
        return sum(int(p.degree) * e for p, e in self.factors)

    @property
    def denominator(self) -> int:
        return self.constant.denominator

    def __str__(self) -> str:
        terms = [] if self.constant == 1 and self.factors else [str(self.constant)]
        for p, e in self.factors:
            terms.append(f"({format_polynomial(p)})" + (f"^{e}" if e != 1 else ""))
        return " * ".join(terms)


def expand(f: FactoredPolynomial) -> IntegerPolynomial:
    """numerator(constant) * prod(factor^exponent); f.denominator is left out."""
    result = IntegerPolynomial.constant(f.constant.numerator)
    for p, e in f.factors:
        result = result * (p ** e)
    return result


@dataclass
class _Term:
    constant: int
    poly: IntegerPolynomial
    exponent: int
    loc: int


def _fold_poly(tokens) -> IntegerPolynomial:
    acc = IntegerPolynomial()
    items = list(tokens)
    for sign, mono in zip(items[0::2], items[1::2]):
        acc = acc + (mono if sign == "+" else -mono)
    return acc


def _build_grammar():
    integer = pp.Word(pp.nums).set_parse_action(lambda t: int(t[0]))
    caret = pp.Suppress("^")
    star = pp.Suppress("*")
    sign = pp.one_of("+ -")
    exponent = pp.Opt(caret + integer, default=1)

    x_power = (pp.Suppress(pp.one_of("X x")) + exponent).set_parse_action(
        lambda t: IntegerPolynomial.monomial(1, t[0]))
    scaled = (integer + pp.Opt(star) + x_power).set_parse_action(lambda t: t[1].scale(t[0]))
    bare = integer.copy().add_parse_action(lambda t: IntegerPolynomial.constant(t[0]))
    mono = scaled | x_power | bare
    poly = (pp.Opt(sign, default="+") + mono + pp.ZeroOrMore(sign + mono)).set_parse_action(_fold_poly)

    def int_term(s, loc, t):
        value = t[1] ** t[2]
        return _Term(-value if t[0] == "-" else value, IntegerPolynomial.constant(1), 1, loc)

    def paren_term(s, loc, t):
        return _Term(-1 if t[0] == "-" else 1, t[1], t[2], loc)

    int_t = (pp.Opt(sign, default="+") + integer + exponent).set_parse_action(int_term)
    paren_t = (pp.Opt(sign, default="+") + pp.Suppress("(") + poly + pp.Suppress(")")
               + exponent).set_parse_action(paren_term)
    term = paren_t | int_t
    return term + pp.ZeroOrMore(star + term) + pp.StringEnd()


_GRAMMAR = _build_grammar()
_NON_INTEGER_RE = re.compile(r"\d*\.\d+|\d+\.\d*|/")


def _check_integers(text: str) -> None:
    m = _NON_INTEGER_RE.search(text)
    if m:
        raise NonIntegerCoefficientError(f"non-integer coefficient {m.group(0)!r}", m.start())


def parse_factored(text: str) -> FactoredPolynomial:
    """Parse a printed factored polynomial such as ``3^3 * (X + 1)^8``.

    Raises:
        PolynomialSyntaxError: the text does not match the grammar.
        NonIntegerCoefficientError: a decimal or fractional coefficient.
        ZeroFactorError: a factor that is identically zero.
    """
    _check_integers(text)
    try:
        terms = _GRAMMAR.parse_string(text, parse_all=True)
    except pp.ParseException as e:
        raise PolynomialSyntaxError(f"cannot parse polynomial: {e.msg}", e.loc) from None
    constant = 1
    factors: List[Tuple[IntegerPolynomial, int]] = []
    for t in terms:
        if t.constant == 0 or t.poly.is_zero():
            raise ZeroFactorError("factor is zero", t.loc)
        constant *= t.constant
        if t.exponent == 0 or t.poly.is_constant():
            constant *= t.poly.leading ** t.exponent
            continue
        c = content(t.poly)
        constant *= c ** t.exponent
        factors.append((primitive_part(t.poly), t.exponent))
    return FactoredPolynomial(Fraction(constant), tuple(factors))


def parse_polynomial(text: str) -> IntegerPolynomial:
    """Parse a single expanded polynomial (the output of format_polynomial)."""
    return expand(parse_factored(f"({text})"))
