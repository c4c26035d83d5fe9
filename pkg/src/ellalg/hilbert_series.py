"""Exact Hilbert series of the form q(s) / (1-s)^k.

``q`` is a Laurent polynomial with integer coefficients, so negative
exponents are allowed.  Every Hilbert series met by the engine has a
denominator that is a power of ``(1-s)``; other denominators are rejected.

Values are immutable and kept in canonical form: the numerator is never
divisible by ``(1-s)`` while the pole order is positive.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import ceil, comb
from typing import Iterable, Mapping, Union

__all__ = [
    "LaurentPoly",
    "HilbertSeries",
    "UNDEFINED",
    "Undefined",
    "add",
    "sub",
    "mul",
    "shift",
    "coeff",
    "leq",
    "rank_at_one",
    "parse_series",
    "DEFAULT_HORIZON",
]

DEFAULT_HORIZON = 64


class Undefined:
    """Marker for a quantity that is not defined (e.g. grk of a pole of order 2)."""

    _instance: "Undefined | None" = None

    def __new__(cls) -> "Undefined":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "undefined"

    def __bool__(self) -> bool:
        return False


UNDEFINED = Undefined()


class LaurentPoly:
    """Sparse Laurent polynomial in ``s`` with integer coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, int] = {}
        for e, c in items:
            if not isinstance(e, int) or not isinstance(c, int):
                raise TypeError("exponents and coefficients must be integers")
            acc[e] = acc.get(e, 0) + c
        self._terms = tuple(sorted((e, c) for e, c in acc.items() if c != 0))
        self._hash = hash(self._terms)

    @classmethod
    def monomial(cls, exponent: int, c: int = 1) -> "LaurentPoly":
        return cls({exponent: c})

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int], start: int = 0) -> "LaurentPoly":
        return cls((start + i, c) for i, c in enumerate(coeffs))

    @property
    def terms(self) -> tuple[tuple[int, int], ...]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def min_exp(self) -> int:
        return self._terms[0][0] if self._terms else 0

    def max_exp(self) -> int:
        return self._terms[-1][0] if self._terms else 0

    def __getitem__(self, e: int) -> int:
        for exp, c in self._terms:
            if exp == e:
                return c
        return 0

    def at_one(self) -> int:
        return sum(c for _, c in self._terms)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        return LaurentPoly(self._terms + other._terms)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly((e, -c) for e, c in self._terms)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly((e, c * other) for e, c in self._terms)
        return LaurentPoly(
            (e1 + e2, c1 * c2) for e1, c1 in self._terms for e2, c2 in other._terms
        )

    __rmul__ = __mul__

    def shift(self, n: int) -> "LaurentPoly":
        return LaurentPoly((e + n, c) for e, c in self._terms)

    def times_one_minus_s(self, power: int = 1) -> "LaurentPoly":
        out = self
        for _ in range(power):
            out = out - out.shift(1)
        return out

    def div_one_minus_s(self) -> "LaurentPoly":
        """Exact division by (1-s); raises if q(1) != 0."""
        if self.at_one() != 0:
            raise ArithmeticError("numerator not divisible by (1-s)")
        if self.is_zero():
            return self
        # q = (1-s) r  =>  r_e = sum_{i <= e} q_i  (partial sums)
        out: dict[int, int] = {}
        running = 0
        lo, hi = self.min_exp(), self.max_exp()
        for e in range(lo, hi):
            running += self[e]
            if running:
                out[e] = running
        return LaurentPoly(out)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        if isinstance(other, int):
            return self._terms == LaurentPoly({0: other})._terms
        return NotImplemented

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"LaurentPoly({render_poly(self)!r})"

    def __str__(self) -> str:
        return render_poly(self)


def render_poly(q: LaurentPoly) -> str:
    if q.is_zero():
        return "0"
    parts: list[str] = []
    for e, c in q.terms:
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if e == 0:
            body = str(a)
        else:
            mono = "s" if e == 1 else f"s^{e}"
            body = mono if a == 1 else f"{a}*{mono}"
        parts.append(f"{sign} {body}")
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


class HilbertSeries:
    """The rational function ``numerator / (1-s)^pole_order``, canonicalised."""

    __slots__ = ("_num", "_pole")

    def __init__(self, numerator: LaurentPoly | int | Mapping[int, int], pole_order: int = 0):
        if pole_order < 0:
            raise ValueError("pole order must be non-negative")
        if isinstance(numerator, int):
            numerator = LaurentPoly({0: numerator})
        elif not isinstance(numerator, LaurentPoly):
            numerator = LaurentPoly(numerator)
        while pole_order > 0 and numerator.at_one() == 0:
            numerator = numerator.div_one_minus_s()
            pole_order -= 1
        self._num = numerator
        self._pole = pole_order

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls) -> "HilbertSeries":
        return cls(LaurentPoly(), 0)

    @classmethod
    def one(cls) -> "HilbertSeries":
        return cls(1, 0)

    @classmethod
    def monomial(cls, exponent: int, c: int = 1, pole_order: int = 0) -> "HilbertSeries":
        return cls(LaurentPoly.monomial(exponent, c), pole_order)

    @classmethod
    def geometric(cls, k: int = 1) -> "HilbertSeries":
        """1/(1-s)^k."""
        return cls(1, k)

    @classmethod
    def polynomial(cls, coeffs: Mapping[int, int]) -> "HilbertSeries":
        return cls(LaurentPoly(coeffs), 0)

    @classmethod
    def linear_tail(cls, start: int, slope: int, intercept: int) -> "HilbertSeries":
        """sum_{n >= start} (slope*n + intercept) s^n in closed form."""
        # s^N [ (slope*N + intercept)/(1-s) + slope*s/(1-s)^2 ]
        first = cls.monomial(start, slope * start + intercept, 1)
        rest = cls.monomial(start + 1, slope, 2)
        return first + rest

    # accessors ------------------------------------------------------------
    @property
    def numerator(self) -> LaurentPoly:
        return self._num

    @property
    def pole_order(self) -> int:
        return self._pole

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def is_polynomial(self) -> bool:
        return self._pole == 0

    def _lift(self, k: int) -> LaurentPoly:
        return self._num.times_one_minus_s(k - self._pole)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other: "HilbertSeries | int") -> "HilbertSeries":
        other = _coerce(other)
        k = max(self._pole, other._pole)
        return HilbertSeries(self._lift(k) + other._lift(k), k)

    __radd__ = __add__

    def __neg__(self) -> "HilbertSeries":
        return HilbertSeries(-self._num, self._pole)

    def __sub__(self, other: "HilbertSeries | int") -> "HilbertSeries":
        return self + (-_coerce(other))

    def __rsub__(self, other: "HilbertSeries | int") -> "HilbertSeries":
        return _coerce(other) - self

    def __mul__(self, other: "HilbertSeries | int") -> "HilbertSeries":
        other = _coerce(other)
        return HilbertSeries(self._num * other._num, self._pole + other._pole)

    __rmul__ = __mul__

    def shift(self, n: int) -> "HilbertSeries":
        """Multiply by s^n, i.e. the series of M[-n]."""
        return HilbertSeries(self._num.shift(n), self._pole)

    def divide_by_one_minus_s(self, k: int = 1) -> "HilbertSeries":
        return HilbertSeries(self._num, self._pole + k)

    def times_one_minus_s(self, k: int = 1) -> "HilbertSeries":
        if k <= self._pole:
            return HilbertSeries(self._num, self._pole - k)
        return HilbertSeries(self._num.times_one_minus_s(k - self._pole), 0)

    # coefficients -----------------------------------------------------------
    def coeff(self, n: int) -> int:
        k = self._pole
        if k == 0:
            return self._num[n]
        return sum(c * comb(n - e + k - 1, k - 1) for e, c in self._num.terms if n >= e)

    def coefficients(self, lo: int, hi: int) -> list[int]:
        """Coefficients for degrees lo..hi inclusive."""
        return [self.coeff(n) for n in range(lo, hi + 1)]

    def order(self) -> int | None:
        """Lowest degree with a nonzero coefficient; None for the zero series."""
        if self.is_zero():
            return None
        # the canonical numerator's lowest term is the lowest coefficient
        return self._num.min_exp()

    def at_one(self) -> int:
        return self._num.at_one()

    # comparison -------------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = HilbertSeries(other)
        if not isinstance(other, HilbertSeries):
            return NotImplemented
        return self._pole == other._pole and self._num == other._num

    def __hash__(self) -> int:
        return hash((self._num, self._pole))

    def __le__(self, other: "HilbertSeries") -> bool:
        return leq(self, _coerce(other))

    def __ge__(self, other: "HilbertSeries") -> bool:
        return leq(_coerce(other), self)

    def __repr__(self) -> str:
        return f"HilbertSeries({self.render()!r})"

    def __str__(self) -> str:
        return self.render()

    def render(self) -> str:
        num = render_poly(self._num)
        if self._pole == 0:
            return num
        if len(self._num.terms) > 1:
            num = f"({num})"
        den = "(1-s)" if self._pole == 1 else f"(1-s)^{self._pole}"
        return f"{num} / {den}"


def _coerce(x: "HilbertSeries | int") -> HilbertSeries:
    if isinstance(x, HilbertSeries):
        return x
    if isinstance(x, int):
        return HilbertSeries(x)
    raise TypeError(f"cannot use {type(x).__name__} as a Hilbert series")


def add(a: HilbertSeries, b: HilbertSeries) -> HilbertSeries:
    return a + b


def sub(a: HilbertSeries, b: HilbertSeries) -> HilbertSeries:
    return a - b


def mul(a: HilbertSeries, b: HilbertSeries) -> HilbertSeries:
    return a * b


def shift(a: HilbertSeries, n: int) -> HilbertSeries:
    return a.shift(n)


def coeff(a: HilbertSeries, n: int) -> int:
    return a.coeff(n)


def _is_nonnegative(d: HilbertSeries) -> bool:
    if d.is_zero():
        return True
    q, k = d.numerator, d.pole_order
    lo, hi = q.min_exp(), q.max_exp()
    if k == 0:
        return all(c >= 0 for _, c in q.terms)
    # For n >= hi the coefficient is a polynomial P(n) of degree k-1 with
    # leading coefficient q(1)/(k-1)!, which decides the eventual sign.
    if q.at_one() < 0:
        return False
    if k == 1:
        # coefficients are partial sums of q; constant from hi on
        return all(d.coeff(n) >= 0 for n in range(lo, hi + 1))
    # interpolate P on k points beyond hi, then bound its real roots
    xs = list(range(hi, hi + k))
    ys = [d.coeff(n) for n in xs]
    poly = _interpolate(xs, ys)
    lead = poly[-1]
    bound = 1 + max((abs(c / lead) for c in poly[:-1]), default=Fraction(0))
    last = max(hi, ceil(bound)) + 1
    return all(d.coeff(n) >= 0 for n in range(lo, last + 1))


def _interpolate(xs: list[int], ys: list[int]) -> list[Fraction]:
    """Coefficients (low to high) of the interpolating polynomial."""
    n = len(xs)
    result = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            # multiply basis by (x - xs[j])
            nxt = [Fraction(0)] * (len(basis) + 1)
            for t, c in enumerate(basis):
                nxt[t] -= c * xs[j]
                nxt[t + 1] += c
            basis = nxt
            denom *= xs[i] - xs[j]
        scale = Fraction(ys[i]) / denom
        for t, c in enumerate(basis):
            result[t] += c * scale
    while len(result) > 1 and result[-1] == 0:
        result.pop()
    return result


def leq(a: HilbertSeries, b: HilbertSeries) -> bool:
    """True iff every coefficient of ``a`` is <= the matching one of ``b``."""
    return _is_nonnegative(b - a)


def rank_at_one(a: HilbertSeries) -> Union[int, Undefined]:
    """Torsionfree rank over k[g] read off a Hilbert series.

    Pole order 0 means a finite-dimensional module (rank 0); pole order 1
    gives q(1); higher poles are not ranks of k[g]-modules.
    """
    if a.pole_order == 0:
        return 0
    if a.pole_order == 1:
        return a.at_one()
    return UNDEFINED


_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<coef>\d+)\s*\*?\s*)?
        (?P<var>s(?:\s*\^\s*\(?\s*(?P<exp>[+-]?\d+)\s*\)?)?)?
        \s*""",
    re.VERBOSE,
)


def _parse_poly(text: str) -> LaurentPoly:
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    terms: dict[int, int] = {}
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or (m.group("coef") is None and m.group("var") is None):
            raise ValueError(f"cannot parse polynomial term at {text[pos:]!r}")
        if not first and m.group("sign") is None:
            raise ValueError(f"missing operator before {text[pos:]!r}")
        first = False
        sign = -1 if m.group("sign") == "-" else 1
        c = int(m.group("coef")) if m.group("coef") else 1
        if m.group("var"):
            e = int(m.group("exp")) if m.group("exp") is not None else 1
        else:
            e = 0
        terms[e] = terms.get(e, 0) + sign * c
        pos = m.end()
    if not terms:
        raise ValueError("empty polynomial")
    return LaurentPoly(terms)


_DEN = re.compile(r"^\(\s*1\s*-\s*s\s*\)\s*(?:\^\s*(\d+))?$")


def parse_series(text: str) -> HilbertSeries:
    """Parse ``q(s) / (1-s)^k`` (the format produced by ``render``)."""
    text = text.strip()
    depth = 0
    split_at = None
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            split_at = i
    if split_at is None:
        return HilbertSeries(_parse_poly(text), 0)
    num, den = text[:split_at], text[split_at + 1 :].strip()
    m = _DEN.match(den)
    if not m:
        raise ValueError(f"denominator must be a power of (1-s), got {den!r}")
    k = int(m.group(1)) if m.group(1) else 1
    return HilbertSeries(_parse_poly(num), k)
