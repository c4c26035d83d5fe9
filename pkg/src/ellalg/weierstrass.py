"""Concrete short Weierstrass curves y^2 = x^3 + a x + b over Q or F_q.

This is the ground truth for symbolic principality: a divisor is principal
exactly when its points sum to the identity under the chord-tangent law.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

from .elliptic_curve import CurvePoint, Divisor

Scalar = Union[Fraction, int]

__all__ = [
    "WeierstrassCurve",
    "Point",
    "INFINITY",
    "OrderGuardError",
    "OracleBinding",
    "order_guard",
    "independence_guard",
    "default_rational_curve",
    "parse_curve",
    "sqrt_mod",
    "lift_x",
]


class OrderGuardError(ValueError):
    def __init__(self, n: int, message: str | None = None):
        self.n = n
        super().__init__(message or f"n*t = O for n = {n}")


@dataclass(frozen=True)
class Point:
    x: Scalar | None = None
    y: Scalar | None = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __str__(self) -> str:
        return "O" if self.is_infinity else f"({self.x}, {self.y})"


INFINITY = Point()


@dataclass(frozen=True)
class WeierstrassCurve:
    a: Scalar
    b: Scalar
    modulus: int | None = None  # None means the rationals

    def __post_init__(self) -> None:
        if self.modulus is not None:
            if self.modulus in (2, 3) or self.modulus < 2:
                raise ValueError("characteristic 2 and 3 are excluded")
            object.__setattr__(self, "a", int(self.a) % self.modulus)
            object.__setattr__(self, "b", int(self.b) % self.modulus)
        else:
            object.__setattr__(self, "a", Fraction(self.a))
            object.__setattr__(self, "b", Fraction(self.b))
        disc = -16 * (4 * self.a**3 + 27 * self.b**2)
        if self._norm(disc) == 0:
            raise ValueError("singular curve: discriminant vanishes")

    @property
    def field_tag(self) -> str:
        return "Q" if self.modulus is None else f"F_{self.modulus}"

    def _norm(self, v: Scalar) -> Scalar:
        return v % self.modulus if self.modulus is not None else v

    def _inv(self, v: Scalar) -> Scalar:
        if self.modulus is not None:
            return pow(int(v), -1, self.modulus)
        return 1 / Fraction(v)

    def point(self, x: Scalar, y: Scalar) -> Point:
        if self.modulus is None:
            x, y = Fraction(x), Fraction(y)
        else:
            x, y = int(x) % self.modulus, int(y) % self.modulus
        p = Point(x, y)
        if not self.contains(p):
            raise ValueError(f"{p} is not on y^2 = x^3 + {self.a}x + {self.b}")
        return p

    def contains(self, p: Point) -> bool:
        if p.is_infinity:
            return True
        return self._norm(p.y**2 - (p.x**3 + self.a * p.x + self.b)) == 0

    def negate(self, p: Point) -> Point:
        if p.is_infinity:
            return p
        return Point(p.x, self._norm(-p.y))

    def add(self, p: Point, q: Point) -> Point:
        if p.is_infinity:
            return q
        if q.is_infinity:
            return p
        if p.x == q.x:
            if self._norm(p.y + q.y) == 0:
                return INFINITY
            lam = (3 * p.x**2 + self.a) * self._inv(2 * p.y)
        else:
            lam = (q.y - p.y) * self._inv(q.x - p.x)
        lam = self._norm(lam)
        x3 = self._norm(lam**2 - p.x - q.x)
        y3 = self._norm(lam * (p.x - x3) - p.y)
        return Point(x3, y3)

    def scalar_mul(self, n: int, p: Point) -> Point:
        if n < 0:
            return self.scalar_mul(-n, self.negate(p))
        result, addend = INFINITY, p
        while n:
            if n & 1:
                result = self.add(result, addend)
            addend = self.add(addend, addend)
            n >>= 1
        return result

    def divisor_sum(self, terms: Mapping[Point, int]) -> Point:
        total = INFINITY
        for p, m in terms.items():
            total = self.add(total, self.scalar_mul(m, p))
        return total


def order_guard(curve: WeierstrassCurve, t: Point, horizon: int) -> None:
    """Check n*t != O for 1 <= n <= horizon; raises OrderGuardError otherwise.

    Over Q a point of finite order has order at most 12, so checking
    multiples up to 12 proves t has infinite order.
    """
    limit = horizon if curve.modulus is not None else min(horizon, 12)
    acc = INFINITY
    for n in range(1, limit + 1):
        acc = curve.add(acc, t)
        if acc.is_infinity:
            raise OrderGuardError(n)


def independence_guard(
    curve: WeierstrassCurve, bases: Mapping[str, Point], t: Point, mult_bound: int, shift_bound: int
) -> None:
    """Check no relation sum a_i P_i + k t = O with |a_i| <= mult_bound, |k| <= shift_bound.

    Only needed over a finite field, where base points can never be truly
    independent; it certifies symbolic answers for divisors inside the bounds.
    """
    names = sorted(bases)
    multiples: dict[Point, int] = {}
    acc = INFINITY
    for k in range(0, shift_bound + 1):
        multiples.setdefault(acc, k)
        multiples.setdefault(curve.negate(acc), -k)
        acc = curve.add(acc, t)

    def rec(i: int, total: Point, coeffs: tuple[int, ...]) -> None:
        if i == len(names):
            if any(coeffs) and curve.negate(total) in multiples:
                raise OrderGuardError(
                    multiples[curve.negate(total)],
                    f"relation {dict(zip(names, coeffs))} + k t = O with k = {-multiples[curve.negate(total)]}",
                )
            return
        base = bases[names[i]]
        point = curve.scalar_mul(-mult_bound, base)
        for a in range(-mult_bound, mult_bound + 1):
            rec(i + 1, curve.add(total, point), coeffs + (a,))
            point = curve.add(point, base)

    rec(0, INFINITY, ())


@dataclass
class OracleBinding:
    """Binds symbolic orbits to concrete base points and tau to translation by t."""

    curve: WeierstrassCurve
    t: Point
    bases: Mapping[str, Point]
    _cache: dict[CurvePoint, Point] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.curve.contains(self.t):
            raise ValueError("translation point is not on the curve")
        for name, p in self.bases.items():
            if not self.curve.contains(p):
                raise ValueError(f"base point of orbit {name!r} is not on the curve")

    def concrete(self, p: CurvePoint) -> Point:
        if p not in self._cache:
            if p.orbit not in self.bases:
                raise KeyError(f"orbit {p.orbit!r} is not bound to a curve point")
            self._cache[p] = self.curve.add(self.bases[p.orbit], self.curve.scalar_mul(p.shift, self.t))
        return self._cache[p]

    def divisor_sum(self, D: Divisor) -> Point:
        total = INFINITY
        for p, m in D:
            total = self.curve.add(total, self.curve.scalar_mul(m, self.concrete(p)))
        return total

    def is_identity_sum(self, D: Divisor) -> bool:
        return self.divisor_sum(D).is_infinity


def default_rational_curve() -> tuple[WeierstrassCurve, Point]:
    """y^2 = x^3 - 2 over Q with the non-torsion point t = (3, 5)."""
    E = WeierstrassCurve(0, -2)
    return E, E.point(3, 5)


_CURVE = re.compile(
    r"^\s*curve\s+(?P<field>Q|F_?\d+|F)\s*:\s*(?P<params>[^;]*);\s*t\s*=\s*\(\s*(?P<tx>[^,]+),\s*(?P<ty>[^)]+)\)\s*$"
)
_PARAM = re.compile(r"(\w+)\s*=\s*([+-]?[\d/]+)")


def parse_curve(text: str) -> tuple[WeierstrassCurve, Point]:
    """Parse ``curve Q: a=0 b=-2; t=(3,5)`` or ``curve F_p: p=10007 a=2 b=3; t=(x,y)``."""
    m = _CURVE.match(text)
    if not m:
        raise ValueError(f"bad curve literal {text!r}")
    params = dict(_PARAM.findall(m.group("params")))
    if "a" not in params or "b" not in params:
        raise ValueError("curve literal needs a= and b=")
    fld = m.group("field")
    modulus = None
    if fld != "Q":
        digits = fld.lstrip("F_")
        modulus = int(digits or params.get("p", "0"))
        if not modulus:
            raise ValueError("prime-field curve needs its modulus, e.g. F_10007 or p=10007")
    num = Fraction if modulus is None else int
    E = WeierstrassCurve(num(params["a"]), num(params["b"]), modulus)
    return E, E.point(num(m.group("tx").strip()), num(m.group("ty").strip()))


def sqrt_mod(a: int, p: int) -> int | None:
    """A square root of a mod an odd prime p (Tonelli-Shanks), or None."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q, s = q // 2, s + 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2, i = t2 * t2 % p, i + 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def lift_x(curve: WeierstrassCurve, x: int) -> Point | None:
    """A point with the given x over a prime field, if there is one."""
    if curve.modulus is None:
        raise ValueError("lift_x works over prime fields only")
    y = sqrt_mod(x**3 + int(curve.a) * x + int(curve.b), curve.modulus)
    return None if y is None else curve.point(x, y)
