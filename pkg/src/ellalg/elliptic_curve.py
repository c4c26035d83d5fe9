"""Symbolic points on tau-orbits, formal divisors and principality.

A point is written ``[A:k]``: the k-th translate tau^k(p_A) of the base
point of orbit ``A``.  tau is a translation by a point of infinite order,
so distinct symbols name distinct points unless a relation between base
points is declared in a :class:`GenericityContext`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Iterator, Mapping

if TYPE_CHECKING:  # pragma: no cover
    from .weierstrass import OracleBinding

__all__ = [
    "CurvePoint",
    "Divisor",
    "GenericityContext",
    "tau_power",
    "pullback",
    "degree",
    "is_principal",
    "line_bundle_divisor",
    "parse_divisor",
    "parse_point",
]


@dataclass(frozen=True, order=True)
class CurvePoint:
    orbit: str
    shift: int = 0

    def tau(self, j: int = 1) -> "CurvePoint":
        return CurvePoint(self.orbit, self.shift + j)

    def __str__(self) -> str:
        return f"[{self.orbit}:{self.shift}]"


def tau_power(p: CurvePoint, j: int) -> CurvePoint:
    return p.tau(j)


class Divisor:
    """Finite formal Z-combination of curve points (zero terms dropped)."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[CurvePoint, int] | Iterable[tuple[CurvePoint, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[CurvePoint, int] = {}
        for p, m in items:
            acc[p] = acc.get(p, 0) + m
        self._terms = tuple(sorted((p, m) for p, m in acc.items() if m != 0))

    @classmethod
    def point(cls, p: CurvePoint, m: int = 1) -> "Divisor":
        return cls({p: m})

    @property
    def terms(self) -> tuple[tuple[CurvePoint, int], ...]:
        return self._terms

    def __iter__(self) -> Iterator[tuple[CurvePoint, int]]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def multiplicity(self, p: CurvePoint) -> int:
        return dict(self._terms).get(p, 0)

    def degree(self) -> int:
        return sum(m for _, m in self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "Divisor") -> "Divisor":
        return Divisor(self._terms + other._terms)

    def __neg__(self) -> "Divisor":
        return Divisor((p, -m) for p, m in self._terms)

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __mul__(self, k: int) -> "Divisor":
        return Divisor((p, m * k) for p, m in self._terms)

    __rmul__ = __mul__

    def pullback(self, j: int) -> "Divisor":
        """Divisor of the pullback along tau^j: [x] -> [tau^{-j} x]."""
        return Divisor((p.tau(-j), m) for p, m in self._terms)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Divisor) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __repr__(self) -> str:
        return f"Divisor({str(self)!r})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for i, (p, m) in enumerate(self._terms):
            sign = "-" if m < 0 else "+"
            body = f"{abs(m)}*{p}"
            out.append(body if i == 0 and m > 0 else f"{sign} {body}" if i else f"-{body}")
        return " ".join(out)


def pullback(D: Divisor, j: int) -> Divisor:
    return D.pullback(j)


def degree(D: Divisor) -> int:
    return D.degree()


def line_bundle_divisor(M: Divisor, n: int) -> Divisor:
    """Divisor of M_n = M (x) M^tau (x) ... (x) M^{tau^{n-1}}.

    For n < 0 this is the inverse of M^{tau^n} (x) ... (x) M^{tau^{-1}}.
    """
    out = Divisor()
    if n >= 0:
        for i in range(n):
            out = out + M.pullback(i)
    else:
        for i in range(n, 0):
            out = out - M.pullback(i)
    return out


@dataclass(frozen=True)
class GenericityContext:
    """What is assumed about the base points of the orbits.

    ``relations`` maps an orbit name B to ``(A, k)``, declaring
    p_B = tau^k(p_A).  Without relations, base points and the translation
    are independent in the group law.  With an oracle binding, principality
    is decided by the concrete group law instead.
    """

    relations: Mapping[str, tuple[str, int]] = field(default_factory=dict)
    binding: "OracleBinding | None" = None

    def __post_init__(self) -> None:
        # reject cycles; a cycle would either be vacuous or force tau torsion
        for start in self.relations:
            seen = {start}
            cur = start
            while cur in self.relations:
                cur = self.relations[cur][0]
                if cur in seen:
                    raise ValueError(f"cyclic orbit relation through {start!r}")
                seen.add(cur)

    def __hash__(self) -> int:
        return hash((tuple(sorted(self.relations.items())), id(self.binding)))

    def normalize(self, p: CurvePoint) -> CurvePoint:
        orbit, k = p.orbit, p.shift
        while orbit in self.relations:
            base, offset = self.relations[orbit]
            orbit, k = base, k + offset
        return CurvePoint(orbit, k)

    def normalize_divisor(self, D: Divisor) -> Divisor:
        return Divisor((self.normalize(p), m) for p, m in D)

    def orbit_offset(self, p: CurvePoint, q: CurvePoint) -> int | None:
        """j with p = tau^j(q), or None when p and q lie on different orbits."""
        a, b = self.normalize(p), self.normalize(q)
        if a.orbit != b.orbit:
            return None
        return a.shift - b.shift

    def same_point(self, p: CurvePoint, q: CurvePoint) -> bool:
        return self.orbit_offset(p, q) == 0


GENERIC = GenericityContext()


def is_principal_symbolic(D: Divisor, ctx: GenericityContext = GENERIC) -> bool:
    if D.degree() != 0:
        return False
    D = ctx.normalize_divisor(D)
    orbit_sums: dict[str, int] = {}
    weighted = 0
    for p, m in D:
        orbit_sums[p.orbit] = orbit_sums.get(p.orbit, 0) + m
        weighted += p.shift * m
    return weighted == 0 and all(v == 0 for v in orbit_sums.values())


def is_principal(D: Divisor, ctx: GenericityContext = GENERIC) -> bool:
    """Whether D is linearly equivalent to 0 on E.

    Symbolically: degree 0, every orbit's multiplicities sum to 0 and the
    shift-weighted sum vanishes.  A bound oracle decides concretely.
    """
    if D.degree() != 0:
        return False
    if ctx.binding is not None:
        return ctx.binding.is_identity_sum(D)
    return is_principal_symbolic(D, ctx)


_POINT = re.compile(r"\[\s*([A-Za-z_][\w']*)\s*(?::\s*([+-]?\d+))?\s*\]")
_DTERM = re.compile(r"\s*([+-])?\s*(?:(\d+)\s*\*?\s*)?(\[[^\]]*\])\s*")


def parse_point(text: str) -> CurvePoint:
    m = _POINT.fullmatch(text.strip())
    if not m:
        raise ValueError(f"bad point literal {text!r}; expected [ORBIT:k]")
    return CurvePoint(m.group(1), int(m.group(2) or 0))


def parse_divisor(text: str) -> Divisor:
    """Parse e.g. ``3*[A:0] - 1*[B:2]``; ``0`` is the zero divisor."""
    text = text.strip()
    if text == "0":
        return Divisor()
    pos, terms, first = 0, [], True
    while pos < len(text):
        m = _DTERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse divisor at {text[pos:]!r}")
        if not first and m.group(1) is None:
            raise ValueError(f"missing operator before {text[pos:]!r}")
        first = False
        sign = -1 if m.group(1) == "-" else 1
        mult = int(m.group(2)) if m.group(2) else 1
        terms.append((parse_point(m.group(3)), sign * mult))
        pos = m.end()
    return Divisor(terms)
