"""Twisted homogeneous coordinate rings B(E, M, tau) at the level of dimensions.

Every graded piece here is a space of global sections of a line bundle on
an elliptic curve, so Riemann-Roch turns each dimension into a degree
count plus, in degree zero, a principality test.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

from .elliptic_curve import GENERIC, CurvePoint, Divisor, GenericityContext, is_principal, line_bundle_divisor
from .hilbert_series import HilbertSeries

__all__ = [
    "PreconditionError",
    "Side",
    "TcrDescriptor",
    "SaturatedModuleRef",
    "PointModuleRef",
    "HomRow",
    "SaturatedHom",
    "h0",
    "hilb_B",
    "hom_saturated",
    "point_hom",
    "point_ext1",
    "point_qgr_homext",
    "point_qgr_ext",
    "point_dual",
    "truncate_shift",
]


class PreconditionError(ValueError):
    """An operation was called outside the range where its formula is valid."""

    def __init__(self, message: str, anchor: str = ""):
        self.anchor = anchor
        super().__init__(message)


class Side(str, Enum):
    RIGHT = "right"
    LEFT = "left"

    @property
    def opposite(self) -> "Side":
        return Side.LEFT if self is Side.RIGHT else Side.RIGHT


@dataclass(frozen=True)
class TcrDescriptor:
    M: Divisor
    ctx: GenericityContext = GENERIC

    def __post_init__(self) -> None:
        if self.M.degree() < 1:
            raise PreconditionError(f"deg M must be at least 1, got {self.M.degree()}", "deg M >= 1")

    @property
    def mu(self) -> int:
        return self.M.degree()

    def require_degree(self, bound: int, anchor: str) -> None:
        if self.mu < bound:
            raise PreconditionError(f"requires deg M >= {bound}, got {self.mu}", anchor)


@dataclass(frozen=True)
class SaturatedModuleRef:
    """The saturated module sum_n H^0(E, O(F) (x) M_n) for a twist divisor F."""

    twist: Divisor = Divisor()


@dataclass(frozen=True)
class PointModuleRef:
    point: CurvePoint
    side: Side = Side.RIGHT
    shift: int = 0

    def __str__(self) -> str:
        tag = "M" if self.side is Side.RIGHT else "M^l"
        return f"{tag}_{self.point}" + (f"[{self.shift}]" if self.shift else "")


def h0(D: Divisor, ctx: GenericityContext = GENERIC) -> int:
    """Riemann-Roch on an elliptic curve."""
    d = D.degree()
    if d >= 1:
        return d
    if d <= -1:
        return 0
    return 1 if is_principal(D, ctx) else 0


def hilb_B(B: TcrDescriptor) -> HilbertSeries:
    return hom_saturated(B, SaturatedModuleRef(), SaturatedModuleRef()).series


class HomRow(NamedTuple):
    n: int
    divisor: Divisor
    h0: int


@dataclass(frozen=True)
class SaturatedHom:
    """Degree-n divisors of Hom(O(F)-module, O(G)-module) and the resulting series."""

    B: TcrDescriptor
    source: Divisor
    target: Divisor
    first_degree: int  # lowest n whose divisor can have sections
    stable_from: int  # from here on h0 = divisor degree
    series: HilbertSeries

    def divisor(self, n: int) -> Divisor:
        return (-self.source).pullback(n) + self.target + line_bundle_divisor(self.B.M, n)

    def rows(self, upto: int | None = None) -> list[HomRow]:
        """Audit rows from the first nonzero candidate degree up to ``upto``."""
        hi = self.stable_from if upto is None else upto
        return [HomRow(n, D, h0(D, self.B.ctx)) for n in range(self.first_degree, hi + 1) for D in [self.divisor(n)]]


def hom_saturated(B: TcrDescriptor, source: SaturatedModuleRef, target: SaturatedModuleRef) -> SaturatedHom:
    """Hom between saturated submodules: degree n is H^0 of (tau^n)^*(-F) + G + M_n.

    The divisor degree is deg G - deg F + n*mu, increasing in n, so degree 0
    happens for at most one n and from the first n of positive degree on
    h0 is linear; the tail is summed in closed form.
    """
    F, G = source.twist, target.twist
    mu = B.mu
    d0 = G.degree() - F.degree()
    first = -(d0 // mu)  # ceil(-d0 / mu): smallest n with degree >= 0
    stable = -((d0 - 1) // mu)  # smallest n with degree >= 1
    hom = SaturatedHom(B, F, G, first, stable, HilbertSeries.zero())
    head = {}
    for n in range(first, stable):
        dim = h0(hom.divisor(n), B.ctx)
        if dim:
            head[n] = dim
    series = HilbertSeries.polynomial(head) + HilbertSeries.linear_tail(stable, mu, d0)
    return SaturatedHom(B, F, G, first, stable, series)


# point modules -----------------------------------------------------------

_HOMPT = "point-module Hom/Ext table (deg M >= 3)"
_QGR = "qgr point-module table (deg M >= 2)"


def _offset(B: TcrDescriptor, p: PointModuleRef, q: PointModuleRef) -> tuple[int | None, int]:
    """Orbit offset j between the points in the side's own convention, plus the shift correction.

    For left modules the tables hold with tau^{-1} in place of tau.
    Hom(M[a], N[b]) = Hom(M, N)[b - a], whose series is s^{a-b} times the unshifted one.
    """
    if p.side is not q.side:
        raise PreconditionError("point modules must be on the same side")
    j = B.ctx.orbit_offset(p.point, q.point)
    if j is not None and p.side is Side.LEFT:
        j = -j
    return j, p.shift - q.shift


def point_hom(B: TcrDescriptor, p: PointModuleRef, q: PointModuleRef) -> HilbertSeries:
    """gr Hom(M_p, M_q): s^j when p = tau^j(q) with j >= 0, else 0."""
    B.require_degree(3, _HOMPT)
    j, sh = _offset(B, p, q)
    if j is None or j < 0:
        return HilbertSeries.zero()
    return HilbertSeries.monomial(j + sh)


def point_ext1(B: TcrDescriptor, p: PointModuleRef, q: PointModuleRef) -> HilbertSeries:
    """gr Ext^1(M_p, M_q): s^-1 + s^j when p = tau^j(q) with j >= 0, else s^-1."""
    B.require_degree(3, _HOMPT)
    j, sh = _offset(B, p, q)
    out = HilbertSeries.monomial(-1)
    if j is not None and j >= 0:
        out = out + HilbertSeries.monomial(j)
    return out.shift(sh)


def point_qgr_homext(B: TcrDescriptor, p: PointModuleRef, q: PointModuleRef) -> tuple[HilbertSeries, HilbertSeries]:
    """(Hom, Ext^1) in qgr: both s^j when p = tau^j(q) for any integer j, else both 0."""
    B.require_degree(2, _QGR)
    j, sh = _offset(B, p, q)
    if j is None:
        return HilbertSeries.zero(), HilbertSeries.zero()
    v = HilbertSeries.monomial(j + sh)
    return v, v


def point_qgr_ext(B: TcrDescriptor, p: PointModuleRef, q: PointModuleRef, m: int) -> HilbertSeries:
    if m < 0:
        raise ValueError("Ext index must be non-negative")
    if m >= 2:
        B.require_degree(2, _QGR)
        return HilbertSeries.zero()
    return point_qgr_homext(B, p, q)[m]


def truncate_shift(p: PointModuleRef) -> PointModuleRef:
    """Normal form of M[n]_{>=0} for n >= 0: right M_p[n]_{>=0} = M_{tau^n p}, left uses tau^{-n}."""
    if p.shift < 0:
        raise PreconditionError("truncation rule needs a non-negative shift")
    step = p.shift if p.side is Side.RIGHT else -p.shift
    return PointModuleRef(p.point.tau(step), p.side, 0)


def point_dual(B: TcrDescriptor, p: PointModuleRef) -> PointModuleRef:
    """Ext^1_B(M_p, B): the left point module at tau^{-2}(p), shifted by -1.

    Left inputs go to the right point module at tau^2(q).
    """
    B.require_degree(3, _HOMPT)
    if p.shift != 0:
        raise PreconditionError("dual is defined for unshifted point modules; normalize with truncate_shift first")
    step = -2 if p.side is Side.RIGHT else 2
    return PointModuleRef(p.point.tau(step), p.side.opposite, -1)
