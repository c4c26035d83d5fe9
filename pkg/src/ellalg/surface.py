"""Elliptic algebras as descriptors, and blowing up and down as state transitions.

An elliptic algebra R of degree mu is remembered through its degree-zero
quotient B = R/gR = B(E, M, tau), a smoothness status, the line modules
that have been named, and a fact base.  hilb R = hilb B / (1 - s) because
R is g-divisible.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Union

from .elliptic_curve import CurvePoint, Divisor
from .hilbert_series import HilbertSeries, LaurentPoly, leq
from .inference import Fact, InferenceResult, P, PairScope, Provenance, infer
from .tcr import PreconditionError, Side, TcrDescriptor, hilb_B

__all__ = [
    "Smoothness",
    "Pdim",
    "LineModuleRef",
    "BlowupEvent",
    "BlowdownEvent",
    "AlgebraDescriptor",
    "BlowupResult",
    "LineHom",
    "TildeExtensionReport",
    "InconsistencyError",
    "hilb_R",
    "line_series",
    "line_ideal_series",
    "hom_J_R_series",
    "ext1_L_R_series",
    "blowup",
    "blowdown",
    "blowdown_delta",
    "line_dual",
    "line_hom",
    "tilde_series",
    "smoothness_step",
    "blowdown_smoothness",
]

DEGREE_BOUND_ANCHOR = "blowup/blowdown inverse needs degree at least 4"


class InconsistencyError(RuntimeError):
    """The fact base or a series computation contradicts itself."""


class Smoothness(str, Enum):
    SMOOTH = "smooth"
    NOT_SMOOTH = "not_smooth"
    UNKNOWN = "unknown"


class Pdim(str, Enum):
    FINITE = "finite"
    INFINITE = "infinite"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class LineModuleRef:
    """A line module by its divisor point; ``div_point`` is Div of the module itself."""

    line_id: str
    div_point: CurvePoint
    side: Side = Side.RIGHT
    shift: int = 0

    @property
    def hilb(self) -> HilbertSeries:
        return line_series(self.shift)

    def __str__(self) -> str:
        s = f"{self.line_id}@{self.div_point}"
        if self.side is Side.LEFT:
            s += " (left)"
        return s + (f"[{self.shift}]" if self.shift else "")


@dataclass(frozen=True)
class BlowupEvent:
    point: CurvePoint
    parent: "AlgebraDescriptor"
    exceptional: str

    @property
    def parent_degree(self) -> int:
        return self.parent.mu


@dataclass(frozen=True)
class BlowdownEvent:
    line: LineModuleRef
    parent_degree: int


Event = Union[BlowupEvent, BlowdownEvent]


@dataclass(frozen=True)
class AlgebraDescriptor:
    tcr: TcrDescriptor
    name: str = "R"
    smoothness: Smoothness = Smoothness.UNKNOWN
    history: tuple[Event, ...] = ()
    lines: tuple[LineModuleRef, ...] = ()
    facts: frozenset[Fact] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.mu < 3:
            raise PreconditionError(f"an elliptic algebra has degree at least 3, got {self.mu}", "degree >= 3")
        ids = [line.line_id for line in self.lines]
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate line ids in {ids}")

    @property
    def mu(self) -> int:
        return self.tcr.mu

    @property
    def M(self) -> Divisor:
        return self.tcr.M

    def line(self, line_id: str) -> LineModuleRef:
        for line in self.lines:
            if line.line_id == line_id:
                return line
        raise KeyError(f"{self.name} has no line {line_id!r}; known: {[l.line_id for l in self.lines]}")

    def with_line(self, line: LineModuleRef) -> "AlgebraDescriptor":
        if any(l.line_id == line.line_id for l in self.lines):
            raise ValueError(f"line id {line.line_id!r} already used")
        return replace(self, lines=self.lines + (line,))

    def with_facts(self, facts: Iterable[Fact]) -> "AlgebraDescriptor":
        return replace(self, facts=self.facts | frozenset(facts))

    def fact_base(self) -> list[Fact]:
        """Declared facts plus the smoothness status as a fact about the algebra."""
        out = sorted(self.facts, key=lambda f: (f.subject, f.predicate, not f.holds))
        if self.smoothness is not Smoothness.UNKNOWN:
            out.append(Fact(P.QGR_SMOOTH, (self.name,), self.smoothness is Smoothness.SMOOTH, Provenance("declared", "status")))
        return out

    def pair_scopes(self) -> list[PairScope]:
        iso = {f.subject for f in self.facts if f.predicate == P.ISOMORPHIC and f.holds}
        out = []
        for a in self.lines:
            for b in self.lines:
                if a.line_id == b.line_id or a.side is not b.side:
                    continue
                same = (a.line_id, b.line_id) in iso or (b.line_id, a.line_id) in iso
                distinct = not self.tcr.ctx.same_point(a.div_point, b.div_point)
                out.append(PairScope(a.line_id, b.line_id, distinct, not same))
        return out

    def closure(self, assumptions: Iterable[str] = ()) -> InferenceResult:
        return infer(self.fact_base(), self.pair_scopes(), algebra=self.name, assumptions=assumptions)


@dataclass(frozen=True)
class BlowupResult:
    algebra: AlgebraDescriptor
    exceptional: LineModuleRef


def hilb_R(A: AlgebraDescriptor) -> HilbertSeries:
    return hilb_B(A.tcr).divide_by_one_minus_s()


def line_series(shift: int = 0) -> HilbertSeries:
    return HilbertSeries.monomial(-shift, 1, 2)


def line_ideal_series(A: AlgebraDescriptor) -> HilbertSeries:
    """hilb J = hilb R - hilb L for an unshifted line."""
    return hilb_R(A) - line_series()


def ext1_L_R_series(line: LineModuleRef) -> HilbertSeries:
    """Ext^1_R(L, R); its [1]-shift is the dual line module."""
    return line_series(-line.shift - 1)


def hom_J_R_series(A: AlgebraDescriptor, line: LineModuleRef) -> HilbertSeries:
    """From 0 -> J -> R -> L -> 0: Hom(R, R) -> Hom(J, R) -> Ext^1(L, R) -> 0, since Hom(L, R) = 0."""
    if line.shift:
        raise PreconditionError("line ideal series are for unshifted lines")
    return hilb_R(A) + ext1_L_R_series(line)


def line_dual(line: LineModuleRef) -> LineModuleRef:
    """The module Ext^1_R(L, R) on the opposite side.

    A right line at p goes to a left line at tau^{-1}(p), and a left line at
    q to a right line at tau(q), so applying it twice is the identity.
    """
    step = -1 if line.side is Side.RIGHT else 1
    lid = line.line_id[:-2] if line.line_id.endswith("^v") else line.line_id + "^v"
    return LineModuleRef(lid, line.div_point.tau(step), line.side.opposite, -line.shift - 1)


@dataclass(frozen=True)
class LineHom:
    """Candidate for hilb Hom(L, L'); ``conditional`` means the true answer is this or 0."""

    series: HilbertSeries
    conditional: bool


def line_hom(A: AlgebraDescriptor, a: LineModuleRef, b: LineModuleRef) -> LineHom:
    if a.side is not b.side:
        raise PreconditionError("Hom between line modules of the same side only")
    if a.line_id == b.line_id or (P.ISOMORPHIC, (a.line_id, b.line_id)) in {(f.predicate, f.subject) for f in A.facts}:
        return LineHom(HilbertSeries.geometric(1).shift(a.shift - b.shift), False)
    j = A.tcr.ctx.orbit_offset(a.div_point, b.div_point)
    if j is not None and a.side is Side.LEFT:
        j = -j
    if j is None or j < 0:
        return LineHom(HilbertSeries.zero(), False)
    return LineHom(HilbertSeries.monomial(j + a.shift - b.shift, 1, 1), True)


def smoothness_step(parent: Smoothness, pdim: Pdim) -> Smoothness:
    """Status of a blowup from the parent's status and pdim of the exceptional line."""
    if parent is Smoothness.NOT_SMOOTH or pdim is Pdim.INFINITE:
        return Smoothness.NOT_SMOOTH
    if parent is Smoothness.SMOOTH and pdim is Pdim.FINITE:
        return Smoothness.SMOOTH
    return Smoothness.UNKNOWN


def blowdown_smoothness(parent: Smoothness, closure: InferenceResult, line_id: str) -> Smoothness:
    """Smoothness passes to the blowdown when pdim is finite and the self-dot is -1."""
    if closure.status(P.PDIM_FINITE, line_id) and closure.status(P.SELF_DOT_MINUS_ONE, line_id):
        return parent
    return Smoothness.UNKNOWN


def _fresh_id(A: AlgebraDescriptor, stem: str = "E") -> str:
    used = {l.line_id for l in A.lines}
    k = 1
    while f"{stem}{k}" in used:
        k += 1
    return f"{stem}{k}"


def blowup(
    A: AlgebraDescriptor,
    p: CurvePoint,
    *,
    pdim: Pdim = Pdim.UNKNOWN,
    line_id: str | None = None,
    name: str | None = None,
) -> BlowupResult:
    """The blowup A(p): M drops to M - [p] and the exceptional line has divisor tau(p)."""
    if A.mu < 4:
        raise PreconditionError(
            f"cannot blow up a degree {A.mu} algebra: the result must have degree at least 3 "
            "(the blowup/blowdown inverse theorem needs degree at least 4)",
            DEGREE_BOUND_ANCHOR,
        )
    lid = line_id or _fresh_id(A)
    exc = LineModuleRef(lid, p.tau(1))
    lines: tuple[LineModuleRef, ...] = (exc,)
    facts = {
        Fact(P.EXCEPTIONAL, (lid,), True, Provenance("cited", "blowup: End(J) = R(tau p) for the exceptional line")),
    }
    if pdim is not Pdim.UNKNOWN:
        facts.add(Fact(P.PDIM_FINITE, (lid,), pdim is Pdim.FINITE, Provenance("declared", "blowup input")))
    # blowing up the same point twice: the earlier exceptional line restricts to this one
    top = A.history[-1] if A.history else None
    if isinstance(top, BlowupEvent) and A.tcr.ctx.same_point(top.point, p):
        prev = A.line(top.exceptional)
        if prev.line_id != lid:
            lines = (exc, prev)
            facts.add(Fact(P.ISOMORPHIC, (lid, prev.line_id), True, Provenance("cited", "repeated blowup: earlier exceptional line restricts to the new one")))
            facts.add(Fact(P.ISOMORPHIC, (prev.line_id, lid), True, Provenance("cited", "repeated blowup: earlier exceptional line restricts to the new one")))
    child = AlgebraDescriptor(
        TcrDescriptor(A.M - Divisor.point(p), A.tcr.ctx),
        name or f"{A.name}({p})",
        smoothness_step(A.smoothness, pdim),
        A.history + (BlowupEvent(p, A, lid),),
        lines,
        frozenset(facts),
    )
    return BlowupResult(child, exc)


def blowdown_delta() -> HilbertSeries:
    """hilb of the sum of L[-i] over i >= 1, by which the blowdown exceeds R."""
    return HilbertSeries.monomial(1, 1, 3)


def blowdown(A: AlgebraDescriptor, line: LineModuleRef | str, *, assumptions: Iterable[str] = ()) -> AlgebraDescriptor:
    """Contract a line L with hilb End(J) = hilb R: M gains [tau^{-1}(Div L)]."""
    if isinstance(line, str):
        line = A.line(line)
    elif line not in A.lines:
        raise PreconditionError(f"line {line} does not belong to {A.name}")
    if line.side is not Side.RIGHT or line.shift:
        raise PreconditionError("blowdown takes an unshifted right line module")
    closure = A.closure(assumptions)
    if closure.contradiction:
        raise InconsistencyError("; ".join(f"{a} vs {b}" for a, b in closure.contradictions))
    if closure.status(P.EQ_LINE, line.line_id) is not True:
        raise PreconditionError(
            f"blowdown of {line.line_id} needs hilb End(J) = hilb R; none of these is established: "
            f"eq_line({line.line_id}) declared, self_dot_minus_one / ext1_LL_zero / ext1_JJ_zero / "
            f"hom_JL_minimal (self-intersection criterion), J_projective together with a qgr-smooth algebra, "
            f"or exceptional({line.line_id})",
            "blowdown needs hilb End(J) = hilb R",
        )
    q = line.div_point.tau(-1)
    M_new = A.M + Divisor.point(q)
    top = A.history[-1] if A.history else None
    if isinstance(top, BlowupEvent) and top.exceptional == line.line_id:
        parent = top.parent
        if parent.M != M_new:
            raise InconsistencyError("blowdown of an exceptional line did not return the parent twist")
        return replace(parent, tcr=TcrDescriptor(M_new, A.tcr.ctx))
    return AlgebraDescriptor(
        TcrDescriptor(M_new, A.tcr.ctx),
        f"{A.name}~{line.line_id}",
        blowdown_smoothness(A.smoothness, closure, line.line_id),
        A.history + (BlowdownEvent(line, A.mu),),
    )


@dataclass(frozen=True)
class TildeExtensionReport:
    base: HilbertSeries
    multiplicities: HilbertSeries
    extension: HilbertSeries
    ext1: HilbertSeries


def tilde_series(
    A: AlgebraDescriptor,
    line: LineModuleRef,
    K_series: HilbertSeries,
    p_s: HilbertSeries | LaurentPoly,
) -> TildeExtensionReport:
    """Series of the extension of K by copies of shifted L, with multiplicities p(s)."""
    if isinstance(p_s, LaurentPoly):
        p_s = HilbertSeries(p_s, 0)
    if not leq(HilbertSeries.zero(), p_s):
        raise PreconditionError("multiplicities p(s) must have non-negative coefficients")
    shift = HilbertSeries.monomial(-line.shift)
    return TildeExtensionReport(
        base=K_series,
        multiplicities=p_s,
        extension=K_series + p_s * shift.divide_by_one_minus_s(2),
        ext1=p_s * shift.divide_by_one_minus_s(1),
    )
