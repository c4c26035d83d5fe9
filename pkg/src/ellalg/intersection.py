"""Intersection numbers of line modules and the Hilbert-series bookkeeping behind them.

For lines L, L' with divisor points p, p' the reduction mod g gives point
modules, whose Hom and Ext^1 are H and E below.  C is the image of the
connecting map, somewhere between 0 and E, and X = (C - H)/(1 - s) is
hilb Ext^1(L, L') - hilb Hom(L, L').  The intersection number is the sum
of the coefficients of C - H.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Union

from .elliptic_curve import CurvePoint, Divisor
from .hilbert_series import UNDEFINED, HilbertSeries, Undefined, leq
from .inference import Fact, InferenceResult, P, Provenance, infer
from .surface import (
    AlgebraDescriptor,
    InconsistencyError,
    LineModuleRef,
    Pdim,
    Smoothness,
    blowdown,
    blowdown_delta,
    blowup,
    hilb_R,
    line_series,
    tilde_series,
)
from .tcr import PreconditionError, TcrDescriptor

__all__ = [
    "PairRelation",
    "Ledger",
    "AtLeast",
    "ExtRankProfile",
    "Record",
    "DoubleBlowupReport",
    "classify",
    "resolve",
    "ledger",
    "dot",
    "ms_dot",
    "ms_partial_sum",
    "hom_JJ_series",
    "eq_main_X",
    "double_blowup_profile",
    "section9_report",
]


@dataclass(frozen=True)
class PairRelation:
    """same_line, on_orbit (p = tau^j p') or off_orbit."""

    kind: str
    j: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("same_line", "on_orbit", "off_orbit"):
            raise ValueError(f"unknown pair relation {self.kind!r}")
        if self.kind != "on_orbit" and self.j:
            raise ValueError("only on_orbit relations carry an offset")

    @classmethod
    def same_line(cls) -> "PairRelation":
        return cls("same_line")

    @classmethod
    def on_orbit(cls, j: int) -> "PairRelation":
        return cls("on_orbit", j)

    @classmethod
    def off_orbit(cls) -> "PairRelation":
        return cls("off_orbit")

    @property
    def offset(self) -> int | None:
        return 0 if self.kind == "same_line" else (self.j if self.kind == "on_orbit" else None)

    @property
    def same_point(self) -> bool:
        return self.offset == 0

    def __str__(self) -> str:
        return f"on_orbit({self.j})" if self.kind == "on_orbit" else self.kind


def classify(A: AlgebraDescriptor, a: LineModuleRef, b: LineModuleRef) -> PairRelation:
    iso = any(f.predicate == P.ISOMORPHIC and f.holds and set(f.subject) == {a.line_id, b.line_id} for f in A.facts)
    if a.line_id == b.line_id or iso:
        return PairRelation.same_line()
    j = A.tcr.ctx.orbit_offset(a.div_point, b.div_point)
    return PairRelation.off_orbit() if j is None else PairRelation.on_orbit(j)


@dataclass(frozen=True)
class Ledger:
    relation: PairRelation
    H: HilbertSeries
    E: HilbertSeries
    C: HilbertSeries
    X: HilbertSeries
    hom_LL: HilbertSeries | None = None  # pinned Hom(L, L') when known

    @property
    def dot(self) -> int:
        return (self.C - self.H).at_one()


def _HE(rel: PairRelation) -> tuple[HilbertSeries, HilbertSeries]:
    j = rel.offset
    sinv = HilbertSeries.monomial(-1)
    if j is not None and j >= 0:
        H = HilbertSeries.monomial(j)
        return H, sinv + H
    return HilbertSeries.zero(), sinv


def ledger(rel: PairRelation) -> list[Ledger]:
    """Every admissible (H, E, C, X) for the relation."""
    H, E = _HE(rel)
    sinv = HilbertSeries.monomial(-1)
    zero = HilbertSeries.zero()
    if rel.kind == "same_line":
        candidates = [zero, sinv]
    elif H.is_zero():
        candidates = [zero, sinv]
    else:
        # distinct lines with H != 0: C = 0 is excluded
        candidates = [H, sinv, sinv + H]
    out = []
    for C in candidates:
        if not (leq(zero, C) and leq(C, E)):
            raise InconsistencyError(f"candidate {C} outside 0 <= C <= {E}")
        X = (C - H).divide_by_one_minus_s()
        hom = HilbertSeries.geometric(1) if rel.kind == "same_line" else None
        out.append(Ledger(rel, H, E, C, X, hom))
    return out


def dot(rel: PairRelation, C: HilbertSeries) -> int:
    for entry in ledger(rel):
        if entry.C == C:
            return entry.dot
    raise ValueError(f"C = {C} is not admissible for {rel}")


def resolve(rel: PairRelation, closure: InferenceResult | None, first: str, second: str | None = None) -> list[Ledger]:
    """Narrow the candidates using dot facts; C is never guessed."""
    options = ledger(rel)
    if closure is None:
        return options
    if rel.kind == "same_line":
        st = closure.status(P.SELF_DOT_MINUS_ONE, first)
        if st is not None:
            options = [e for e in options if (e.dot == -1) == st]
    elif second is not None:
        for pred, value in ((P.PAIR_DOT_ZERO, 0), (P.PAIR_DOT_ONE, 1)):
            st = closure.status(pred, first, second)
            if st is not None:
                options = [e for e in options if (e.dot == value) == st]
    return options


def hom_JJ_series(rel: PairRelation, im_alpha: HilbertSeries, hilb_r: HilbertSeries) -> tuple[HilbertSeries, bool]:
    """hilb Hom(J, J') and whether it is consistent (no negative coefficient)."""
    if not leq(HilbertSeries.zero(), im_alpha):
        raise PreconditionError("hilb im(alpha) must be non-negative")
    eps = 1 if rel.same_point else 0
    out = hilb_r + HilbertSeries(eps - 1, 1) - im_alpha.divide_by_one_minus_s()
    return out, leq(HilbertSeries.zero(), out)


def eq_main_X(ext1_JJ: HilbertSeries, hom_JJ: HilbertSeries, hilb_r: HilbertSeries) -> HilbertSeries:
    """X(L, L') from the ideals: Ext^1(J, J') + hilb R - 1/(1-s) - Hom(J, J')."""
    return ext1_JJ + hilb_r - HilbertSeries.geometric(1) - hom_JJ


# Mori-Smith intersection -----------------------------------------------------


@dataclass(frozen=True)
class AtLeast:
    """A rank known only from below."""

    bound: int

    def __str__(self) -> str:
        return f">={self.bound}"


Rank = Union[int, AtLeast]


@dataclass(frozen=True)
class ExtRankProfile:
    """r_n for n < len(prefix) from ``prefix``, then ``period`` repeated forever."""

    prefix: tuple[Rank, ...]
    period: tuple[Rank, ...] = (0,)
    source: str = ""

    def __post_init__(self) -> None:
        if not self.period:
            raise ValueError("period must be non-empty")

    def rank(self, n: int) -> Rank:
        if n < 0:
            raise ValueError("Ext index must be non-negative")
        if n < len(self.prefix):
            return self.prefix[n]
        return self.period[(n - len(self.prefix)) % len(self.period)]


def _nonzero(r: Rank) -> bool | None:
    if isinstance(r, AtLeast):
        return True if r.bound >= 1 else None
    return r != 0


def ms_dot(profile: ExtRankProfile) -> int | Undefined:
    """sum (-1)^(n+1) r_n when the ranks are eventually 0, otherwise undefined."""
    tail = [_nonzero(r) for r in profile.period]
    if any(t is None for t in tail):
        raise ValueError("cannot tell whether the tail vanishes")
    if any(tail):
        return UNDEFINED
    total = 0
    for n, r in enumerate(profile.prefix):
        if isinstance(r, AtLeast):
            raise ValueError(f"rank r_{n} is only bounded below; the sum is not determined")
        total += (-1) ** (n + 1) * r
    return total


def ms_partial_sum(profile: ExtRankProfile, upto: int = 200) -> list[int]:
    """Partial sums through n = upto, with lower bounds replaced by the bound itself."""
    sums, total = [], 0
    for n in range(upto + 1):
        r = profile.rank(n)
        v = r.bound if isinstance(r, AtLeast) else r
        total += (-1) ** (n + 1) * v
        sums.append(total)
    return sums


def double_blowup_profile() -> ExtRankProfile:
    """Ranks of Ext^n(L, L) in qgr for the twice blown-up point.

    Hom is the field (rank 1), Ext^1 is nonzero, and Ext^n = Ext^(n+1) != 0
    for n >= 2, which is an eventually constant nonzero tail.
    """
    return ExtRankProfile((1, AtLeast(1)), (AtLeast(1),), "double blowup Ext ranks")


# report records ------------------------------------------------------------------


@dataclass(frozen=True)
class Record:
    step: str
    anchor: str
    value: Any
    provenance: str

    def as_dict(self) -> dict:
        v = self.value
        if isinstance(v, (HilbertSeries, Divisor, CurvePoint, Undefined)):
            v = str(v)
        elif isinstance(v, tuple):
            v = list(v)
        return {"step": self.step, "anchor": self.anchor, "value": v, "provenance": self.provenance}


@dataclass
class DoubleBlowupReport:
    chain: list[AlgebraDescriptor]
    final: AlgebraDescriptor
    closure: InferenceResult
    records: list[Record] = field(default_factory=list)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(A.mu for A in self.chain)

    def value(self, step: str) -> Any:
        for r in self.records:
            if r.step == step:
                return r.value
        raise KeyError(step)


def _default_base(p: CurvePoint) -> AlgebraDescriptor:
    return AlgebraDescriptor(TcrDescriptor(Divisor.point(CurvePoint("O", 0), 9)), "T", Smoothness.SMOOTH)


def section9_report(base: AlgebraDescriptor | None = None, p: CurvePoint = CurvePoint("P", 0)) -> DoubleBlowupReport:
    """Blow up the same point twice in a smooth degree 9 algebra and audit the result."""
    T = base or _default_base(p)
    if T.mu != 9:
        raise PreconditionError(f"the worked example starts in degree 9, got {T.mu}", "cubic Veronese, deg M = 9")
    if T.smoothness is not Smoothness.SMOOTH:
        raise PreconditionError("the starting algebra must be declared smooth", "Veronese of a Sklyanin algebra")
    recs: list[Record] = []

    first = blowup(T, p, line_id="L'", name="T(p)")
    Tp = first.algebra
    recs.append(Record("blowup T(p)", "blowup: Div of the exceptional line is tau(p)", str(first.exceptional.div_point), "derived:blowup"))

    # J of the second exceptional line is not projective, so its pdim is infinite
    cited_facts = [
        Fact(P.J_PROJECTIVE, ("L",), False, Provenance("cited", "double blowup: J is not projective")),
        Fact(P.NONSPLIT_SELF_EXT, ("L",), True, Provenance("cited", "double blowup: nonsplit 0 -> L[-1] -> Y/R -> L[-1] -> 0")),
        Fact(P.R_CIRC_SIMPLE, ("T(2p)",), True, Provenance("cited", "double blowup: R circ is simple")),
    ]
    pre = infer([f for f in cited_facts if f.subject == ("L",)])
    pdim = {True: Pdim.FINITE, False: Pdim.INFINITE, None: Pdim.UNKNOWN}[pre.status(P.PDIM_FINITE, "L")]
    second = blowup(Tp, p, pdim=pdim, line_id="L", name="T(2p)")
    T2p = second.algebra.with_facts(cited_facts)
    L = second.exceptional
    recs.append(Record("degrees", "blowup drops the degree by one", (T.mu, Tp.mu, T2p.mu), "derived:blowup"))

    closure = T2p.closure()
    recs.append(
        Record("pdim L finite", "J not projective, so pdim L is infinite", pre.status(P.PDIM_FINITE, "L"), "derived:" + ",".join(pre.chain(P.PDIM_FINITE, ("L",), False)))
    )
    recs.append(Record("smoothness T(p)", "blowup of a smooth algebra, pdim unknown", Tp.smoothness.value, "derived:smoothness_step"))
    recs.append(Record("smoothness T(2p)", "infinite pdim of the exceptional line: gldim of the localization is infinite", T2p.smoothness.value, "derived:smoothness_step"))

    hR = hilb_R(T2p)
    dim_J1 = hR.coeff(1) - line_series().coeff(1)
    recs.append(Record("dim J_1", "dim J_1 = dim R_1 - dim L_1", dim_J1, "derived:hilb R - hilb L"))

    # Y/R is an extension of L[-1] by L[-1]
    Y = tilde_series(T2p, L, hR, HilbertSeries.monomial(1, 2))
    recs.append(Record("hilb(Y/R)", "Y/R: two copies of L[-1]", Y.extension - hR, "derived:tilde_series"))

    recs.append(Record("L = L'", "repeated blowup restricts the earlier exceptional line", T2p.closure().status(P.ISOMORPHIC, "L", "L'"), "cited"))
    recs.append(Record("eq_line(L)", "exceptional line: hilb End(J) = hilb R", closure.status(P.EQ_LINE, "L"), "derived:" + ",".join(closure.chain(P.EQ_LINE, ("L",)))))
    sd = closure.status(P.SELF_DOT_MINUS_ONE, "L")
    recs.append(
        Record("(L.L) = -1", "nonsplit self-extension: (L.L) != -1", sd, "derived:" + ",".join(closure.chain(P.SELF_DOT_MINUS_ONE, ("L",), False)))
    )
    recs.append(Record("contradiction", "inference consistency", closure.contradiction, "derived:infer"))

    pinned = resolve(PairRelation.same_line(), closure, "L")
    if len(pinned) == 1:
        recs.append(Record("(L.L)", "intersection ledger with C pinned", pinned[0].dot, "derived:ledger"))
        recs.append(Record("X(L,L)", "X = (C - H)/(1-s)", pinned[0].X, "derived:ledger"))

    profile = double_blowup_profile()
    ms = ms_dot(profile)
    recs.append(Record("MS self-intersection", "Ext ranks never vanish: infinite sum, undefined", ms, "cited:double blowup Ext ranks"))

    final = blowdown(T2p, L)
    recs.append(Record("blowdown degree", "L can still be blown down", final.mu, "derived:blowdown"))
    delta = hilb_R(final) - hR
    recs.append(Record("blowdown series delta", "blowdown adds the sum of L[-i], i >= 1", delta, "derived:blowdown"))
    if delta != blowdown_delta():
        raise InconsistencyError("blowdown delta does not match the sum of shifted lines")

    return DoubleBlowupReport([T, Tp, T2p], final, closure, recs)
