"""Property suites run by ``--verify``; each returns a pass/fail summary with the first counterexample."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .elliptic_curve import CurvePoint, Divisor, GenericityContext, is_principal_symbolic
from .hilbert_series import HilbertSeries, LaurentPoly, leq, rank_at_one
from .inference import P, Fact, Provenance, infer
from .intersection import PairRelation, ledger, section9_report
from .surface import AlgebraDescriptor, LineModuleRef, blowdown, blowdown_delta, blowup, hilb_R, hom_J_R_series, line_dual
from .tcr import (
    PointModuleRef,
    SaturatedModuleRef,
    Side,
    TcrDescriptor,
    hilb_B,
    hom_saturated,
    point_ext1,
    point_hom,
    point_qgr_ext,
    point_qgr_homext,
)
from .weierstrass import OracleBinding, WeierstrassCurve, default_rational_curve, independence_guard, lift_x, order_guard

__all__ = ["SuiteResult", "SUITES", "run_suite", "run_all", "oracle_check", "prime_field_binding", "DEFAULT_SEED", "DEFAULT_WINDOW"]

DEFAULT_SEED = 20160417
DEFAULT_WINDOW = 50


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checks: int = 0
    detail: list[str] = field(default_factory=list)
    counterexample: str | None = None
    seconds: float = 0.0


class _Suite:
    def __init__(self, name: str):
        self.result = SuiteResult(name, True)

    def check(self, ok: bool, what: Callable[[], str]) -> None:
        self.result.checks += 1
        if not ok and self.result.passed:
            self.result.passed = False
            self.result.counterexample = what()


def _coeffs_equal(a: HilbertSeries, b: HilbertSeries, lo: int, hi: int) -> bool:
    return a.coefficients(lo, hi) == b.coefficients(lo, hi)


def suite_epsilon(window: int = DEFAULT_WINDOW, seed: int = DEFAULT_SEED) -> SuiteResult:
    s = _Suite("epsilon")
    p0 = CurvePoint("A", 0)
    cases = [("p = p'", p0, p0, 1), ("p = tau^3 p'", p0.tau(3), p0, 0), ("off orbit", p0, CurvePoint("B", 0), 0)]
    for mu in (3, 7, 9):
        B = TcrDescriptor(Divisor.point(CurvePoint("M", 0), mu))
        base = hilb_B(B)
        for label, p, q, eps in cases:
            hom = hom_saturated(B, SaturatedModuleRef(-Divisor.point(p)), SaturatedModuleRef(-Divisor.point(q))).series
            want = base - 1 + eps
            s.check(
                _coeffs_equal(hom, want, 0, window) and hom == want,
                lambda: f"mu={mu} {label}: got {hom.coefficients(0, 5)} want {want.coefficients(0, 5)}",
            )
    s.result.detail.append(f"3 twist cases x mu in (3, 7, 9), degrees 0..{window}")
    return s.result


def suite_dual(window: int = DEFAULT_WINDOW, seed: int = DEFAULT_SEED) -> SuiteResult:
    s = _Suite("dual")
    for mu in range(3, 10):
        A = AlgebraDescriptor(TcrDescriptor(Divisor.point(CurvePoint("M", 0), mu)))
        L = LineModuleRef("L", CurvePoint("A", 0))
        got = hom_J_R_series(A, L)
        want = hilb_R(A) + HilbertSeries.monomial(1, 1, 2)
        s.check(_coeffs_equal(got, want, 0, window), lambda: f"mu={mu}: Hom(J, R) mismatch")
        s.check(line_dual(line_dual(L)) == L, lambda: f"double dual of {L} is {line_dual(line_dual(L))}")
    return s.result


def random_point(rng: random.Random, orbits: str = "ABC", spread: int = 6) -> CurvePoint:
    return CurvePoint(rng.choice(orbits), rng.randint(-spread, spread))


def suite_roundtrip(window: int = DEFAULT_WINDOW, seed: int = DEFAULT_SEED, samples: int = 50) -> SuiteResult:
    s = _Suite("roundtrip")
    rng = random.Random(seed)
    for mu in range(4, 10):
        M = Divisor((random_point(rng), 1) for _ in range(mu))
        A = AlgebraDescriptor(TcrDescriptor(M), "A")
        for _ in range(samples):
            p = random_point(rng)
            up = blowup(A, p)
            down = blowdown(up.algebra, up.exceptional)
            s.check(down == A, lambda: f"mu={mu}, p={p}: {down.M} != {A.M}")
            delta = hilb_R(down) - hilb_R(up.algebra)
            s.check(
                delta == blowdown_delta() and _coeffs_equal(delta, blowdown_delta(), 0, window),
                lambda: f"mu={mu}, p={p}: delta {delta}",
            )
    s.result.detail.append(f"mu 4..9 x {samples} random points")
    return s.result


def suite_point_tables(window: int = DEFAULT_WINDOW, seed: int = DEFAULT_SEED) -> SuiteResult:
    s = _Suite("point-tables")
    B = TcrDescriptor(Divisor.point(CurvePoint("M", 0), 3))
    q = CurvePoint("A", 0)
    zero, sinv = HilbertSeries.zero(), HilbertSeries.monomial(-1)
    for side in Side:
        sign = 1 if side is Side.RIGHT else -1
        pairs = [(j, q.tau(sign * j)) for j in range(-4, 5)] + [(None, CurvePoint("B", 0))]
        for j, p in pairs:
            P_, Q_ = PointModuleRef(p, side), PointModuleRef(q, side)
            on = j is not None and j >= 0
            s.check(point_hom(B, P_, Q_) == (HilbertSeries.monomial(j) if on else zero), lambda: f"{side} Hom j={j}")
            s.check(
                point_ext1(B, P_, Q_) == (sinv + HilbertSeries.monomial(j) if on else sinv), lambda: f"{side} Ext1 j={j}"
            )
            want = zero if j is None else HilbertSeries.monomial(j)
            s.check(point_qgr_homext(B, P_, Q_) == (want, want), lambda: f"{side} qgr j={j}")
            s.check(point_qgr_ext(B, P_, Q_, 2) == zero, lambda: f"{side} qgr Ext^2 j={j}")
            s.check(leq(point_hom(B, P_, Q_), point_qgr_homext(B, P_, Q_)[0]), lambda: f"{side} gr Hom <= qgr Hom, j={j}")
    return s.result


def suite_intersection(window: int = DEFAULT_WINDOW, seed: int = DEFAULT_SEED) -> SuiteResult:
    s = _Suite("intersection")
    rels = [PairRelation.same_line(), PairRelation.off_orbit()] + [PairRelation.on_orbit(j) for j in range(-5, 6)]
    seen = 0
    for rel in rels:
        for e in ledger(rel):
            seen += 1
            d = e.dot
            s.check(d in (-1, 0, 1), lambda: f"{rel} C={e.C}: dot {d}")
            s.check(d != -1 or rel.kind == "same_line", lambda: f"{rel} C={e.C}: dot -1 on distinct lines")
            # (1-s)X evaluated at s = 1 is the rank of X
            s.check(d == rank_at_one(e.X) == e.X.times_one_minus_s().at_one(), lambda: f"{rel} C={e.C}: rank disagrees")
    s.result.detail.append(f"{seen} (relation, C) cases")
    return s.result


def suite_inference(window: int = DEFAULT_WINDOW, seed: int = DEFAULT_SEED) -> SuiteResult:
    s = _Suite("inference")
    a = infer([Fact(P.EXCEPTIONAL, ("L",)), Fact(P.QGR_SMOOTH, ("R",))])
    s.check(a.status(P.SELF_DOT_MINUS_ONE, "L") is True, lambda: "exceptional + smooth should give (L.L) = -1")
    b = infer([Fact(P.EQ_LINE, ("L",))])
    s.check(len(b.facts) == 1, lambda: f"eq_line alone derived {[str(f) for f in b.derived()]}")
    c = infer([Fact(P.EQ_LINE, ("L",), True, Provenance("cited")), Fact(P.NONSPLIT_SELF_EXT, ("L",), True, Provenance("cited"))])
    s.check(c.status(P.SELF_DOT_MINUS_ONE, "L") is False and not c.contradiction, lambda: "double blowup facts")
    return s.result


def suite_double_blowup(window: int = DEFAULT_WINDOW, seed: int = DEFAULT_SEED) -> SuiteResult:
    s = _Suite("double-blowup")
    r = section9_report()
    s.check(r.degrees == (9, 8, 7), lambda: f"degrees {r.degrees}")
    s.check(r.value("dim J_1") == 6, lambda: f"dim J_1 = {r.value('dim J_1')}")
    s.check(r.value("hilb(Y/R)") == HilbertSeries.monomial(1, 2, 2), lambda: "hilb(Y/R)")
    s.check(r.value("smoothness T(2p)") == "not_smooth", lambda: "T(2p) smoothness")
    s.check(r.final.mu == 8, lambda: f"final degree {r.final.mu}")
    return s.result


def suite_series(window: int = DEFAULT_WINDOW, seed: int = DEFAULT_SEED, samples: int = 500) -> SuiteResult:
    s = _Suite("series")
    rng = random.Random(seed)

    def rand() -> HilbertSeries:
        terms = {rng.randint(-4, 6): rng.randint(-5, 5) for _ in range(rng.randint(0, 4))}
        return HilbertSeries(LaurentPoly(terms), rng.randint(0, 3))

    for _ in range(samples):
        a, b = rand(), rand()
        again = HilbertSeries(a.numerator, a.pole_order)
        s.check(again == a and again.numerator == a.numerator, lambda: f"canonical form of {a} not idempotent")
        sa, sb = a + b, a * b
        for n in range(-10, window + 1):
            s.check(sa.coeff(n) == a.coeff(n) + b.coeff(n), lambda: f"add at {n}: {a}, {b}")
            conv = sum(a.coeff(i) * b.coeff(n - i) for i in range(-10, n + 11))
            s.check(sb.coeff(n) == conv, lambda: f"mul at {n}: {a}, {b}")
    for _ in range(samples // 5):
        q = LaurentPoly({rng.randint(-3, 5): rng.randint(-4, 4) for _ in range(3)})
        h = HilbertSeries(q, 1)
        r = rank_at_one(h)
        top = max(q.max_exp(), 0) if not q.is_zero() else 0
        s.check(all(h.coeff(n) == r for n in range(top, top + 10)), lambda: f"rank_at_one of {h}")
    return s.result


def prime_field_binding(
    rng: random.Random, modulus: int = 2147483647, orbits: str = "AB", horizon: int = 1000
) -> tuple[OracleBinding, str]:
    """A prime-field binding that passed order_guard; returns it with a short description."""
    E = WeierstrassCurve(2, 3, modulus)
    pts = []
    while len(pts) < len(orbits) + 1:
        P_ = lift_x(E, rng.randrange(modulus))
        if P_ is not None and not P_.is_infinity:
            pts.append(P_)
    t, bases = pts[0], dict(zip(orbits, pts[1:]))
    order_guard(E, t, horizon)
    return OracleBinding(E, t, bases), f"y^2 = x^3 + 2x + 3 over F_{modulus}, order_guard horizon {horizon}"


def _random_divisor(rng: random.Random, orbits: str, spread: int, terms: int, mult: int) -> Divisor:
    D = Divisor((CurvePoint(rng.choice(orbits), rng.randint(-spread, spread)), rng.randint(-mult, mult)) for _ in range(terms))
    # force degree 0 through the first orbit
    return D - Divisor.point(CurvePoint(orbits[0], rng.randint(-spread, spread)), D.degree())


def _make_principal(rng: random.Random, D: Divisor, ctx: GenericityContext) -> Divisor:
    """Adjust D so orbit sums and the weighted shift both vanish (in the normalized form)."""
    N = ctx.normalize_divisor(D)
    sums: dict[str, int] = {}
    for p, m in N:
        sums[p.orbit] = sums.get(p.orbit, 0) + m
    fix = Divisor((CurvePoint(o, 0), -m) for o, m in sums.items())
    N = N + fix
    w = sum(p.shift * m for p, m in N)
    anchor = CurvePoint(sorted(sums)[0] if sums else "A", rng.randint(-3, 3))
    # w*([a] - [a+1]) lowers the weighted sum by w
    return N + Divisor({anchor: w}) - Divisor({anchor.tau(1): w})


def oracle_check(
    binding: OracleBinding, ctx: GenericityContext, orbits: str, rng: random.Random, samples: int
) -> tuple[int, int, int, str | None]:
    """(agreements, principal count, total, first disagreement)."""
    agree = principal = 0
    bad = None
    for i in range(samples):
        D = _random_divisor(rng, orbits, 6, rng.randint(1, 4), 3)
        if i % 2:
            D = _make_principal(rng, D, ctx)
        sym = is_principal_symbolic(D, ctx)
        conc = binding.is_identity_sum(D)
        principal += sym
        if sym == conc:
            agree += 1
        elif bad is None:
            bad = f"{D}: symbolic {sym}, concrete {conc}"
    return agree, principal, samples, bad


def suite_oracle(window: int = DEFAULT_WINDOW, seed: int = DEFAULT_SEED, samples: int = 200) -> SuiteResult:
    s = _Suite("oracle")
    rng = random.Random(seed)
    E, t = default_rational_curve()
    order_guard(E, t, 100)
    # E(Q) has rank one, so orbits over Q are multiples of t and must be related
    ctx_q = GenericityContext({"B": ("A", -3)})
    bind_q = OracleBinding(E, t, {"A": t, "B": E.scalar_mul(-2, t)})
    agree, princ, total, bad = oracle_check(bind_q, ctx_q, "AB", rng, samples)
    s.check(agree == total, lambda: f"Q: {bad}")
    s.result.detail.append(f"Q: {agree}/{total} agree, {princ} principal")

    bind_p, desc = prime_field_binding(rng)
    # divisors below have orbit coefficients within 4*3 + 3*4 and shifts within 6
    independence_guard(bind_p.curve, bind_p.bases, bind_p.t, 30, 400)
    ctx_p = GenericityContext()
    agree, princ, total, bad = oracle_check(bind_p, ctx_p, "AB", rng, samples)
    s.check(agree == total, lambda: f"F_p: {bad}")
    s.result.detail.append(f"{desc}: {agree}/{total} agree, {princ} principal")
    return s.result


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "epsilon": suite_epsilon,
    "dual": suite_dual,
    "roundtrip": suite_roundtrip,
    "point-tables": suite_point_tables,
    "intersection": suite_intersection,
    "inference": suite_inference,
    "double-blowup": suite_double_blowup,
    "series": suite_series,
    "oracle": suite_oracle,
}


def run_suite(name: str, window: int = DEFAULT_WINDOW, seed: int = DEFAULT_SEED) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or all")
    start = time.perf_counter()
    res = SUITES[name](window=window, seed=seed)
    res.seconds = time.perf_counter() - start
    return res


def run_all(window: int = DEFAULT_WINDOW, seed: int = DEFAULT_SEED) -> list[SuiteResult]:
    return [run_suite(name, window, seed) for name in SUITES]
