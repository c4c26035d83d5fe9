import random

import pytest

from ellalg.elliptic_curve import CurvePoint, Divisor
from ellalg.hilbert_series import HilbertSeries as H, LaurentPoly
from ellalg.inference import P, Fact
from ellalg.surface import (
    AlgebraDescriptor,
    InconsistencyError,
    LineModuleRef,
    Pdim,
    Smoothness,
    blowdown,
    blowdown_delta,
    blowup,
    hilb_R,
    hom_J_R_series,
    line_dual,
    line_hom,
    line_ideal_series,
    smoothness_step,
    tilde_series,
)
from ellalg.tcr import PreconditionError, Side, TcrDescriptor

A = CurvePoint("A", 0)


def test_hilb_R(make_algebra):
    assert hilb_R(make_algebra(9)).coefficients(0, 3) == [1, 10, 28, 55]
    assert hilb_R(make_algebra(7)).coeff(2) == 22
    assert line_ideal_series(make_algebra(9)).coeff(1) == 8


def test_degree_floor(make_algebra):
    with pytest.raises(PreconditionError):
        make_algebra(2)


def test_hom_J_R(make_algebra):
    R = make_algebra(7)
    assert hom_J_R_series(R, LineModuleRef("L", A)).coeff(1) == 9
    with pytest.raises(PreconditionError):
        hom_J_R_series(R, LineModuleRef("L", A, shift=1))


def test_line_dual_involution():
    L = LineModuleRef("L", A)
    d = line_dual(L)
    assert d == LineModuleRef("L^v", A.tau(-1), Side.LEFT, -1)
    assert line_dual(d) == L
    assert d.hilb == H.monomial(1, 1, 2)


def test_blowup_then_blowdown(make_algebra):
    R = make_algebra(5, smoothness=Smoothness.SMOOTH)
    up = blowup(R, A, pdim=Pdim.FINITE)
    assert up.algebra.mu == 4
    assert up.exceptional.div_point == A.tau(1)
    assert up.algebra.smoothness is Smoothness.SMOOTH
    assert up.algebra.closure().status(P.EQ_LINE, up.exceptional.line_id) is True
    down = blowdown(up.algebra, up.exceptional.line_id)
    assert down == R
    assert hilb_R(down) - hilb_R(up.algebra) == blowdown_delta() == H.monomial(1, 1, 3)


def test_blowup_degree_bound(make_algebra):
    R = make_algebra(4)
    R3 = blowup(R, A).algebra
    assert R3.mu == 3
    with pytest.raises(PreconditionError):
        blowup(R3, A)


def test_random_round_trips():
    rng = random.Random(7)
    for mu in range(4, 10):
        M = Divisor((CurvePoint(rng.choice("XYZ"), rng.randint(-3, 3)), 1) for _ in range(mu))
        R = AlgebraDescriptor(TcrDescriptor(M), "A")
        for _ in range(10):
            p = CurvePoint(rng.choice("XYZ"), rng.randint(-5, 5))
            up = blowup(R, p)
            assert blowdown(up.algebra, up.exceptional) == R


def test_blowdown_needs_eq_line(make_algebra):
    R = make_algebra(5).with_line(LineModuleRef("L", A))
    with pytest.raises(PreconditionError):
        blowdown(R, "L")
    R2 = R.with_facts([Fact(P.EQ_LINE, ("L",))])
    assert blowdown(R2, "L").M == R.M + Divisor.point(A.tau(-1))


def test_blowdown_refuses_contradiction(make_algebra):
    R = make_algebra(5).with_line(LineModuleRef("L", A)).with_facts(
        [Fact(P.EXCEPTIONAL, ("L",)), Fact(P.EQ_LINE, ("L",), False)]
    )
    with pytest.raises(InconsistencyError):
        blowdown(R, "L")


def test_smoothness_step():
    assert smoothness_step(Smoothness.SMOOTH, Pdim.FINITE) is Smoothness.SMOOTH
    assert smoothness_step(Smoothness.SMOOTH, Pdim.INFINITE) is Smoothness.NOT_SMOOTH
    assert smoothness_step(Smoothness.SMOOTH, Pdim.UNKNOWN) is Smoothness.UNKNOWN
    assert smoothness_step(Smoothness.NOT_SMOOTH, Pdim.FINITE) is Smoothness.NOT_SMOOTH


def test_repeated_blowup_carries_line(make_algebra):
    R = make_algebra(9, smoothness=Smoothness.SMOOTH)
    first = blowup(R, A, line_id="L1")
    second = blowup(first.algebra, A, line_id="L2")
    ids = {l.line_id for l in second.algebra.lines}
    assert ids == {"L1", "L2"}
    assert second.algebra.closure().status(P.ISOMORPHIC, "L2", "L1") is True


def test_line_hom(make_algebra):
    R = make_algebra(5)
    L1, L2 = LineModuleRef("L1", A.tau(2)), LineModuleRef("L2", A)
    h = line_hom(R, L1, L2)
    assert h.conditional and h.series == H.monomial(2, 1, 1)
    assert line_hom(R, L2, L1).series.is_zero()
    assert line_hom(R, L1, L1).series == H.geometric(1)


def test_tilde_series(make_algebra):
    R = make_algebra(7)
    L = LineModuleRef("L", A)
    rep = tilde_series(R, L, hilb_R(R), LaurentPoly({1: 2}))
    assert rep.extension - hilb_R(R) == H.monomial(1, 2, 2)
    assert rep.ext1 == H.monomial(1, 2, 1)
    with pytest.raises(PreconditionError):
        tilde_series(R, L, hilb_R(R), LaurentPoly({1: -1}))
