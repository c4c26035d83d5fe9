import pytest

from ellalg.elliptic_curve import CurvePoint, Divisor, GenericityContext
from ellalg.hilbert_series import HilbertSeries as H
from ellalg.tcr import (
    PointModuleRef,
    PreconditionError,
    SaturatedModuleRef,
    Side,
    TcrDescriptor,
    h0,
    hilb_B,
    hom_saturated,
    point_dual,
    point_ext1,
    point_hom,
    point_qgr_ext,
    point_qgr_homext,
    truncate_shift,
)

O, A, B_ = CurvePoint("O", 0), CurvePoint("A", 0), CurvePoint("B", 0)


def tcr(mu: int, ctx: GenericityContext | None = None) -> TcrDescriptor:
    return TcrDescriptor(Divisor.point(O, mu)) if ctx is None else TcrDescriptor(Divisor.point(O, mu), ctx)


def test_h0_riemann_roch():
    assert h0(Divisor.point(A, 3)) == 3
    assert h0(Divisor.point(A, -1)) == 0
    assert h0(Divisor()) == 1
    assert h0(Divisor.point(A.tau(1)) - Divisor.point(A)) == 0
    assert h0(Divisor.point(A) - Divisor.point(B_)) == 0
    ctx = GenericityContext({"B": ("A", 2)})
    assert h0(Divisor.point(B_.tau(-2)) - Divisor.point(A), ctx) == 1
    assert h0(Divisor.point(B_.tau(2)) - Divisor.point(A), ctx) == 0


@pytest.mark.parametrize("mu, head", [(9, [1, 9, 18, 27]), (1, [1, 1, 2, 3]), (3, [1, 3, 6, 9])])
def test_hilb_B(mu, head):
    assert hilb_B(tcr(mu)).coefficients(0, 3) == head
    assert hilb_B(tcr(mu)).coeff(-1) == 0


def test_degree_must_be_positive():
    with pytest.raises(PreconditionError):
        TcrDescriptor(Divisor())


@pytest.mark.parametrize("mu", [3, 7, 9])
def test_epsilon_identity(mu):
    B = tcr(mu)
    base = hilb_B(B)
    for p, q, eps in [(A, A, 1), (A.tau(3), A, 0), (A, B_, 0)]:
        got = hom_saturated(B, SaturatedModuleRef(-Divisor.point(p)), SaturatedModuleRef(-Divisor.point(q))).series
        want = base - 1 + eps
        assert got == want
        assert got.coefficients(0, 50) == want.coefficients(0, 50)


def test_hom_rows_audit_matches_series():
    B = tcr(3)
    hom = hom_saturated(B, SaturatedModuleRef(Divisor.point(A, 4)), SaturatedModuleRef(Divisor.point(A)))
    assert hom.first_degree == 1 and hom.stable_from == 2
    for row in hom.rows(12):
        assert hom.series.coeff(row.n) == row.h0
        assert row.divisor.degree() == 3 * row.n - 3
    assert hom.series.coeff(0) == 0


def test_hom_of_equal_twist_is_hilb_B():
    B = tcr(4)
    F = Divisor.point(A, 2) - Divisor.point(B_)
    assert hom_saturated(B, SaturatedModuleRef(F), SaturatedModuleRef(F)).series == hilb_B(B)


def test_point_tables_right():
    B = tcr(3)
    q = PointModuleRef(A)
    assert point_hom(B, PointModuleRef(A.tau(2)), q) == H.monomial(2)
    assert point_hom(B, PointModuleRef(A.tau(-2)), q) == H.zero()
    assert point_ext1(B, PointModuleRef(A.tau(2)), q) == H.monomial(-1) + H.monomial(2)
    assert point_ext1(B, PointModuleRef(B_), q) == H.monomial(-1)
    assert point_qgr_homext(B, PointModuleRef(A.tau(-2)), q) == (H.monomial(-2), H.monomial(-2))
    assert point_qgr_homext(B, PointModuleRef(B_), q) == (H.zero(), H.zero())
    assert point_qgr_ext(B, PointModuleRef(A), q, 3) == H.zero()


def test_point_tables_left_use_inverse_tau():
    B = tcr(3)
    q = PointModuleRef(A, Side.LEFT)
    assert point_hom(B, PointModuleRef(A.tau(-2), Side.LEFT), q) == H.monomial(2)
    assert point_hom(B, PointModuleRef(A.tau(2), Side.LEFT), q) == H.zero()


def test_shifts():
    B = tcr(3)
    p, q = PointModuleRef(A, shift=1), PointModuleRef(A)
    assert point_hom(B, p, q) == H.monomial(1)
    assert point_ext1(B, p, q) == H.monomial(0) + H.monomial(1)


def test_degree_preconditions():
    B = tcr(2)
    with pytest.raises(PreconditionError):
        point_hom(B, PointModuleRef(A), PointModuleRef(A))
    assert point_qgr_homext(B, PointModuleRef(A), PointModuleRef(A))[0] == H.one()
    with pytest.raises(PreconditionError):
        point_hom(tcr(3), PointModuleRef(A), PointModuleRef(A, Side.LEFT))


def test_truncate_shift():
    assert truncate_shift(PointModuleRef(A, Side.RIGHT, 3)) == PointModuleRef(A.tau(3))
    assert truncate_shift(PointModuleRef(A, Side.LEFT, 3)) == PointModuleRef(A.tau(-3), Side.LEFT)
    with pytest.raises(PreconditionError):
        truncate_shift(PointModuleRef(A, shift=-1))


def test_point_dual():
    B = tcr(3)
    d = point_dual(B, PointModuleRef(A))
    assert d == PointModuleRef(A.tau(-2), Side.LEFT, -1)
    assert point_dual(B, PointModuleRef(A, Side.LEFT)) == PointModuleRef(A.tau(2), Side.RIGHT, -1)
    with pytest.raises(PreconditionError):
        point_dual(B, d)
