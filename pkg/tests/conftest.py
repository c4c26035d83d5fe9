import pytest

from ellalg.elliptic_curve import CurvePoint, Divisor
from ellalg.surface import AlgebraDescriptor, Smoothness
from ellalg.tcr import TcrDescriptor


@pytest.fixture
def make_algebra():
    def make(mu: int, name: str = "R", smoothness: Smoothness = Smoothness.UNKNOWN) -> AlgebraDescriptor:
        return AlgebraDescriptor(TcrDescriptor(Divisor.point(CurvePoint("O", 0), mu)), name, smoothness)

    return make
