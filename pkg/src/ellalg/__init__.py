"""Exact Hilbert-series and divisor bookkeeping for elliptic algebras and their blowups."""
from .elliptic_curve import GENERIC, CurvePoint, Divisor, GenericityContext, is_principal, parse_divisor, parse_point
from .hilbert_series import UNDEFINED, HilbertSeries, LaurentPoly, coeff, leq, parse_series, rank_at_one
from .tcr import PointModuleRef, PreconditionError, SaturatedModuleRef, Side, TcrDescriptor, h0, hilb_B, hom_saturated
from .surface import AlgebraDescriptor, InconsistencyError, LineModuleRef, Smoothness, blowdown, blowup, hilb_R

__all__ = [
    "GENERIC",
    "CurvePoint",
    "Divisor",
    "GenericityContext",
    "is_principal",
    "parse_divisor",
    "parse_point",
    "UNDEFINED",
    "HilbertSeries",
    "LaurentPoly",
    "coeff",
    "leq",
    "parse_series",
    "rank_at_one",
    "PointModuleRef",
    "PreconditionError",
    "SaturatedModuleRef",
    "Side",
    "TcrDescriptor",
    "h0",
    "hilb_B",
    "hom_saturated",
    "AlgebraDescriptor",
    "InconsistencyError",
    "LineModuleRef",
    "Smoothness",
    "blowdown",
    "blowup",
    "hilb_R",
]
