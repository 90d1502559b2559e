"""
Value types: power series, spin labels, series matrices, tables and polynomials
"""

from src.models.matrices import RepMatrix
from src.models.polynomials import MonomialExpansion, MonomialPoly, Mq2Poly, PlanePoly
from src.models.series import DEFAULT_ORDER, HSeries, exp_h
from src.models.spins import Generator, SpinLabel, coupled_spins
from src.models.tables import CGTable, TwistRep

__all__ = [
    "DEFAULT_ORDER",
    "CGTable",
    "Generator",
    "HSeries",
    "MonomialExpansion",
    "MonomialPoly",
    "Mq2Poly",
    "PlanePoly",
    "RepMatrix",
    "SpinLabel",
    "TwistRep",
    "coupled_spins",
    "exp_h",
]
