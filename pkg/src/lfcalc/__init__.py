"""Local factors, zeta integrals and the weight combinatorics of Shalika-type periods for GL_m."""
from __future__ import annotations

from . import branching, cohomweights, factorcalc, fieldchar, meromorph, schwartz, zetaverify
from .fieldchar import AddChar, LocalField, MultChar, COMPLEX, REAL, padic
from .meromorph import MeroFactor, tate_L, tate_eps, tate_gamma
from .factorcalc import InducedTuple, tuple_from_exponents
from .zetaverify import VerifyReport, DomainError

__version__ = "0.1.0"

__all__ = [
    "branching", "cohomweights", "factorcalc", "fieldchar", "meromorph", "schwartz", "zetaverify",
    "AddChar", "LocalField", "MultChar", "COMPLEX", "REAL", "padic", "MeroFactor", "tate_L",
    "tate_eps", "tate_gamma", "InducedTuple", "tuple_from_exponents", "VerifyReport", "DomainError",
]
