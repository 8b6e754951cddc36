"""Exact-arithmetic workbench for twisted affine Hecke algebras of type A.

Everything is computed over the rationals: Laurent polynomials in the
deformation variable v, the group algebra of the cocharacter lattice Z^n,
and explicit matrix modules at a rational specialization v = q.  No floats.
"""

from heckewb.scalars import Scalar, GroupAlgebraElement, RationalFunction
from heckewb.weyl import ExtendedWeylElement
from heckewb.hecke import HeckeElement
from heckewb.params import Segment, Multisegment, EnhancedParameter

__all__ = [
    "Scalar",
    "GroupAlgebraElement",
    "RationalFunction",
    "ExtendedWeylElement",
    "HeckeElement",
    "Segment",
    "Multisegment",
    "EnhancedParameter",
]

__version__ = "0.1.0"
