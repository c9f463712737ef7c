"""Exact computations of Koszul grade, height and Cohen-Macaulayness for amalgamated algebras."""

__version__ = "0.1.0"

from .errors import (AmalgradeError, AmbientMismatch, InvalidInput, NotDecidable, ParseError,
                     ResourceError, ZeroPolynomialError)
from .fields import GF, QQ, PrimeField, RationalField
from .poly import DEGREVLEX, LEX, MonomialOrder, Polynomial, PolyRing, block_order
from .rings import IdealHandle, RingMap, RingPresentation, polynomial_ring
from .modules import FPModule, free_module, ideal_as_module, quotient_module
from .invariants import (ext_grade, height, koszul_grade, krull_dim, minimal_primes)
from .amalgamation import (AmalgamDatum, AmalgamRing, build_amalgamation, duplication,
                           trivial_extension, verify_generation)
from .checkers import IdealFamily, CMReport, cm_in_sense_of

__all__ = [
    "__version__", "AmalgradeError", "AmbientMismatch", "InvalidInput", "NotDecidable",
    "ParseError", "ResourceError", "ZeroPolynomialError", "GF", "QQ", "PrimeField",
    "RationalField", "DEGREVLEX", "LEX", "MonomialOrder", "Polynomial", "PolyRing",
    "block_order", "IdealHandle", "RingMap", "RingPresentation", "polynomial_ring", "FPModule",
    "free_module", "ideal_as_module", "quotient_module", "ext_grade", "height", "koszul_grade",
    "krull_dim", "minimal_primes", "AmalgamDatum", "AmalgamRing", "build_amalgamation",
    "duplication", "trivial_extension", "verify_generation", "IdealFamily", "CMReport",
    "cm_in_sense_of",
]
