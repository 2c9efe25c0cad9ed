"""Exact lower central series invariants of graded associative algebras."""
from .chardec import Character, SchurDecomp, character_of, decompose, kerchev_bound, schur_expand
from .forms import Form, fedosov_mul, fs_kernel, fs_map
from .freealg import Derivation, GeneratorSpec, NCPoly, WordIndex, commutator
from .hilbert import SeriesFit, fit_series
from .lcs import DimTable, InvariantViolation, LCSEngine, Presentation, dim_table, verify_containments
from .linalg import EchelonBasis, QuotientSpace, echelonize, intersection, member
from .parser import ParseError, format_presentation, parse_presentation
from .star import StandardFiber, standard_fiber, star_mul

__all__ = [
    "Character", "SchurDecomp", "character_of", "decompose", "kerchev_bound", "schur_expand",
    "Form", "fedosov_mul", "fs_kernel", "fs_map",
    "Derivation", "GeneratorSpec", "NCPoly", "WordIndex", "commutator",
    "SeriesFit", "fit_series",
    "DimTable", "InvariantViolation", "LCSEngine", "Presentation", "dim_table", "verify_containments",
    "EchelonBasis", "QuotientSpace", "echelonize", "intersection", "member",
    "ParseError", "format_presentation", "parse_presentation",
    "StandardFiber", "standard_fiber", "star_mul",
]
