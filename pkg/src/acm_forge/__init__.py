"""Exact computations with ACM bundles and subvarieties on hypersurfaces."""

from .constructions import (QuestionCertificate, RetryBoundExceeded, VoisinConfig, bundle_of_ideal,
                            kleiman_locus, linear_space_bundle, voisin_build)
from .field import Field, StructuralError
from .groebner import GroebnerBasis, InvariantViolation, buchberger, module_gb, syzygy_module
from .ideals import (Ideal, colon, dimension, ideal_meet, irrelevant_ideal, is_smooth_hypersurface,
                     saturate)
from .invariants import ChernData, HilbertData, chern_degrees, divisibility_report, hilbert
from .matrix import GradedFreeModule, GradedMatrix, matrix_determinant
from .mcm import (AcmCertificate, MatrixFactorization, PreconditionError, SplitReport, acm_certify,
                  h0_twist, mf_extract, split_detect)
from .poly import GradedRing, ParseError, Poly, format_poly
from .resolution import BettiTable, PresentedModule, Resolution, minimal_resolution

__version__ = "0.1.0"

__all__ = [
    "AcmCertificate", "BettiTable", "ChernData", "Field", "GradedFreeModule", "GradedMatrix",
    "GradedRing", "GroebnerBasis", "HilbertData", "Ideal", "InvariantViolation",
    "MatrixFactorization", "ParseError", "Poly", "PreconditionError", "PresentedModule",
    "QuestionCertificate", "Resolution", "RetryBoundExceeded", "SplitReport", "StructuralError",
    "VoisinConfig", "acm_certify", "buchberger", "bundle_of_ideal", "chern_degrees", "colon",
    "dimension", "divisibility_report", "format_poly", "h0_twist", "hilbert", "ideal_meet",
    "irrelevant_ideal", "is_smooth_hypersurface", "kleiman_locus", "linear_space_bundle",
    "matrix_determinant", "mf_extract", "minimal_resolution", "module_gb", "saturate",
    "split_detect", "syzygy_module", "voisin_build",
]
