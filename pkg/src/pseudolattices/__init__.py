"""Exact calculus of surface-like pseudolattices."""

from .errors import (
    AmbiguousPoint,
    ConsistencyError,
    DefectNonzero,
    DefectUndefined,
    HypothesisError,
    NotExceptional,
    NotSurfaceLike,
    PseudolatticeError,
)
from .exceptional import (
    ExceptionalBasis,
    MutationWord,
    apply_word,
    helix_element,
    is_exceptional_sequence,
    mutate_basis,
    mutate_element,
    norm,
    norm_minimize,
    reduce_ranks,
)
from .lattice import (
    Pseudolattice,
    SurfaceStructure,
    canonical_class,
    detect_surface_like,
    invariants_report,
    minimality,
    neron_severi,
    rank_of,
    serre_operator,
    surface_structure,
)
from .linalg import saturated_kernel, signature, smith_normal_form, solve_rational
from .mmp import classify_minimal, contract, minimal_model, vial_criterion
from .models import build, known_basis, surface_model
from .toric import fan_of, polygon_report, toric_system_of, verify_toric_system

__version__ = "0.1.0"

__all__ = [
    "AmbiguousPoint",
    "ConsistencyError",
    "DefectNonzero",
    "DefectUndefined",
    "ExceptionalBasis",
    "HypothesisError",
    "MutationWord",
    "NotExceptional",
    "NotSurfaceLike",
    "Pseudolattice",
    "PseudolatticeError",
    "SurfaceStructure",
    "apply_word",
    "build",
    "canonical_class",
    "classify_minimal",
    "contract",
    "detect_surface_like",
    "fan_of",
    "helix_element",
    "invariants_report",
    "is_exceptional_sequence",
    "known_basis",
    "minimal_model",
    "minimality",
    "mutate_basis",
    "mutate_element",
    "neron_severi",
    "norm",
    "norm_minimize",
    "polygon_report",
    "rank_of",
    "reduce_ranks",
    "saturated_kernel",
    "serre_operator",
    "signature",
    "smith_normal_form",
    "solve_rational",
    "surface_model",
    "surface_structure",
    "toric_system_of",
    "verify_toric_system",
    "vial_criterion",
]
