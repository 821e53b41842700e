"""Constantly curved holomorphic two-spheres in G(2, n+2): exact verification
of the defining polynomial identities, the classified degree-4 family, and a
numerical search over the coefficient constraint system."""

from .curve import (
    ConstraintMatrices,
    CurveForm,
    CurveInvariants,
    assemble_constraints,
    check_constraints,
    frames,
    invariant_chain,
    is_reducible,
    load_curve,
    normalize_span,
    plucker_surface,
    ramification,
    save_curve,
    second_wedge,
)
from .exterior import KVector, kv_inner, wedge
from .family import (
    FamilyParam,
    family_curve,
    family_invariants,
    jiao_curve,
    jiao_detA1_check,
)
from .polysurface import (
    HermitianSurface,
    PolyKVector,
    common_roots,
    herm_surface,
    match_binomial,
    pv_derivative,
    pv_wedge,
    surface_eval,
)
from .scalars import RadicalComplex, RadicalScalar
from .solver import Problem, Solution, gradient, match_family, residual, solve
from .veronese import (
    f_closed,
    f_gram_schmidt,
    osculating_degree,
    reducible_type_a,
    reducible_type_b,
    sequence_constants,
    v0,
)

__all__ = [
    "ConstraintMatrices",
    "CurveForm",
    "CurveInvariants",
    "FamilyParam",
    "HermitianSurface",
    "KVector",
    "PolyKVector",
    "Problem",
    "RadicalComplex",
    "RadicalScalar",
    "Solution",
    "assemble_constraints",
    "check_constraints",
    "common_roots",
    "f_closed",
    "f_gram_schmidt",
    "family_curve",
    "family_invariants",
    "frames",
    "gradient",
    "herm_surface",
    "invariant_chain",
    "is_reducible",
    "jiao_curve",
    "jiao_detA1_check",
    "kv_inner",
    "load_curve",
    "match_binomial",
    "match_family",
    "normalize_span",
    "osculating_degree",
    "plucker_surface",
    "pv_derivative",
    "pv_wedge",
    "ramification",
    "reducible_type_a",
    "reducible_type_b",
    "residual",
    "save_curve",
    "second_wedge",
    "sequence_constants",
    "solve",
    "surface_eval",
    "v0",
    "wedge",
]
