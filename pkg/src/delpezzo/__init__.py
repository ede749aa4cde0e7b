"""Exact-arithmetic engine for log del Pezzo surfaces of fixed index.

The package models nonsingular rational surfaces as blow-up tapes over
P^2 or a Hirzebruch surface, realizes curvilinear zero-dimensional
subschemes and their eliminations, descends fundamental multiplets to
basic pairs, computes exact anticanonical volumes and Gorenstein
indices, cross-checks everything against toric models, and enumerates
all surfaces of index a with volume at least 2a.
"""

from .lattice import (
    DivisorClass,
    Divisor,
    SurfaceModel,
    StructuralError,
    InvalidPointError,
    GenericPoint,
    OnCurvePoint,
    NodePoint,
)
from .elimination import (
    Subscheme,
    OnCurveDatum,
    NodeDatum,
    FreeDatum,
    eliminate,
    transform,
    check_psi_nef,
)
from .multiplet import (
    BasicPair,
    FundamentalMultiplet,
    Ladder,
    build_ladder,
    descend,
    volume,
    check_basic_pair,
    nef_certificate,
    identities_check,
    index_of,
    certificate_index_is_a,
    local_lemma_checks,
)
from .toric import Fan2D, hj_resolve, anticanonical_square, gorenstein_index, family_fan
from .enumerator import classify, audit, canonical_form

__version__ = "0.1.0"

__all__ = [
    "DivisorClass",
    "Divisor",
    "SurfaceModel",
    "StructuralError",
    "InvalidPointError",
    "GenericPoint",
    "OnCurvePoint",
    "NodePoint",
    "Subscheme",
    "OnCurveDatum",
    "NodeDatum",
    "FreeDatum",
    "eliminate",
    "transform",
    "check_psi_nef",
    "BasicPair",
    "FundamentalMultiplet",
    "Ladder",
    "build_ladder",
    "descend",
    "volume",
    "check_basic_pair",
    "nef_certificate",
    "identities_check",
    "index_of",
    "certificate_index_is_a",
    "local_lemma_checks",
    "Fan2D",
    "hj_resolve",
    "anticanonical_square",
    "gorenstein_index",
    "family_fan",
    "classify",
    "audit",
    "canonical_form",
]
