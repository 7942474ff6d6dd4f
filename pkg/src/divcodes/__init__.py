"""Divisible linear codes over finite fields: which effective lengths exist,
explicit constructions, verification and small-scale exhaustive search."""

from .codes import (
    LinearCode,
    code_from_multiset,
    format_matrix,
    is_projective,
    is_spanning_code,
    multiset_from_code,
    parse_matrix,
    weight_distribution,
    weight_divisibility,
)
from .expansion import (
    DivParams,
    Expansion,
    base_sequence,
    coin_representable,
    cross_sum,
    expand,
    feasible,
    feasible_general,
    frobenius_number,
    gaussian,
    sylvester,
)
from .geometry import (
    PointMultiset,
    Subspace,
    baer_construction,
    construct_from_expansion,
    decompose_line_multiset,
    enumerate_points,
    hyperoval,
    is_divisible,
    line_profile,
    project,
    restrict_hyperplane,
    small_hyperplane,
    two_lines_construction,
)
from .gf import GF, FieldElement, FieldError, FieldSpec, field_new
from .search import (
    ClassificationResult,
    SearchResult,
    SearchSpec,
    canonical_form,
    classify,
    exists_divisible_set,
    uniqueness_check,
)

__version__ = "0.1.0"

__all__ = [
    "ClassificationResult",
    "DivParams",
    "Expansion",
    "FieldElement",
    "FieldError",
    "FieldSpec",
    "GF",
    "LinearCode",
    "PointMultiset",
    "SearchResult",
    "SearchSpec",
    "Subspace",
    "baer_construction",
    "base_sequence",
    "canonical_form",
    "classify",
    "code_from_multiset",
    "coin_representable",
    "construct_from_expansion",
    "cross_sum",
    "decompose_line_multiset",
    "enumerate_points",
    "exists_divisible_set",
    "expand",
    "feasible",
    "feasible_general",
    "field_new",
    "format_matrix",
    "frobenius_number",
    "gaussian",
    "hyperoval",
    "is_divisible",
    "is_projective",
    "is_spanning_code",
    "line_profile",
    "multiset_from_code",
    "parse_matrix",
    "project",
    "restrict_hyperplane",
    "small_hyperplane",
    "sylvester",
    "two_lines_construction",
    "uniqueness_check",
    "weight_distribution",
    "weight_divisibility",
]
