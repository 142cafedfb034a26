"""Exact genus-zero characteristic numbers for split bundles over products
of projective spaces, with an independent fixed-point oracle for low degrees.
"""

from .geometry import (
    GeometrySpec,
    LineBundleSpec,
    parse_spec,
    serialize_spec,
    validate,
)
from .localization import (
    WeightSample,
    oracle_invariant,
    oracle_invariant_checked,
    quintic_lines_schubert,
    sample_weights,
)
from .mirror import (
    ExtractionError,
    InvariantTable,
    MirrorInconsistencyError,
    MirrorMap,
    extract_invariants,
    one_pointed,
    solve_mirror_map,
    two_pointed,
    verify_all,
)

__all__ = [
    "GeometrySpec",
    "LineBundleSpec",
    "parse_spec",
    "serialize_spec",
    "validate",
    "WeightSample",
    "oracle_invariant",
    "oracle_invariant_checked",
    "quintic_lines_schubert",
    "sample_weights",
    "ExtractionError",
    "InvariantTable",
    "MirrorInconsistencyError",
    "MirrorMap",
    "extract_invariants",
    "one_pointed",
    "solve_mirror_map",
    "two_pointed",
    "verify_all",
]
