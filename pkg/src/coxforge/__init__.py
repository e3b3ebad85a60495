"""Exact Cox ring computations for du Val (ADE) surface singularity resolutions.

The package builds resolution dual graphs, computes their multigraded
invariant rings by exact Hilbert-basis methods, assembles candidate Cox ring
presentations, and audits the divisor-reduction equivalences step by step
with truncated cokernel dimensions.
"""

__version__ = "0.1.0"

from .cox import (
    presentation_from_graph,
    relation_from_graph,
    verify_presentation,
)
from .errors import (
    CoxforgeError,
    HypothesisViolationError,
    ParameterError,
    ResourceCapError,
    UnsupportedGraphError,
)
from .graphs import ResolutionGraph, build_custom_tree, build_singularity
from .invariants import degree_zero_hilbert_basis, verify_invariant_table
from .reduction import (
    audit_add_curve,
    full_equivalence_audit,
    reduce_nef_to_basic,
    reduce_to_nef,
)

__all__ = [
    "CoxforgeError",
    "HypothesisViolationError",
    "ParameterError",
    "ResolutionGraph",
    "ResourceCapError",
    "UnsupportedGraphError",
    "__version__",
    "audit_add_curve",
    "build_custom_tree",
    "build_singularity",
    "degree_zero_hilbert_basis",
    "full_equivalence_audit",
    "presentation_from_graph",
    "reduce_nef_to_basic",
    "reduce_to_nef",
    "relation_from_graph",
    "verify_invariant_table",
    "verify_presentation",
]
