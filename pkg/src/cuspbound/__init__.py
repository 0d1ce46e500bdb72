"""Exact upper bounds for the entropy in the cusp of diagonal flows on SL_d(R)/SL_d(Z)."""

from .flow import (
    BlockComposition,
    FlowVector,
    LinearFunctional,
    canonicalize_flow,
    entropy_on_pairs,
    format_rational,
    parabolic_entropy_split,
    parse_rational,
    parse_vector,
    project_pi,
    psi_k,
    total_entropy,
)
from .weyl import CosetClass, WeylElement, apply_weyl, canonical_rep, enumerate_cosets, transposition_delta
from .hull import crossing_edge, iota, reflect_k, slope_budget, tau_sequence, upper_boundary
from .bounds import (
    bound_report,
    borel_bound,
    borel_functional,
    compute_m_k,
    maximal_parabolic_bound,
    phi_all,
    whole_cusp_bound,
)

__version__ = "0.1.0"
