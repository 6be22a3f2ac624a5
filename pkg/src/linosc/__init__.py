"""Exact tools for deciding whether an osculating linear space lies on a variety."""

from .corpus import corpus_variety, pencil_normal_form, random_variety
from .errors import (DimensionMismatch, InvalidParameters, LinoscError, NotAPencilOnHyperplane,
                     NotOnVariety, NotOsculatingOrder1, NotOsculatingOrder2, PairingDegenerate, ParseError,
                     PreconditionFailed, SingularOrExcessCodim)
from .linalg import ExactMatrix, exact_kernel, exact_rank
from .osculation import (branch_threshold, decide, gauss_fiber_in_L, generic_threshold, genericity_check,
                         osculation_order, thm5_tilde_R, tilde_R_report)
from .parser import parse_poly
from .polynomial import MultiPoly
from .quadrics import (QuadricSystem, base_locus_contains, classify_pencil_with_hyperplane_base,
                       fundamental_form, lemma_singloc_check, prolongation, second_fundamental_system,
                       singular_locus)
from .variety import (GraphJet, ImplicitVariety, LinearSpace, adapt_to_linear_space, contains_linear_space,
                      graph_variety, implicit_to_graph, project_to_hypersurface, validate_smooth_point)
from .verify import TrialReport, verify_theorem

__version__ = "0.1.0"

__all__ = [
    "DimensionMismatch", "ExactMatrix", "GraphJet", "ImplicitVariety", "InvalidParameters", "LinearSpace",
    "LinoscError", "MultiPoly", "NotAPencilOnHyperplane", "NotOnVariety", "NotOsculatingOrder1",
    "NotOsculatingOrder2", "PairingDegenerate", "ParseError", "PreconditionFailed", "QuadricSystem",
    "SingularOrExcessCodim", "TrialReport", "adapt_to_linear_space", "base_locus_contains", "branch_threshold",
    "classify_pencil_with_hyperplane_base", "contains_linear_space", "corpus_variety", "decide",
    "exact_kernel", "exact_rank", "fundamental_form", "gauss_fiber_in_L", "generic_threshold",
    "genericity_check", "graph_variety", "implicit_to_graph", "lemma_singloc_check", "osculation_order",
    "parse_poly", "pencil_normal_form", "project_to_hypersurface", "prolongation", "random_variety",
    "second_fundamental_system", "singular_locus", "thm5_tilde_R", "tilde_R_report", "validate_smooth_point", "verify_theorem",
]
