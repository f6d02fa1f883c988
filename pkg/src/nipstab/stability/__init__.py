"""Direct-method stability machinery for inner product and n-inner product preserving maps."""

from .control import (ControlFunction, PhiTilde, Scheme, closed_form_bound, dominating_terms,
                      gap_bound, jun_lee_bound, phi_tilde, scheme_bound, tail_bound)
from .defects import (defect_cauchy, defect_jensen, defect_n_orthogonality,
                      defect_orthogonality)
from .direct import (ApproximationRun, PreservationReport, approximant, certify_linearity,
                     certify_preservation, direct_method, direct_method_batch, iterate_stack,
                     preservation_decay)
from .maps import (PerturbedMap, make_perturbed_map, orthogonality_excess, sample_points,
                   unit_scalars, verify_mode)

__all__ = [
    "ApproximationRun", "ControlFunction", "PerturbedMap", "PhiTilde", "PreservationReport",
    "Scheme", "approximant", "certify_linearity", "certify_preservation", "closed_form_bound",
    "defect_cauchy", "defect_jensen", "defect_n_orthogonality", "defect_orthogonality",
    "direct_method", "direct_method_batch", "dominating_terms", "gap_bound", "iterate_stack",
    "jun_lee_bound", "make_perturbed_map", "orthogonality_excess", "phi_tilde",
    "preservation_decay", "sample_points", "scheme_bound",
    "tail_bound", "unit_scalars", "verify_mode",
]
