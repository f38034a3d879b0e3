"""Boolean functions with nearly flat Walsh spectra.

Constructions based on multiplicative coset structure in GF(2^n), exact
integer Walsh spectra, Gauss sums with closed forms over Q(sqrt(-7)),
and discrepancy-certified sign selection.
"""

__version__ = "0.1.0"

from .gf2n import FieldContext, coset_label, make_field, mul, norm_to_subfield, psi, trace
from .boolfun import (
    SignFunction,
    WalshSpectrum,
    affine_distance_profile,
    is_balanced,
    lift_two,
    mu_value,
    rho_exhaustive,
    sign_function,
    walsh_transform,
)
from .charsums import (
    CosetPsiVector,
    MultChar,
    QuadInt7,
    closed_form_gauss,
    coset_psi_vector,
    davenport_hasse_check,
    find_good_s,
    gauss_sum,
    ord_check,
)
from .construct import (
    CosetSystem,
    GAssignment,
    assemble,
    balance_h,
    default_g,
    g_assignment,
    make_coset_system,
    measure_construction,
    me_decomposition,
    me_sweep,
    random_g,
    split,
)
from .discrepancy import (
    SignProblem,
    SignSolution,
    certify,
    coset_sign_search,
    make_sign_problem,
    solve_localsearch,
    solve_random,
    spencer_bound,
)

__all__ = [
    "FieldContext", "make_field", "mul", "trace", "psi", "coset_label",
    "norm_to_subfield",
    "SignFunction", "WalshSpectrum", "sign_function", "walsh_transform",
    "mu_value", "affine_distance_profile", "rho_exhaustive", "lift_two",
    "is_balanced",
    "MultChar", "CosetPsiVector", "QuadInt7", "coset_psi_vector", "gauss_sum",
    "closed_form_gauss", "davenport_hasse_check", "ord_check", "find_good_s",
    "CosetSystem", "GAssignment", "make_coset_system", "g_assignment",
    "default_g", "random_g", "assemble", "split", "me_decomposition",
    "me_sweep", "balance_h", "measure_construction",
    "SignProblem", "SignSolution", "make_sign_problem", "spencer_bound",
    "solve_random", "solve_localsearch", "certify", "coset_sign_search",
]
