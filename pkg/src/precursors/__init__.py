"""
Finite-N precursors of free cumulants.

Exact symmetric-function algebra over Q(N), Hurwitz-number counts, the orbit
coproduct, moment functionals of unitarily invariant laws, Monte Carlo
cross-checks and finite free convolutions.
"""

from .exactnum import RatFuncN, PoleError, DivergenceError, as_fraction
from .symgroup import Partition, Permutation, enumerate_partitions, character, character_table
from .symfunc import InvariantPoly, Spectrum, DegreeError, degree_cap, evaluate
from .hciz import precursor, precursor_newton, precursor_table, weingarten, dual_newton, eta_matrices
from .hurwitz import HurwitzQuery, hurwitz_count, h0_closed_form, generating_matrix
from .coproduct import TensorPoly, coproduct, orbit_average, delta_k_central_moment
from .measures import MomentFunctional, from_orbit, gue_functional, convolve, cgl_cumulants, averaged_precursor
from .freeconv import CharPoly, mss_convolve, k_convolve

__version__ = "0.1.0"

__all__ = [
    "RatFuncN", "PoleError", "DivergenceError", "as_fraction",
    "Partition", "Permutation", "enumerate_partitions", "character", "character_table",
    "InvariantPoly", "Spectrum", "DegreeError", "degree_cap", "evaluate",
    "precursor", "precursor_newton", "precursor_table", "weingarten", "dual_newton", "eta_matrices",
    "HurwitzQuery", "hurwitz_count", "h0_closed_form", "generating_matrix",
    "TensorPoly", "coproduct", "orbit_average", "delta_k_central_moment",
    "MomentFunctional", "from_orbit", "gue_functional", "convolve", "cgl_cumulants", "averaged_precursor",
    "CharPoly", "mss_convolve", "k_convolve",
]
