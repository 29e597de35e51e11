"""Exact tools for additive representation functions r_A(n; k_1, ..., k_d)."""

from .constructions import decompose_moser, moser_set
from .cyclotomic import CyclotomicIndex, cyclotomic_poly, multiplicity_in_poly, order_of_index
from .mstructure import (
    Certificate,
    Conflict,
    MStructure,
    MultiplicityTable,
    certify_nonconstant,
    ominus,
    precede,
    reduce_delta,
    solve_multiplicities,
    zero_propagation,
)
from .polyseries import IntPolynomial, TruncatedSeries, poly_divexact, poly_mul, series_mul, series_substitute_power
from .repfn import CoefficientTuple, NotTheoremForm, SetPrefix, constancy_check, reconstruct_P, rep_count, rep_profile
from .search import SearchConfig, SearchOutcome, resume_search, search_constant_rep
from .verify import verify_certificate

__version__ = "0.1.0"
