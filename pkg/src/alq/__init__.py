"""Atkin-Lehner traces and refined dimensions of newform spaces of squarefree level."""

from .analysis import (
    bias_report,
    equidistributing_primes_check,
    k_threshold,
    pattern_bias_check,
    patterns_occurring,
    perfect_equidistribution,
    prime_sign_occurrence,
    scan,
)
from .dimensions import (
    SignPattern,
    dim_new,
    dim_plus_minus,
    dim_sign_pattern,
    dim_sign_pattern_closed,
    dimension_breakdown,
    root_number,
)
from .errors import ConsistencyError, HypothesisNotSatisfied, InvalidInput
from .traces import full_trace, full_trace_explicit, new_trace, new_trace_bound, new_trace_incl_excl

__version__ = "0.1.0"
