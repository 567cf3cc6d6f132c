"""Third-order spectral shift toolkit: Taylor remainders of matrix functions
and the density eta with Tr[remainder] = int phi''' eta."""

from ._ssf3 import (
    EtaDensity,
    NonHermitianError,
    ParseError,
    PreconditionError,
    SsfError,
    d1_divdiff,
    d1_fourier,
    d1_poly,
    d2_divdiff,
    d2_fourier,
    d2_poly,
    eig,
    apply_function,
    eta_density,
    eta_moment,
    palindrome_sum_identity,
    parse_function_spec,
    pinch,
    random_instance,
    remainder_fourier,
    remainder_simplex_poly,
    remainder_trace,
    resolvent_pinch,
    schatten_norm,
    support_bounds,
    tent_kernel,
    trace_formula_residual,
)

__all__ = [name for name in dir() if not name.startswith("_")]
