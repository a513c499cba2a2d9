"""Generalized quadratic Gauss sums and Chu/Alltop sequence sets with low aperiodic sidelobes."""

__version__ = "0.1.0"

from .numtheory import (  # noqa: E402
    EuclidChain,
    ReducedFraction,
    euclid_chain,
    fibonacci_zeta_partial,
    lcm_range,
    least_prime_factor,
    wrap_half_open,
)
from .gauss import (  # noqa: E402
    GaussSumInput,
    error_function_E,
    gauss_closed_form_magnitude,
    gauss_sum,
    gauss_sum_bound,
    gauss_sum_direct,
    paris_decompose,
    reduction_certificate,
    reduction_remainder,
)
from .sequences import (  # noqa: E402
    LazRegion,
    PolyphaseSequence,
    SequenceSet,
    alltop,
    build_A1,
    build_A2,
    build_C1,
    build_C2,
    chu,
)
from .analysis import (  # noqa: E402
    ambiguity,
    aperiodic_correlation,
    correlation_profile,
    delta_tolerances,
    theta_tolerances,
    welch_bound,
)
