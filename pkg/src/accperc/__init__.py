"""Accessibility percolation on the L-hypercube under the House-of-Cards model.

Exact self-avoiding path enumeration, bound recurrences and generating
functions, critical-fitness solvers, and a reproducible Monte Carlo simulator
for the probability that an accessible path to the fittest genotype exists.
"""

from .analytics import (
    CriticalPoint,
    LimitDiagnostic,
    averaged_expectation,
    convergence_table,
    critical_curve,
    critical_x,
    limit_diagnostic,
    minimal_path_expectation,
    x_c,
)
from .bounds import (
    BoundPair,
    IntegerPolynomial,
    aL_bounds,
    cosh_truncated,
    cosh_truncated_prime,
    degree_formula,
    eval_bounds,
    majo_table,
    mino_tilde_table,
    phi_polynomial,
    sinh_truncated,
    sinh_truncated_prime,
)
from .enumeration import (
    CountTable,
    asymptotic_p,
    asymptotic_p_log,
    closed_form_p1,
    closed_form_p2,
    count_saw,
    count_saw_naive,
    enumerate_mset,
    exact_expected_theta,
    list_mset_paths,
)
from .errors import BudgetExceededError, ResourceCapError
from .hypercube import (
    EndpointSpec,
    Genotype,
    PathCode,
    apply_path,
    backstep_count,
    endpoint_valid,
    format_path,
    is_self_avoiding,
    is_self_avoiding_substring,
    parse_path,
    sigma0,
    sigma1,
)
from .landscape import (
    FitnessLandscape,
    OPPOSITE_CORNER,
    UNIFORM_RANDOM,
    PlacementMode,
    Seed,
    generate,
    hamming_to_fittest,
    load_landscape,
    save_landscape,
)
from .montecarlo import (
    SimulationSummary,
    TrialOutcome,
    estimate,
    figure1_sweep,
    hamming_conditional_sweep,
    run_trial,
)

__version__ = "0.1.0"
