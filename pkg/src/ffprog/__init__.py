"""Computational laboratory for polynomial progressions over finite fields.

The package computes, exactly where possible and with certified tolerances
otherwise, the basic objects of the polynomial-progression counting story:

* finite fields F_q = GF(p^k) with trace maps and additive characters
  (:mod:`ffprog.field`);
* integer polynomial systems with exact linear-independence certificates
  (:mod:`ffprog.polys`);
* dense complex function spaces with Fourier analysis (:mod:`ffprog.functions`);
* Gowers uniformity norms and the Cauchy-Schwarz projection inequality
  (:mod:`ffprog.gowers`);
* progression-counting averages, rewrite identities, base-case reports and
  Weil character-sum bounds (:mod:`ffprog.counting`);
* exact-rational delta schedules, budget conditions and error-exponent
  sign checks (:mod:`ffprog.schedule`);
* structured/small/uniform decompositions with certified budgets
  (:mod:`ffprog.decomposition`);
* extremal progression-free set search (:mod:`ffprog.extremal`);
* a reproducible CLI harness (:mod:`ffprog.cli`) and the acceptance suite
  (:mod:`ffprog.acceptance`).
"""

from .counting import (
    BaseCaseReport,
    LambdaResult,
    RewriteCheck,
    WeilSum,
    additive_monomial_sums,
    base_case_report,
    count_progressions,
    lambda_average,
    main_term_error,
    poly_index_table,
    twist_rewrite_check,
    weil_sum,
)
from .decomposition import (
    Certificates,
    DecompositionBudget,
    DecompositionResult,
    budget,
    budget_from_schedule,
    recheck_certificates,
    u2_threshold_decompose,
    verify_decomposition,
)
from .errors import *  # noqa: F401,F403  (curated __all__ in errors.py)
from .extremal import (
    ExtremalResult,
    GammaFit,
    ProgressionHypergraph,
    build_hypergraph,
    gamma_fit,
    r_exact,
    r_lower_random,
)
from .field import (
    FieldElement,
    FieldSpec,
    character_eval,
    enumerate_elements,
    field_arith,
    make_field,
    trace,
)
from .functions import (
    DenseFunction,
    FourierCoefficients,
    TwoVarFunction,
    balanced_indicator,
    character_function,
    constant_function,
    delta_first_var,
    delta_multi,
    dense_function,
    fourier_transform,
    function_from_json,
    function_to_json,
    indicator,
    inner,
    inverse_fourier,
    lp_norm,
    random_one_bounded,
    two_var_function,
)
from .gowers import (
    CsCheck,
    GowersNormValue,
    check_cs_inequality,
    cs_project,
    gowers_norm,
    gowers_u2_via_fourier,
    u2_dual_upper_bound,
)
from .polys import (
    DegreeSequence,
    DependenceWitness,
    IndependenceCertificate,
    IntPoly,
    ProgressionSystem,
    characteristic_threshold,
    degree_sequence,
    independence_certificate,
    int_poly,
    parse_poly,
    progression_system,
    reduce_and_eval,
    render_poly,
)
from .rng import SplitMix64, derive_seed
from .schedule import (
    BoundRecursion,
    BudgetCheck,
    NegativityReport,
    ScheduleParams,
    bound_recursion,
    budget_condition,
    delta_schedule,
    exponent_negativity,
    initial_state,
    u2_step_constraints,
)

__version__ = "0.1.0"
