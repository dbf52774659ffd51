"""Nabla q-calculus and q-fractional operators on the geometric grid
{q^n : n integer}, 0 < q < 1, with numerical verification of the
associated monotonicity theorems and the discrete mean-value theorem.

Hot product kernels run on a compiled extension when available; set
QFRAC_PURE=1 to force the pure-Python fallback.  ``qnabla.backend.BACKEND``
names the active engine.
"""

__version__ = "0.1.0"

from .backend import BACKEND
from .core import (
    DEFAULT_POWER_CONFIG,
    Lemma1Identity,
    OperatorResult,
    QPowerConfig,
    lemma1_residual,
    nabla_q_derivative,
    nabla_q_derivative_n,
    nabla_q_integral,
    nabla_q_integral_from_zero,
    q_bracket,
    q_gamma,
    q_gamma_value,
    q_pow_frac,
    q_pow_frac_grid,
    q_pow_int,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DegenerateDenominatorError,
    DomainError,
    EvaluationError,
    HypothesisError,
    PoleError,
    QCalcError,
    SandwichViolationError,
    SingularityError,
    WindowError,
)
from .fracops import (
    FracOpSpec,
    caputo_q_derivative,
    caputo_rl_relation_residual,
    integral_of_caputo_residual,
    power_rule_check,
    q_frac_integral,
    q_frac_integral_weights,
    rl_q_derivative,
    rl_q_derivative_weights,
)
from .grid import (
    GridFunction,
    GridPoint,
    Ordering,
    QParams,
    Tabulated,
    compare_points,
    constant,
    identity,
    monomial,
    point_value,
    sample,
)
from .monotone import (
    DecreasingMode,
    MonotonicityReport,
    RejectionSummary,
    TheoremId,
    c_q,
    is_cq_decreasing,
    is_cq_increasing,
    sign_tolerance,
    thm1_rejection_sweep,
    verify_converse,
    verify_corollary,
    verify_decreasing,
    verify_thm1,
)
from .mvt import MvtWitnesses, composition_residual, m_q, mvt_witnesses
from .oracle import (
    DEFAULT_ORACLE_CONFIG,
    Distribution,
    NeumaierSum,
    OracleConfig,
    generate_thm1_instance,
    neumaier_sum,
    oracle_frac_integral,
    oracle_q_gamma,
    oracle_q_pow_frac,
    oracle_rl_derivative,
    sample_random_grid_function,
)
from .rng import Lcg, derive_seed
from .sweep import ALL_THEOREMS, SweepConfig, SweepResult, run_sweep, write_reports

__all__ = [name for name in dir() if not name.startswith("_")]
