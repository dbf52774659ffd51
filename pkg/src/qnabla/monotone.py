"""The multiplier c_q(alpha), relaxed-monotonicity predicates, and numerical
verification of the monotonicity theorems.

A function y on the grid is c_q(alpha)-increasing when
y(q^{n-1}) >= c_q(alpha) * y(q^n) for consecutive exponents; since
c_q(alpha) <= 1 for orders in [0, 1] this is weaker than plain increase.
The verifiers below check a theorem's hypotheses and conclusion separately
and report the worst slack of each, so a hypothesis-violating input is
flagged vacuous instead of being counted as a counterexample.

Sign-tolerance policy: every one-sided inequality ">= 0" is tested as
">= -tau" with tau = 1e-11 * max(1, max|y|).  Operator values carry
relative noise around 1e-13 through the q-Gamma quotients, so tau dominates
the noise while staying far below any genuine violation the test suite
plants (those are at least 1e-3 of the data scale).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .core import DEFAULT_POWER_CONFIG, QPowerConfig, q_bracket, q_pow_frac_grid, q_gamma_value
from .errors import DomainError, WindowError
from .fracops import (
    caputo_q_derivative,
    caputo_rl_relation_residual,
    rl_q_derivative,
    rl_q_derivative_weights,
)
from .grid import GridFunction, QParams

SIGN_TOL_COEFF = 1e-11


class TheoremId(enum.Enum):
    THM1 = "THM1"
    THM_CONVERSE = "THM_CONVERSE"
    THM_STRICT = "THM_STRICT"
    THM_DEC1 = "THM_DEC1"
    THM_DEC2 = "THM_DEC2"
    COROLLARY = "COROLLARY"


class DecreasingMode(enum.Enum):
    """Which mirrored decreasing theorem to verify.

    FROM_DERIVATIVE: nonpositive fractional derivative implies
    c_q(alpha)-decreasing.  FROM_MONOTONE: decreasing y implies nonpositive
    fractional derivative.
    """

    FROM_DERIVATIVE = "from_derivative"
    FROM_MONOTONE = "from_monotone"


@dataclass(frozen=True)
class MonotonicityReport:
    """Outcome of one theorem verification on one grid function."""

    theorem_id: TheoremId
    hypotheses_hold: bool
    conclusion_holds: bool
    worst_margin: float
    witness_exponent: int | None
    hypothesis_margin: float
    conclusion_margin: float
    vacuous: bool
    residual: float = 0.0

    @property
    def counterexample(self) -> bool:
        """True only when the hypotheses hold and the conclusion fails."""
        return self.hypotheses_hold and not self.conclusion_holds


def c_q(alpha: float, q: float) -> float:
    """The monotonicity multiplier  (1 - q^alpha)/(1 - q) * q^{1-alpha}.

    Lies in [0, 1] for 0 <= alpha <= 1 and is >= 1 for alpha >= 1.
    """
    if alpha < 0.0:
        raise DomainError(f"c_q is defined for alpha >= 0, got {alpha}")
    return q_bracket(alpha, q) * q ** (1.0 - alpha)


def sign_tolerance(y: GridFunction) -> float:
    """tau = 1e-11 * max(1, max|y|): the slack allowed on '>= 0' checks."""
    return SIGN_TOL_COEFF * max(1.0, y.max_abs())


def _pair_scan(y: GridFunction, n_from: int, n_to: int, alpha: float, params: QParams, sign: float):
    """Worst slack of sign * (y(q^{n-1}) - c_q(alpha) y(q^n)) over n in [n_to, n_from]."""
    if n_to > n_from:
        raise DomainError(f"need n_to <= n_from, got n_to={n_to}, n_from={n_from}")
    y.require_window(n_to - 1, n_from, "c_q-monotonicity scan")
    cq = c_q(alpha, params.q)
    worst = float("inf")
    witness = None
    for n in range(n_to, n_from + 1):
        slack = sign * (y.value_at(n - 1) - cq * y.value_at(n))
        if slack < worst:
            worst = slack
            witness = n
    return worst, witness


def is_cq_increasing(
    y: GridFunction, n_from: int, n_to: int, alpha: float, params: QParams
) -> tuple[bool, float]:
    """Check y(q^{n-1}) >= c_q(alpha) y(q^n) for every n in [n_to, n_from].

    n_from is the anchor-side (largest) exponent, n_to the far (smallest)
    one; the window must also contain n_to - 1.  Returns (ok, worst_margin)
    under the sign-tolerance policy.
    """
    worst, _ = _pair_scan(y, n_from, n_to, alpha, params, +1.0)
    return worst >= -sign_tolerance(y), worst


def is_cq_decreasing(
    y: GridFunction, n_from: int, n_to: int, alpha: float, params: QParams
) -> tuple[bool, float]:
    """Mirror of :func:`is_cq_increasing` with the inequality reversed."""
    worst, _ = _pair_scan(y, n_from, n_to, alpha, params, -1.0)
    return worst >= -sign_tolerance(y), worst


def _require_monotone_setup(y: GridFunction, n0: int, alpha: float, needs_above: int = 0):
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"monotonicity theorems need 0 < alpha <= 1, got {alpha}")
    if n0 + needs_above > y.n_hi or n0 <= y.n_lo:
        raise WindowError(
            f"verification at n0={n0} needs window covering "
            f"[{y.n_lo}, {n0 + needs_above}] with points above a; window is "
            f"[{y.n_lo}, {y.n_hi}]"
        )


def verify_thm1(
    y: GridFunction,
    n0: int,
    alpha: float,
    params: QParams,
    cfg: QPowerConfig | None = None,
) -> MonotonicityReport:
    """Nonnegative anchored derivative plus y(a) >= 0 implies c_q-increase.

    Hypotheses: y(q^{n0}) >= -tau and the derivative anchored at a*q is
    >= -tau at every q^n for n in [n_lo, n0 - 1].  Conclusion: y is
    c_q(alpha)-increasing on all consecutive pairs inside [n_lo, n0].
    """
    cfg = cfg or DEFAULT_POWER_CONFIG
    _require_monotone_setup(y, n0, alpha)
    tau = sign_tolerance(y)
    n_min = y.n_lo

    hyp_margin = y.value_at(n0)
    hyp_witness = n0
    for n in range(n_min, n0):
        slack = rl_q_derivative(y, n0, alpha, n, params, cfg)
        if slack < hyp_margin:
            hyp_margin = slack
            hyp_witness = n
    hypotheses_hold = hyp_margin >= -tau

    conc_margin, conc_witness = _pair_scan(y, n0, n_min + 1, alpha, params, +1.0)
    conclusion_holds = conc_margin >= -tau

    worst = min(hyp_margin, conc_margin)
    witness = hyp_witness if hyp_margin <= conc_margin else conc_witness
    return MonotonicityReport(
        theorem_id=TheoremId.THM1,
        hypotheses_hold=hypotheses_hold,
        conclusion_holds=conclusion_holds,
        worst_margin=worst,
        witness_exponent=witness,
        hypothesis_margin=hyp_margin,
        conclusion_margin=conc_margin,
        vacuous=not hypotheses_hold,
    )


def verify_converse(
    y: GridFunction,
    n0: int,
    alpha: float,
    params: QParams,
    cfg: QPowerConfig | None = None,
    strict: bool = False,
) -> MonotonicityReport:
    """Increasing y with y(a) >= 0 implies nonnegative anchored derivative.

    With strict=True both the hypotheses (strict increase, y(a) > 0) and the
    conclusion (derivative > tau) are strict.
    """
    cfg = cfg or DEFAULT_POWER_CONFIG
    _require_monotone_setup(y, n0, alpha)
    tau = sign_tolerance(y)
    n_min = y.n_lo

    hyp_margin = y.value_at(n0)
    hyp_witness = n0
    for n in range(n_min + 1, n0 + 1):
        slack = y.value_at(n - 1) - y.value_at(n)
        if slack < hyp_margin:
            hyp_margin = slack
            hyp_witness = n
    hypotheses_hold = hyp_margin > tau if strict else hyp_margin >= -tau

    conc_margin = float("inf")
    conc_witness = None
    for n in range(n_min, n0):
        v = rl_q_derivative(y, n0, alpha, n, params, cfg)
        if v < conc_margin:
            conc_margin = v
            conc_witness = n
    conclusion_holds = conc_margin > tau if strict else conc_margin >= -tau

    worst = min(hyp_margin, conc_margin)
    witness = hyp_witness if hyp_margin <= conc_margin else conc_witness
    return MonotonicityReport(
        theorem_id=TheoremId.THM_STRICT if strict else TheoremId.THM_CONVERSE,
        hypotheses_hold=hypotheses_hold,
        conclusion_holds=conclusion_holds,
        worst_margin=worst,
        witness_exponent=witness,
        hypothesis_margin=hyp_margin,
        conclusion_margin=conc_margin,
        vacuous=not hypotheses_hold,
    )


def verify_corollary(
    y: GridFunction,
    n0: int,
    alpha: float,
    params: QParams,
    cfg: QPowerConfig | None = None,
) -> MonotonicityReport:
    """Caputo-form of the increasing theorem, anchored at a*q = q^{n0+1}.

    Hypothesis: C^alpha y(t) >= -(t - qa)_q^{-alpha}/Gamma_q(1-alpha) y(qa)
    for each checked t, plus y(a) >= 0.  Conclusion as in the R-L theorem.
    The report's residual field carries the worst Caputo-vs-R-L relation
    residual over the checked points, asserting that both hypothesis forms
    are the same statement.
    """
    cfg = cfg or DEFAULT_POWER_CONFIG
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"Caputo corollary needs 0 < alpha < 1, got {alpha}")
    _require_monotone_setup(y, n0, alpha, needs_above=1)
    tau = sign_tolerance(y)
    n_min = y.n_lo
    q = params.q
    anchor = n0 + 1  # a*q
    g1 = q_gamma_value(1.0 - alpha, q, cfg)
    y_qa = y.value_at(anchor)

    hyp_margin = y.value_at(n0)
    hyp_witness = n0
    worst_residual = 0.0
    for n in range(n_min, n0):
        cap = caputo_q_derivative(y, anchor, alpha, n, params, cfg)
        bound = -q_pow_frac_grid(n, anchor, -alpha, params, cfg) / g1 * y_qa
        slack = cap - bound
        if slack < hyp_margin:
            hyp_margin = slack
            hyp_witness = n
        res = caputo_rl_relation_residual(y, anchor, alpha, n, params, cfg)
        worst_residual = max(worst_residual, res)
    hypotheses_hold = hyp_margin >= -tau

    conc_margin, conc_witness = _pair_scan(y, n0, n_min + 1, alpha, params, +1.0)
    conclusion_holds = conc_margin >= -tau

    worst = min(hyp_margin, conc_margin)
    witness = hyp_witness if hyp_margin <= conc_margin else conc_witness
    return MonotonicityReport(
        theorem_id=TheoremId.COROLLARY,
        hypotheses_hold=hypotheses_hold,
        conclusion_holds=conclusion_holds,
        worst_margin=worst,
        witness_exponent=witness,
        hypothesis_margin=hyp_margin,
        conclusion_margin=conc_margin,
        vacuous=not hypotheses_hold,
        residual=worst_residual,
    )


def verify_decreasing(
    y: GridFunction,
    n0: int,
    alpha: float,
    params: QParams,
    cfg: QPowerConfig | None = None,
    direction: DecreasingMode = DecreasingMode.FROM_DERIVATIVE,
) -> MonotonicityReport:
    """The two decreasing mirrors: all inequalities of the increasing
    theorems with signs flipped and y(a) <= 0."""
    cfg = cfg or DEFAULT_POWER_CONFIG
    _require_monotone_setup(y, n0, alpha)
    tau = sign_tolerance(y)
    n_min = y.n_lo

    if direction is DecreasingMode.FROM_DERIVATIVE:
        hyp_margin = -y.value_at(n0)
        hyp_witness = n0
        for n in range(n_min, n0):
            slack = -rl_q_derivative(y, n0, alpha, n, params, cfg)
            if slack < hyp_margin:
                hyp_margin = slack
                hyp_witness = n
        hypotheses_hold = hyp_margin >= -tau
        conc_margin, conc_witness = _pair_scan(y, n0, n_min + 1, alpha, params, -1.0)
        conclusion_holds = conc_margin >= -tau
        theorem = TheoremId.THM_DEC1
    else:
        hyp_margin = -y.value_at(n0)
        hyp_witness = n0
        for n in range(n_min + 1, n0 + 1):
            slack = y.value_at(n) - y.value_at(n - 1)
            if slack < hyp_margin:
                hyp_margin = slack
                hyp_witness = n
        hypotheses_hold = hyp_margin >= -tau
        conc_margin = float("inf")
        conc_witness = None
        for n in range(n_min, n0):
            v = -rl_q_derivative(y, n0, alpha, n, params, cfg)
            if v < conc_margin:
                conc_margin = v
                conc_witness = n
        conclusion_holds = conc_margin >= -tau
        theorem = TheoremId.THM_DEC2

    worst = min(hyp_margin, conc_margin)
    witness = hyp_witness if hyp_margin <= conc_margin else conc_witness
    return MonotonicityReport(
        theorem_id=theorem,
        hypotheses_hold=hypotheses_hold,
        conclusion_holds=conclusion_holds,
        worst_margin=worst,
        witness_exponent=witness,
        hypothesis_margin=hyp_margin,
        conclusion_margin=conc_margin,
        vacuous=not hypotheses_hold,
    )


@dataclass
class RejectionSummary:
    """Aggregate of one rejection-sampling cell for the increasing theorem."""

    n_samples: int
    n_nonvacuous: int
    n_generated: int
    n_conclusion_failures: int
    worst_conclusion_margin: float
    worst_hypothesis_margin: float
    counterexamples: list[dict] = field(default_factory=list)


def thm1_rejection_sweep(
    n0: int,
    n_min: int,
    alpha: float,
    params: QParams,
    n_samples: int,
    seed: int,
    cfg: QPowerConfig | None = None,
    min_nonvacuous: int = 100,
) -> RejectionSummary:
    """Draw random grid functions, keep the hypothesis-satisfying ones, and
    test the c_q-increase conclusion on every one of them.

    The random draws are uniform in [-1, 1], so hypothesis hits are rare;
    when fewer than min_nonvacuous samples survive, constructed instances
    (whose hypotheses hold by design) top the cell up.  Any sample that
    satisfies the hypotheses but violates the conclusion is recorded as a
    counterexample with its full values for replay.

    Vectorized over samples: the anchored derivative is a fixed linear map
    of the window values, so one weight table serves the whole cell.
    """
    import numpy as np

    from .oracle import Distribution, generate_thm1_instance, sample_random_grid_function
    from .rng import derive_seed

    cfg = cfg or DEFAULT_POWER_CONFIG
    if n_min >= n0:
        raise DomainError(f"need n_min < n0, got n_min={n_min}, n0={n0}")
    width = n0 - n_min + 1
    cq = c_q(alpha, params.q)
    dmat = np.array(rl_q_derivative_weights(n0, alpha, n_min, params, cfg))

    rows = np.empty((n_samples, width))
    for k in range(n_samples):
        g = sample_random_grid_function(
            (n_min, n0), Distribution.UNIFORM, derive_seed(seed, "thm1-rejection", k)
        )
        rows[k] = g.values

    tau = SIGN_TOL_COEFF * np.maximum(1.0, np.abs(rows).max(axis=1))
    derivs = rows @ dmat.T
    hyp_ok = (derivs >= -tau[:, None]).all(axis=1) & (rows[:, -1] >= -tau)
    pair_slack = rows[:, :-1] - cq * rows[:, 1:]
    conc_ok = (pair_slack >= -tau[:, None]).all(axis=1)

    nonvacuous = int(hyp_ok.sum())
    failures = hyp_ok & ~conc_ok
    counterexamples = [
        {
            "kind": "random",
            "index": int(k),
            "seed": derive_seed(seed, "thm1-rejection", int(k)),
            "n_lo": n_min,
            "values": [float(v) for v in rows[k]],
            "worst_pair_slack": float(pair_slack[k].min()),
        }
        for k in np.nonzero(failures)[0]
    ]

    worst_conc = float(pair_slack[hyp_ok].min()) if nonvacuous else float("inf")
    worst_hyp = float(np.minimum(derivs.min(axis=1), rows[:, -1])[hyp_ok].min()) if nonvacuous else float("inf")

    n_generated = 0
    if nonvacuous < min_nonvacuous:
        n_generated = min_nonvacuous - nonvacuous
        for j in range(n_generated):
            inst = generate_thm1_instance(
                n0, n_min, alpha, params, derive_seed(seed, "thm1-gen", j), cfg
            )
            report = verify_thm1(inst, n0, alpha, params, cfg)
            if not report.hypotheses_hold:
                raise AssertionError(
                    "constructed instance failed its own hypotheses "
                    f"(margin {report.hypothesis_margin})"
                )
            worst_conc = min(worst_conc, report.conclusion_margin)
            worst_hyp = min(worst_hyp, report.hypothesis_margin)
            if not report.conclusion_holds:
                counterexamples.append(
                    {
                        "kind": "generated",
                        "index": j,
                        "seed": derive_seed(seed, "thm1-gen", j),
                        "n_lo": inst.n_lo,
                        "values": list(inst.values),
                        "worst_pair_slack": report.conclusion_margin,
                    }
                )

    return RejectionSummary(
        n_samples=n_samples,
        n_nonvacuous=nonvacuous,
        n_generated=n_generated,
        n_conclusion_failures=len(counterexamples),
        worst_conclusion_margin=worst_conc,
        worst_hypothesis_margin=worst_hyp,
        counterexamples=counterexamples,
    )
