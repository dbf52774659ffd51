"""Independent reference implementations and test-instance generators.

Every main-path number is cross-checked against a second implementation
that shares no code with the first: products are accumulated in log space
(with the sign tracked separately when a factor is negative), sums use
Neumaier-compensated accumulation in the opposite loop order, and the
truncation thresholds are far tighter.  Same number format, different
algorithm — so agreement catches algorithmic mistakes, not just rounding.

The generators produce grid functions for the verification sweeps: plain
random windows in several shapes, and constructed instances whose anchored
fractional derivative equals a prescribed nonnegative function, which makes
the increasing theorem's hypotheses hold by design (the construction
inverts the composition identity and is re-verified before returning).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .core import DEFAULT_POWER_CONFIG, QPowerConfig
from .errors import ConvergenceError, DomainError, PoleError, SingularityError
from .grid import GridFunction, QParams, point_value
from .mvt import m_q
from .fracops import q_frac_integral, rl_q_derivative
from .rng import Lcg, derive_seed

_TINY = 1e-300


@dataclass(frozen=True)
class OracleConfig:
    """Truncation control for the reference path.

    Must be strictly tighter than any legal main-path configuration:
    rel_tol is capped at 1e-8, two orders below the loosest admissible
    main-path rel_tol of 1e-6.
    """

    rel_tol: float = 1e-18
    max_terms: int = 100_000
    summation: str = "compensated"

    def __post_init__(self):
        if not (0.0 < self.rel_tol <= 1e-8):
            raise DomainError(
                f"oracle rel_tol must lie in (0, 1e-8], got {self.rel_tol}"
            )
        if self.max_terms < 64:
            raise DomainError(f"oracle max_terms must be >= 64, got {self.max_terms}")
        if self.summation != "compensated":
            raise DomainError(
                f"unsupported summation mode '{self.summation}' (only 'compensated')"
            )


DEFAULT_ORACLE_CONFIG = OracleConfig()


class NeumaierSum:
    """Neumaier-compensated accumulator (improved Kahan summation)."""

    __slots__ = ("total", "compensation")

    def __init__(self):
        self.total = 0.0
        self.compensation = 0.0

    def add(self, value: float) -> None:
        t = self.total + value
        if abs(self.total) >= abs(value):
            self.compensation += (self.total - t) + value
        else:
            self.compensation += (value - t) + self.total
        self.total = t

    def result(self) -> float:
        return self.total + self.compensation


def neumaier_sum(values) -> float:
    acc = NeumaierSum()
    for v in values:
        acc.add(v)
    return acc.result()


def _log_product(factor_at, rel_tol: float, max_terms: int, what: str) -> float:
    """prod_{i>=0} factor(i), accumulated as a compensated sum of log|factor|
    with the sign carried separately; stops when |factor - 1| < rel_tol."""
    log_acc = NeumaierSum()
    sign = 1.0
    for i in range(max_terms):
        fac = factor_at(i)
        if fac == 0.0:
            return 0.0
        if not math.isfinite(fac):
            raise SingularityError(f"{what}: factor {i} is not finite")
        if fac < 0.0:
            sign = -sign
            fac = -fac
        log_acc.add(math.log(fac))
        if abs(fac - 1.0) < rel_tol:
            return sign * math.exp(log_acc.result())
    raise ConvergenceError(f"{what}: no convergence within {max_terms} factors")


def oracle_q_pow_frac(
    t: float, s: float, alpha: float, q: float, cfg: OracleConfig | None = None
) -> float:
    """Reference (t - s)_q^alpha via a log-space product."""
    cfg = cfg or DEFAULT_ORACLE_CONFIG
    if s == 0.0:
        return t**alpha
    if t <= 0.0:
        raise DomainError(f"fractional power needs t > 0, got t={t}")
    u = s / t
    if u == 1.0:
        return 0.0
    if u > 1.0:
        raise DomainError(f"fractional power needs s/t < 1, got s/t={u}")

    def factor(i: int) -> float:
        den = 1.0 - u * q ** (i + alpha)
        if den == 0.0:
            raise SingularityError(f"oracle power: denominator vanished at term {i}")
        return (1.0 - u * q**i) / den

    return t**alpha * _log_product(factor, cfg.rel_tol, cfg.max_terms, "oracle power")


def oracle_q_gamma(x: float, q: float, cfg: OracleConfig | None = None) -> float:
    """Reference q-Gamma via a log-space product."""
    cfg = cfg or DEFAULT_ORACLE_CONFIG
    if x <= 0.0 and x == math.floor(x):
        raise PoleError(f"q-Gamma pole at nonpositive integer x={x}")

    def factor(k: int) -> float:
        den = 1.0 - q ** (k + x)
        if den == 0.0:
            raise PoleError(f"oracle q-Gamma: denominator vanished at term {k}")
        return (1.0 - q ** (k + 1)) / den

    return (1.0 - q) ** (1.0 - x) * _log_product(
        factor, cfg.rel_tol, cfg.max_terms, "oracle q-Gamma"
    )


def oracle_frac_integral(
    f: GridFunction,
    n_start: int,
    alpha: float,
    n_t: int,
    params: QParams,
    cfg: OracleConfig | None = None,
) -> float:
    """Reference fractional integral: compensated sum, descending loop order."""
    cfg = cfg or DEFAULT_ORACLE_CONFIG
    if alpha <= 0.0:
        raise DomainError(f"fractional integral needs alpha > 0, got {alpha}")
    if n_t > n_start:
        raise DomainError(f"need n_t <= n_start, got n_t={n_t} > n_start={n_start}")
    if n_t == n_start:
        return 0.0
    f.require_window(n_t, n_start - 1, "oracle_frac_integral")
    q = params.q
    t = point_value(n_t, params)
    acc = NeumaierSum()
    for i in range(n_start - 1, n_t - 1, -1):
        w = point_value(i, params) * oracle_q_pow_frac(
            t, point_value(i + 1, params), alpha - 1.0, q, cfg
        )
        acc.add(w * f.value_at(i))
    return (1.0 - q) * acc.result() / oracle_q_gamma(alpha, q, cfg)


def oracle_rl_derivative(
    y: GridFunction,
    n_start: int,
    alpha: float,
    n_t: int,
    params: QParams,
    cfg: OracleConfig | None = None,
) -> float:
    """Reference a*q-anchored derivative: compensated sums, descending order."""
    cfg = cfg or DEFAULT_ORACLE_CONFIG
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"oracle R-L derivative needs 0 < alpha < 1, got {alpha}")
    if n_t > n_start:
        raise DomainError(f"need n_t <= n_start, got n_t={n_t} > n_start={n_start}")
    y.require_window(n_t, n_start, "oracle_rl_derivative")
    q = params.q
    gamma = oracle_q_gamma(1.0 - alpha, q, cfg)

    def inner(n: int) -> float:
        t = point_value(n, params)
        acc = NeumaierSum()
        for i in range(n_start, n - 1, -1):
            acc.add(
                point_value(i, params)
                * oracle_q_pow_frac(t, point_value(i + 1, params), -alpha, q, cfg)
                * y.value_at(i)
            )
        return (1.0 - q) * acc.result() / gamma

    return (inner(n_t) - inner(n_t + 1)) / ((1.0 - q) * point_value(n_t, params))


class Distribution(enum.Enum):
    UNIFORM = "uniform"
    INCREASING = "increasing"
    DECREASING = "decreasing"
    SPIKY = "spiky"


def sample_random_grid_function(
    window: tuple[int, int], distribution: Distribution, seed: int
) -> GridFunction:
    """Deterministic random grid function on a window.

    UNIFORM draws each value from [-1, 1].  INCREASING builds a strictly
    increasing positive function of the point t by accumulating increments
    of at least 0.05 from the smallest point (highest exponent) upward, so
    the values array is strictly decreasing in the index.  DECREASING is
    the negation of the INCREASING sample for the same seed.  SPIKY is
    uniform with occasional 25x spikes (probability 1/8 per point).

    Identical (window, distribution, seed) triples reproduce bit-identical
    functions.
    """
    n_lo, n_hi = int(window[0]), int(window[1])
    rng = Lcg(seed)
    width = n_hi - n_lo + 1
    if distribution is Distribution.UNIFORM:
        vals = [2.0 * rng.uniform() - 1.0 for _ in range(width)]
    elif distribution in (Distribution.INCREASING, Distribution.DECREASING):
        vals = [0.0] * width
        vals[width - 1] = 0.1 + rng.uniform()
        for k in range(width - 2, -1, -1):
            vals[k] = vals[k + 1] + 0.05 + rng.uniform()
        if distribution is Distribution.DECREASING:
            vals = [-v for v in vals]
    elif distribution is Distribution.SPIKY:
        vals = []
        for _ in range(width):
            base = 2.0 * rng.uniform() - 1.0
            if rng.uniform() < 0.125:
                base *= 25.0
            vals.append(base)
    else:  # pragma: no cover - exhaustive enum
        raise DomainError(f"unknown distribution {distribution}")
    return GridFunction(n_lo, n_hi, tuple(vals))


def generate_thm1_instance(
    n0: int,
    n_min: int,
    alpha: float,
    params: QParams,
    seed: int,
    cfg: QPowerConfig | None = None,
    max_residual: float = 1e-9,
) -> GridFunction:
    """Construct y whose a*q-anchored derivative is a prescribed g >= 0.

    Draw g(q^n) ~ U[0,1) on the checked exponents and y(a) ~ U[0,1), then
    invert the composition identity:

        y(q^n) = M_q(alpha, a, q^n) y(a) + I_a^alpha g (q^n)

    for n = n0-1 down to n_min.  Because the fractional integral is
    triangular with nonzero diagonal, this forces the anchored derivative
    of y to equal g at every checked point, so the increasing theorem's
    hypotheses hold non-vacuously.  The derivative is recomputed before
    returning and must match g to max_residual relative to the data scale.
    """
    cfg = cfg or DEFAULT_POWER_CONFIG
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"instance generator needs 0 < alpha < 1, got {alpha}")
    if n_min >= n0:
        raise DomainError(f"need n_min < n0, got n_min={n_min}, n0={n0}")
    rng = Lcg(derive_seed(seed, "thm1-instance"))
    g_vals = tuple(rng.uniform() for _ in range(n0 - n_min))
    y_a = rng.uniform()
    g = GridFunction(n_min, n0 - 1, g_vals)

    width = n0 - n_min + 1
    y_vals = [0.0] * width
    y_vals[width - 1] = y_a
    for n in range(n0 - 1, n_min - 1, -1):
        y_vals[n - n_min] = m_q(alpha, n0, n, params, cfg) * y_a + q_frac_integral(
            g, n0, alpha, n, params, cfg
        )
    y = GridFunction(n_min, n0, tuple(y_vals))

    scale = max(1.0, max(abs(v) for v in g_vals), y.max_abs())
    worst = 0.0
    for n in range(n_min, n0):
        d = rl_q_derivative(y, n0, alpha, n, params, cfg)
        worst = max(worst, abs(d - g.value_at(n)) / scale)
    if worst > max_residual:
        raise ConvergenceError(
            f"instance generator self-check failed: derivative deviates from "
            f"the prescribed values by {worst} (> {max_residual}) for "
            f"q={params.q}, alpha={alpha}, n0={n0}, n_min={n_min}, seed={seed}"
        )
    return y
