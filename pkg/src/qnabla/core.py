"""Basic nabla q-calculus on the geometric grid.

Operations: the q-bracket [x]_q = (1 - q^x)/(1 - q), the backward
q-difference quotient, Jackson-type q-integrals (finite-window and
from-zero), q-factorial powers (t - s)_q^a for integer and real a, the
q-Gamma function, and residual checkers for the four recurrence identities
of q-factorial powers with negative order.

Truncation policy: the infinite products behind fractional powers and
q-Gamma converge geometrically for grid arguments, so they are cut at the
first factor within rel_tol of 1 and an a-posteriori geometric tail bound
is attached to the result.  These bounds are estimates, not certified
enclosures.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .backend import STATUS_NO_CONVERGENCE, STATUS_SINGULAR, kernels
from .errors import ConvergenceError, DomainError, PoleError, SingularityError, WindowError
from .grid import GridFunction, QParams, point_value

_TINY = 1e-300


@dataclass(frozen=True)
class QPowerConfig:
    """Truncation control for the infinite products.

    rel_tol is the factor-to-1 stopping threshold, max_terms the hard cap.
    """

    rel_tol: float = 1e-15
    max_terms: int = 10_000

    def __post_init__(self):
        if not (0.0 < self.rel_tol <= 1e-6):
            raise DomainError(f"rel_tol must lie in (0, 1e-6], got {self.rel_tol}")
        if self.max_terms < 64:
            raise DomainError(f"max_terms must be >= 64, got {self.max_terms}")


DEFAULT_POWER_CONFIG = QPowerConfig()


@dataclass(frozen=True)
class OperatorResult:
    """An operator value with an a-posteriori truncation-error estimate.

    trunc_error_bound is 0 whenever the computation was an exactly finite
    sum or product.
    """

    value: float
    trunc_error_bound: float = 0.0


def q_bracket(x: float, q: float) -> float:
    """[x]_q = (1 - q^x) / (1 - q), the q-analogue of the number x."""
    return (1.0 - q**x) / (1.0 - q)


def nabla_q_derivative(f: GridFunction, n: int, params: QParams) -> float:
    """Backward q-difference quotient (f(t) - f(qt)) / ((1-q) t) at t = q^n."""
    f.require_window(n, n + 1, "nabla_q_derivative")
    t = point_value(n, params)
    return (f.value_at(n) - f.value_at(n + 1)) / ((1.0 - params.q) * t)


def nabla_q_derivative_n(f: GridFunction, n: int, order: int, params: QParams) -> float:
    """order-fold backward q-difference quotient at t = q^n (order >= 0)."""
    if order < 0:
        raise DomainError(f"derivative order must be >= 0, got {order}")
    if order == 0:
        return f.value_at(n)
    f.require_window(n, n + order, "nabla_q_derivative_n")
    vals = [f.value_at(i) for i in range(n, n + order + 1)]
    q = params.q
    for level in range(order):
        vals = [
            (vals[k] - vals[k + 1]) / ((1.0 - q) * point_value(n + k, params))
            for k in range(len(vals) - 1)
        ]
    return vals[0]


def nabla_q_integral(f: GridFunction, n_a: int, n_t: int, params: QParams) -> float:
    """Finite-window Jackson sum (1-q) * sum_{i=n_t}^{n_a-1} q^i f(q^i).

    Integrates from a = q^{n_a} up to t = q^{n_t}; requires t >= a, i.e.
    n_t <= n_a.  The empty case n_t == n_a yields 0.  A caller wanting the
    reversed orientation must swap the limits and negate explicitly.
    """
    if n_t > n_a:
        raise DomainError(
            f"integral requires t >= a (n_t <= n_a); got n_t={n_t} > n_a={n_a}"
        )
    if n_t == n_a:
        return 0.0
    f.require_window(n_t, n_a - 1, "nabla_q_integral")
    q = params.q
    acc = 0.0
    for i in range(n_t, n_a):
        acc += point_value(i, params) * f.value_at(i)
    return (1.0 - q) * acc


def nabla_q_integral_from_zero(
    expr: Callable[[float], float],
    n_t: int,
    params: QParams,
    cfg: QPowerConfig | None = None,
) -> OperatorResult:
    """Jackson integral from 0:  (1-q) t sum_{i>=0} q^i expr(t q^i),  t = q^{n_t}.

    The series is truncated once the term magnitude stays below
    rel_tol * |partial sum| for 3 consecutive terms; the attached bound is
    the geometric tail estimate t * q^{I+1} * M with M the largest |expr|
    seen over the last 10 terms.
    """
    cfg = cfg or DEFAULT_POWER_CONFIG
    q = params.q
    t = point_value(n_t, params)
    acc = 0.0
    small_streak = 0
    recent: list[float] = []
    qi = 1.0
    stopped_at = -1
    for i in range(cfg.max_terms):
        fv = float(expr(t * qi))
        term = qi * fv
        acc += term
        recent.append(abs(fv))
        if len(recent) > 10:
            recent.pop(0)
        if abs(term) <= cfg.rel_tol * max(abs(acc), _TINY):
            small_streak += 1
            if small_streak >= 3:
                stopped_at = i
                break
        else:
            small_streak = 0
        qi *= q
    if stopped_at < 0:
        raise ConvergenceError(
            f"from-zero integral did not converge within {cfg.max_terms} terms"
        )
    m_recent = max(recent) if recent else 0.0
    bound = t * q ** (stopped_at + 1) * m_recent
    return OperatorResult(value=(1.0 - q) * t * acc, trunc_error_bound=bound)


def q_pow_int(t: float, s: float, n: int, q: float) -> float:
    """Finite q-factorial power prod_{i=0}^{n-1} (t - q^i s); empty product is 1."""
    if n < 0:
        raise DomainError(f"integer power needs n >= 0, got {n}")
    prod = 1.0
    qi = 1.0
    for _ in range(n):
        prod *= t - qi * s
        qi *= q
    return prod


def q_pow_frac(
    t: float, s: float, alpha: float, q: float, cfg: QPowerConfig | None = None
) -> OperatorResult:
    """Fractional q-factorial power (t - s)_q^alpha.

    Computed as t^alpha * prod_{i>=0} (1 - (s/t) q^i) / (1 - (s/t) q^{i+alpha}).
    Requires t > 0 and s/t < 1 (on the grid s/t is a positive power of q),
    except that s = 0 gives exactly t^alpha and s = t gives exactly 0.
    """
    cfg = cfg or DEFAULT_POWER_CONFIG
    if s == 0.0:
        return OperatorResult(value=t**alpha, trunc_error_bound=0.0)
    if t <= 0.0:
        raise DomainError(f"fractional power needs t > 0, got t={t}")
    u = s / t
    if u == 1.0:
        return OperatorResult(value=0.0, trunc_error_bound=0.0)
    if u > 1.0:
        raise DomainError(f"fractional power needs s/t < 1, got s/t={u}")
    prod, tail_rel, terms, status = kernels.qpow_tail(u, alpha, q, cfg.rel_tol, cfg.max_terms)
    if status == STATUS_SINGULAR:
        raise SingularityError(
            f"vanishing denominator factor in (t-s)_q^alpha at term {terms} "
            f"(s/t={u}, alpha={alpha}, q={q})"
        )
    if status == STATUS_NO_CONVERGENCE:
        raise ConvergenceError(
            f"(t-s)_q^alpha product did not converge within {cfg.max_terms} terms"
        )
    value = t**alpha * prod
    return OperatorResult(value=value, trunc_error_bound=abs(value) * tail_rel)


@lru_cache(maxsize=2_000_000)
def _q_pow_frac_grid_cached(
    n_t: int, n_s: int, alpha: float, q: float, rel_tol: float, max_terms: int
) -> float:
    res = q_pow_frac(
        q**n_t, q**n_s, alpha, q, QPowerConfig(rel_tol=rel_tol, max_terms=max_terms)
    )
    return res.value


def q_pow_frac_grid(
    n_t: int, n_s: int, alpha: float, params: QParams, cfg: QPowerConfig | None = None
) -> float:
    """(q^{n_t} - q^{n_s})_q^alpha, memoized on the exponents.

    The verification sweeps evaluate the same grid powers millions of times;
    caching them is transparent because all inputs are pure values.
    """
    cfg = cfg or DEFAULT_POWER_CONFIG
    return _q_pow_frac_grid_cached(n_t, n_s, alpha, params.q, cfg.rel_tol, cfg.max_terms)


def q_gamma(x: float, q: float, cfg: QPowerConfig | None = None) -> OperatorResult:
    """q-Gamma:  (1-q)^{1-x} * prod_{k>=0} (1 - q^{k+1}) / (1 - q^{k+x}).

    Satisfies Gamma_q(1) = 1 and Gamma_q(x+1) = [x]_q Gamma_q(x).  Poles at
    x = 0, -1, -2, ... are rejected.
    """
    cfg = cfg or DEFAULT_POWER_CONFIG
    if x <= 0.0 and x == math.floor(x):
        raise PoleError(f"q-Gamma pole at nonpositive integer x={x}")
    prod, tail_rel, terms, status = kernels.qgamma_tail(x, q, cfg.rel_tol, cfg.max_terms)
    if status == STATUS_SINGULAR:
        raise PoleError(f"q-Gamma denominator vanished at term {terms} (x={x}, q={q})")
    if status == STATUS_NO_CONVERGENCE:
        raise ConvergenceError(
            f"q-Gamma product did not converge within {cfg.max_terms} terms"
        )
    value = (1.0 - q) ** (1.0 - x) * prod
    return OperatorResult(value=value, trunc_error_bound=abs(value) * tail_rel)


@lru_cache(maxsize=100_000)
def _q_gamma_cached(x: float, q: float, rel_tol: float, max_terms: int) -> float:
    return q_gamma(x, q, QPowerConfig(rel_tol=rel_tol, max_terms=max_terms)).value


def q_gamma_value(x: float, q: float, cfg: QPowerConfig | None = None) -> float:
    """Memoized q-Gamma value (the sweeps reuse a handful of arguments)."""
    cfg = cfg or DEFAULT_POWER_CONFIG
    return _q_gamma_cached(x, q, cfg.rel_tol, cfg.max_terms)


class Lemma1Identity(enum.Enum):
    """The four recurrences satisfied by negative-order q-factorial powers."""

    L1 = "L1"  # (1 - q^i)^{-a}       vs (1 - q^{i+1})^{-a}
    L2 = "L2"  # (q^{n+1} - 1)^{-a}   vs (q^n - 1)^{-a}
    L3 = "L3"  # (q^m - q^n)^{-a}     vs (q^{m-1} - q^n)^{-a}
    L4 = "L4"  # (q^m - q^{n-1})^{-a} vs (q^m - q^n)^{-a}


def lemma1_residual(
    kind: Lemma1Identity,
    m: int | None,
    n: int | None,
    i: int | None,
    alpha: float,
    q: float,
    cfg: QPowerConfig | None = None,
) -> float:
    """Relative residual |LHS - RHS| / max(|LHS|, |RHS|) of one recurrence.

    Both sides are evaluated independently through the infinite product.
    Exponent combinations that would put an argument outside the grid order
    (first exponent must be strictly below the second) are rejected.
    """
    cfg = cfg or DEFAULT_POWER_CONFIG
    a = -alpha

    def qp(nt: int, ns: int) -> float:
        return q_pow_frac(q**nt, q**ns, a, q, cfg).value

    if kind is Lemma1Identity.L1:
        if i is None or i < 1:
            raise DomainError(f"L1 needs i >= 1, got {i}")
        lhs = qp(0, i)
        rhs = (1.0 - q**i) / (1.0 - q ** (i - alpha)) * qp(0, i + 1)
    elif kind is Lemma1Identity.L2:
        if n is None or n + 1 >= 0:
            raise DomainError(f"L2 needs n + 1 < 0, got n={n}")
        lhs = qp(n + 1, 0)
        rhs = (1.0 - q ** (-1 - n)) / (q**alpha - q ** (-1 - n)) * qp(n, 0)
    elif kind is Lemma1Identity.L3:
        if m is None or n is None or m >= n:
            raise DomainError(f"L3 needs m < n, got m={m}, n={n}")
        lhs = qp(m, n)
        rhs = (1.0 - q ** (n - m)) / (q**alpha - q ** (n - m)) * qp(m - 1, n)
    elif kind is Lemma1Identity.L4:
        if m is None or n is None or m >= n - 1:
            raise DomainError(f"L4 needs m < n - 1, got m={m}, n={n}")
        lhs = qp(m, n - 1)
        rhs = (1.0 - q ** (n - m - 1)) / (1.0 - q ** (n - m - 1 - alpha)) * qp(m, n)
    else:  # pragma: no cover - exhaustive enum
        raise DomainError(f"unknown identity {kind}")
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), _TINY)
