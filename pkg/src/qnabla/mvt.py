"""Composition identity, the boundary constant M_q, and the discrete
mean-value witness search.

The composition identity: integrating the a*q-anchored fractional
derivative of f back from a = q^{n_a} and evaluating at b = q^{n_b} < a
returns f(b) - M_q(alpha, a, b) f(a).  The constant is

    M_q(alpha, a, b) = (1-q) a^{1-alpha} (b - qa)_q^{alpha-1} (1-q)_q^{-alpha}
                       / (Gamma_q(alpha) Gamma_q(1-alpha))

where (1-q)_q^{-alpha} is the q-factorial power with base pair (1, q).
Note the shifted argument (b - qa): the boundary term arises from the value
of the order-(1-alpha) integral at the anchor, whose kernel is evaluated at
(a - qa) = a(1-q), and expanding it to general b produces the q*a-shifted
power.  The residual checker validates this coefficient to full precision
(an unshifted (b - a) does not satisfy the identity).

M_q lies in (0, 1) for orders in (0, 1) and b > a > 0, and sinks to 0 as
the anchor a slides toward the accumulation point.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import DEFAULT_POWER_CONFIG, QPowerConfig, q_gamma_value, q_pow_frac, q_pow_frac_grid
from .errors import (
    DegenerateDenominatorError,
    DomainError,
    HypothesisError,
    SandwichViolationError,
)
from .fracops import q_frac_integral, rl_q_derivative
from .grid import GridFunction, QParams, point_value

_TINY = 1e-300


def m_q(
    alpha: float,
    n_a: int,
    n_b: int,
    params: QParams,
    cfg: QPowerConfig | None = None,
) -> float:
    """The boundary constant M_q(alpha, a, b) with a = q^{n_a}, b = q^{n_b}."""
    cfg = cfg or DEFAULT_POWER_CONFIG
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"M_q needs 0 < alpha < 1, got {alpha}")
    if n_b >= n_a:
        raise DomainError(f"M_q needs b > a (n_b < n_a), got n_b={n_b}, n_a={n_a}")
    q = params.q
    a = point_value(n_a, params)
    pow_b_qa = q_pow_frac_grid(n_b, n_a + 1, alpha - 1.0, params, cfg)
    pow_1_q = q_pow_frac(1.0, q, -alpha, q, cfg).value
    return (
        (1.0 - q)
        * a ** (1.0 - alpha)
        * pow_b_qa
        * pow_1_q
        / (q_gamma_value(alpha, q, cfg) * q_gamma_value(1.0 - alpha, q, cfg))
    )


def composition_residual(
    f: GridFunction,
    n_a: int,
    alpha: float,
    n_b: int,
    params: QParams,
    cfg: QPowerConfig | None = None,
) -> float:
    """Residual of  I_a^alpha (D_{aq}^alpha f)(b) = f(b) - M_q(alpha,a,b) f(a).

    The left side composes the fractional integral anchored at a over the
    grid function of a*q-anchored derivatives; the right side is closed
    form.  Residual is relative to the largest participating magnitude so
    random f with accidental cancellation on the right cannot inflate it.
    """
    cfg = cfg or DEFAULT_POWER_CONFIG
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"composition identity needs 0 < alpha < 1, got {alpha}")
    if n_b >= n_a:
        raise DomainError(f"need b > a (n_b < n_a), got n_b={n_b}, n_a={n_a}")
    f.require_window(n_b, n_a, "composition_residual")
    inner = GridFunction(
        n_b,
        n_a - 1,
        tuple(rl_q_derivative(f, n_a, alpha, i, params, cfg) for i in range(n_b, n_a)),
    )
    lhs = q_frac_integral(inner, n_a, alpha, n_b, params, cfg)
    m = m_q(alpha, n_a, n_b, params, cfg)
    fb, fa = f.value_at(n_b), f.value_at(n_a)
    rhs = fb - m * fa
    scale = abs(fb) + m * abs(fa)
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), scale, _TINY)


@dataclass(frozen=True)
class MvtWitnesses:
    """Result of the exhaustive mean-value witness search.

    quotient is the middle term (f(b) - M_q f(a)) / (g(b) - M_q g(a));
    r1/r2 are the exponents attaining the extreme derivative ratios, and
    the sandwich min_ratio <= quotient <= max_ratio has been asserted.
    """

    r1_exponent: int
    r2_exponent: int
    quotient: float
    min_ratio: float
    max_ratio: float
    delta_window: tuple[int, int]


def mvt_witnesses(
    f: GridFunction,
    g: GridFunction,
    n_a: int,
    n_b: int,
    alpha: float,
    params: QParams,
    cfg: QPowerConfig | None = None,
) -> MvtWitnesses:
    """Search Delta = {q^n : n_b <= n <= n_a} for mean-value witnesses.

    Requires g strictly increasing on Delta with g(a) > 0 (which forces the
    anchored derivative of g to be positive there).  The derivative ratio
    f'/g' is scanned at every admissible point; the extremes must bracket
    the quotient, and any violation raises
    :class:`SandwichViolationError` with full replay context.
    """
    cfg = cfg or DEFAULT_POWER_CONFIG
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"mean-value search needs 0 < alpha < 1, got {alpha}")
    if n_b >= n_a:
        raise DomainError(f"need b > a (n_b < n_a), got n_b={n_b}, n_a={n_a}")
    f.require_window(n_b, n_a, "mvt_witnesses")
    g.require_window(n_b, n_a, "mvt_witnesses")

    tau_g = 1e-11 * max(1.0, g.max_abs())
    if g.value_at(n_a) <= tau_g:
        raise HypothesisError(f"g(a) must be > 0, got {g.value_at(n_a)}")
    for n in range(n_b + 1, n_a + 1):
        if g.value_at(n - 1) - g.value_at(n) <= tau_g:
            raise HypothesisError(
                f"g is not strictly increasing at exponent pair ({n - 1}, {n})"
            )

    m = m_q(alpha, n_a, n_b, params, cfg)
    gb, ga = g.value_at(n_b), g.value_at(n_a)
    denom = gb - m * ga
    tau_den = 1e-13 * max(abs(gb), m * abs(ga))
    if abs(denom) <= tau_den:
        raise DegenerateDenominatorError(
            f"quotient denominator g(b) - M_q g(a) = {denom} is numerically zero"
        )
    quotient = (f.value_at(n_b) - m * f.value_at(n_a)) / denom

    ratios: list[float] = []
    for n in range(n_b, n_a):
        df = rl_q_derivative(f, n_a, alpha, n, params, cfg)
        dg = rl_q_derivative(g, n_a, alpha, n, params, cfg)
        if dg <= 0.0:
            raise HypothesisError(
                f"anchored derivative of g is not positive at exponent {n} "
                f"(value {dg}); strictly increasing positive g should force it"
            )
        ratios.append(df / dg)

    min_ratio = min(ratios)
    max_ratio = max(ratios)
    # Ties resolve to the smallest exponent (largest point) for determinism.
    r1 = n_b + min(k for k, r in enumerate(ratios) if r == min_ratio)
    r2 = n_b + min(k for k, r in enumerate(ratios) if r == max_ratio)

    tau = 1e-11 * max(1.0, abs(quotient), max(abs(r) for r in ratios))
    if not (min_ratio - tau <= quotient <= max_ratio + tau):
        raise SandwichViolationError(
            f"mean-value sandwich failed: min={min_ratio} quotient={quotient} "
            f"max={max_ratio}",
            context={
                "q": params.q,
                "alpha": alpha,
                "n_a": n_a,
                "n_b": n_b,
                "f_values": list(f.values),
                "g_values": list(g.values),
                "f_n_lo": f.n_lo,
                "g_n_lo": g.n_lo,
                "ratios": ratios,
                "quotient": quotient,
                "m_q": m,
            },
        )
    return MvtWitnesses(
        r1_exponent=r1,
        r2_exponent=r2,
        quotient=quotient,
        min_ratio=min_ratio,
        max_ratio=max_ratio,
        delta_window=(n_b, n_a),
    )
