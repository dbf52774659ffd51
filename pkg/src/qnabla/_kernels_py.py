"""Pure-Python implementations of the hot product kernels.

These are the innermost loops of the library: every q-factorial power and
q-Gamma evaluation reduces to one truncated infinite product computed here.
A Cython twin (:mod:`qnabla._kernels`) implements the same algorithm
step-for-step; :mod:`qnabla.backend` picks whichever is importable.

Status codes returned by the kernels:

    0  converged (stopping rule fired)
    1  max_terms reached without convergence
    2  a denominator factor vanished (singular input)
"""

from __future__ import annotations

STATUS_OK = 0
STATUS_NO_CONVERGENCE = 1
STATUS_SINGULAR = 2

# Below this magnitude a denominator factor is treated as a true zero.
_DEN_FLOOR = 1e-280


def qpow_tail(u: float, alpha: float, q: float, rel_tol: float, max_terms: int):
    """Truncated product  prod_{i>=0} (1 - u q^i) / (1 - u q^{i+alpha}).

    Stops at the first factor within rel_tol of 1; the factors approach 1
    geometrically (ratio q) for u in [0, 1), so the relative size of the
    dropped tail is of order |last factor - 1| * q / (1 - q).

    Returns (partial_product, tail_rel_bound, terms_used, status).
    """
    q_alpha = q**alpha
    qi = 1.0
    prod = 1.0
    delta = 0.0
    for i in range(max_terms):
        den = 1.0 - u * qi * q_alpha
        if -_DEN_FLOOR < den < _DEN_FLOOR:
            return prod, float("inf"), i, STATUS_SINGULAR
        factor = (1.0 - u * qi) / den
        prod *= factor
        delta = factor - 1.0 if factor >= 1.0 else 1.0 - factor
        if delta < rel_tol:
            return prod, 2.0 * delta * q / (1.0 - q), i + 1, STATUS_OK
        qi *= q
    return prod, 2.0 * delta * q / (1.0 - q), max_terms, STATUS_NO_CONVERGENCE


def qgamma_tail(x: float, q: float, rel_tol: float, max_terms: int):
    """Truncated product  prod_{k>=0} (1 - q^{k+1}) / (1 - q^{k+x}).

    Same stopping rule and tail estimate as :func:`qpow_tail`.
    Returns (partial_product, tail_rel_bound, terms_used, status).
    """
    q_x = q**x
    qk = 1.0
    prod = 1.0
    delta = 0.0
    for k in range(max_terms):
        den = 1.0 - qk * q_x
        if -_DEN_FLOOR < den < _DEN_FLOOR:
            return prod, float("inf"), k, STATUS_SINGULAR
        factor = (1.0 - qk * q) / den
        prod *= factor
        delta = factor - 1.0 if factor >= 1.0 else 1.0 - factor
        if delta < rel_tol:
            return prod, 2.0 * delta * q / (1.0 - q), k + 1, STATUS_OK
        qk *= q
    return prod, 2.0 * delta * q / (1.0 - q), max_terms, STATUS_NO_CONVERGENCE
