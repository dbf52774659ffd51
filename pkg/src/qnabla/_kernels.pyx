# cython: language_level=3, boundscheck=False, cdivision=True
"""Compiled twin of qnabla._kernels_py.

Same algorithm, same loop order, same stopping rule; only the execution
engine differs.  Keep the two files in sync (tests compare the backends).
"""

from libc.math cimport pow, INFINITY

STATUS_OK = 0
STATUS_NO_CONVERGENCE = 1
STATUS_SINGULAR = 2

cdef double _DEN_FLOOR = 1e-280


def qpow_tail(double u, double alpha, double q, double rel_tol, long max_terms):
    """Truncated product  prod_{i>=0} (1 - u q^i) / (1 - u q^{i+alpha})."""
    cdef double q_alpha = pow(q, alpha)
    cdef double qi = 1.0
    cdef double prod = 1.0
    cdef double delta = 0.0
    cdef double den, factor
    cdef long i
    for i in range(max_terms):
        den = 1.0 - u * qi * q_alpha
        if -_DEN_FLOOR < den < _DEN_FLOOR:
            return prod, INFINITY, i, 2
        factor = (1.0 - u * qi) / den
        prod *= factor
        delta = factor - 1.0 if factor >= 1.0 else 1.0 - factor
        if delta < rel_tol:
            return prod, 2.0 * delta * q / (1.0 - q), i + 1, 0
        qi *= q
    return prod, 2.0 * delta * q / (1.0 - q), max_terms, 1


def qgamma_tail(double x, double q, double rel_tol, long max_terms):
    """Truncated product  prod_{k>=0} (1 - q^{k+1}) / (1 - q^{k+x})."""
    cdef double q_x = pow(q, x)
    cdef double qk = 1.0
    cdef double prod = 1.0
    cdef double delta = 0.0
    cdef double den, factor
    cdef long k
    for k in range(max_terms):
        den = 1.0 - qk * q_x
        if -_DEN_FLOOR < den < _DEN_FLOOR:
            return prod, INFINITY, k, 2
        factor = (1.0 - qk * q) / den
        prod *= factor
        delta = factor - 1.0 if factor >= 1.0 else 1.0 - factor
        if delta < rel_tol:
            return prod, 2.0 * delta * q / (1.0 - q), k + 1, 0
        qk *= q
    return prod, 2.0 * delta * q / (1.0 - q), max_terms, 1
