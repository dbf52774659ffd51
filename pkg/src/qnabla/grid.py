"""The geometric grid {q^n : n integer} and finite functions on it.

For 0 < q < 1 the grid point q^n shrinks as n grows, so the real order of
two points is the *reverse* of the order of their exponents.  Everything
here works on exponents; no ordering decision ever goes through floating
point.  The accumulation point 0 is deliberately not representable: every
operator in this library evaluates at some q^n with finite n, and integrals
toward 0 are handled by tail truncation, which keeps all grid arithmetic
exact on integers.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

from .errors import DomainError, EvaluationError, WindowError


@dataclass(frozen=True)
class QParams:
    """The base q of the grid, optionally bundled with a fractional order.

    q must lie strictly inside (0, 1).  alpha is carried for convenience
    (the CLI populates it); operations take their order explicitly and
    validate it against their own admissible range.
    """

    q: float
    alpha: float | None = None

    def __post_init__(self):
        if not (0.0 < self.q < 1.0):
            raise DomainError(f"q must satisfy 0 < q < 1, got {self.q}")


class Ordering(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def point_value(n: int, params: QParams) -> float:
    """The real value q^n of the grid point with exponent n."""
    return params.q ** n


def compare_points(n1: int, n2: int) -> Ordering:
    """Real-order comparison of q^{n1} vs q^{n2}, decided on exponents only.

    Since q < 1, larger exponents give smaller points: q^{n1} > q^{n2}
    exactly when n1 < n2.
    """
    if n1 < n2:
        return Ordering.GREATER
    if n1 > n2:
        return Ordering.LESS
    return Ordering.EQUAL


@dataclass(frozen=True)
class GridPoint:
    """A grid point t = q^n represented exactly by its exponent."""

    exponent: int

    def value(self, params: QParams) -> float:
        return point_value(self.exponent, params)

    def __lt__(self, other: "GridPoint") -> bool:
        return compare_points(self.exponent, other.exponent) is Ordering.LESS

    def __le__(self, other: "GridPoint") -> bool:
        return compare_points(self.exponent, other.exponent) is not Ordering.GREATER

    def __gt__(self, other: "GridPoint") -> bool:
        return compare_points(self.exponent, other.exponent) is Ordering.GREATER

    def __ge__(self, other: "GridPoint") -> bool:
        return compare_points(self.exponent, other.exponent) is not Ordering.LESS


@dataclass(frozen=True)
class GridFunction:
    """Real values y(q^n) on a closed window of exponents [n_lo, n_hi].

    values[k] holds y(q^{n_lo + k}); since exponents increase as points
    shrink, values[0] belongs to the *largest* point of the window.
    Queries outside the window raise :class:`WindowError` — there is no
    silent extrapolation.
    """

    n_lo: int
    n_hi: int
    values: tuple[float, ...]

    def __post_init__(self):
        if self.n_lo > self.n_hi:
            raise WindowError(f"empty window [{self.n_lo}, {self.n_hi}]")
        if len(self.values) != self.n_hi - self.n_lo + 1:
            raise WindowError(
                f"window [{self.n_lo}, {self.n_hi}] needs "
                f"{self.n_hi - self.n_lo + 1} values, got {len(self.values)}"
            )
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @property
    def window(self) -> tuple[int, int]:
        return (self.n_lo, self.n_hi)

    def __len__(self) -> int:
        return len(self.values)

    def value_at(self, n: int) -> float:
        if n < self.n_lo or n > self.n_hi:
            raise WindowError(
                f"exponent {n} outside window [{self.n_lo}, {self.n_hi}]"
            )
        return self.values[n - self.n_lo]

    def require_window(self, n_lo: int, n_hi: int, what: str = "operation") -> None:
        """Fail fast when this function cannot cover [n_lo, n_hi]."""
        if n_lo < self.n_lo or n_hi > self.n_hi:
            raise WindowError(
                f"{what} needs exponents [{n_lo}, {n_hi}] but window is "
                f"[{self.n_lo}, {self.n_hi}]"
            )

    def max_abs(self) -> float:
        return max(abs(v) for v in self.values)

    def negated(self) -> "GridFunction":
        return GridFunction(self.n_lo, self.n_hi, tuple(-v for v in self.values))


@dataclass(frozen=True)
class Tabulated:
    """Explicit value table, the passthrough expression for :func:`sample`."""

    n_lo: int
    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @property
    def n_hi(self) -> int:
        return self.n_lo + len(self.values) - 1


Expression = Union[Callable[[float], float], Tabulated]


def constant(c: float) -> Callable[[float], float]:
    """Expression t -> c."""
    return lambda t: c


def identity() -> Callable[[float], float]:
    """Expression t -> t."""
    return lambda t: t


def monomial(n_anchor: int, mu: float, params: QParams, cfg=None) -> Callable[[float], float]:
    """Expression t -> (t - a)_q^mu with anchor a = q^{n_anchor}.

    Imported lazily from the power module to keep this module dependency-free.
    """
    from .core import q_pow_frac

    a = point_value(n_anchor, params)

    def expr(t: float) -> float:
        return q_pow_frac(t, a, mu, params.q, cfg).value

    return expr


def sample(expr: Expression, window: tuple[int, int], params: QParams) -> GridFunction:
    """Evaluate an expression at every grid point of a window.

    ``expr`` is either a callable of the point value t, or a
    :class:`Tabulated` block whose range must cover the window.  Any
    evaluation failure aborts with the offending exponent.
    """
    n_lo, n_hi = int(window[0]), int(window[1])
    if n_lo > n_hi:
        raise WindowError(f"empty window [{n_lo}, {n_hi}]")
    if isinstance(expr, Tabulated):
        if n_lo < expr.n_lo or n_hi > expr.n_hi:
            raise WindowError(
                f"tabulated range [{expr.n_lo}, {expr.n_hi}] does not cover "
                f"requested window [{n_lo}, {n_hi}]"
            )
        vals = expr.values[n_lo - expr.n_lo : n_hi - expr.n_lo + 1]
        return GridFunction(n_lo, n_hi, vals)
    out = []
    for n in range(n_lo, n_hi + 1):
        t = point_value(n, params)
        try:
            v = float(expr(t))
        except Exception as exc:
            raise EvaluationError(n, exc) from exc
        if math.isnan(v):
            raise EvaluationError(n, ValueError("expression returned NaN"))
        out.append(v)
    return GridFunction(n_lo, n_hi, tuple(out))
