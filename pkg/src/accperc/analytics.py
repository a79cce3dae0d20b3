"""Critical starting fitnesses and the closed-form expectations around them.

The critical point x*_alpha solves sinh(1-x)^alpha cosh(1-x)^(1-alpha) = 1;
below it the expected number of open paths diverges with L, above it it
vanishes.  Also here: the minimal-path expectation L(1-x)^(L-1) with its
crossing point x_c(L), the averaged (random fittest site) expectation and its
closed form L(e^(1-x)/2)^L, and per-(L,H,x) convergence diagnostics of the
L-th roots of the bounds toward their common limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .bounds import eval_bounds

RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class CriticalPoint:
    alpha: float
    x_star: float
    residual: float
    degenerate: bool = False


def _balance(alpha: float, x: float) -> float:
    """alpha*ln sinh(1-x) + (1-alpha)*ln cosh(1-x); strictly decreasing in x."""
    X = 1.0 - x
    return alpha * math.log(math.sinh(X)) + (1.0 - alpha) * math.log(math.cosh(X))


def critical_x(alpha: float) -> CriticalPoint:
    """Solve for the unique root of sinh(1-x)^alpha cosh(1-x)^(1-alpha) = 1.

    Bracketed bisection to width 1e-14, one secant polish.  alpha = 0 is the
    degenerate limit x* = 1 (cosh(1-x) = 1 forces x = 1) and is flagged.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha={alpha} outside [0, 1]")
    if alpha == 0.0:
        return CriticalPoint(alpha=0.0, x_star=1.0, residual=0.0, degenerate=True)
    lo, hi = 0.0, 1.0 - 1e-15
    f_lo, f_hi = _balance(alpha, lo), _balance(alpha, hi)
    if not (f_lo > 0.0 > f_hi):
        raise AssertionError("root bracket failed")
    while hi - lo > 1e-14:
        mid = 0.5 * (lo + hi)
        if _balance(alpha, mid) > 0.0:
            lo, f_lo = mid, _balance(alpha, mid)
        else:
            hi, f_hi = mid, _balance(alpha, mid)
    x = lo if f_hi == f_lo else lo - f_lo * (hi - lo) / (f_hi - f_lo)
    X = 1.0 - x
    residual = math.sinh(X) ** alpha * math.cosh(X) ** (1.0 - alpha) - 1.0
    return CriticalPoint(alpha=alpha, x_star=x, residual=residual)


def critical_curve(grid: Iterable[float]) -> list[CriticalPoint]:
    """x*_alpha over an alpha grid (the critical-line figure data)."""
    return [critical_x(a) for a in grid]


def minimal_path_expectation(L: int, x: float) -> float:
    """Expected number of open minimal-length paths: L(1-x)^(L-1)."""
    if L < 1:
        raise ValueError("L must be >= 1")
    return L * (1.0 - x) ** (L - 1)


def x_c(L: int) -> float:
    """Starting fitness where the minimal-path expectation equals 1:
    1 - exp(-ln L / (L-1)); behaves like (ln L)/L for large L."""
    if L < 2:
        raise ValueError("x_c is defined for L >= 2 (the L=1 expectation is constant)")
    return -math.expm1(-math.log(L) / (L - 1))


def _log_gprime(L: int, H: int, X: float) -> float:
    """log G'_{L,H}(X) by the closed form; valid for all 0 <= H <= L, X > 0."""
    sh, ch = math.sinh(X), math.cosh(X)
    core = H * ch * ch + (L - H) * sh * sh
    return (H - 1) * math.log(sh) + (L - H - 1) * math.log(ch) + math.log(core)


def averaged_expectation(L: int, x: float) -> tuple[float, float]:
    """Random fittest site: (binomial average of G'_{L,H}(1-x), L(e^(1-x)/2)^L).

    The two agree identically (sum_H C(L,H) sinh^H cosh^(L-H) = e^(LX)); the
    first is summed in log space as a numerical cross-check of the second.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x={x} outside [0, 1]")
    X = 1.0 - x
    closed = math.exp(math.log(L) + L * (X - math.log(2.0)))
    if X == 0.0:
        # only the H=1 term survives: 2^-L * C(L,1) * G'_{L,1}(0) = L/2^L
        return L * 2.0 ** (-L), closed
    logs = [
        math.lgamma(L + 1)
        - math.lgamma(h + 1)
        - math.lgamma(L - h + 1)
        - L * math.log(2.0)
        + _log_gprime(L, h, X)
        for h in range(L + 1)
    ]
    peak = max(logs)
    exact = math.exp(peak) * math.fsum(math.exp(v - peak) for v in logs)
    return exact, closed


@dataclass(frozen=True)
class LimitDiagnostic:
    dim: int
    hamming: int
    x: float
    lower_root: float
    upper_root: float
    limit: float


def limit_diagnostic(L: int, H: Optional[int] = None, x: float = 0.0) -> LimitDiagnostic:
    """L-th roots of the two bounds next to their common limit
    sinh(1-x)^alpha cosh(1-x)^(1-alpha) at alpha = H/L, for convergence tables."""
    if H is None:
        H = L
    pair = eval_bounds(L, H, x)
    alpha = H / L
    X = 1.0 - x
    limit = math.sinh(X) ** alpha * math.cosh(X) ** (1.0 - alpha)
    return LimitDiagnostic(
        dim=L,
        hamming=H,
        x=x,
        lower_root=math.exp(pair.log_lower / L),
        upper_root=math.exp(pair.log_upper / L),
        limit=limit,
    )


def convergence_table(
    L_list: Sequence[int], alpha: float, x: float
) -> list[LimitDiagnostic]:
    """Diagnostics along an L ladder at H = round(alpha * L) (at least 1)."""
    return [limit_diagnostic(L, max(1, round(alpha * L)), x) for L in L_list]
