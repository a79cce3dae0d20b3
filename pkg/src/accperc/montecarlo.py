"""Monte Carlo estimation of the accessibility probability P^x(Theta >= 1).

Trial i uses the stream (root, i), so estimates are bit-identical for any
worker count: trials are chunked into fixed ranges, each chunk runs in a
nogil kernel, and aggregation is exact integer arithmetic in chunk order.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from . import _mckernels as mk
from .analytics import critical_x
from .errors import ResourceCapError
from .landscape import (
    DEFAULT_DIM_CAP,
    MODE_FIXED_HAMMING,
    OPPOSITE_CORNER,
    PlacementMode,
    Seed,
    resolve_trial,
)

CHUNK_TRIALS = 1024  # fixed chunking keeps aggregation independent of workers
_Z95 = 1.959963984540054

XSpec = Union[float, str]


@dataclass(frozen=True)
class TrialOutcome:
    """Exact per-landscape path counts for one trial."""

    accessible: bool
    theta: int
    saturated: bool
    hamming: int
    theta_direct: Optional[int] = None

    def __post_init__(self) -> None:
        if self.accessible != (self.theta >= 1):
            raise AssertionError("accessible must mirror theta >= 1")


@dataclass(frozen=True)
class SimulationSummary:
    dim: int
    mode: PlacementMode
    x: XSpec
    n_trials: int
    n_accessible: int
    p_hat: float
    std_err: float
    wilson_95_interval: tuple[float, float]
    mean_theta: float
    mean_theta_se: float
    saturated_frac: float
    seed: Seed
    wall_time: float
    mean_theta_direct: Optional[float] = None
    mean_theta_direct_se: Optional[float] = None
    mean_hamming: float = 0.0


def _validate(L: int, mode: PlacementMode, x: XSpec, max_dim: int) -> None:
    if L < 1:
        raise ValueError("L must be >= 1")
    if L > max_dim:
        raise ResourceCapError(
            f"L={L} exceeds the simulation cap {max_dim} (pass max_dim= to override)"
        )
    # surface placement/x contradictions before running any kernel
    resolve_trial(L, mode, x, Seed(0, 0))


def _mode_params(mode: PlacementMode) -> tuple[int, int]:
    h = mode.hamming if mode.kind == MODE_FIXED_HAMMING else 0
    return mode.code, h


def run_trial(
    L: int,
    mode: PlacementMode,
    x: XSpec,
    seed: Seed,
    compute_direct: bool = True,
    max_dim: int = DEFAULT_DIM_CAP,
) -> TrialOutcome:
    """Generate the trial's landscape implicitly and count its open paths."""
    _validate(L, mode, x, max_dim)
    mode_code, h_param = _mode_params(mode)
    theta = np.zeros(1, np.uint64)
    direct = np.zeros(1, np.uint64)
    flags = np.zeros(1, np.uint8)
    hamming = np.zeros(1, np.uint8)
    x_random = x == "random" or x == "uniform"
    x_val = 0.0 if x_random else float(x)
    mk.trial_batch(
        L, mode_code, h_param, x_random, x_val,
        seed.root, seed.index, seed.index + 1, compute_direct,
        theta, direct, flags, hamming,
    )
    f = int(flags[0])
    return TrialOutcome(
        accessible=bool(f & mk.FLAG_ACCESSIBLE),
        theta=int(theta[0]),
        saturated=bool(f & mk.FLAG_SATURATED),
        hamming=int(hamming[0]),
        theta_direct=int(direct[0]) if compute_direct else None,
    )


def _wilson(k: int, n: int) -> tuple[float, float]:
    if n == 0:
        return 0.0, 1.0
    z2 = _Z95 * _Z95
    p = k / n
    denom = 1.0 + z2 / n
    center = (p + z2 / (2 * n)) / denom
    half = _Z95 * math.sqrt(p * (1.0 - p) / n + z2 / (4 * n * n)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def estimate(
    L: int,
    mode: PlacementMode,
    x: XSpec,
    n_trials: int,
    root_seed: int,
    workers: int = 1,
    compute_direct: bool = False,
    max_dim: int = DEFAULT_DIM_CAP,
) -> SimulationSummary:
    """Average independent trials; trial i uses Seed(root_seed, i).

    ``x`` may be a float in [0,1] or "uniform" to draw sigma0's fitness per
    trial (the unconditioned probability).
    """
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    _validate(L, mode, x, max_dim)
    mode_code, h_param = _mode_params(mode)
    x_random = x == "uniform" or x == "random"
    x_val = 0.0 if x_random else float(x)
    t0 = time.perf_counter()

    chunks = [
        (lo, min(lo + CHUNK_TRIALS, n_trials))
        for lo in range(0, n_trials, CHUNK_TRIALS)
    ]

    def run(bounds: tuple[int, int]):
        lo, hi = bounds
        n = hi - lo
        theta = np.zeros(n, np.uint64)
        direct = np.zeros(n, np.uint64)
        flags = np.zeros(n, np.uint8)
        hamming = np.zeros(n, np.uint8)
        mk.trial_batch(
            L, mode_code, h_param, x_random, x_val,
            root_seed, lo, hi, compute_direct,
            theta, direct, flags, hamming,
        )
        return theta, direct, flags, hamming

    if workers <= 1:
        results = [run(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, chunks))

    n_acc = 0
    n_sat = 0
    s_theta = 0
    s_theta2 = 0
    s_direct = 0
    s_direct2 = 0
    s_ham = 0
    for theta, direct, flags, hamming in results:
        n_acc += int(np.count_nonzero(flags & mk.FLAG_ACCESSIBLE))
        n_sat += int(np.count_nonzero(flags & (mk.FLAG_SATURATED | mk.FLAG_DIRECT_SATURATED)))
        s_ham += int(hamming.sum(dtype=np.int64))
        for t in theta.tolist():
            s_theta += t
            s_theta2 += t * t
        if compute_direct:
            for t in direct.tolist():
                s_direct += t
                s_direct2 += t * t

    n = n_trials
    p_hat = n_acc / n
    std_err = math.sqrt(p_hat * (1.0 - p_hat) / n)
    mean_theta = s_theta / n
    mean_theta_se = _mean_se(s_theta, s_theta2, n)
    summary = SimulationSummary(
        dim=L,
        mode=mode,
        x="uniform" if x_random else x_val,
        n_trials=n,
        n_accessible=n_acc,
        p_hat=p_hat,
        std_err=std_err,
        wilson_95_interval=_wilson(n_acc, n),
        mean_theta=mean_theta,
        mean_theta_se=mean_theta_se,
        saturated_frac=n_sat / n,
        seed=Seed(root_seed, 0),
        wall_time=time.perf_counter() - t0,
        mean_theta_direct=(s_direct / n) if compute_direct else None,
        mean_theta_direct_se=_mean_se(s_direct, s_direct2, n) if compute_direct else None,
        mean_hamming=s_ham / n,
    )
    return summary


def _mean_se(s: int, s2: int, n: int) -> float:
    if n < 2:
        return 0.0
    mean = s / n
    var = max(0.0, (s2 - n * mean * mean) / (n - 1))
    return math.sqrt(var / n)


def summary_row(s: SimulationSummary) -> dict:
    """Flat CSV/JSON row for one estimate."""
    lo, hi = s.wilson_95_interval
    row = {
        "L": s.dim,
        "mode": s.mode.kind,
        "H_or_NA": s.mode.hamming if s.mode.kind == MODE_FIXED_HAMMING else "NA",
        "x": s.x,
        "n_trials": s.n_trials,
        "n_accessible": s.n_accessible,
        "p_hat": s.p_hat,
        "std_err": s.std_err,
        "ci_lo": lo,
        "ci_hi": hi,
        "mean_theta": s.mean_theta,
        "saturated_frac": s.saturated_frac,
        "root_seed": s.seed.root,
    }
    if s.mean_theta_direct is not None:
        row["mean_theta_direct"] = s.mean_theta_direct
        row["mean_theta_direct_se"] = s.mean_theta_direct_se
    return row


def figure1_sweep(
    L_list: Sequence[int],
    x_grid: Sequence[float],
    n_trials: int,
    root_seed: int,
    mode: PlacementMode = OPPOSITE_CORNER,
    workers: int = 1,
    compute_direct: bool = False,
    max_dim: int = DEFAULT_DIM_CAP,
) -> list[dict]:
    """P^x(Theta >= 1) rows over an (L, x) grid, plus the x*_1 reference value.

    All cells share the root seed, so within one L the landscapes are common
    random numbers across x and the accessibility curves are monotone in x
    pointwise.
    """
    x_star_1 = critical_x(1.0).x_star
    rows = []
    for L in L_list:
        for x in x_grid:
            s = estimate(
                L, mode, x, n_trials, root_seed,
                workers=workers, compute_direct=compute_direct, max_dim=max_dim,
            )
            row = summary_row(s)
            row["x_star_1"] = x_star_1
            rows.append(row)
    return rows


def hamming_conditional_sweep(
    L: int,
    H_list: Sequence[int],
    x_grid: Sequence[float],
    n_trials: int,
    root_seed: int,
    workers: int = 1,
    compute_direct: bool = False,
    max_dim: int = DEFAULT_DIM_CAP,
) -> list[dict]:
    """Fixed-Hamming placement sweep over (H, x) at one L."""
    rows = []
    for H in H_list:
        mode = PlacementMode.fixed_hamming(H)
        for x in x_grid:
            s = estimate(
                L, mode, x, n_trials, root_seed,
                workers=workers, compute_direct=compute_direct, max_dim=max_dim,
            )
            rows.append(summary_row(s))
    return rows
