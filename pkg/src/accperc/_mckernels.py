"""Numba kernels for the per-trial accessibility computation.

Each trial fills its fitness table from the counter-based stream (the same
derivation the landscape module uses, so values agree bit-for-bit), then
counts open paths by an iterative memoized DFS over the fitness-increasing
move graph, which is acyclic because comparisons are strict.  Counts saturate
at 2^64-1 with a flag; accessibility stays exact.
"""

from __future__ import annotations

import numpy as np
from numba import int64, njit, uint32, uint64

from ._bits import popcount64, stream_key
from .landscape import draw_start_fitness, draw_uniform_fittest, fill_fitness

_SAT = uint64(0xFFFFFFFFFFFFFFFF)

FLAG_ACCESSIBLE = 1
FLAG_SATURATED = 2
FLAG_DIRECT_SATURATED = 4


@njit(cache=True, nogil=True)
def _theta_dfs(
    L, fitness, fittest, direct_only,
    counts, marks, stamp,
    stack_v, stack_ci, stack_f,
):
    """Count fitness-increasing paths sigma0 -> fittest.  Returns (theta, sat)."""
    start = int64(0)
    if fittest == start:
        return uint64(0), False
    in_prog = uint32(2 * stamp + 1)
    done = uint32(2 * stamp + 2)
    saturated = False

    sp = 0
    stack_v[0] = start
    stack_ci[0] = 0
    stack_f[0] = fitness[start]
    marks[start] = in_prog
    counts[start] = uint64(0)

    while sp >= 0:
        v = stack_v[sp]
        ci = int64(stack_ci[sp])
        fv = stack_f[sp]
        descended = False
        while ci < L:
            d = ci
            ci += 1
            bit = int64(1) << d
            if direct_only and ((fittest & bit) == 0 or (v & bit) != 0):
                continue
            w = v ^ bit
            fw = fitness[w]
            if fw <= fv:
                continue
            mw = marks[w]
            if mw == done:
                s = counts[v] + counts[w]
                if s < counts[v]:
                    s = _SAT
                    saturated = True
                counts[v] = s
            elif mw == in_prog:
                # unreachable: an in-progress site sits below v in fitness
                continue
            elif w == fittest:
                marks[w] = done
                counts[w] = uint64(1)
                s = counts[v] + uint64(1)
                if s < counts[v]:
                    s = _SAT
                    saturated = True
                counts[v] = s
            else:
                stack_ci[sp] = ci
                sp += 1
                stack_v[sp] = w
                stack_ci[sp] = 0
                stack_f[sp] = fw
                marks[w] = in_prog
                counts[w] = uint64(0)
                descended = True
                break
        if descended:
            continue
        marks[v] = done
        sp -= 1
        if sp >= 0:
            parent = stack_v[sp]
            s = counts[parent] + counts[v]
            if s < counts[parent]:
                s = _SAT
                saturated = True
            counts[parent] = s

    return counts[start], saturated


@njit(cache=True, nogil=True)
def trial_batch(
    L, mode_code, h_param, x_random, x_value, root, lo, hi, want_direct,
    out_theta, out_direct, out_flags, out_hamming,
):
    """Run trials [lo, hi); outputs are indexed by trial - lo."""
    n_sites = int64(1) << L
    fitness = np.empty(n_sites, np.float64)
    counts = np.zeros(n_sites, np.uint64)
    marks = np.zeros(n_sites, np.uint32)
    stack_v = np.empty(n_sites + 2, np.int64)
    stack_ci = np.empty(n_sites + 2, np.int8)
    stack_f = np.empty(n_sites + 2, np.float64)
    stamp = uint32(0)

    for trial in range(lo, hi):
        key = stream_key(uint64(root), uint64(trial))
        if x_random:
            x_val = draw_start_fitness(key, n_sites)
        else:
            x_val = x_value
        if mode_code == 0:
            fittest = n_sites - int64(1)
        elif mode_code == 1:
            fittest = (int64(1) << h_param) - int64(1)
        else:
            fittest = draw_uniform_fittest(key, n_sites, x_val < 1.0)

        fill_fitness(fitness, key, fittest, x_val)
        stamp += uint32(1)
        theta, sat = _theta_dfs(
            L, fitness, fittest, False,
            counts, marks, stamp, stack_v, stack_ci, stack_f,
        )
        flags = 0
        if theta >= uint64(1):
            flags |= FLAG_ACCESSIBLE
        if sat:
            flags |= FLAG_SATURATED
        i = trial - lo
        out_theta[i] = theta
        if want_direct:
            stamp += uint32(1)
            d_theta, d_sat = _theta_dfs(
                L, fitness, fittest, True,
                counts, marks, stamp, stack_v, stack_ci, stack_f,
            )
            out_direct[i] = d_theta
            if d_sat:
                flags |= FLAG_DIRECT_SATURATED
        out_flags[i] = flags
        out_hamming[i] = popcount64(uint64(fittest))
