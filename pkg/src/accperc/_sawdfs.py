"""Depth-first enumeration kernel for canonical self-avoiding paths.

A canonical path is one whose forward labels (1..H) first appear in
increasing order and whose back labels (H+1..L) first appear in increasing
order; every self-avoiding path maps to exactly one canonical path under
direction relabelling, so counting canonical leaves weighted by the orbit
size reproduces the exact counts at a fraction of the tree size.

The kernel is an explicit-stack DFS over bitmask genotypes with a visited
bitset and a remaining-length prune.  It accumulates leaf counts bucketed by
(backsteps p, distinct back labels used k); the Python driver applies the
exact integer weights.
"""

from __future__ import annotations

import numpy as np
from numba import int64, njit, uint64

from ._bits import popcount64


@njit(cache=True, nogil=True)
def canonical_dfs(L, H, max_len, v0, depth0, nf0, nb0, visited, budget, leaves):
    """Run the canonical DFS below one prefix state.

    ``visited`` is the bitset of genotypes on the prefix (including sigma0
    and ``v0``); it is restored before returning.  ``leaves[p, k]`` is
    incremented per endpoint hit.  Returns the number of tree nodes
    processed, or -1 if ``budget`` (>= 0) was exceeded.
    """
    endpoint = (int64(1) << H) - int64(1)
    max_frames = max_len - depth0 + 2
    fr_v = np.empty(max_frames, np.int64)
    fr_ci = np.empty(max_frames, np.int8)
    fr_nf = np.empty(max_frames, np.int8)
    fr_nb = np.empty(max_frames, np.int8)

    sp = 0
    fr_v[0] = v0
    fr_ci[0] = 0
    fr_nf[0] = nf0
    fr_nb[0] = nb0
    nodes = int64(0)

    while sp >= 0:
        v = fr_v[sp]
        ci = fr_ci[sp]
        nf = fr_nf[sp]
        nb = fr_nb[sp]
        depth = depth0 + sp

        # candidates: used labels plus the next new label of each class
        n_fwd = nf + 1 if nf < H else H
        n_back = (nb + 1 if nb < L else L) - H
        n_cand = n_fwd + n_back

        descended = False
        while ci < n_cand:
            d = ci if ci < n_fwd else H + (ci - n_fwd)
            ci += 1
            w = v ^ (int64(1) << d)
            if visited[w >> 6] & (uint64(1) << uint64(w & 63)):
                continue
            if w == endpoint:
                p = (depth + 1 - H) >> 1
                leaves[p, nb - H] += 1
                nodes += 1
                continue
            dist = int64(popcount64(uint64(w ^ endpoint)))
            if depth + 1 + dist > max_len:
                continue
            # descend into w
            fr_ci[sp] = ci
            sp += 1
            fr_v[sp] = w
            fr_ci[sp] = 0
            fr_nf[sp] = nf + 1 if d == nf else nf
            fr_nb[sp] = nb + 1 if d == nb else nb
            visited[w >> 6] |= uint64(1) << uint64(w & 63)
            nodes += 1
            if budget >= 0 and nodes > budget:
                return int64(-1)
            descended = True
            break

        if descended:
            continue
        # frame exhausted: clear the bit this frame's vertex set (root is caller-owned)
        if sp > 0:
            visited[v >> 6] &= ~(uint64(1) << uint64(v & 63))
        sp -= 1

    return nodes
