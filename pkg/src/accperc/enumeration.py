"""Exact counts of self-avoiding paths sigma0 -> endpoint by backstep number.

``count_saw`` runs a symmetry-reduced DFS (canonical paths, weighted by the
relabelling orbit size) and is exact; ``count_saw_naive`` enumerates every
path without reduction and exists as the independent cross-check.  The
module also carries the closed forms for one and two backsteps, the fixed-p
asymptotics, the recursive m-set construction, and the exact expected number
of open paths built from the counts.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Union

import numpy as np

from ._sawdfs import canonical_dfs
from .errors import BudgetExceededError, ResourceCapError

KIND_EXACT = "exact_a"
KIND_UPPER = "upper_M"
KIND_LOWER_TILDE = "lower_m_tilde"
KIND_MSET = "mset_m"

ENUM_DIM_CAP = 30          # visited bitset stays small; budgets guard the rest
DEFAULT_BUDGET = 2_000_000_000
MSET_LIST_CAP = 200_000    # explicit m-set listings only below this many paths

Count = Union[int, Fraction]


@dataclass(frozen=True)
class CountTable:
    """Counts indexed by backstep number p for one (L, H) pair."""

    dim: int
    hamming: int
    counts: dict[int, Count]
    kind: str

    def total(self) -> Count:
        return sum(self.counts.values())

    def __getitem__(self, p: int) -> Count:
        return self.counts.get(p, 0)

    def items(self) -> list[tuple[int, Count]]:
        return sorted(self.counts.items())

    def max_p(self) -> int:
        return max(self.counts) if self.counts else -1


def _max_p_for(L: int, H: int, max_p: Optional[int]) -> int:
    # a self-avoiding path visits at most 2^L sites, so length <= 2^L - 1
    cap = ((1 << L) - 1 - H) // 2
    if max_p is None:
        return cap
    return min(max_p, cap)


# --- canonical, symmetry-weighted enumeration --------------------------------


def _expand_prefixes(
    L: int, H: int, max_len: int, split_depth: int, leaves: np.ndarray
) -> list[tuple[int, int, int, int]]:
    """Breadth-first expansion of canonical prefixes to ``split_depth``.

    Endpoint hits met before the split are booked straight into ``leaves``.
    Returns (vertex, visited_mask, next_fwd, next_back) states; the visited
    mask is a Python int bitset over genotypes.
    """
    endpoint = (1 << H) - 1
    frontier = [(0, 1, 0, H)]  # vertex, visited, nf, nb
    for depth in range(split_depth):
        nxt: list[tuple[int, int, int, int]] = []
        for v, vis, nf, nb in frontier:
            n_fwd = nf + 1 if nf < H else H
            back_hi = nb + 1 if nb < L else L
            labels = list(range(n_fwd)) + list(range(H, back_hi))
            for d in labels:
                w = v ^ (1 << d)
                if vis >> w & 1:
                    continue
                if w == endpoint:
                    p = (depth + 1 - H) >> 1
                    leaves[p, nb - H] += 1
                    continue
                dist = (w ^ endpoint).bit_count()
                if depth + 1 + dist > max_len:
                    continue
                nxt.append(
                    (w, vis | (1 << w), nf + (d == nf), nb + (d == nb))
                )
        frontier = nxt
        if not frontier:
            break
    return frontier


def _mask_to_words(mask: int, n_sites: int) -> np.ndarray:
    n_words = (n_sites + 63) // 64
    words = np.zeros(n_words, dtype=np.uint64)
    for i in range(n_words):
        words[i] = (mask >> (64 * i)) & 0xFFFFFFFFFFFFFFFF
    return words


def count_saw(
    L: int,
    H: Optional[int] = None,
    max_p: Optional[int] = None,
    workers: int = 1,
    budget_leaves: Optional[int] = DEFAULT_BUDGET,
) -> CountTable:
    """Exact number of self-avoiding paths sigma0 -> endpoint per backstep count.

    The DFS only walks canonical paths; each leaf with k distinct back labels
    stands for H! * (L-H)!/(L-H-k)! actual paths.  Totals are exact integers.
    Raises :class:`BudgetExceededError` (no partial results) when the node
    budget runs out.
    """
    if H is None:
        H = L
    if not 1 <= H <= L:
        raise ValueError(f"need 1 <= H <= L, got H={H}, L={L}")
    if L > ENUM_DIM_CAP:
        raise ResourceCapError(f"L={L} exceeds enumeration cap {ENUM_DIM_CAP}")
    p_hi = _max_p_for(L, H, max_p)
    max_len = H + 2 * p_hi
    budget = -1 if budget_leaves is None else int(budget_leaves)

    leaves = np.zeros((p_hi + 1, L - H + 1), dtype=np.int64)
    split_depth = 0 if workers <= 1 and L <= 4 else min(6, max(0, max_len - 1))
    states = _expand_prefixes(L, H, max_len, split_depth, leaves)

    n_sites = 1 << L
    tasks = [
        (v, _mask_to_words(vis, n_sites), nf, nb) for v, vis, nf, nb in states
    ]

    def run(task):
        v, words, nf, nb = task
        part = np.zeros_like(leaves)
        nodes = canonical_dfs(L, H, max_len, v, split_depth, nf, nb, words, budget, part)
        return nodes, part

    total_nodes = 0
    if workers <= 1:
        results = map(run, tasks)
    else:
        pool = ThreadPoolExecutor(max_workers=workers)
        results = pool.map(run, tasks)
    try:
        for nodes, part in results:
            if nodes < 0:
                raise BudgetExceededError(
                    f"enumeration budget {budget} exhausted at L={L}, H={H}"
                )
            total_nodes += int(nodes)
            leaves += part
    finally:
        if workers > 1:
            pool.shutdown(wait=True, cancel_futures=True)
    if budget >= 0 and total_nodes > budget:
        raise BudgetExceededError(
            f"enumeration budget {budget} exhausted at L={L}, H={H}"
        )

    fwd_weight = math.factorial(H)
    counts: dict[int, int] = {}
    for p in range(p_hi + 1):
        acc = 0
        for k in range(L - H + 1):
            n = int(leaves[p, k])
            if n:
                acc += n * fwd_weight * math.perm(L - H, k)
        if acc:
            counts[p] = acc
    return CountTable(dim=L, hamming=H, counts=counts, kind=KIND_EXACT)


def count_saw_naive(
    L: int, H: Optional[int] = None, max_p: Optional[int] = None
) -> CountTable:
    """Unweighted exhaustive DFS over every path; the oracle for count_saw."""
    if H is None:
        H = L
    if not 1 <= H <= L:
        raise ValueError(f"need 1 <= H <= L, got H={H}, L={L}")
    p_hi = _max_p_for(L, H, max_p)
    max_len = H + 2 * p_hi
    endpoint = (1 << H) - 1
    counts: dict[int, int] = {}

    def dfs(v: int, vis: int, length: int) -> None:
        for d in range(L):
            w = v ^ (1 << d)
            if vis >> w & 1:
                continue
            if w == endpoint:
                p = (length + 1 - H) // 2
                counts[p] = counts.get(p, 0) + 1
                continue
            if length + 1 + (w ^ endpoint).bit_count() > max_len:
                continue
            dfs(w, vis | (1 << w), length + 1)

    dfs(0, 1, 0)
    return CountTable(dim=L, hamming=H, counts=counts, kind=KIND_EXACT)


# --- closed forms and asymptotics ---------------------------------------------


def closed_form_p1(L: int) -> int:
    """Exact one-backstep count: L! * L(L-1)(L-2)/6."""
    if L < 1:
        raise ValueError("L must be >= 1")
    return math.factorial(L) * L * (L - 1) * (L - 2) // 6


def closed_form_p2(L: int) -> int:
    """Exact two-backstep count:
    L! * (L-1)(L-2)(5L^4 + 3L^3 + 34L^2 - 264L + 180) / 360."""
    if L < 1:
        raise ValueError("L must be >= 1")
    poly = 5 * L**4 + 3 * L**3 + 34 * L**2 - 264 * L + 180
    num = math.factorial(L) * (L - 1) * (L - 2) * poly
    assert num % 360 == 0
    return num // 360


def asymptotic_p_log(L: int, p: int) -> float:
    """log of the fixed-p large-L asymptotic count L! * L^(3p) / (6^p p!)."""
    if L < 1 or p < 0:
        raise ValueError("need L >= 1 and p >= 0")
    return (
        math.lgamma(L + 1)
        + 3 * p * math.log(L)
        - p * math.log(6)
        - math.lgamma(p + 1)
    )


def asymptotic_p(L: int, p: int) -> float:
    """The asymptotic count as a double; inf on overflow (see the log variant)."""
    lg = asymptotic_p_log(L, p)
    return math.exp(lg) if lg < 709.0 else math.inf


# --- the recursive m-set ------------------------------------------------------


def enumerate_mset(
    L: int, H: Optional[int] = None, max_p: Optional[int] = None
) -> CountTable:
    """Counts (by p) of the recursive lower-bound path set.

    Built by the insertion recurrences: within the H-cube each new label is
    inserted an odd number of times, never twice consecutively; the remaining
    labels are inserted an even number of times under the same adjacency rule.
    Counting insertions by free gaps gives binomial recurrences; the explicit
    strings for small L come from :func:`list_mset_paths`.
    """
    if H is None:
        H = L
    if not 1 <= H <= L:
        raise ValueError(f"need 1 <= H <= L, got H={H}, L={L}")
    p_hi = _max_p_for(L, H, max_p)
    row = [1] + [0] * p_hi  # level 1: the single path "1"
    for level in range(1, H):
        # add label level+1 an odd number of times: strings of length
        # level+1+2p with 2q+1 insertions into the free gaps
        row = [
            sum(
                math.comb(level + 1 + 2 * p - 2 * q, 2 * q + 1) * row[p - q]
                for q in range(p + 1)
            )
            for p in range(p_hi + 1)
        ]
    for _ in range(H, L):
        # back labels appear an even number of times, same adjacency rule
        row = [
            sum(
                math.comb(H + 2 * p - 2 * q + 1, 2 * q) * row[p - q]
                for q in range(p + 1)
            )
            for p in range(p_hi + 1)
        ]
    counts = {p: c for p, c in enumerate(row) if c}
    return CountTable(dim=L, hamming=H, counts=counts, kind=KIND_MSET)


def _insert_label(s: str, label: str, copies: int) -> Iterator[str]:
    """All ways to insert ``copies`` of ``label`` into distinct gaps of ``s``."""
    from itertools import combinations

    gaps = len(s) + 1
    for chosen in combinations(range(gaps), copies):
        parts = []
        prev = 0
        for g in chosen:
            parts.append(s[prev:g])
            parts.append(label)
            prev = g
        parts.append(s[prev:])
        yield "".join(parts)


def list_mset_paths(
    L: int, H: Optional[int] = None, cap: int = MSET_LIST_CAP
) -> list[str]:
    """Explicit m-set strings (digit form), feasible only for small L.

    The set size grows doubly exponentially, so a cap guards the call; the
    count tables from :func:`enumerate_mset` cover larger L.
    """
    if H is None:
        H = L
    if not 1 <= H <= L <= 9:
        raise ValueError("explicit listings use digit strings: need 1 <= H <= L <= 9")
    predicted = enumerate_mset(L, H).total()
    if predicted > cap:
        raise ResourceCapError(
            f"m-set for L={L}, H={H} has {predicted} paths, above the cap {cap}"
        )
    max_len = (1 << L) - 1
    paths = ["1"]
    for level in range(2, H + 1):
        label = str(level)
        grown: list[str] = []
        for s in paths:
            copies = 1
            while len(s) + copies <= max_len and copies <= len(s) + 1:
                grown.extend(_insert_label(s, label, copies))
                copies += 2
        paths = grown
    for level in range(H + 1, L + 1):
        label = str(level)
        grown = []
        for s in paths:
            grown.append(s)  # zero insertions
            copies = 2
            while len(s) + copies <= max_len and copies <= len(s) + 1:
                grown.extend(_insert_label(s, label, copies))
                copies += 2
        paths = grown
    return paths


# --- exact expectation of the number of open paths ----------------------------


def exact_expected_theta(
    L: int,
    H: Optional[int] = None,
    x: float = 0.0,
    table: Optional[CountTable] = None,
    **count_kwargs,
) -> float:
    """E^x(Theta) = sum_p a_{L,H,p} (1-x)^(H+2p-1) / (H+2p-1)! from exact counts.

    Pass a precomputed ``table`` to avoid re-enumerating.  Terms are summed
    exactly (math.fsum) from per-term log-space evaluation.
    """
    if H is None:
        H = L
    if table is None:
        table = count_saw(L, H, **count_kwargs)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x={x} outside [0, 1]")
    if x == 1.0:
        return 0.0
    log1mx = math.log1p(-x)
    terms = []
    for p, a in table.items():
        n = H + 2 * p - 1  # interior sites
        lg = _log_int(a) + n * log1mx - math.lgamma(n + 1)
        terms.append(math.exp(lg))
    return math.fsum(terms)


def _log_int(a: int) -> float:
    if a <= 0:
        return -math.inf
    if a < (1 << 53):
        return math.log(a)
    bits = a.bit_length() - 53
    return math.log(a >> bits) + bits * math.log(2.0)
