"""Sandwich machinery for the exact path counts.

``majo_table`` and ``mino_tilde_table`` build the upper/lower bounding
sequences by their binomial recurrences (the lower one damped, kept as exact
rationals).  Their generating functions have closed forms: sinh^H cosh^(L-H)
above, a product of truncated damped sinh/cosh below; ``eval_bounds``
evaluates both derivatives in log space to bracket the expected number of
open paths.  The same path set drives the ordinary generating polynomial
``phi_polynomial`` used for doubly-exponential bounds on the total number of
self-avoiding corner-to-corner paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .enumeration import KIND_LOWER_TILDE, KIND_UPPER, CountTable
from .errors import ResourceCapError

PHI_DEGREE_CAP = 20  # degree d_L ~ 2^(L+1)/3; beyond this the polynomial is huge


# --- bounding-count recurrences -----------------------------------------------


def majo_table(L: int, H: Optional[int] = None, max_p: int = 40) -> CountTable:
    """Upper-bound counts M_{L,H,p}: paths with intersections allowed.

    Two phases: within the H-cube each new label appears an odd number of
    times at free positions; the remaining L-H labels an even number of
    times.  Exact integers.
    """
    if H is None:
        H = L
    if not 1 <= H <= L:
        raise ValueError(f"need 1 <= H <= L, got H={H}, L={L}")
    row = [1] * (max_p + 1)  # M_{1,p} = 1 for all p
    for level in range(1, H):
        row = [
            sum(
                math.comb(level + 1 + 2 * p, 2 * q + 1) * row[p - q]
                for q in range(p + 1)
            )
            for p in range(max_p + 1)
        ]
    for _ in range(H, L):
        row = [
            sum(
                math.comb(H + 2 * p, 2 * q) * row[p - q]
                for q in range(p + 1)
            )
            for p in range(max_p + 1)
        ]
    return CountTable(
        dim=L, hamming=H, counts=dict(enumerate(row)), kind=KIND_UPPER
    )


def mino_tilde_table(L: int, H: Optional[int] = None, max_p: int = 40) -> CountTable:
    """Damped lower-bound counts, exact rationals.

    The no-two-consecutive binomial is replaced by the plain binomial times a
    rational damping factor, which makes the generating function factor into
    truncated sinh/cosh products.
    """
    if H is None:
        H = L
    if not 1 <= H <= L:
        raise ValueError(f"need 1 <= H <= L, got H={H}, L={L}")
    row: list[Fraction] = [Fraction(1)] + [Fraction(0)] * max_p
    for level in range(1, H):
        new = []
        for p in range(max_p + 1):
            acc = Fraction(0)
            for q in range(p + 1):
                if 2 * q >= level + 1:
                    break
                damp = Fraction(level + 1 - 2 * q, level + 2) ** (2 * q)
                acc += row[p - q] * math.comb(level + 1 + 2 * p, 2 * q + 1) * damp
            new.append(acc)
        row = new
    for _ in range(H, L):
        new = []
        for p in range(max_p + 1):
            acc = Fraction(0)
            for q in range(p + 1):
                if 2 * q >= H + 1:
                    break
                damp = Fraction(H + 1 - 2 * q, H + 1) ** (2 * q - 1)
                acc += row[p - q] * math.comb(H + 2 * p, 2 * q) * damp
            new.append(acc)
        row = new
    counts = {p: c for p, c in enumerate(row)}
    return CountTable(dim=L, hamming=H, counts=counts, kind=KIND_LOWER_TILDE)


# --- truncated, damped sinh / cosh --------------------------------------------


def sinh_truncated(l: int, X: float) -> float:
    """sum over 2q < l of X^(2q+1)/(2q+1)! * (1 - (2q+1)/(l+1))^(2q)."""
    if l < 1:
        raise ValueError("l must be >= 1")
    total = 0.0
    term = X  # X^(2q+1)/(2q+1)! at q=0
    q = 0
    while 2 * q < l:
        damp = ((l - 2 * q) / (l + 1)) ** (2 * q)
        contrib = term * damp
        total += contrib
        if contrib < total * 1e-18 and 2 * q > abs(X):
            break
        q += 1
        term *= X * X / ((2 * q) * (2 * q + 1))
    return total


def sinh_truncated_prime(l: int, X: float) -> float:
    if l < 1:
        raise ValueError("l must be >= 1")
    total = 0.0
    term = 1.0  # X^(2q)/(2q)! at q=0
    q = 0
    while 2 * q < l:
        damp = ((l - 2 * q) / (l + 1)) ** (2 * q)
        contrib = term * damp
        total += contrib
        if contrib < total * 1e-18 and 2 * q > abs(X):
            break
        q += 1
        term *= X * X / ((2 * q - 1) * (2 * q))
    return total


def cosh_truncated(H: int, X: float) -> float:
    """sum over 2q < H+1 of X^(2q)/(2q)! * (1 - 2q/(H+1))^(2q-1)."""
    if H < 1:
        raise ValueError("H must be >= 1")
    total = 0.0
    term = 1.0
    q = 0
    while 2 * q < H + 1:
        damp = ((H + 1 - 2 * q) / (H + 1)) ** (2 * q - 1)
        contrib = term * damp
        total += contrib
        if contrib < total * 1e-18 and 2 * q > abs(X):
            break
        q += 1
        term *= X * X / ((2 * q - 1) * (2 * q))
    return total


def cosh_truncated_prime(H: int, X: float) -> float:
    if H < 1:
        raise ValueError("H must be >= 1")
    total = 0.0
    q = 1
    term = X  # X^(2q-1)/(2q-1)! at q=1
    while 2 * q < H + 1:
        damp = ((H + 1 - 2 * q) / (H + 1)) ** (2 * q - 1)
        contrib = term * damp
        total += contrib
        if contrib < total * 1e-18 and 2 * q > abs(X):
            break
        q += 1
        term *= X * X / ((2 * q - 2) * (2 * q - 1))
    return total


# --- bound evaluation ----------------------------------------------------------


@dataclass(frozen=True)
class BoundPair:
    """Lower/upper bracket of E^x(Theta), with log-scale values for large L."""

    lower: float
    upper: float
    log_lower: float
    log_upper: float
    dim: int
    hamming: int
    x: float

    def __post_init__(self) -> None:
        if self.log_lower > self.log_upper + 1e-12:
            raise AssertionError(
                f"bound inversion at L={self.dim}, H={self.hamming}, x={self.x}"
            )


def eval_bounds(L: int, H: Optional[int] = None, x: float = 0.0) -> BoundPair:
    """g'_{L,H}(1-x) <= E^x(Theta) <= G'_{L,H}(1-x), evaluated in log space.

    The upper derivative uses the closed form
    sinh^(H-1) cosh^(L-H-1) (H cosh^2 + (L-H) sinh^2); the lower one the
    logarithmic derivative of prod sinh_l * cosh_H^(L-H).
    """
    if H is None:
        H = L
    if not 1 <= H <= L:
        raise ValueError(f"need 1 <= H <= L, got H={H}, L={L}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x={x} outside [0, 1]")
    if x == 1.0:
        return BoundPair(0.0, 0.0, -math.inf, -math.inf, L, H, 1.0)
    X = 1.0 - x
    sh, ch = math.sinh(X), math.cosh(X)
    log_upper = (
        (H - 1) * math.log(sh)
        + (L - H - 1) * math.log(ch)
        + math.log(H * ch * ch + (L - H) * sh * sh)
    )

    log_g = 0.0
    deriv_sum = 0.0
    for l in range(1, H + 1):
        s = sinh_truncated(l, X)
        log_g += math.log(s)
        deriv_sum += sinh_truncated_prime(l, X) / s
    if L > H:
        c = cosh_truncated(H, X)
        log_g += (L - H) * math.log(c)
        deriv_sum += (L - H) * cosh_truncated_prime(H, X) / c
    log_lower = log_g + math.log(deriv_sum)

    upper = math.exp(log_upper) if log_upper < 709.0 else math.inf
    lower = math.exp(log_lower) if log_lower < 709.0 else math.inf
    return BoundPair(lower, upper, log_lower, log_upper, L, H, x)


# --- the ordinary generating polynomial of the m-set ----------------------------


@dataclass(frozen=True)
class IntegerPolynomial:
    """Dense integer polynomial; coefficients[d] is the degree-d coefficient."""

    coefficients: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc


def degree_formula(L: int) -> int:
    """Degree of the m-set polynomial: (2^(L+1)-1)/3 for odd L, (2^(L+1)-2)/3 even."""
    if L < 0:
        raise ValueError("L must be >= 0")
    if L % 2 == 1:
        return (2 ** (L + 1) - 1) // 3
    return (2 ** (L + 1) - 2) // 3


def phi_polynomial(L: int, degree_cap: int = PHI_DEGREE_CAP) -> IntegerPolynomial:
    """The m-set generating polynomial by its functional recurrence.

    phi_{L+1}(X) = (1+X)/2 phi_L(X+X^2) - (1-X)/2 phi_L(X-X^2); by parity the
    second composition is the degree-alternating reflection of the first, so
    one composition A(X) = phi_L(X+X^2) suffices and
    phi_{L+1}[d] = A[d] + A[d-1] on degrees d of parity L+1.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    if L > degree_cap:
        raise ResourceCapError(
            f"phi cap is L <= {degree_cap} (degree grows like 2^(L+1)/3)"
        )
    coeffs = [0, 1]  # phi_1 = X
    for level in range(1, L):
        deg = len(coeffs) - 1
        A = [0] * (2 * deg + 1)
        pw = [1]  # (1+X)^k, advanced incrementally
        k_done = 0
        for k, c in enumerate(coeffs):
            if c == 0:
                continue
            while k_done < k:
                pw.append(0)
                for i in range(len(pw) - 1, 0, -1):
                    pw[i] += pw[i - 1]
                k_done += 1
            for j, b in enumerate(pw):
                A[k + j] += c * b
        parity = (level + 1) & 1
        nxt = [0] * (2 * deg + 2)
        for d in range(2 * deg + 2):
            if (d & 1) == parity:
                t = A[d] if d <= 2 * deg else 0
                if d >= 1:
                    t += A[d - 1]
                nxt[d] = t
        while nxt and nxt[-1] == 0:
            nxt.pop()
        coeffs = nxt
    return IntegerPolynomial(tuple(coeffs))


# --- doubly-exponential bounds on the total corner-to-corner count ---------------


def aL_bounds(L: int) -> tuple[int, int]:
    """(2^(d_{L-1}), sum of M_{L,p} over lengths L+2p <= 2^L), both exact.

    The upper sum is evaluated through the inclusion-exclusion expansion of
    sinh(X)^L: the count of length-n strings over 1..L with all-odd letter
    multiplicities is 2^-L * sum_j (-1)^j C(L,j) (L-2j)^n, and the geometric
    sums over n collapse to a closed form, which keeps L around 14 cheap.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    lower = 2 ** degree_formula(L - 1)
    n_hi = (1 << L) if L % 2 == 0 else (1 << L) - 1
    T = (n_hi - L) // 2 + 1  # number of admissible lengths n = L, L+2, ..., n_hi
    total = 0
    for j in range(L + 1):
        r = L - 2 * j
        if r == 0:
            continue
        r2 = r * r
        if r2 == 1:
            geo = (r**L) * T
        else:
            geo = (r**L) * (r2**T - 1) // (r2 - 1)
        total += (-1) ** j * math.comb(L, j) * geo
    assert total % (1 << L) == 0
    upper = total >> L
    return lower, upper
