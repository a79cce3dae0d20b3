"""Genotypes on the L-hypercube and the direction-string coding of walks.

A genotype is a corner of the hypercube stored as a bitmask; a walk is a
string of direction labels in 1..L, each label toggling one bit (first
occurrence 0->1, second 1->0, and so on).  This module provides the walk
semantics plus the two validity predicates everything else builds on:
endpoint parity and self-avoidance.
"""

from __future__ import annotations

from dataclasses import dataclass

DIM_CAP = 62  # genotypes must fit a machine word with exact bit arithmetic


@dataclass(frozen=True)
class Genotype:
    """A corner of the hypercube: bit i holds the state of site i+1."""

    bits: int
    dim: int

    def __post_init__(self) -> None:
        if not 1 <= self.dim <= DIM_CAP:
            raise ValueError(f"dim must be in 1..{DIM_CAP}, got {self.dim}")
        if not 0 <= self.bits < (1 << self.dim):
            raise ValueError(
                f"bits 0b{self.bits:b} out of range for dim={self.dim}"
            )

    @property
    def hamming_weight(self) -> int:
        return self.bits.bit_count()

    def __str__(self) -> str:
        # site 1 printed first, matching the label convention
        return format(self.bits, f"0{self.dim}b")[::-1]


def sigma0(dim: int) -> Genotype:
    """The all-zeros (all wild) starting corner."""
    return Genotype(0, dim)


def sigma1(dim: int) -> Genotype:
    """The all-ones (all mutant) corner opposite sigma0."""
    return Genotype((1 << dim) - 1, dim)


@dataclass(frozen=True)
class PathCode:
    """A walk coded as a sequence of 1-based direction labels."""

    steps: tuple[int, ...]
    dim: int

    def __post_init__(self) -> None:
        if not 1 <= self.dim <= DIM_CAP:
            raise ValueError(f"dim must be in 1..{DIM_CAP}, got {self.dim}")
        for s in self.steps:
            if not 1 <= s <= self.dim:
                raise ValueError(f"label {s} out of range 1..{self.dim}")

    def __len__(self) -> int:
        return len(self.steps)

    def __str__(self) -> str:
        return format_path(self)


def parse_path(text: str, dim: int) -> PathCode:
    """Parse the textual form: digit string for dim <= 9, else comma-separated.

    The empty string parses to the empty walk.
    """
    text = text.strip()
    if not text:
        return PathCode((), dim)
    if "," in text:
        steps = tuple(int(tok) for tok in text.split(","))
    elif dim <= 9:
        steps = tuple(int(ch) for ch in text)
    else:
        raise ValueError("labels for dim > 9 must be comma-separated")
    return PathCode(steps, dim)


def format_path(path: PathCode) -> str:
    if path.dim <= 9:
        return "".join(str(s) for s in path.steps)
    return ",".join(str(s) for s in path.steps)


@dataclass(frozen=True)
class EndpointSpec:
    """Canonical endpoint at Hamming distance H: bits 1..H set, the rest clear."""

    dim: int
    hamming: int

    def __post_init__(self) -> None:
        if not 1 <= self.dim <= DIM_CAP:
            raise ValueError(f"dim must be in 1..{DIM_CAP}, got {self.dim}")
        if not 0 <= self.hamming <= self.dim:
            raise ValueError(f"hamming must be in 0..{self.dim}, got {self.hamming}")

    @property
    def endpoint_bits(self) -> int:
        return (1 << self.hamming) - 1

    @property
    def endpoint(self) -> Genotype:
        return Genotype(self.endpoint_bits, self.dim)


def _check_same_dim(a: int, b: int) -> None:
    if a != b:
        raise ValueError(f"dimension mismatch: {a} != {b}")


def apply_path(start: Genotype, path: PathCode) -> Genotype:
    """Walk the path from ``start``, toggling the bit named by each step."""
    _check_same_dim(start.dim, path.dim)
    bits = start.bits
    for s in path.steps:
        bits ^= 1 << (s - 1)
    return Genotype(bits, start.dim)


def endpoint_valid(path: PathCode, spec: EndpointSpec) -> bool:
    """True iff labels 1..H occur an odd number of times and labels H+1..L even."""
    _check_same_dim(path.dim, spec.dim)
    # parity of occurrences == XOR of toggles == final bitmask from sigma0
    final = 0
    for s in path.steps:
        final ^= 1 << (s - 1)
    return final == spec.endpoint_bits


def is_self_avoiding(path: PathCode) -> bool:
    """True iff no genotype repeats along the walk from sigma0.

    This is the state-set simulation; :func:`is_self_avoiding_substring` is
    the equivalent substring-parity criterion, kept separate for testing.
    """
    bits = 0
    seen = {0}
    for s in path.steps:
        bits ^= 1 << (s - 1)
        if bits in seen:
            return False
        seen.add(bits)
    return True


def is_self_avoiding_substring(path: PathCode) -> bool:
    """Substring criterion: reject iff some non-empty contiguous substring has
    all-even label counts.

    A substring (i, j] has all-even counts exactly when the prefix parity
    masks at i and j coincide, so this is an O(n^2) scan over prefix masks.
    """
    n = len(path.steps)
    masks = [0] * (n + 1)
    for k, s in enumerate(path.steps):
        masks[k + 1] = masks[k] ^ (1 << (s - 1))
    for i in range(n + 1):
        mi = masks[i]
        for j in range(i + 1, n + 1):
            if masks[j] == mi:
                return False
    return True


def backstep_count(path: PathCode, spec: EndpointSpec) -> int:
    """Number of backsteps p of a valid path to the endpoint: (length - H) / 2."""
    if not endpoint_valid(path, spec):
        raise ValueError("path does not reach the canonical endpoint")
    diff = len(path.steps) - spec.hamming
    if diff < 0 or diff % 2 != 0:
        raise ValueError(
            f"invalid endpoint parity: length {len(path.steps)} vs H={spec.hamming}"
        )
    return diff // 2
