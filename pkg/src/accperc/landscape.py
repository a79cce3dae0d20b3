"""House-of-Cards fitness landscapes on the L-hypercube.

Every site gets an independent uniform fitness in (0, 1), except the fittest
site (pinned to 1) and the starting corner sigma0 (pinned to the conditioning
value x, or drawn per trial).  Three fittest-site placements are supported:
the opposite corner, a fixed Hamming distance, and uniform over the cube.

All randomness is a pure function of (root seed, trial index, site counter),
so a landscape regenerates bit-for-bit from its Seed and the Monte Carlo
kernels see exactly the same values without materializing the array.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Union

import numpy as np
from numba import int64, njit, uint64

from ._bits import popcount64, raw_bits, stream_key, unit_open
from .errors import ResourceCapError

DEFAULT_DIM_CAP = 26  # 2^26 doubles = 512 MiB; raise via max_dim= explicitly

MODE_CORNER = "corner"
MODE_FIXED_HAMMING = "fixedH"
MODE_UNIFORM = "uniform"

_MODE_CODES = {MODE_CORNER: 0, MODE_FIXED_HAMMING: 1, MODE_UNIFORM: 2}


@dataclass(frozen=True)
class PlacementMode:
    """Where the fittest site goes: opposite corner, fixed-H endpoint, or uniform."""

    kind: str
    hamming: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in _MODE_CODES:
            raise ValueError(f"unknown placement mode {self.kind!r}")
        if self.kind == MODE_FIXED_HAMMING:
            if self.hamming is None or self.hamming < 0:
                raise ValueError("fixedH placement needs hamming >= 0")
        elif self.hamming is not None:
            raise ValueError(f"mode {self.kind!r} takes no hamming value")

    @classmethod
    def opposite_corner(cls) -> "PlacementMode":
        return cls(MODE_CORNER)

    @classmethod
    def fixed_hamming(cls, hamming: int) -> "PlacementMode":
        return cls(MODE_FIXED_HAMMING, hamming)

    @classmethod
    def uniform_random(cls) -> "PlacementMode":
        return cls(MODE_UNIFORM)

    @property
    def code(self) -> int:
        return _MODE_CODES[self.kind]


OPPOSITE_CORNER = PlacementMode.opposite_corner()
UNIFORM_RANDOM = PlacementMode.uniform_random()


@dataclass(frozen=True)
class Seed:
    """(root, index) pairs name disjoint, reproducible random streams."""

    root: int
    index: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.root < 2**64:
            raise ValueError("root seed must fit in 64 bits")
        if not 0 <= self.index < 2**64:
            raise ValueError("stream index must fit in 64 bits")


@dataclass(frozen=True)
class FitnessLandscape:
    """Immutable per-genotype fitness table with its pinned special sites."""

    dim: int
    fitness: np.ndarray  # 2^dim float64, indexed by genotype bitmask
    fittest: int
    start_fitness: float

    def __post_init__(self) -> None:
        self.fitness.setflags(write=False)


# --- numba-level derivation, shared with the Monte Carlo kernels ------------


@njit(cache=True, nogil=True, inline="always")
def site_fitness(key, site, fittest, x_val):
    if site == fittest:
        return 1.0
    if site == int64(0):
        return x_val
    return unit_open(key, uint64(site))


@njit(cache=True, nogil=True)
def draw_start_fitness(key, n_sites):
    return unit_open(key, uint64(n_sites))


@njit(cache=True, nogil=True)
def draw_uniform_fittest(key, n_sites, exclude_origin):
    """Uniform corner via masked bits; rejects sigma0 when it cannot be fittest."""
    mask = uint64(n_sites - 1)
    cand = int64(raw_bits(key, uint64(n_sites + 1)) & mask)
    if exclude_origin:
        attempt = 0
        while cand == 0 and attempt < 128:
            attempt += 1
            cand = int64(raw_bits(key, uint64(n_sites + 1 + attempt)) & mask)
        if cand == 0:
            cand = 1
    return cand


@njit(cache=True, nogil=True)
def fill_fitness(out, key, fittest, x_val):
    for site in range(out.shape[0]):
        out[site] = site_fitness(key, int64(site), int64(fittest), x_val)


def resolve_trial(
    L: int, mode: PlacementMode, x: Union[float, str], seed: Seed
) -> tuple[int, int, float]:
    """Resolve (stream key, fittest site, start fitness) for one trial."""
    n_sites = 1 << L
    key = int(stream_key(np.uint64(seed.root), np.uint64(seed.index)))
    if x in ("random", "uniform"):
        x_val = float(draw_start_fitness(np.uint64(key), np.int64(n_sites)))
    else:
        x_val = float(x)
        if not 0.0 <= x_val <= 1.0:
            raise ValueError(f"starting fitness x={x_val} outside [0, 1]")
    if mode.kind == MODE_CORNER:
        fittest = n_sites - 1
    elif mode.kind == MODE_FIXED_HAMMING:
        h = mode.hamming
        if h > L:
            raise ValueError(f"fixedH hamming {h} exceeds L={L}")
        if h == 0 and x_val < 1.0:
            raise ValueError(
                "fixedH(0) with x < 1 is contradictory: sigma0 would have to be "
                "the fittest site"
            )
        fittest = (1 << h) - 1
    else:
        fittest = int(
            draw_uniform_fittest(np.uint64(key), np.int64(n_sites), x_val < 1.0)
        )
    return key, fittest, x_val


def generate(
    L: int,
    mode: PlacementMode,
    x: Union[float, str],
    seed: Seed,
    max_dim: int = DEFAULT_DIM_CAP,
) -> FitnessLandscape:
    """Generate one House-of-Cards landscape.

    ``x`` is the conditioning fitness of sigma0, or ``"random"`` to draw it
    uniformly.  The fittest site is placed per ``mode`` and pinned to 1.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    if L > max_dim:
        raise ResourceCapError(
            f"L={L} exceeds the landscape cap {max_dim} (pass max_dim= to override)"
        )
    key, fittest, x_val = resolve_trial(L, mode, x, seed)
    fitness = np.empty(1 << L, dtype=np.float64)
    fill_fitness(fitness, np.uint64(key), np.int64(fittest), x_val)
    return FitnessLandscape(dim=L, fitness=fitness, fittest=fittest, start_fitness=x_val)


def hamming_to_fittest(ls: FitnessLandscape) -> int:
    """Hamming distance from sigma0 to the fittest site (popcount of its mask)."""
    return int(popcount64(np.uint64(ls.fittest)))


# --- optional binary dump, debugging only ------------------------------------

_DUMP_MAGIC = b"ACPLAND1"
_DUMP_HEADER = struct.Struct("<8sBBiQQqd")  # magic, ver, mode, H, root, index, fittest, x


def save_landscape(
    path: str,
    ls: FitnessLandscape,
    mode: PlacementMode,
    seed: Seed,
    x: Union[float, str],
) -> None:
    x_field = float("nan") if x == "random" else float(x)
    h_field = mode.hamming if mode.kind == MODE_FIXED_HAMMING else -1
    with open(path, "wb") as fh:
        fh.write(
            _DUMP_HEADER.pack(
                _DUMP_MAGIC, ls.dim, mode.code, h_field,
                seed.root, seed.index, ls.fittest, x_field,
            )
        )
        ls.fitness.astype("<f8").tofile(fh)


def load_landscape(path: str) -> tuple[FitnessLandscape, dict]:
    with open(path, "rb") as fh:
        header = fh.read(_DUMP_HEADER.size)
        magic, dim, mode_code, h_field, root, index, fittest, x_field = (
            _DUMP_HEADER.unpack(header)
        )
        if magic != _DUMP_MAGIC:
            raise ValueError("not a landscape dump")
        fitness = np.fromfile(fh, dtype="<f8", count=1 << dim)
    ls = FitnessLandscape(
        dim=dim, fitness=fitness, fittest=fittest,
        start_fitness=float(fitness[0]),
    )
    meta = {
        "mode_code": mode_code,
        "hamming": None if h_field < 0 else h_field,
        "seed": Seed(root, index),
        "x": "random" if np.isnan(x_field) else x_field,
    }
    return ls, meta
