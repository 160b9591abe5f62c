"""Node and tile partitions: the two clustering layers of the estimator.

A node partition z maps nodes to k groups; the induced k x k grid of
group pairs ("tiles") is in turn partitioned by a tile partition u into
s shapes. Tiles are the unordered pairs (a, b) with a <= b, enumerated
row-major over the upper triangle.
"""

from dataclasses import dataclass, field

import numpy as np


def tile_count(k: int) -> int:
    return k * (k + 1) // 2


def tile_pairs(k: int) -> tuple[np.ndarray, np.ndarray]:
    """Arrays (a, b) of the unordered tile coordinates in canonical order."""
    a, b = np.triu_indices(k)
    return a, b


def tile_index(k: int, a: int, b: int) -> int:
    """Canonical flat index of tile (a, b); order of a and b is irrelevant."""
    if not (0 <= a < k and 0 <= b < k):
        raise ValueError(f"tile ({a}, {b}) out of range for k={k}")
    if a > b:
        a, b = b, a
    return a * k - a * (a - 1) // 2 + (b - a)


@dataclass(frozen=True)
class NodePartition:
    """Assignment of n nodes to k non-empty groups (labels 0..k-1).

    Fits produced by the histogram step are near-regular (group sizes
    differ by at most one); planted partitions derived from latent
    positions need not be, so regularity is exposed as a property rather
    than enforced at construction.
    """

    z: np.ndarray
    k: int
    sizes: np.ndarray = field(init=False)

    def __post_init__(self):
        z = np.asarray(self.z, dtype=np.int64)
        if z.ndim != 1 or z.size == 0:
            raise ValueError("z must be a non-empty 1-d array")
        if z.min() < 0 or z.max() >= self.k:
            raise ValueError(f"group labels must lie in [0, {self.k})")
        sizes = np.bincount(z, minlength=self.k)
        if (sizes == 0).any():
            raise ValueError("every group must be non-empty")
        z = z.copy()
        z.flags.writeable = False
        sizes.flags.writeable = False
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "sizes", sizes)

    @property
    def n(self) -> int:
        return self.z.size

    @property
    def is_regular(self) -> bool:
        return int(self.sizes.max() - self.sizes.min()) <= 1


@dataclass(frozen=True)
class TilePartition:
    """Assignment of the k(k+1)/2 tiles to s shapes, surjective onto [s]."""

    k: int
    s: int
    assign: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.assign, dtype=np.int64)
        if a.shape != (tile_count(self.k),):
            raise ValueError(
                f"assign must cover the {tile_count(self.k)} tiles of k={self.k}"
            )
        if a.size and (a.min() < 0 or a.max() >= self.s):
            raise ValueError(f"shape ids must lie in [0, {self.s})")
        if np.unique(a).size != self.s:
            raise ValueError("tile partition must use every shape id")
        a = a.copy()
        a.flags.writeable = False
        object.__setattr__(self, "assign", a)

    def shape_of(self, a: int, b: int) -> int:
        return int(self.assign[tile_index(self.k, a, b)])

    def as_matrix(self) -> np.ndarray:
        """Shape id per ordered group pair as a symmetric k x k matrix."""
        m = np.empty((self.k, self.k), dtype=np.int64)
        a, b = tile_pairs(self.k)
        m[a, b] = self.assign
        m[b, a] = self.assign
        return m
