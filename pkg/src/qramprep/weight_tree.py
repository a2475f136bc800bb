"""Complete binary aggregation tree over per-entry squared moduli.

``levels[h]`` holds the 2**h node weights at height h: ``levels[0]`` is the
root (the squared Frobenius norm) and ``levels[depth]`` are the per-entry
weights. Every parent is the sum of its two children, so the build is one
pairwise-summation pass per level, O(K) total.

Memory indices z >= 1 address sibling pairs: node z sits at level
l(z) = floor(log2 z) + 1, position d(z) = z - 2**floor(log2 z), and its
children are the weights consumed by the splitting angle at z.
"""
from __future__ import annotations

from dataclasses import dataclass
from numbers import Integral

import numpy as np

from .errors import AllZeroWeightsError, IndexOutOfRangeError, NotPowerOfTwoError


@dataclass(frozen=True)
class WeightTree:
    """Immutable tree of subtree weight sums; ``levels[h][p]`` is node (h, p)."""

    levels: tuple[np.ndarray, ...]

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def size(self) -> int:
        """Leaf count K = 2**depth."""
        return 1 << self.depth

    @property
    def total(self) -> float:
        """Root weight: the squared Frobenius norm."""
        return float(self.levels[0][0])

    def node(self, h: int, p: int) -> float:
        if not (0 <= h <= self.depth and 0 <= p < (1 << h)):
            raise IndexOutOfRangeError(f"no node at height {h}, position {p}")
        return float(self.levels[h][p])


def build_weight_tree(moduli_sq) -> WeightTree:
    """Aggregate K = 2**k squared moduli bottom-up into a WeightTree."""
    leaves = np.ascontiguousarray(moduli_sq, dtype=np.float64).reshape(-1)
    size = leaves.size
    if size < 2 or size & (size - 1):
        raise NotPowerOfTwoError(f"need a power-of-two length >= 2, got {size}")
    if np.any(leaves < 0):
        raise ValueError("squared moduli must be non-negative")
    if not leaves.any():
        raise AllZeroWeightsError("all weights are zero")
    levels = [leaves]
    while levels[-1].size > 1:
        prev = levels[-1]
        levels.append(prev[0::2] + prev[1::2])
    for lvl in levels:
        lvl.setflags(write=False)
    return WeightTree(levels=tuple(reversed(levels)))


def level_position(z: int) -> tuple[int, int]:
    """Level and position of memory index z >= 1: (floor(log2 z) + 1, z - 2**floor(log2 z))."""
    if not isinstance(z, Integral) or z < 1:
        raise IndexOutOfRangeError(f"memory index must be >= 1, got {z!r} (cell 0 is the dummy)")
    z = int(z)
    level = z.bit_length()
    return level, z - (1 << (level - 1))


def sibling_weights(z: int, tree: WeightTree) -> tuple[float, float]:
    """The two child subtree weights split by the angle at memory index z."""
    level, pos = level_position(z)
    if z >= tree.size:
        raise IndexOutOfRangeError(f"memory index {z} outside [1, {tree.size - 1}]")
    children = tree.levels[level]
    return float(children[2 * pos]), float(children[2 * pos + 1])
