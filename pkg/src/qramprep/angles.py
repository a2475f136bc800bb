"""Splitting angles, leaf phases, and leaf signs derived from a matrix.

The angle at memory index z rotates probability weight between the two child
subtrees under node z of the weight tree:

    theta_z = 2 * arcsin(sqrt(T_R / (T_L + T_R)))    (0 when both children are 0)

so that a y-rotation by theta_z maps |0> to sqrt(T_L / (T_L + T_R)) |0> +
sqrt(T_R / (T_L + T_R)) |1>. All theta_z are unsigned magnitudes in [0, pi];
sign and phase information lives only in the per-entry leaf layer:

* phases: phi_z = atan2(im, re) reduced to [0, 2*pi), 0 for zero entries
* signs (real data only): s_z = 1 iff the entry is negative
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRangeError, NotRealMatrixError, WrongModeError
from .matrix import ComplexMatrix, squared_moduli
from .weight_tree import WeightTree, build_weight_tree, sibling_weights

MODES = ("complex", "real_signed")


@dataclass(frozen=True)
class ComplexAngleTree:
    """Angle tree plus leaf layer: everything written into memory cells.

    ``thetas[z - 1]`` is the splitting angle at memory index z (z = 1..K-1);
    ``phases[z]`` the leaf phase of entry z. In real_signed mode ``signs[z]``
    is the one-bit leaf sign and phases collapse to {0, pi}.
    """

    thetas: np.ndarray
    phases: np.ndarray
    mode: str
    signs: np.ndarray | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise WrongModeError(f"mode must be one of {MODES}, got {self.mode!r}")
        if len(self.phases) != len(self.thetas) + 1:
            raise IndexOutOfRangeError(
                f"need K-1 angles for K phases, got {len(self.thetas)} and {len(self.phases)}"
            )
        if self.mode == "real_signed" and (
            self.signs is None or len(self.signs) != len(self.phases)
        ):
            raise IndexOutOfRangeError("real_signed mode requires K sign bits")

    @property
    def size(self) -> int:
        return len(self.phases)

    @property
    def preprocessing_ops(self) -> int:
        """Angle evaluations (K-1) plus leaf evaluations (K)."""
        return 2 * self.size - 1

    def theta(self, z: int) -> float:
        """Splitting angle at memory index z; the z = 0 dummy is 0."""
        if not 0 <= z < self.size:
            raise IndexOutOfRangeError(f"memory index {z} outside [0, {self.size - 1}]")
        return 0.0 if z == 0 else float(self.thetas[z - 1])

    def phase(self, z: int) -> float:
        if not 0 <= z < self.size:
            raise IndexOutOfRangeError(f"memory index {z} outside [0, {self.size - 1}]")
        return float(self.phases[z])

    def sign(self, z: int) -> int:
        if self.signs is None:
            raise WrongModeError("no sign layer in complex mode")
        if not 0 <= z < self.size:
            raise IndexOutOfRangeError(f"memory index {z} outside [0, {self.size - 1}]")
        return int(self.signs[z])


def splitting_angle(z: int, tree: WeightTree) -> float:
    """Rotation angle that splits the weight reaching node z between its children."""
    t_left, t_right = sibling_weights(z, tree)
    total = t_left + t_right
    if total <= 0.0:
        return 0.0
    # clamp guards against ratios like 1 + 1e-17 from the division
    ratio = min(max(t_right / total, 0.0), 1.0)
    return 2.0 * math.asin(math.sqrt(ratio))


def build_angle_tree(tree: WeightTree) -> np.ndarray:
    """All K-1 splitting angles, ordered by memory index z = 1..K-1."""
    out = np.fromiter(
        (splitting_angle(z, tree) for z in range(1, tree.size)),
        dtype=np.float64,
        count=tree.size - 1,
    )
    out.setflags(write=False)
    return out


def build_phase_layer(m: ComplexMatrix) -> np.ndarray:
    """Leaf phases atan2(im, re) mod 2*pi; zero entries get phase 0."""
    ent = m.entries
    phases = np.arctan2(ent.imag, ent.real)
    phases = np.where(ent == 0, 0.0, phases)
    phases = np.where(phases < 0.0, phases + math.tau, phases)
    phases[phases >= math.tau] = 0.0  # tiny negatives can round up to 2*pi
    phases.setflags(write=False)
    return phases


def build_sign_layer(m: ComplexMatrix) -> np.ndarray:
    """Leaf sign bits s_z = 1 iff entry z < 0; requires purely real entries."""
    if np.any(m.entries.imag != 0.0):
        raise NotRealMatrixError("matrix has nonzero imaginary parts")
    signs = (m.entries.real < 0.0).astype(np.uint8)
    signs.setflags(write=False)
    return signs


def build_angle_structures(m: ComplexMatrix, mode: str = "complex") -> ComplexAngleTree:
    """Full preprocessing: weight tree, splitting angles, and leaf layer."""
    if mode not in MODES:
        raise WrongModeError(f"mode must be one of {MODES}, got {mode!r}")
    tree = build_weight_tree(squared_moduli(m))
    return ComplexAngleTree(
        thetas=build_angle_tree(tree),
        phases=build_phase_layer(m),
        mode=mode,
        signs=build_sign_layer(m) if mode == "real_signed" else None,
    )
