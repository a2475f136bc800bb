"""Addressable fixed-width memory emulation with XOR query semantics.

A memory image is K cells of uniform width w, one integer bit pattern per
cell. The bit layout inside a cell is fixed: the t-bit angle field occupies
the high bits and the phase/sign field the low bits,

    cell = angle_bits << aux_width | aux_bits

with aux_width = t in complex mode (phase field) and 1 in real_signed mode
(sign bit). Cell 0 always carries an all-zero angle field: index 0 has no
sibling pair, the cell exists only to keep the width uniform, but its leaf
field (phase or sign of entry 0) is live.

A query XORs the addressed cell into the data registers of every branch of
a superposed state and bumps the query ledger; under pipelined routing one
query costs k time units (one per tree level).

JSON wire format: {"mode": ..., "t": t, "k": k, "cells": [unsigned ints]}.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING

from .angles import MODES, ComplexAngleTree, build_angle_structures
from .errors import (
    LengthMismatchError,
    NotPowerOfTwoError,
    ParseError,
    WidthMismatchError,
    WrongModeError,
)
from .fixedpoint import (
    FixedAngle,
    FixedPhase,
    check_precision,
    encode_magnitude_angle,
    encode_phase,
)
from .matrix import ComplexMatrix

if TYPE_CHECKING:
    from .simulator import BranchState


@dataclass(frozen=True)
class MemoryImage:
    """K immutable cells of ``width`` bits each; addresses are k bits wide."""

    cells: tuple[int, ...]
    width: int
    t: int
    mode: str
    k: int

    def __post_init__(self):
        check_precision(self.t)
        for name in ("width", "t", "k"):  # fixed-width ints would overflow cell shifts
            object.__setattr__(self, name, int(getattr(self, name)))
        if self.mode not in MODES:
            raise WrongModeError(f"mode must be one of {MODES}, got {self.mode!r}")
        expected = 2 * self.t if self.mode == "complex" else self.t + 1
        if self.width != expected:
            raise WidthMismatchError(
                f"{self.mode} cells must be {expected} bits wide, got {self.width}"
            )
        if self.k < 1 or len(self.cells) != 1 << self.k:
            raise LengthMismatchError(
                f"expected {1 << self.k if self.k >= 1 else '>= 2'} cells, got {len(self.cells)}"
            )
        limit = 1 << self.width
        for z, cell in enumerate(self.cells):
            if not isinstance(cell, int) or not 0 <= cell < limit:
                raise WidthMismatchError(f"cell {z} does not fit in {self.width} bits")

    @property
    def size(self) -> int:
        return len(self.cells)

    @property
    def aux_width(self) -> int:
        """Width of the low (phase or sign) field."""
        return self.width - self.t

    def angle_field(self, z: int) -> int:
        return self.cells[z] >> self.aux_width

    def aux_field(self, z: int) -> int:
        return self.cells[z] & ((1 << self.aux_width) - 1)

    def decode_angle(self, z: int) -> float:
        return FixedAngle(self.angle_field(z), self.t).value

    def decode_phase(self, z: int) -> float:
        if self.mode != "complex":
            raise WrongModeError("phase field exists only in complex mode")
        return FixedPhase(self.aux_field(z), self.t).value

    def sign_bit(self, z: int) -> int:
        if self.mode != "real_signed":
            raise WrongModeError("sign field exists only in real_signed mode")
        return self.aux_field(z)

    def to_json_dict(self) -> dict:
        return {"mode": self.mode, "t": self.t, "k": self.k, "cells": list(self.cells)}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, doc: dict) -> "MemoryImage":
        try:
            mode, t, k, cells = doc["mode"], doc["t"], doc["k"], doc["cells"]
        except (TypeError, KeyError) as exc:
            raise ParseError(f"memory image document missing key: {exc}") from exc
        if not isinstance(cells, list):
            raise ParseError("cells must be a list of unsigned integers")
        width = 2 * t if mode == "complex" else t + 1
        return cls(cells=tuple(cells), width=width, t=t, mode=mode, k=k)


@dataclass
class QueryLedger:
    """Counts queries against one image; routing time is k units per query."""

    k: int
    query_count: int = 0
    access_log: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def routing_time(self) -> int:
        return self.query_count * self.k

    def record(self, addresses) -> None:
        self.query_count += 1
        self.access_log.append(tuple(sorted(set(addresses))))


def _check_pow2_cells(n: int) -> int:
    if n < 2 or n & (n - 1):
        raise NotPowerOfTwoError(f"cell count must be a power of two >= 2, got {n}")
    return n.bit_length() - 1


def layout_complex(thetas, phases, t: int) -> MemoryImage:
    """Pack K-1 angles and K phases into K cells of width 2t.

    Cell z holds encode(theta_z) in the high t bits and encode(phi_z) in the
    low t bits; the angle field of cell 0 is all zeros.
    """
    check_precision(t)
    t = int(t)
    if len(thetas) + 1 != len(phases):
        raise LengthMismatchError(
            f"need K-1 angles for K phases, got {len(thetas)} and {len(phases)}"
        )
    k = _check_pow2_cells(len(phases))
    cells = [encode_phase(float(phases[0]), t).bits]
    for theta, phi in zip(thetas, phases[1:]):
        cells.append(
            (encode_magnitude_angle(float(theta), t).bits << t)
            | encode_phase(float(phi), t).bits
        )
    return MemoryImage(cells=tuple(cells), width=2 * t, t=t, mode="complex", k=k)


def layout_real_signed(thetas, signs, t: int) -> MemoryImage:
    """Pack K-1 angles and K sign bits into K cells of width t+1.

    Cell 0 keeps the sign of entry 0 next to its dummy angle field: the leaf
    query reaches address 0, so that sign bit is live.
    """
    check_precision(t)
    t = int(t)
    if len(thetas) + 1 != len(signs):
        raise LengthMismatchError(
            f"need K-1 angles for K signs, got {len(thetas)} and {len(signs)}"
        )
    k = _check_pow2_cells(len(signs))
    bits = [int(s) for s in signs]
    if any(b not in (0, 1) for b in bits):
        raise LengthMismatchError("sign bits must be 0 or 1")
    cells = [bits[0]]
    for theta, s in zip(thetas, bits[1:]):
        cells.append((encode_magnitude_angle(float(theta), t).bits << 1) | s)
    return MemoryImage(cells=tuple(cells), width=t + 1, t=t, mode="real_signed", k=k)


def build_memory_image(
    m: ComplexMatrix, t: int, mode: str = "complex"
) -> tuple[MemoryImage, ComplexAngleTree]:
    """Preprocess a matrix all the way to its memory image."""
    gamma = build_angle_structures(m, mode)
    if mode == "complex":
        return layout_complex(gamma.thetas, gamma.phases, t), gamma
    return layout_real_signed(gamma.thetas, gamma.signs, t), gamma


def query(img: MemoryImage, state: "BranchState", ledger: QueryLedger) -> "BranchState":
    """XOR the addressed cell into the data registers of every branch.

    Amplitudes are untouched; the map permutes basis labels, so it preserves
    the norm exactly and is its own inverse.
    """
    if state.k != img.k:
        raise WidthMismatchError(f"address width {state.k} != image width {img.k}")
    if state.t != img.t or state.aux_width != img.aux_width:
        raise WidthMismatchError(
            f"data registers {state.t}+{state.aux_width} bits, cells {img.t}+{img.aux_width}"
        )
    addr_mask = (1 << img.k) - 1
    shift = img.k + 1
    cells = img.cells
    out = {}
    for label, amp in state.branches.items():
        out[label ^ (cells[label & addr_mask] << shift)] = amp
    ledger.record(label & addr_mask for label in state.branches)
    return replace(state, branches=out)


def query_cost(ledger: QueryLedger, k: int) -> int:
    """Total routing time: queries * k under unit depth per tree level."""
    return ledger.query_count * k
