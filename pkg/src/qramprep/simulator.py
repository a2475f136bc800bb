"""Exact sparse statevector simulation of the two-step preparation procedure.

A branch basis label packs four registers into one integer,

    [ w_angle : t bits | w_aux : t or 1 bits | v : 1 bit | a : k bits ]

with the address in the low bits (a_{k-1} most significant inside its field).
Amplitudes live in a dict keyed by label, so the state stays sparse: after
every uncompute the work registers are zero on all branches and at most 2**k
branches remain, whatever t is. A dense vector over k + 2t + 1 qubits would
be hopeless for t = 32; the sparse map is exact and cheap.

The magnitude loop runs k iterations of query -> y-rotation cascade ->
uncompute query -> circular shift, threading a single marker bit through the
address register; one final query pair applies the leaf phases (complex) or
the leaf signs (real_signed). Total queries: 2k + 2.

Cascades are applied as the composed single-qubit unitary per branch, which
is mathematically identical to the bit-by-bit product of controlled rotations
(the rotations commute and their angles sum to the decoded register value);
:func:`ry_cascade_by_gates` keeps the literal bit-by-bit form as a reference
for equivalence tests.

State dump wire format: {"k": k, "branches": [{"address": a, "v": bit,
"amp": [re, im]}]} sorted by address; dumping demands clean work registers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from numbers import Integral
from typing import Callable

from .angles import ComplexAngleTree
from .errors import (
    DirtyStateError,
    DirtyWorkRegistersError,
    IndexOutOfRangeError,
    InvalidDimensionsError,
    WrongModeError,
)
from .fixedpoint import check_precision
from .memory import MemoryImage, QueryLedger, query
from .weight_tree import WeightTree

# amplitudes smaller than this are dropped in quantized runs (never in ideal runs)
PRUNE_THRESHOLD = 1e-15


@dataclass
class BranchState:
    """Sparse register state: basis label -> complex amplitude."""

    branches: dict[int, complex]
    t: int
    aux_width: int
    k: int

    @property
    def addr_mask(self) -> int:
        return (1 << self.k) - 1

    @property
    def v_mask(self) -> int:
        return 1 << self.k

    @property
    def aux_shift(self) -> int:
        return self.k + 1

    @property
    def angle_shift(self) -> int:
        return self.k + 1 + self.aux_width

    @property
    def data_width(self) -> int:
        return self.t + self.aux_width

    @property
    def mode(self) -> str:
        return "real_signed" if self.aux_width == 1 else "complex"

    def address(self, label: int) -> int:
        return label & self.addr_mask

    def marker(self, label: int) -> int:
        return (label >> self.k) & 1

    def aux_bits(self, label: int) -> int:
        return (label >> self.aux_shift) & ((1 << self.aux_width) - 1)

    def angle_bits(self, label: int) -> int:
        return label >> self.angle_shift

    def work_clean(self) -> bool:
        shift = self.aux_shift
        return all(label >> shift == 0 for label in self.branches)

    def norm(self) -> float:
        return math.sqrt(
            math.fsum(a.real * a.real + a.imag * a.imag for a in self.branches.values())
        )


def init_state(k: int, t: int, mode: str = "complex") -> BranchState:
    """Single branch, all work registers zero, address 0...01, amplitude 1."""
    if not isinstance(k, Integral) or k < 1:
        raise InvalidDimensionsError(f"address width k must be >= 1, got {k!r}")
    check_precision(t)
    k, t = int(k), int(t)  # fixed-width ints would overflow the label shifts
    if mode == "complex":
        aux = t
    elif mode == "real_signed":
        aux = 1
    else:
        raise WrongModeError(f"unknown mode {mode!r}")
    return BranchState(branches={1: 1.0 + 0.0j}, t=t, aux_width=aux, k=k)


def _half_angle_cos_sin(theta: float) -> tuple[float, float]:
    # exact at full and zero splits so zero-weight branches never materialize
    if theta == 0.0:
        return 1.0, 0.0
    if theta == math.pi:
        return 0.0, 1.0
    half = 0.5 * theta
    return math.cos(half), math.sin(half)


def _phase_unit(phi: float) -> complex:
    # half turns must be exact so a {0, pi} phase layer reproduces sign flips
    if phi == 0.0:
        return 1.0 + 0.0j
    if phi == math.pi:
        return -1.0 + 0.0j
    return complex(math.cos(phi), math.sin(phi))


_QUARTER_FACTORS = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)


def _phase_unit_bits(bits: int, t: int) -> complex:
    quarters, rem = divmod(4 * bits, 1 << t)
    if rem == 0:
        return _QUARTER_FACTORS[quarters & 3]
    phi = bits * (math.tau / (1 << t))
    return complex(math.cos(phi), math.sin(phi))


def ry_cascade(state: BranchState, exact: ComplexAngleTree | None = None) -> BranchState:
    """Rotate the marker qubit of every branch by the angle in its w_angle register.

    With ``exact`` given, the decoded register value is replaced by the exact
    angle stored for the branch address (quantization bypass for ideal runs).
    """
    v_mask = state.v_mask
    scale = 2.0 ** (2 - state.t)
    angle_shift = state.angle_shift
    addr_mask = state.addr_mask
    branches = state.branches
    out: dict[int, complex] = {}
    done: set[int] = set()
    for label in branches:
        base = label & ~v_mask
        if base in done:
            continue
        done.add(base)
        a0 = branches.get(base, 0.0j)
        a1 = branches.get(base | v_mask, 0.0j)
        if exact is None:
            theta = (base >> angle_shift) * scale
        else:
            theta = exact.theta(base & addr_mask)
        c, s = _half_angle_cos_sin(theta)
        n0 = c * a0 - s * a1
        n1 = s * a0 + c * a1
        if n0 != 0.0:
            out[base] = n0
        if n1 != 0.0:
            out[base | v_mask] = n1
    return replace(state, branches=out)


def ry_cascade_by_gates(state: BranchState) -> BranchState:
    """Reference cascade: one controlled y-rotation by 2**(j+2-t) per register bit j."""
    current = state
    v_mask = state.v_mask
    for j in range(state.t):
        delta = 2.0 ** (j + 2 - state.t)
        c, s = math.cos(0.5 * delta), math.sin(0.5 * delta)
        control = 1 << (state.angle_shift + j)
        branches = current.branches
        out: dict[int, complex] = {}
        done: set[int] = set()
        for label, amp in branches.items():
            if not label & control:
                out[label] = amp
                continue
            base = label & ~v_mask
            if base in done:
                continue
            done.add(base)
            a0 = branches.get(base, 0.0j)
            a1 = branches.get(base | v_mask, 0.0j)
            n0 = c * a0 - s * a1
            n1 = s * a0 + c * a1
            if n0 != 0.0:
                out[base] = n0
            if n1 != 0.0:
                out[base | v_mask] = n1
        current = replace(current, branches=out)
    return current


def phase_cascade(state: BranchState, exact: ComplexAngleTree | None = None) -> BranchState:
    """Multiply every marked branch (v = 1) by e^{i phi}, phi from its w_aux register."""
    if state.aux_width != state.t:
        raise WrongModeError("phase cascade needs a t-bit phase register (complex mode)")
    v_mask = state.v_mask
    aux_shift = state.aux_shift
    aux_mask = (1 << state.aux_width) - 1
    addr_mask = state.addr_mask
    out: dict[int, complex] = {}
    for label, amp in state.branches.items():
        if label & v_mask:
            if exact is None:
                amp = amp * _phase_unit_bits((label >> aux_shift) & aux_mask, state.t)
            else:
                amp = amp * _phase_unit(exact.phase(label & addr_mask))
        out[label] = amp
    return replace(state, branches=out)


def controlled_z_sign(state: BranchState) -> BranchState:
    """Negate every branch with sign bit 1 and v = 1 (real_signed leaf step)."""
    if state.aux_width != 1:
        raise WrongModeError("sign step needs a 1-bit sign register (real_signed mode)")
    v_mask = state.v_mask
    s_mask = 1 << state.aux_shift
    flip = v_mask | s_mask
    out = {
        label: (-amp if label & flip == flip else amp)
        for label, amp in state.branches.items()
    }
    return replace(state, branches=out)


def circular_shift(state: BranchState) -> BranchState:
    """Left circular shift on (v, a_{k-1}, ..., a_0): v enters as the new a_0."""
    k = state.k
    addr_mask = state.addr_mask
    out: dict[int, complex] = {}
    for label, amp in state.branches.items():
        if label >> (k + 1):
            raise DirtyWorkRegistersError(
                "shift with nonzero work registers: uncompute did not run or failed"
            )
        v = (label >> k) & 1
        addr = label & addr_mask
        new_v = (addr >> (k - 1)) & 1
        new_addr = ((addr << 1) & addr_mask) | v
        out[(new_v << k) | new_addr] = amp
    return replace(state, branches=out)


def _pruned(state: BranchState, threshold: float) -> BranchState:
    if threshold <= 0.0:
        return state
    kept = {label: a for label, a in state.branches.items() if abs(a) >= threshold}
    if len(kept) == len(state.branches):
        return state
    return replace(state, branches=kept)


def _prepare(
    img: MemoryImage,
    mode: str,
    exact: ComplexAngleTree | None,
    prune_threshold: float | None,
    on_iteration: Callable[[int, BranchState], None] | None,
) -> tuple[BranchState, QueryLedger]:
    if img.mode != mode:
        raise WrongModeError(f"need a {mode} image, got {img.mode}")
    if exact is not None and exact.size != img.size:
        raise WrongModeError(
            f"exact angle structure has {exact.size} cells, image has {img.size}"
        )
    threshold = prune_threshold
    if threshold is None:
        threshold = 0.0 if exact is not None else PRUNE_THRESHOLD
    state = init_state(img.k, img.t, mode)
    ledger = QueryLedger(img.k)
    for h in range(1, img.k + 1):
        state = query(img, state, ledger)
        state = _pruned(ry_cascade(state, exact), threshold)
        state = query(img, state, ledger)
        state = circular_shift(state)
        if on_iteration is not None:
            on_iteration(h, state)
    state = query(img, state, ledger)
    if mode == "complex":
        state = _pruned(phase_cascade(state, exact), threshold)
    else:
        state = controlled_z_sign(state)
    state = query(img, state, ledger)
    return state, ledger


def prepare_complex(
    img: MemoryImage,
    *,
    exact: ComplexAngleTree | None = None,
    prune_threshold: float | None = None,
    on_iteration: Callable[[int, BranchState], None] | None = None,
) -> tuple[BranchState, QueryLedger]:
    """Run the full magnitude-then-phase procedure against a complex image.

    ``on_iteration(h, state)`` fires after each magnitude iteration's shift.
    Returns the final state (work clean, v = 1 everywhere, address register
    holding the normalized entries) and the query ledger (2k + 2 queries).
    """
    return _prepare(img, "complex", exact, prune_threshold, on_iteration)


def prepare_real(
    img: MemoryImage,
    *,
    exact: ComplexAngleTree | None = None,
    prune_threshold: float | None = None,
    on_iteration: Callable[[int, BranchState], None] | None = None,
) -> tuple[BranchState, QueryLedger]:
    """Same loop against a real_signed image; the leaf step is a controlled sign flip."""
    return _prepare(img, "real_signed", exact, prune_threshold, on_iteration)


def marker_check(
    state: BranchState, h: int, wt: WeightTree, tol: float | None = None
) -> bool:
    """True iff the state has the depth-h routing-marker form.

    After iteration h < k every branch must read v = 0, address
    0^{k-h-1} 1 bin_h(p), work clean, with |amplitude| = sqrt(T_{h,p}) / ||A||;
    after h = k the marker sits in v = 1 and the address is bin_k(p).
    """
    k = state.k
    if not 1 <= h <= k:
        raise IndexOutOfRangeError(f"iteration {h} outside [1, {k}]")
    if wt.depth != k:
        raise IndexOutOfRangeError(f"tree depth {wt.depth} != address width {k}")
    if tol is None:
        tol = k * 2.0 ** (1 - state.t) + 1e-10
    root = wt.total
    if root <= 0.0:
        return False
    norm = math.sqrt(root)
    for label in state.branches:
        if label >> (k + 1):
            return False
        v = (label >> k) & 1
        addr = label & state.addr_mask
        if h == k:
            if v != 1:
                return False
        else:
            if v != 0 or addr >> h != 1:
                return False
    positions = 1 << h
    level = wt.levels[h]
    for p in range(positions):
        label = ((1 << k) | p) if h == k else ((1 << h) | p)
        amp = state.branches.get(label, 0.0j)
        if abs(abs(amp) - math.sqrt(float(level[p])) / norm) > tol:
            return False
    return True


def dump_state(state: BranchState) -> dict:
    """JSON-ready dict of the state; requires all work registers zero."""
    rows = []
    for label, amp in state.branches.items():
        if label >> (state.k + 1):
            raise DirtyStateError("cannot dump a state with nonzero work registers")
        rows.append(
            {
                "address": label & state.addr_mask,
                "v": (label >> state.k) & 1,
                "amp": [amp.real, amp.imag],
            }
        )
    rows.sort(key=lambda r: (r["address"], r["v"]))
    return {"k": state.k, "branches": rows}
