"""Oracle state construction, error measurement, and resource accounting.

The oracle is the directly normalized entry vector a_z / ||A||_F, computed
with compensated summation and no simulation machinery, so simulator output
can be checked against an independent path. Quantized runs are judged
against the precision budget

    error <= k * delta_theta / 2 + delta_phi = (k + pi) * 2**(-t)

where delta_theta = 2**(1-t) and delta_phi = pi * 2**(-t) are the worst-case
grid roundings (cascades are exact unitaries here, so both cascade error
terms are zero). Acceptance checks allow a slack factor of 4 on this budget.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Integral

import numpy as np

from .angles import MODES
from .errors import (
    DirtyStateError,
    LengthMismatchError,
    NotPowerOfTwoError,
    WrongModeError,
)
from .fixedpoint import check_precision
from .matrix import ComplexMatrix, frobenius_norm
from .memory import MemoryImage, QueryLedger, build_memory_image
from .simulator import BranchState, prepare_complex, prepare_real

SIM_MODES = ("fixed", "ideal")
ERROR_SLACK = 4.0


def oracle_state(m: ComplexMatrix) -> np.ndarray:
    """Normalized target amplitudes a_z / ||A||_F, length K, unit l2 norm."""
    return m.entries / frobenius_norm(m)


def address_amplitudes(state: BranchState) -> np.ndarray:
    """Address-register amplitude vector; requires clean work and v = 1."""
    vec = np.zeros(1 << state.k, dtype=np.complex128)
    for label, amp in state.branches.items():
        if label >> (state.k + 1):
            raise DirtyStateError("work registers are not zero")
        if not (label >> state.k) & 1:
            raise DirtyStateError("marker qubit is not set on every branch")
        vec[label & state.addr_mask] = amp
    return vec


def state_error(prepared: BranchState, oracle: np.ndarray) -> float:
    """l2 distance between the prepared address amplitudes and the oracle.

    No global phase is factored out: the procedure applies each leaf phase
    absolutely, so the prepared state must match the oracle outright.
    """
    vec = address_amplitudes(prepared)
    if vec.size != len(oracle):
        raise LengthMismatchError(f"state has {vec.size} cells, oracle {len(oracle)}")
    return float(np.linalg.norm(vec - np.asarray(oracle, dtype=np.complex128)))


def error_bound(k: int, t: int) -> float:
    """Worst-case quantization error (k + pi) * 2**(-t) for exact cascades."""
    if not isinstance(k, Integral) or k < 1:
        raise NotPowerOfTwoError(f"k must be a positive integer, got {k!r}")
    check_precision(t)
    return (k + math.pi) * 2.0 ** (-t)


@dataclass(frozen=True)
class ErrorBudget:
    """Per-source error terms; ``bound`` recovers the closed form above."""

    k: int
    t: int
    delta_theta: float
    delta_phi: float
    eps_y: float = 0.0
    eps_phi: float = 0.0

    @property
    def bound(self) -> float:
        return self.k * (self.delta_theta / 2.0 + self.eps_y) + self.delta_phi + self.eps_phi

    @classmethod
    def for_precision(cls, k: int, t: int) -> "ErrorBudget":
        check_precision(t)
        return cls(
            k=k,
            t=t,
            delta_theta=2.0 ** (1 - t),
            delta_phi=math.pi * 2.0 ** (-t),
        )


@dataclass(frozen=True)
class ResourceReport:
    """Closed-form register, memory, and query accounting for one run shape.

    ``qpu_qubits`` is k + 2t + 1 in complex mode (address, two t-bit work
    registers, marker) and k + t + 2 in real_signed mode (the phase register
    shrinks to one sign bit; the magnitude loop alone would need k + t + 1).
    """

    mode: str
    K: int
    k: int
    t: int
    qpu_qubits: int
    cell_width_bits: int
    memory_bits: int
    query_count: int
    routing_time: int
    preprocessing_ops: int

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "K": self.K,
            "k": self.k,
            "t": self.t,
            "qpu_qubits": self.qpu_qubits,
            "cell_width_bits": self.cell_width_bits,
            "memory_bits": self.memory_bits,
            "query_count": self.query_count,
            "routing_time": self.routing_time,
            "preprocessing_ops": self.preprocessing_ops,
        }


def resource_report(K: int, t: int, mode: str = "complex") -> ResourceReport:
    """Resource counts for preparing K = 2**k amplitudes at precision t."""
    if not isinstance(K, Integral) or K < 2 or K & (K - 1):
        raise NotPowerOfTwoError(f"K must be a power of two >= 2, got {K!r}")
    K = int(K)
    check_precision(t)
    if mode not in MODES:
        raise WrongModeError(f"mode must be one of {MODES}, got {mode!r}")
    k = K.bit_length() - 1
    if mode == "complex":
        qubits, cell = k + 2 * t + 1, 2 * t
    else:
        qubits, cell = k + t + 2, t + 1
    queries = 2 * k + 2
    return ResourceReport(
        mode=mode,
        K=K,
        k=k,
        t=t,
        qpu_qubits=qubits,
        cell_width_bits=cell,
        memory_bits=cell * K,
        query_count=queries,
        routing_time=queries * k,
        preprocessing_ops=2 * K - 1,
    )


def run_preparation(
    m: ComplexMatrix,
    t: int,
    mode: str = "complex",
    sim: str = "fixed",
    on_iteration=None,
) -> tuple[BranchState, QueryLedger, MemoryImage]:
    """Preprocess a matrix and run the full procedure in one call."""
    if sim not in SIM_MODES:
        raise WrongModeError(f"sim must be one of {SIM_MODES}, got {sim!r}")
    img, gamma = build_memory_image(m, t, mode)
    exact = gamma if sim == "ideal" else None
    prepare = prepare_complex if mode == "complex" else prepare_real
    state, ledger = prepare(img, exact=exact, on_iteration=on_iteration)
    return state, ledger, img


@dataclass(frozen=True)
class SweepRow:
    t: int
    measured_error: float
    bound: float


def precision_sweep(
    m: ComplexMatrix, t_values, mode: str = "complex"
) -> list[SweepRow]:
    """Quantized-run error against the budget for each precision, sorted by t."""
    oracle = oracle_state(m)
    rows = []
    for t in sorted(set(int(t) for t in t_values)):
        state, _, _ = run_preparation(m, t, mode=mode, sim="fixed")
        rows.append(
            SweepRow(t=t, measured_error=state_error(state, oracle), bound=error_bound(m.depth, t))
        )
    return rows


def sweep_csv(rows: list[SweepRow]) -> str:
    """CSV text for a sweep: header plus one full-precision row per t."""
    lines = ["t,measured_error,bound"]
    lines.extend(f"{r.t},{r.measured_error!r},{r.bound!r}" for r in rows)
    return "\n".join(lines) + "\n"
