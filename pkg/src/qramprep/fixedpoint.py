"""Unsigned fixed-point codecs for rotation angles and phases.

Two grid conventions, both t bits wide:

* magnitude angles: value = bits * 2**(2 - t), covering [0, 4); bit j is
  worth 2**(j + 2 - t), so the most significant bit contributes 2.0
* phases: value = bits * 2*pi / 2**t, covering [0, 2*pi); phases are
  reduced modulo 2*pi before encoding

Encoding rounds to the nearest grid point; exact half-grid ties round up
(away from zero). The half-turn pi sits exactly on the phase grid for every
t, so sign flips encoded as phases survive the codec without error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Integral

from .errors import AngleOutOfRangeError, PrecisionOutOfRangeError

MIN_PRECISION = 2
MAX_PRECISION = 62


def check_precision(t: int) -> None:
    if not isinstance(t, Integral) or not MIN_PRECISION <= t <= MAX_PRECISION:
        raise PrecisionOutOfRangeError(
            f"t must be an integer in [{MIN_PRECISION}, {MAX_PRECISION}], got {t!r}"
        )


def magnitude_grid(t: int) -> float:
    """Grid spacing for magnitude angles at precision t."""
    return 2.0 ** (2 - t)


def phase_grid(t: int) -> float:
    """Grid spacing for phases at precision t."""
    return math.tau / (1 << t)


@dataclass(frozen=True)
class FixedAngle:
    """t-bit unsigned fixed-point magnitude angle, value = bits * 2**(2-t)."""

    bits: int
    t: int

    def __post_init__(self):
        check_precision(self.t)
        if not 0 <= self.bits < (1 << self.t):
            raise AngleOutOfRangeError(f"bits {self.bits} outside [0, 2^{self.t})")

    @property
    def value(self) -> float:
        return self.bits * magnitude_grid(self.t)


@dataclass(frozen=True)
class FixedPhase:
    """t-bit unsigned fixed-point phase, value = bits * 2*pi / 2**t."""

    bits: int
    t: int

    def __post_init__(self):
        check_precision(self.t)
        if not 0 <= self.bits < (1 << self.t):
            raise AngleOutOfRangeError(f"bits {self.bits} outside [0, 2^{self.t})")

    @property
    def value(self) -> float:
        return self.bits * phase_grid(self.t)


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def encode_magnitude_angle(theta: float, t: int) -> FixedAngle:
    """Round theta in [0, pi] to the nearest magnitude grid point.

    The rounding error is at most half a grid step, 2**(1-t).
    """
    check_precision(t)
    if not (isinstance(theta, (int, float)) and math.isfinite(theta)) or not 0.0 <= theta <= math.pi:
        raise AngleOutOfRangeError(f"theta must lie in [0, pi], got {theta!r}")
    return FixedAngle(_round_half_up(theta / magnitude_grid(t)), t)


def encode_phase(phi: float, t: int) -> FixedPhase:
    """Reduce phi modulo 2*pi and round to the nearest phase grid point.

    The circular rounding error is at most pi * 2**(-t).
    """
    check_precision(t)
    if not (isinstance(phi, (int, float)) and math.isfinite(phi)):
        raise AngleOutOfRangeError(f"phi must be finite, got {phi!r}")
    reduced = phi % math.tau
    if reduced >= math.tau:  # float mod can land exactly on the modulus
        reduced = 0.0
    bits = _round_half_up(reduced / phase_grid(t)) % (1 << t)
    return FixedPhase(bits, t)


def decode_magnitude_angle(a: FixedAngle) -> float:
    return a.value


def decode_phase(p: FixedPhase) -> float:
    return p.value


def phase_distance(x: float, y: float) -> float:
    """Distance between two phases on the circle of circumference 2*pi."""
    d = (x - y) % math.tau
    return min(d, math.tau - d)
