import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qramprep.errors import AngleOutOfRangeError, PrecisionOutOfRangeError
from qramprep.fixedpoint import (
    FixedAngle,
    FixedPhase,
    decode_magnitude_angle,
    decode_phase,
    encode_magnitude_angle,
    encode_phase,
    magnitude_grid,
    phase_distance,
    phase_grid,
)


class TestMagnitudeCodec:
    def test_half_pi_at_3_bits(self):
        a = encode_magnitude_angle(math.pi / 2, 3)
        assert a.bits == 0b011
        assert decode_magnitude_angle(a) == 1.5
        assert abs(1.5 - math.pi / 2) < 2 ** -2

    @pytest.mark.parametrize("t", [2, 3, 8, 16, 32, 62])
    def test_zero(self, t):
        assert encode_magnitude_angle(0.0, t).bits == 0

    def test_exact_grid_point(self):
        a = encode_magnitude_angle(2.0, 3)
        assert a.bits == 0b100
        assert a.value == 2.0

    def test_decode_direct_formula(self):
        assert FixedAngle(0b100, 3).value == 2.0
        assert FixedAngle(1, 8).value == 2.0 ** -6

    def test_tie_rounds_away_from_zero(self):
        # half-grid at t=3: 0.25 sits between bits 0 and 1
        assert encode_magnitude_angle(0.25, 3).bits == 1
        assert encode_magnitude_angle(0.75, 3).bits == 2

    def test_round_trip_identity_on_grid(self):
        t = 6
        top = math.floor(math.pi / magnitude_grid(t))
        for bits in range(top + 1):
            assert encode_magnitude_angle(FixedAngle(bits, t).value, t).bits == bits

    @given(st.integers(2, 20), st.integers(min_value=0))
    def test_round_trip_identity_hypothesis(self, t, raw):
        bits = raw % (math.floor(math.pi / magnitude_grid(t)) + 1)
        assert encode_magnitude_angle(FixedAngle(bits, t).value, t).bits == bits

    def test_rounding_bound_random(self):
        rng = np.random.default_rng(2024)
        thetas = rng.uniform(0.0, math.pi, 10_000)
        for t in range(4, 17):
            bound = 2.0 ** (1 - t)
            for theta in thetas:
                err = abs(decode_magnitude_angle(encode_magnitude_angle(theta, t)) - theta)
                assert err <= bound

    @pytest.mark.parametrize("theta", [-0.1, math.pi + 0.01, math.nan, math.inf])
    def test_angle_out_of_range(self, theta):
        with pytest.raises(AngleOutOfRangeError):
            encode_magnitude_angle(theta, 8)

    @pytest.mark.parametrize("t", [1, 0, -3, 63, 100])
    def test_precision_out_of_range(self, t):
        with pytest.raises(PrecisionOutOfRangeError):
            encode_magnitude_angle(1.0, t)

    def test_bits_range_validated(self):
        with pytest.raises(AngleOutOfRangeError):
            FixedAngle(8, 3)
        with pytest.raises(AngleOutOfRangeError):
            FixedAngle(-1, 3)


class TestPhaseCodec:
    def test_pi_exact_at_3_bits(self):
        p = encode_phase(math.pi, 3)
        assert p.bits == 0b100
        assert decode_phase(p) == math.pi

    def test_negative_half_pi(self):
        p = encode_phase(-math.pi / 2, 3)
        assert p.bits == 0b110
        assert p.value == 3 * math.pi / 2

    @pytest.mark.parametrize("t", [2, 8, 32, 62])
    def test_zero(self, t):
        assert encode_phase(0.0, t).bits == 0

    def test_decode_direct_formula(self):
        assert FixedPhase(0b110, 3).value == 6 * (math.tau / 8)

    def test_pi_exact_for_every_precision(self):
        # sign flips encoded as phases must survive the codec without error
        for t in range(2, 63):
            assert encode_phase(math.pi, t).value == math.pi

    def test_wraps_near_two_pi(self):
        t = 8
        phi = math.tau - phase_grid(t) / 4
        assert encode_phase(phi, t).bits == 0

    def test_rounding_bound_random(self):
        rng = np.random.default_rng(55)
        phis = rng.uniform(-10 * math.pi, 10 * math.pi, 10_000)
        for t in (4, 8, 12, 16):
            bound = math.pi * 2.0 ** -t
            for phi in phis:
                d = phase_distance(decode_phase(encode_phase(phi, t)), phi)
                assert d <= bound * (1 + 1e-9)

    @given(st.integers(2, 20), st.integers(min_value=0))
    def test_round_trip_identity_on_grid(self, t, raw):
        bits = raw % (1 << t)
        assert encode_phase(FixedPhase(bits, t).value, t).bits == bits

    def test_periodicity_on_grid(self):
        t = 10
        for bits in range(0, 1 << t, 37):
            phi = FixedPhase(bits, t).value
            assert encode_phase(phi + math.tau, t).bits == encode_phase(phi, t).bits

    def test_non_finite_rejected(self):
        with pytest.raises(AngleOutOfRangeError):
            encode_phase(math.inf, 8)

    def test_precision_out_of_range(self):
        with pytest.raises(PrecisionOutOfRangeError):
            encode_phase(1.0, 63)


class TestPhaseDistance:
    def test_zero(self):
        assert phase_distance(1.25, 1.25) == 0.0

    def test_wraparound(self):
        assert math.isclose(phase_distance(0.1, math.tau - 0.1), 0.2, rel_tol=1e-12)

    def test_symmetry(self):
        assert phase_distance(0.3, 5.9) == phase_distance(5.9, 0.3)
