import json
import math

import numpy as np
import pytest

from qramprep.errors import (
    LengthMismatchError,
    NotPowerOfTwoError,
    ParseError,
    WidthMismatchError,
    WrongModeError,
)
from qramprep.fixedpoint import phase_distance
from qramprep.matrix import ComplexMatrix, random_matrix
from qramprep.memory import (
    MemoryImage,
    QueryLedger,
    build_memory_image,
    layout_complex,
    layout_real_signed,
    query,
    query_cost,
)
from qramprep.simulator import BranchState, init_state


@pytest.fixture
def example_image(example):
    img, _ = build_memory_image(example, 12, "complex")
    return img


class TestLayoutComplex:
    def test_example_cells(self, example, example_image):
        img = example_image
        assert img.size == 8 and img.width == 24 and img.k == 3
        # recorded layout: cell 1 holds the root split angle and phase of entry 1
        assert abs(img.decode_angle(1) - 1.357) <= 2 ** -11
        assert phase_distance(img.decode_phase(1), 2.034) <= math.pi * 2 ** -12 + 1e-3

    def test_cell0_angle_field_dummy(self, example_image):
        assert example_image.angle_field(0) == 0
        # the leaf field of cell 0 is live: it carries the phase of entry 0
        assert phase_distance(example_image.decode_phase(0), math.atan2(1, 2)) <= math.pi * 2 ** -12

    def test_footprint(self):
        m = random_matrix(32, 32, seed=0)
        img, _ = build_memory_image(m, 32, "complex")
        assert img.size * img.width == 2 * 32 * 1024 == 65536

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            layout_complex([1.0, 1.0], [0.0] * 4, 8)

    def test_not_power_of_two(self):
        with pytest.raises(NotPowerOfTwoError):
            layout_complex([1.0] * 2, [0.0] * 3, 8)

    def test_bit_packing(self, example_image):
        img = example_image
        for z in range(img.size):
            assert img.cells[z] == (img.angle_field(z) << img.t) | img.aux_field(z)


class TestLayoutRealSigned:
    def test_four_cells(self):
        m = ComplexMatrix.from_array([[1.0, -2.0, 0.0, 3.0]])
        img, _ = build_memory_image(m, 8, "real_signed")
        assert img.size == 4 and img.width == 9
        assert [img.sign_bit(z) for z in range(4)] == [0, 1, 0, 0]

    def test_cell0_keeps_sign_of_entry0(self):
        m = ComplexMatrix.from_array([[-1.0, 2.0]])
        img, _ = build_memory_image(m, 8, "real_signed")
        assert img.angle_field(0) == 0
        assert img.sign_bit(0) == 1

    def test_cell_width_is_t_plus_one(self):
        for t in (4, 8, 16):
            m = ComplexMatrix.from_array([[1.0, -1.0]])
            img, _ = build_memory_image(m, t, "real_signed")
            assert img.width == t + 1

    def test_bad_sign_bit(self):
        with pytest.raises(LengthMismatchError):
            layout_real_signed([1.0], [0, 2], 8)

    def test_mode_guards(self):
        m = ComplexMatrix.from_array([[1.0, -1.0]])
        img, _ = build_memory_image(m, 8, "real_signed")
        with pytest.raises(WrongModeError):
            img.decode_phase(0)


class TestJsonRoundTrip:
    def test_round_trip(self, example_image):
        doc = json.loads(example_image.to_json())
        assert set(doc) == {"mode", "t", "k", "cells"}
        assert MemoryImage.from_json_dict(doc) == example_image

    def test_missing_key(self):
        with pytest.raises(ParseError):
            MemoryImage.from_json_dict({"mode": "complex", "t": 8, "k": 1})

    def test_oversized_cell_rejected(self):
        with pytest.raises(WidthMismatchError):
            MemoryImage.from_json_dict(
                {"mode": "complex", "t": 4, "k": 1, "cells": [0, 1 << 8]}
            )


class TestQuery:
    def test_single_branch_loads_cell(self, example_image):
        state = init_state(3, 12, "complex")
        state.branches = {3: 1.0 + 0j}  # address 011, work clear
        ledger = QueryLedger(example_image.k)
        out = query(example_image, state, ledger)
        (label,) = out.branches
        assert label & 7 == 3
        assert label >> 4 == example_image.cells[3]
        assert ledger.query_count == 1

    def test_involution_random_images_and_states(self):
        rng = np.random.default_rng(77)
        for _ in range(100):
            k = int(rng.integers(1, 5))
            t = int(rng.integers(2, 13))
            img = MemoryImage(
                cells=tuple(int(c) for c in rng.integers(0, 1 << (2 * t), size=1 << k)),
                width=2 * t,
                t=t,
                mode="complex",
                k=k,
            )
            n = int(rng.integers(1, 9))
            labels = rng.integers(0, 1 << (k + 1 + 2 * t), size=n)
            amps = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            branches = {int(l): complex(a) for l, a in zip(labels, amps)}
            state = BranchState(branches=dict(branches), t=t, aux_width=t, k=k)
            ledger = QueryLedger(k)
            back = query(img, query(img, state, ledger), ledger)
            assert back.branches == branches

    def test_superposed_addresses(self, example_image):
        a0, a1 = math.sqrt(20 / 33), math.sqrt(13 / 33)
        state = BranchState(branches={2: a0 + 0j, 3: a1 + 0j}, t=12, aux_width=12, k=3)
        out = query(example_image, state, QueryLedger(3))
        got = {label & 7: (label >> 4, amp) for label, amp in out.branches.items()}
        assert got[2] == (example_image.cells[2], a0 + 0j)
        assert got[3] == (example_image.cells[3], a1 + 0j)

    def test_norm_preserved_exactly(self, example_image):
        state = BranchState(
            branches={2: 0.6 + 0.3j, 3: -0.2 + 0.7j}, t=12, aux_width=12, k=3
        )
        before = sorted(state.branches.values(), key=abs)
        out = query(example_image, state, QueryLedger(3))
        assert sorted(out.branches.values(), key=abs) == before

    def test_width_mismatch(self, example_image):
        with pytest.raises(WidthMismatchError):
            query(example_image, init_state(3, 10, "complex"), QueryLedger(3))
        with pytest.raises(WidthMismatchError):
            query(example_image, init_state(2, 12, "complex"), QueryLedger(3))
        with pytest.raises(WidthMismatchError):
            query(example_image, init_state(3, 12, "real_signed"), QueryLedger(3))


class TestLedger:
    def test_routing_time(self):
        ledger = QueryLedger(k=3)
        for _ in range(8):
            ledger.record([1])
        assert ledger.query_count == 8
        assert ledger.routing_time == 24
        assert query_cost(ledger, 3) == 24

    def test_zero_queries_zero_time(self):
        assert QueryLedger(k=10).routing_time == 0

    def test_table_scale_counts(self):
        # 2k + 2 queries at k = 10 gives 22 queries, 220 time units
        ledger = QueryLedger(k=10)
        for _ in range(22):
            ledger.record([0])
        assert ledger.routing_time == 220

    def test_access_log(self):
        ledger = QueryLedger(k=2)
        ledger.record([3, 1, 3])
        assert ledger.access_log == [(1, 3)]
