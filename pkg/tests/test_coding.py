# GF(2) matrices, truth tables, code layouts and evaluation
from fractions import Fraction

import numpy as np
import pytest

from src.coding import (
    Gf2Matrix,
    KeyMap,
    TruthTable,
    bits_to_ints,
    build_layout,
    check_code,
    check_linearity,
    evaluate,
    evaluate_block,
    global_key_map,
    ints_to_bits,
    is_linear,
    linear_to_general,
    same_function,
    with_induced_decoders,
)
from src.constructions import relay_code, relay_instance
from src.errors import ErrorCode, KeycastError
from src.model import NetworkInstance, SourceDecl, make_edge


class TestGf2Matrix:
    def test_column_zero_multiplies_the_most_significant_bit(self):
        assert Gf2Matrix([[1, 1]]).to_table().tolist() == [0, 1, 1, 0]
        assert Gf2Matrix([[1, 0]]).to_table().tolist() == [0, 0, 1, 1]
        assert Gf2Matrix([[0, 1], [1, 0]]).apply(0b10) == 0b01

    def test_bit_packing(self):
        assert bits_to_ints(np.array([[1, 0, 1], [0, 1, 1]])).tolist() == [5, 3]
        assert ints_to_bits(np.array([5]), 3).tolist() == [[1, 0, 1]]

    def test_bitstrings(self):
        matrix = Gf2Matrix.from_bitstrings(["10", "01"])
        assert matrix == Gf2Matrix.identity(2)
        assert matrix.to_bitstrings() == ["10", "01"]
        assert Gf2Matrix.from_bitstrings([], 3).cols == 3
        with pytest.raises(KeycastError):
            Gf2Matrix.from_bitstrings(["10", "1"])

    def test_rank_and_inverse(self):
        shear = Gf2Matrix([[1, 0], [1, 1]])
        assert shear.rank() == 2
        assert shear.inverse() == shear
        assert shear @ shear.inverse() == Gf2Matrix.identity(2)
        singular = Gf2Matrix([[1, 1], [1, 1]])
        assert singular.rank() == 1
        with pytest.raises(KeycastError) as info:
            singular.inverse()
        assert info.value.code is ErrorCode.RANK_DEFICIENT

    def test_solve(self):
        upper = Gf2Matrix([[1, 1, 0], [0, 1, 1], [0, 0, 1]])
        assert upper.solve([1, 1, 1]).tolist() == [1, 0, 1]
        assert upper.solve([0, 0, 0]).tolist() == [0, 0, 0]
        assert Gf2Matrix(upper.solve(np.eye(3, dtype=np.uint8))) == upper.inverse()
        with pytest.raises(KeycastError) as info:
            Gf2Matrix([[1, 1], [1, 1]]).solve([1, 0])
        assert info.value.code is ErrorCode.RANK_DEFICIENT
        with pytest.raises(KeycastError) as info:
            upper.solve([1, 0])
        assert info.value.code is ErrorCode.WIDTH_MISMATCH

    def test_column_surgery(self):
        matrix = Gf2Matrix([[1, 1, 0], [0, 1, 1]])
        assert matrix.with_zero_column(1) == Gf2Matrix([[1, 0, 0], [0, 0, 1]])
        assert matrix.delete_columns([0]) == Gf2Matrix([[1, 0], [1, 1]])
        assert matrix.nonzero_columns() == [0, 1, 2]
        assert matrix.hstack(Gf2Matrix.identity(2)).cols == 5

    def test_rejects_non_binary_entries(self):
        with pytest.raises(KeycastError):
            Gf2Matrix([[2]])


class TestTruthTable:
    def test_projection_reads_msb_first_positions(self):
        table = TruthTable.projection(3, [0, 2])
        assert table.apply(0b101) == 0b11
        assert table.apply(0b100) == 0b10
        assert table.out_bits == 2

    def test_wrong_size_is_rejected(self):
        with pytest.raises(KeycastError) as info:
            TruthTable(2, 1, [0, 1, 1])
        assert info.value.code is ErrorCode.WIDTH_MISMATCH
        with pytest.raises(KeycastError):
            TruthTable(1, 1, [0, 2])

    def test_same_function_across_representations(self):
        xor = Gf2Matrix([[1, 1]])
        assert same_function(xor, TruthTable(2, 1, [0, 1, 1, 0]))
        assert not same_function(xor, TruthTable(2, 1, [0, 1, 1, 1]))
        assert KeyMap(xor).is_linear
        assert not KeyMap(xor).as_truth_table().is_linear


class TestLayout:
    def test_gap_layout(self, gap2_sum):
        instance, code = gap2_sum
        layout = check_code(instance, code)
        assert layout.total_bits == 3
        assert layout.source_offset["s2"] == 1
        assert layout.global_bit(("s3", 0)) == 2
        assert layout.input_width("s1") == 1
        assert layout.input_width("ubar1") == 2
        assert layout.input_width("d1") == 2
        assert [s["name"] for s in layout.input_layout("d1")] == ["u1>d1", "ubar1>d1"]

    def test_own_source_bits_come_last(self):
        instance = NetworkInstance(
            nodes=("z", "s", "d"),
            edges=(make_edge("z", "s"), make_edge("s", "d")),
            sources=(SourceDecl("s"), SourceDecl("z")),
            terminals=("d",),
        )
        layout = build_layout(instance, 1, {"s": 2, "z": 1})
        assert [seg.kind for seg in layout.inputs["s"]] == ["edge", "source"]
        assert layout.input_width("s") == 3
        assert layout.source_offset == {"s": 0, "z": 2}

    def test_fractional_edges_need_a_matching_blocklength(self):
        instance = relay_instance(capacity=Fraction(1, 2))
        with pytest.raises(KeycastError) as info:
            build_layout(instance, 1, {"s": 1})
        assert info.value.code is ErrorCode.NONINTEGRAL_ALPHABET
        assert build_layout(instance, 2, {"s": 1}).edge_width["s>v"] == 1

    def test_width_errors(self, gap2_sum):
        instance, code = gap2_sum
        encoders = dict(code.edge_encoders)
        encoders.pop("s1>u1")
        with pytest.raises(KeycastError) as info:
            check_code(instance, code.with_changes(edge_encoders=encoders))
        assert info.value.code is ErrorCode.WIDTH_MISMATCH
        with pytest.raises(KeycastError):
            check_code(instance, code.with_changes(key=KeyMap(Gf2Matrix([[1, 1]]))))
        with pytest.raises(KeycastError) as info:
            check_code(instance, code.with_changes(message_coords=(("s1", 1),)))
        assert info.value.code is ErrorCode.BAD_COORDS


class TestEvaluation:
    def test_sum_code_trace(self, gap2_sum):
        instance, code = gap2_sum
        trace = evaluate(instance, code, 0b101)
        assert trace.edge_messages["s1>u1"] == 1
        assert trace.edge_messages["s2>ubar1"] == 0
        assert trace.edge_messages["ubar1>d1"] == 1
        assert trace.edge_messages["ubar2>d2"] == 0
        assert trace.key_value == 0
        assert trace.decoder_outputs == {"d1": 0, "d2": 0, "d3": 0}

    def test_block_matches_pointwise(self, gap2_sum):
        instance, code = gap2_sum
        block = evaluate_block(instance, code, np.arange(8))
        for m in range(8):
            trace = evaluate(instance, code, m)
            assert trace.key_value == int(block.key[m])
            assert all(trace.edge_messages[e] == int(v[m]) for e, v in block.edges.items())

    def test_assignment_out_of_range(self, gap2_sum):
        instance, code = gap2_sum
        with pytest.raises(KeycastError):
            evaluate(instance, code, 8)

    def test_linearity(self, gap2_sum):
        instance, code = gap2_sum
        assert is_linear(code)
        general = linear_to_general(code)
        assert not is_linear(general)
        assert all(check_linearity(instance, general, a, b) for a in range(8) for b in range(8))

    def test_nonlinear_code_fails_some_pair(self):
        instance = relay_instance()
        code = relay_code(2)
        conjunction = TruthTable(2, 1, [0, 0, 0, 1])
        code = code.with_changes(edge_encoders={**code.edge_encoders, "s>v": conjunction},
                                 key=KeyMap(conjunction))
        assert not all(check_linearity(instance, code, a, b) for a in range(4) for b in range(4))

    def test_induced_decoders_recover_the_sum_decoders(self, gap2_sum):
        instance, code = gap2_sum
        blank = code.with_changes(decoders={d: TruthTable.constant(2, 1) for d in instance.terminals})
        induced = with_induced_decoders(instance, blank)
        for d in instance.terminals:
            assert same_function(induced.decoders[d], code.decoders[d])

    def test_global_key_map_respects_the_cap(self, gap2_sum):
        instance, code = gap2_sum
        assert global_key_map(instance, code).to_table().tolist() == [0, 1, 1, 0, 1, 0, 0, 1]
        with pytest.raises(KeycastError) as info:
            global_key_map(instance, code, enum_cap=2)
        assert info.value.code is ErrorCode.SPACE_LIMIT
