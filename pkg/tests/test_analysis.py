# Count tables, exact predicates and the three feasibility checks
from fractions import Fraction

import numpy as np
import pytest

from src.analysis import (
    CheckMode,
    CountTable,
    FeasibilityReport,
    bits_var,
    check,
    check_key_feasibility,
    check_secure_feasibility,
    check_two_stage_feasibility,
    coords_from_text,
    entropy_bits,
    find_two_stage_witness,
    format_assignment,
    is_determined,
    is_independent,
    is_uniform,
    joint_counts,
    key_var,
    key_width_for,
    mutual_information_bits,
    parse_rate,
    source_var,
)
from src.coding import Gf2Matrix, KeyMap, TruthTable, check_code
from src.constructions import (
    fig1b_code,
    fig1b_instance,
    random_linear_key_code,
    random_secure_code,
    random_single_source_code,
    relay_code,
    relay_instance,
    sum_code,
)
from src.errors import ErrorCode, KeycastError

X = bits_var([("a", 0)])
Y = bits_var([("b", 0)])


class TestCountTable:
    def test_independent_pair(self):
        table = CountTable.from_counts([X, Y], {(0, 0): 1, (0, 1): 1, (1, 0): 1, (1, 1): 1})
        assert is_independent(table, [X], [Y])
        assert not is_determined(table, [X], [Y])
        assert is_uniform(table, [X, Y])
        assert mutual_information_bits(table, [X], [Y]) == pytest.approx(0.0)
        assert entropy_bits(table, [X, Y]) == pytest.approx(2.0)

    def test_copied_bit(self):
        table = CountTable.from_counts([X, Y], {(0, 0): 2, (1, 1): 2})
        assert not is_independent(table, [X], [Y])
        assert is_determined(table, [X], [Y])
        assert is_determined(table, [Y], [X])
        assert not is_uniform(table, [X, Y])
        assert mutual_information_bits(table, [X], [Y]) == pytest.approx(1.0)

    def test_zero_counts_are_not_stored(self):
        table = CountTable.from_counts([X], {(0,): 3, (1,): 0})
        assert len(table) == 1
        assert table.total == 3
        assert not is_uniform(table, [X])

    def test_empty_variable_sets(self):
        table = CountTable.from_counts([X], {(0,): 1, (1,): 1})
        assert is_independent(table, [X], [])
        assert is_determined(table, [X], [])
        assert not is_determined(table, [], [X])
        assert table.marginal([]).total == 2
        assert CountTable.from_arrays([], [], size=5).total == 5

    def test_merge_adds_counts(self):
        left = CountTable.from_counts([X], {(0,): 1, (1,): 2})
        right = CountTable.from_counts([X], {(1,): 1})
        assert CountTable.merge([left, right]).counts() == {(0,): 1, (1,): 3}

    def test_joint_counts_of_a_code(self, gap2_sum):
        instance, code = gap2_sum
        layout = check_code(instance, code)
        table = joint_counts(instance, code, [source_var(layout, "s1"), key_var(code)])
        assert table.total == 8
        assert table.counts() == {(0, 0): 2, (0, 1): 2, (1, 0): 2, (1, 1): 2}
        assert table.frame.columns.tolist() == ["source:s1", "key", "count"]

    def test_chunking_does_not_change_counts(self, gap2_sum):
        instance, code = gap2_sum
        coarse = joint_counts(instance, code, [key_var(code)])
        fine = joint_counts(instance, code, [key_var(code)], chunk_bits=1)
        assert coarse.counts() == fine.counts() == {(0,): 4, (1,): 4}

    def test_enumeration_cap(self, gap2_sum):
        instance, code = gap2_sum
        with pytest.raises(KeycastError) as info:
            joint_counts(instance, code, [key_var(code)], enum_cap=2)
        assert info.value.code is ErrorCode.SPACE_LIMIT
        assert info.value.is_resource_limit


class TestHelpers:
    def test_parse_rate(self):
        assert parse_rate("3/4") == Fraction(3, 4)
        assert parse_rate(" 2 ") == 2
        assert parse_rate(1) == 1
        for bad in ("0.5", "1/0", "x", "1/-2"):
            with pytest.raises(KeycastError) as info:
                parse_rate(bad)
            assert info.value.code is ErrorCode.BAD_RATE

    def test_key_width(self):
        assert key_width_for(Fraction(1, 2), 2) == 1
        with pytest.raises(KeycastError):
            key_width_for(Fraction(1, 2), 1)
        with pytest.raises(KeycastError):
            key_width_for(Fraction(-1), 1)

    def test_coords_from_text(self):
        assert coords_from_text("s1:0, s2:1") == [("s1", 0), ("s2", 1)]
        assert coords_from_text("") == []
        with pytest.raises(KeycastError) as info:
            coords_from_text("s1")
        assert info.value.code is ErrorCode.BAD_COORDS

    def test_format_assignment_pads_to_the_assignment_width(self):
        assert format_assignment(5, 9) == "0x005"
        assert format_assignment(0, 0) == "0x0"


class TestKeyFeasibility:
    def test_sum_code_is_key_feasible(self, gap2_sum):
        instance, code = gap2_sum
        report = check_key_feasibility(instance, code, 1)
        assert report.overall
        assert not report.verdicts["witness_ok"].applicable
        assert report.advisory["key_entropy_bits"] == pytest.approx(1.0)
        assert report.advisory["max_leakage_bits"] == pytest.approx(0.0)
        assert report.advisory["max_terminal_equivocation_bits"] == pytest.approx(0.0)

    def test_sum_code_survives_source_observers(self, gap2_node_all):
        assert check_key_feasibility(gap2_node_all, sum_code(gap2_node_all), 1).overall

    def test_leaky_key(self, gap2_sum):
        instance, code = gap2_sum
        leaky = code.with_changes(key=KeyMap(Gf2Matrix([[1, 0, 0]])))
        report = check_key_feasibility(instance, leaky, 1)
        assert report.failed() == ["decoding_ok", "secrecy_ok"]
        assert report.verdicts["secrecy_ok"].counterexample == {"eavesdrop_set": 0}

    def test_wrong_decoder(self, gap2_sum):
        instance, code = gap2_sum
        broken = code.with_changes(decoders={**code.decoders, "d1": Gf2Matrix([[1, 0]])})
        verdict = check_key_feasibility(instance, broken, 1).verdicts["decoding_ok"]
        assert not verdict.ok
        assert verdict.counterexample == {"terminal": "d1", "assignment": "0x1"}

    def test_rate_must_match_the_key(self, gap2_sum):
        instance, code = gap2_sum
        assert check_key_feasibility(instance, code, 0).failed() == ["rate_ok"]
        with pytest.raises(KeycastError) as info:
            check_key_feasibility(instance, code, "1/2")
        assert info.value.code is ErrorCode.BAD_RATE

    def test_nonuniform_key(self):
        instance, code = relay_instance(), relay_code(2)
        conjunction = TruthTable(2, 1, [0, 0, 0, 1])
        skewed = code.with_changes(edge_encoders={**code.edge_encoders, "s>v": conjunction},
                                   key=KeyMap(conjunction))
        verdict = check_key_feasibility(instance, skewed, 1).verdicts["rate_ok"]
        assert not verdict.ok
        assert verdict.counterexample == {"key_value": 1, "count": 1}

    def test_fig1b_keys(self, fig1b):
        instance, code = fig1b
        assert check_key_feasibility(instance, code, 1).overall
        assert check_key_feasibility(instance, fig1b_code("b1"), 1).failed() == ["secrecy_ok"]

    def test_random_linear_key_codes(self, rng):
        for _ in range(5):
            instance, code = random_linear_key_code(rng)
            assert check_key_feasibility(instance, code, code.key_bits).overall

    def test_bijective_first_hop_always_decodes(self, rng):
        for _ in range(8):
            instance, code = random_single_source_code(rng, max_bits=4)
            first_hop = code.edge_encoders["s>v"].to_table()
            report = check_key_feasibility(instance, code, code.key_bits)
            if np.array_equal(np.sort(first_hop), np.arange(first_hop.shape[0])):
                assert report.verdicts["decoding_ok"].ok
                assert report.verdicts["rate_ok"].ok

    def test_report_document_round_trip(self, gap2_sum):
        instance, code = gap2_sum
        document = check(instance, code, "key", 1).to_dict()
        assert document["format"] == "keycast-report/1"
        assert document["overall"] == "pass"
        assert document["rate"] == "1/1"
        assert document["source_bits"] == 3
        assert list(document["verdicts"]) == ["rate_ok", "decoding_ok", "secrecy_ok", "witness_ok"]
        assert FeasibilityReport.from_dict(document).to_dict() == document


class TestSecureFeasibility:
    def test_random_secure_codes(self, rng):
        for _ in range(5):
            instance, code, coords = random_secure_code(rng)
            report = check_secure_feasibility(instance, code, code.key_bits)
            assert report.overall, report.failed()
            assert report.coords == coords

    def test_key_must_be_the_message_bits(self, fig1b):
        instance, code = fig1b
        report = check_secure_feasibility(instance, code, 1, [("s1", 0)])
        assert not report.verdicts["witness_ok"].ok
        assert report.verdicts["witness_ok"].counterexample == {"assignment": "0x1"}

    def test_projection_key_leaks_to_its_source(self, fig1b):
        instance, _ = fig1b
        report = check(instance, fig1b_code("b1"), CheckMode.SEC, 1, [("s1", 0)])
        assert report.verdicts["witness_ok"].ok
        assert report.failed() == ["secrecy_ok"]

    def test_coordinates_keep_the_given_order(self):
        instance = fig1b_instance(observe_sources=False)
        swap = Gf2Matrix([[0, 1], [1, 0]])
        code = fig1b_code().with_changes(decoders={"d": swap}, key=KeyMap(swap))
        report = check_secure_feasibility(instance, code, 2, [("s2", 0), ("s1", 0)])
        assert report.overall, report.failed()
        assert report.coords == [("s2", 0), ("s1", 0)]
        reordered = check_secure_feasibility(instance, code, 2, [("s1", 0), ("s2", 0)])
        assert reordered.failed() == ["witness_ok"]

    def test_coordinate_count_must_match_the_key(self, fig1b):
        instance, code = fig1b
        report = check_secure_feasibility(instance, code, 1, [])
        assert not report.verdicts["witness_ok"].ok

    def test_bad_coordinates(self, fig1b):
        instance, code = fig1b
        for coords in ([("s1", 3)], [("d", 0)], [("s1", 0), ("s1", 0)]):
            with pytest.raises(KeycastError) as info:
                check_secure_feasibility(instance, code, 1, coords)
            assert info.value.code is ErrorCode.BAD_COORDS


class TestTwoStage:
    def test_two_stage_code_with_all_bits_as_witness(self, gap2_two_stage):
        instance, code = gap2_two_stage
        witness = find_two_stage_witness(instance, code, "1/2")
        assert witness == [("s1", 0), ("s2", 0), ("s3", 0)]
        report = check_two_stage_feasibility(instance, code, "1/2", witness)
        assert report.overall
        assert report.mode is CheckMode.KEY2

    def test_sum_code_has_no_witness(self, gap2_sum):
        instance, code = gap2_sum
        assert find_two_stage_witness(instance, code, 1) is None
        report = check_two_stage_feasibility(instance, code, 1, [("s1", 0)])
        assert "decoding_ok" in report.failed()

    def test_witness_that_misses_key_inputs(self, gap2_two_stage):
        instance, code = gap2_two_stage
        report = check_two_stage_feasibility(instance, code, "1/2", [("s1", 0), ("s2", 0)])
        assert report.failed() == ["witness_ok"]

    def test_key2_needs_a_witness(self, gap2_two_stage):
        instance, code = gap2_two_stage
        with pytest.raises(KeycastError) as info:
            check(instance, code, "key2", "1/2")
        assert info.value.code is ErrorCode.BAD_WITNESS

    def test_witness_cap(self, gap2_two_stage):
        instance, code = gap2_two_stage
        with pytest.raises(KeycastError) as info:
            find_two_stage_witness(instance, code, "1/2", witness_cap=2)
        assert info.value.code is ErrorCode.SPACE_LIMIT
