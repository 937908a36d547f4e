# Pre-encoding, the linear key-to-secure transform and the secure/key reduction
import numpy as np
import pytest

from src.analysis import check_key_feasibility, check_secure_feasibility
from src.coding import Gf2Matrix, KeyMap, TruthTable, evaluate, linear_to_general
from src.constructions import (
    fig1b_code,
    fig1b_instance,
    random_balanced_table,
    random_linear_key_code,
    random_secure_code,
    relay_code,
    relay_instance,
)
from src.errors import ErrorCode, KeycastError
from src.model import SourceRole
from src.transforms import (
    KEY_TERMINAL,
    REDUCED_FAMILY,
    Permutation,
    apply_preencoding,
    linear_key_to_secure,
    lift_secure_code,
    preencoding_permutation,
    reduce_secure_to_key,
    restrict_key_code_to_secure,
    zero_redundant_columns,
)


class TestPreencoding:
    def test_xor_key(self):
        perm = preencoding_permutation(Gf2Matrix([[1, 1]]))
        assert perm.to_list() == [0, 3, 1, 2]
        assert preencoding_permutation(Gf2Matrix([[1, 0]])).is_identity

    def test_key_reads_off_the_prefix(self, rng):
        for ell, k in ((3, 1), (4, 2), (4, 4)):
            table = random_balanced_table(rng, ell, k)
            perm = preencoding_permutation(table)
            m = np.arange(1 << ell)
            assert np.array_equal(table.apply_block(perm.apply_block(m)), m >> (ell - k))

    def test_nonuniform_key_is_rejected(self):
        with pytest.raises(KeycastError) as info:
            preencoding_permutation(TruthTable(2, 1, [0, 0, 0, 1]))
        assert info.value.code is ErrorCode.NOT_UNIFORM
        assert info.value.details == {"key_value": 0}

    def test_permutation_validation(self):
        with pytest.raises(KeycastError):
            Permutation(2, [0, 1, 1, 2])
        perm = Permutation(2, [0, 3, 1, 2])
        assert perm.inverse().to_list() == [0, 2, 3, 1]

    def test_relay_code_is_pre_encoded(self, relay):
        instance, code = relay
        perm = preencoding_permutation(code.key)
        encoded = apply_preencoding(instance, code, perm)
        assert encoded.key.to_table().tolist() == [0, 0, 1, 1]
        for m in range(4):
            after, before = evaluate(instance, encoded, m), evaluate(instance, code, int(perm.table[m]))
            assert after.edge_messages == before.edge_messages
            assert after.decoder_outputs == before.decoder_outputs
            assert after.key_value == before.key_value
        assert check_key_feasibility(instance, encoded, 1).overall

    def test_pre_encoding_needs_a_single_source(self):
        instance, code = fig1b_instance(), fig1b_code()
        with pytest.raises(KeycastError) as info:
            apply_preencoding(instance, code, Permutation.identity(1))
        assert info.value.code is ErrorCode.MULTI_SOURCE


class TestLinearKeyToSecure:
    def test_zero_redundant_columns(self):
        reduced, kept = zero_redundant_columns(Gf2Matrix([[1, 1, 0], [0, 1, 1]]))
        assert kept == [0, 1]
        assert reduced == Gf2Matrix([[1, 1, 0], [0, 1, 0]])

    def test_zero_redundant_columns_is_idempotent(self, rng):
        for _ in range(30):
            rows, cols = int(rng.integers(1, 6)), int(rng.integers(1, 9))
            matrix = Gf2Matrix(rng.integers(0, 2, size=(rows, cols)))
            reduced, kept = zero_redundant_columns(matrix)
            assert reduced.rank() == matrix.rank()
            assert matrix.select_columns(kept).rank() == len(kept)
            assert reduced.select_columns(kept) == matrix.select_columns(kept)
            assert zero_redundant_columns(reduced) == (reduced, kept)

    def test_relay_parity_becomes_a_message_bit(self, relay):
        instance, code = relay
        secure, coords = linear_key_to_secure(instance, code)
        assert coords == [("s", 0)]
        assert secure.source_bits == {"s": 1}
        assert secure.edge_encoders["s>v"] == Gf2Matrix([[1]])
        assert check_secure_feasibility(instance, secure, 1, coords).overall

    def test_random_linear_key_codes(self, rng):
        for _ in range(5):
            instance, code = random_linear_key_code(rng)
            secure, coords = linear_key_to_secure(instance, code)
            assert len(coords) == code.key_bits
            report = check_secure_feasibility(instance, secure, code.key_bits, coords)
            assert report.overall, report.failed()

    def test_preconditions(self, relay, gap2_sum):
        instance, code = relay
        with pytest.raises(KeycastError) as info:
            linear_key_to_secure(instance, linear_to_general(code))
        assert info.value.code is ErrorCode.NOT_LINEAR
        with pytest.raises(KeycastError) as info:
            linear_key_to_secure(*gap2_sum)
        assert info.value.code is ErrorCode.NONZERO_B


class TestReduction:
    def test_reduced_instance(self, rng):
        instance, _, _ = random_secure_code(rng)
        reduced = reduce_secure_to_key(instance, 1)
        assert reduced.family == REDUCED_FAMILY
        assert reduced.terminals == ("d", KEY_TERMINAL)
        assert reduced.edges[-1].id == "s>d_key"
        assert all(s.role is SourceRole.BOTH for s in reduced.sources)
        assert reduced.eavesdrop_sets == instance.eavesdrop_sets

    def test_reduction_preconditions(self, rng):
        instance, _, _ = random_secure_code(rng)
        with pytest.raises(KeycastError) as info:
            reduce_secure_to_key(instance, 0)
        assert info.value.code is ErrorCode.BAD_RATE
        with pytest.raises(KeycastError) as info:
            reduce_secure_to_key(fig1b_instance(), 1)
        assert info.value.code is ErrorCode.MULTI_MESSAGE_SOURCE

    def test_lift_then_restrict(self, rng):
        for _ in range(4):
            instance, code, coords = random_secure_code(rng)
            k = code.key_bits
            reduced, lifted = lift_secure_code(instance, code, k)
            assert check_key_feasibility(reduced, lifted, k).overall

            original, secure, new_coords = restrict_key_code_to_secure(reduced, lifted)
            assert original == instance
            assert new_coords == [("s", j) for j in range(k)]
            report = check_secure_feasibility(original, secure, k, new_coords)
            assert report.overall, report.failed()

    def test_lift_keeps_the_coordinate_order(self, rng):
        instance, code, coords = random_secure_code(rng)
        while code.key_bits < 2:
            instance, code, coords = random_secure_code(rng)
        k = code.key_bits
        flip = Gf2Matrix(np.flipud(np.eye(k, dtype=np.uint8)))
        coords = coords[::-1]
        flipped = code.with_changes(key=KeyMap(flip @ code.key.function),
                                    decoders={"d": flip @ code.decoders["d"]},
                                    message_coords=tuple(coords))
        assert check_secure_feasibility(instance, flipped, k, coords).overall

        reduced, lifted = lift_secure_code(instance, flipped, k)
        assert list(lifted.message_coords) == coords
        assert check_key_feasibility(reduced, lifted, k).overall

    def test_lift_needs_room_for_the_key(self, rng):
        instance, code, _ = random_secure_code(rng)
        while code.key_bits < 2:
            instance, code, _ = random_secure_code(rng)
        with pytest.raises(KeycastError) as info:
            lift_secure_code(instance, code, 1)
        assert info.value.code is ErrorCode.CAPACITY_EXCEEDED
        assert info.value.details == {"needed": code.key_bits, "width": 1}

    def test_lift_coordinate_errors(self, rng):
        instance, code, _ = random_secure_code(rng)
        with pytest.raises(KeycastError) as info:
            lift_secure_code(instance, code, code.key_bits, [])
        assert info.value.code is ErrorCode.BAD_COORDS
        with pytest.raises(KeycastError) as info:
            lift_secure_code(instance, code, code.key_bits, [("z", 0)])
        assert info.value.code is ErrorCode.BAD_COORDS

    def test_restrict_needs_a_reduced_instance(self, relay):
        with pytest.raises(KeycastError) as info:
            restrict_key_code_to_secure(*relay)
        assert info.value.code is ErrorCode.NOT_REDUCED_INSTANCE

    def test_key_must_depend_on_the_message_source(self, rng):
        instance, code, _ = random_secure_code(rng)
        k = code.key_bits
        reduced, lifted = lift_secure_code(instance, code, k)
        ell_s = code.source_bits["s"]
        pad_only = Gf2Matrix.zeros(k, ell_s).hstack(Gf2Matrix.identity(k))
        with pytest.raises(KeycastError) as info:
            restrict_key_code_to_secure(reduced, lifted.with_changes(key=KeyMap(pad_only)))
        assert info.value.code is ErrorCode.KEY_NOT_SOURCE_FUNCTION
