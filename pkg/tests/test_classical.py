import pytest

from syncomp.classical import (ClassicalCode, bch_parity_check, canonicalize,
                               classical_mwe_decode, identity_code,
                               min_distance_bruteforce,
                               repetition_parity_check)
from syncomp.errors import DecodeFailureError
from syncomp.gf2 import BitMatrix, popcount, weight_masks_indexlex


def exhaustive_distance(code, wmax=None):
    """Independent oracle: scan every pattern by weight for a codeword."""
    wmax = code.length if wmax is None else wmax
    for w in range(1, wmax + 1):
        for v in weight_masks_indexlex(code.length, w):
            if code.checks.matvec(v) == 0:
                return w
    return None


def test_bch_15_3_is_hamming():
    code = bch_parity_check(15, 3)
    assert code.family == "bch"
    assert code.num_checks == 4
    assert min_distance_bruteforce(code, 3) == 3
    assert exhaustive_distance(code) == 3


def test_bch_15_5():
    code = bch_parity_check(15, 5)
    assert code.num_checks == 8
    assert min_distance_bruteforce(code, 5) == 5
    assert min_distance_bruteforce(code, 4) is None


def test_bch_short_length_identity_fallback():
    code = bch_parity_check(4, 5)
    assert code.family == "identity"
    assert code.num_checks == 4
    assert code.checks == BitMatrix.identity(4)


def test_bch_rows_independent():
    for (length, delta) in [(15, 3), (15, 5), (15, 7), (31, 5), (12, 5)]:
        code = bch_parity_check(length, delta)
        assert code.checks.rank() == code.num_checks


@pytest.mark.parametrize("length,delta", [(15, 3), (15, 5), (15, 7),
                                          (31, 5), (21, 5), (12, 3)])
def test_bch_designed_distance_certified(length, delta):
    code = bch_parity_check(length, delta)
    if code.family == "identity":
        return
    assert min_distance_bruteforce(code, delta - 1) is None


def test_shortening_does_not_decrease_distance():
    base = exhaustive_distance(bch_parity_check(15, 5))
    shorter = bch_parity_check(12, 5)
    if shorter.family == "bch":
        d = exhaustive_distance(shorter)
        assert d is None or d >= base


def test_repetition_examples():
    assert repetition_parity_check(2).checks.data == (0b11,)
    code = repetition_parity_check(3)
    assert code.checks.data == (0b011, 0b110)
    assert exhaustive_distance(code) == 3
    assert exhaustive_distance(repetition_parity_check(6)) == 6


@pytest.mark.parametrize("length", range(2, 9))
def test_repetition_distance_equals_length(length):
    assert exhaustive_distance(repetition_parity_check(length)) == length


def test_min_distance_identity_reports_none():
    code = identity_code(6)
    assert min_distance_bruteforce(code, 5) is None


def test_mwe_decode_zero_syndrome():
    code = bch_parity_check(15, 5)
    assert classical_mwe_decode(code, 0) == 0


def test_mwe_decode_repetition():
    code = repetition_parity_check(3)
    # checks are [110], [011]; syndrome (1, 0) comes from flipping bit 0
    assert classical_mwe_decode(code, 0b01) == 0b001


def test_mwe_decode_bch_single_errors():
    code = bch_parity_check(15, 5)
    for q in range(15):
        syndrome = code.checks.matvec(1 << q)
        assert classical_mwe_decode(code, syndrome) == 1 << q


def test_mwe_decode_unique_radius():
    code = bch_parity_check(15, 5)
    radius = (code.designed_distance - 1) // 2
    for w in range(1, radius + 1):
        for v in weight_masks_indexlex(15, w):
            assert classical_mwe_decode(code, code.checks.matvec(v)) == v


def test_mwe_decode_weight_never_exceeds_true_weight():
    code = bch_parity_check(15, 5)
    for v in weight_masks_indexlex(15, 3):
        got = classical_mwe_decode(code, code.checks.matvec(v))
        assert popcount(got) <= 3


def test_mwe_tie_break_is_vector_lex():
    # One check over three bits: every single bit matches syndrome 1.
    code = ClassicalCode(3, BitMatrix.from_rows([[1, 1, 1]], 3), 2, "bch")
    # Lexicographically smallest weight-1 vector is 001 (bit 2 set).
    assert classical_mwe_decode(code, 1) == 0b100


def test_mwe_decode_failure_budget():
    code = repetition_parity_check(4)
    syndrome = code.checks.matvec(0b0110)
    with pytest.raises(DecodeFailureError):
        classical_mwe_decode(code, syndrome, wmax=1)


def test_canonicalize_gives_leading_identity():
    code, perm = canonicalize(bch_parity_check(15, 5))
    for i in range(code.num_checks):
        assert code.checks.column(i) == 1 << i
    assert sorted(perm) == list(range(15))


def test_serialization_round_trip():
    code = bch_parity_check(15, 5)
    text = code.to_text()
    assert text.startswith("bch 5\n8 15\n")
    back = ClassicalCode.from_text(text)
    assert back == code
