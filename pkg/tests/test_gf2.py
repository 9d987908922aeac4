import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from syncomp.errors import DimensionError, RankDeficientError
from syncomp.gf2 import (BitMatrix, GF2mField, PRIMITIVE_POLYS,
                         weight_masks_veclex)


def naive_rank(rows, cols):
    """Unpacked elimination over lists of bits; the independent oracle."""
    work = [[(r >> j) & 1 for j in range(cols)] for r in rows]
    rank = 0
    for col in range(cols):
        pivot = None
        for i in range(rank, len(work)):
            if work[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        for i in range(len(work)):
            if i != rank and work[i][col]:
                work[i] = [a ^ b for a, b in zip(work[i], work[rank])]
        rank += 1
    return rank


@st.composite
def bit_matrices(draw, max_dim=12):
    rows = draw(st.integers(1, max_dim))
    cols = draw(st.integers(1, max_dim))
    data = draw(st.lists(st.integers(0, (1 << cols) - 1),
                         min_size=rows, max_size=rows))
    return BitMatrix(rows, cols, tuple(data))


def test_rank_identity_and_zero():
    assert BitMatrix.identity(4).rank() == 4
    assert BitMatrix.zeros(3, 5).rank() == 0


def test_rank_surface_d3_hx():
    from syncomp.qcode import rotated_surface_code
    hx = rotated_surface_code(3).Hx
    assert hx.rank() == 4
    assert naive_rank(hx.data, hx.cols) == 4


@settings(max_examples=200)
@given(bit_matrices())
def test_rank_matches_naive_oracle(m):
    assert m.rank() == naive_rank(m.data, m.cols)


def test_nullspace_examples():
    m = BitMatrix.from_rows([[1, 1, 1]], 3)
    basis = m.nullspace_basis()
    assert basis.rows == 2
    for i in range(basis.rows):
        assert m.matvec(basis.row(i)) == 0
    assert BitMatrix.identity(3).nullspace_basis().rows == 0
    rep = BitMatrix.from_rows([[1, 1, 0], [0, 1, 1]], 3)
    basis = rep.nullspace_basis()
    assert basis.rows == 1
    assert basis.row(0) == 0b111


@settings(max_examples=200)
@given(bit_matrices())
def test_nullspace_annihilates(m):
    basis = m.nullspace_basis()
    assert basis.rows == m.cols - m.rank()
    for i in range(basis.rows):
        assert m.matvec(basis.row(i)) == 0


def test_canonical_form_examples():
    m = BitMatrix.from_rows([[1, 1, 0], [0, 1, 1]], 3)
    canon, perm = m.canonical_form()
    assert perm == (0, 1, 2)
    assert canon.data == (0b101, 0b110)  # rows [1 0 1], [0 1 1]
    again, perm2 = canon.canonical_form()
    assert again == canon and perm2 == (0, 1, 2)


def test_canonical_form_bch8():
    from syncomp.classical import bch_parity_check
    code = bch_parity_check(15, 5)
    canon, perm = code.checks.canonical_form()
    for i in range(8):
        assert canon.column(i) == 1 << i


def test_canonical_form_rank_deficient():
    m = BitMatrix.from_rows([[1, 1, 0], [1, 1, 0]], 3)
    with pytest.raises(RankDeficientError):
        m.canonical_form()


@settings(max_examples=150)
@given(bit_matrices())
def test_canonical_form_preserves_row_space(m):
    full = m.take_rows([i for i in range(m.rows)])
    # Reduce to an independent row subset first.
    red, pivots = full.rref()
    indep = BitMatrix(len(pivots), m.cols,
                      tuple(r for r in red.data if r != 0))
    if indep.rows == 0:
        return
    canon, perm = indep.canonical_form()
    # Undo the permutation and compare row spaces with the input.
    inverse = [0] * len(perm)
    for k, src in enumerate(perm):
        inverse[src] = k
    restored = canon.permute_columns(inverse)
    assert restored.same_row_space(indep)


def test_matmul_examples():
    h = BitMatrix.from_rows([[1, 0, 1], [0, 1, 1]], 3)
    assert BitMatrix.identity(2) @ h == h
    ones = BitMatrix.from_rows([[1, 1]], 2)
    assert (ones @ h).row(0) == h.row(0) ^ h.row(1)


def test_matmul_dimension_mismatch():
    with pytest.raises(DimensionError):
        BitMatrix.identity(2) @ BitMatrix.identity(3)


def test_matmul_against_dense_oracle():
    import itertools
    a = BitMatrix.from_rows([[1, 0, 1], [1, 1, 0]], 3)
    b = BitMatrix.from_rows([[1, 1], [0, 1], [1, 0]], 2)
    c = a @ b
    for i, j in itertools.product(range(2), range(2)):
        expect = sum(a.get(i, k) * b.get(k, j) for k in range(3)) % 2
        assert c.get(i, j) == expect


def test_text_round_trip():
    m = BitMatrix.from_rows([[1, 0, 1, 1], [0, 0, 0, 1]], 4)
    text = m.to_text()
    assert text == "2 4\n1011\n0001\n"
    assert BitMatrix.from_text(text) == m


def test_veclex_order():
    masks = list(weight_masks_veclex(3, 2))
    # 011 < 101 < 110 with bit 0 most significant
    assert masks == [0b110, 0b101, 0b011]


def test_field_power_examples():
    f = GF2mField.build(4)
    assert f.power(0) == 1
    assert f.power(4) == 0b0011  # x^4 = x + 1 mod x^4+x+1
    assert f.power(f.order) == 1


@pytest.mark.parametrize("m", sorted(PRIMITIVE_POLYS))
def test_field_tables_cover_all_nonzero(m):
    f = GF2mField.build(m)
    assert len(set(f.exp_table)) == f.order
    assert f.exp_table[0] == 1


def test_field_exponent_law_and_log():
    f = GF2mField.build(5)
    for i in range(0, 40, 3):
        for j in range(0, 40, 7):
            assert f.mul(f.power(i), f.power(j)) == f.power(i + j)
    for i in range(f.order):
        assert f.log(f.power(i)) == i % f.order
