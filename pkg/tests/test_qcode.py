import pytest

from syncomp.errors import BudgetExceededError
from syncomp.gf2 import BitMatrix, popcount, weight_masks_indexlex
from syncomp.qcode import (CssCode, concatenate, logical_representatives,
                           max_column_weight, max_syndrome_weight,
                           rotated_surface_code, steane_code,
                           tetrahedral_code)


def exhaustive_min_logical(hx, hz, wmax):
    """Search every pattern up to wmax for a vector commuting with hx
    outside the row space of hz."""
    for w in range(1, wmax + 1):
        for v in weight_masks_indexlex(hx.cols, w):
            if hx.matvec(v) == 0 and not hz.row_space_contains(v):
                return w
    return None


def test_surface_d3_shape():
    code = rotated_surface_code(3)
    assert (code.n, code.k, code.d) == (9, 1, 3)
    assert code.Hx.rows == 4 and code.Hz.rows == 4
    assert code.Hx.rank() == 4 and code.Hz.rank() == 4
    weights = sorted(code.Hx.row_weight(i) for i in range(4))
    assert weights == [2, 2, 4, 4]


def test_surface_d3_known_layout():
    code = rotated_surface_code(3)
    x_supports = {code.Hx.row(i) for i in range(4)}
    expect = {0b000001001, 0b000110110, 0b011011000, 0b100100000}
    assert x_supports == expect


def test_surface_d3_min_logical_weight():
    code = rotated_surface_code(3)
    assert exhaustive_min_logical(code.Hx, code.Hz, 3) == 3
    assert popcount(code.logical_z) == 3


@pytest.mark.parametrize("d", [3, 5, 7])
def test_surface_css_and_ranks(d):
    code = rotated_surface_code(d)
    code.validate()
    assert code.Hx.rows == code.Hz.rows == (d * d - 1) // 2
    for i in range(code.Hx.rows):
        assert code.Hx.row_weight(i) in (2, 4)


def test_surface_rejects_even_distance():
    with pytest.raises(ValueError):
        rotated_surface_code(4)


def test_tetrahedral_shape():
    code = tetrahedral_code()
    assert (code.n, code.k, code.d) == (15, 1, 3)
    assert code.Hz.rank() == 10 and code.Hx.rank() == 4
    assert all(code.Hx.row_weight(i) == 8 for i in range(4))
    assert all(code.Hz.row_weight(i) == 4 for i in range(10))
    code.validate()


def test_tetrahedral_single_z_errors_distinguished():
    code = tetrahedral_code()
    seen = set()
    for q in range(15):
        s = code.Hx.matvec(1 << q)
        assert s != 0
        assert s not in seen
        seen.add(s)


def test_tetrahedral_logical_weight():
    code = tetrahedral_code()
    assert popcount(code.logical_z) == 3
    assert exhaustive_min_logical(code.Hx, code.Hz, 3) == 3


def test_steane():
    code = steane_code()
    code.validate()
    assert (code.n, code.k, code.d) == (7, 1, 3)
    assert popcount(code.logical_z) == 3
    z, x, minimal = logical_representatives(code)
    assert minimal and popcount(z) == 3 and popcount(x) == 3


def test_concatenate_level_one_is_base():
    base = steane_code()
    code = concatenate(base, 1)
    assert code.Hx == base.Hx and code.Hz == base.Hz


def test_concatenate_steane_twice():
    code = concatenate(steane_code(), 2)
    code.validate()
    assert code.n == 49
    assert code.Hx.rows + code.Hz.rows == 48
    assert code.Hx.rank() + code.Hz.rank() == 48
    assert code.d == 9
    assert code.meta["levels_x"].count(2) == 3
    assert code.meta["base_c"] == 3


def test_concatenate_qubit_cap():
    with pytest.raises(ValueError):
        concatenate(steane_code(), 4, qubit_cap=2000)


def test_concat_single_error_syndrome_weight_bound():
    code = concatenate(steane_code(), 2)
    c = code.meta["base_c"]
    bound = c * 2  # one error, two levels
    for q in range(code.n):
        assert popcount(code.Hx.matvec(1 << q)) <= bound


def test_max_syndrome_weight_zero_matrix():
    assert max_syndrome_weight(BitMatrix.zeros(3, 9), 3) == 0


def test_max_syndrome_weight_surface_d3_exact():
    code = rotated_surface_code(3)
    assert max_syndrome_weight(code.Hx, 3) == 4


def test_max_syndrome_weight_bounds():
    code = rotated_surface_code(5)
    assert max_column_weight(code.Hx) == 2
    assert max_syndrome_weight(code.Hx, 5, "ldpc_bound", c=2) == 8
    assert max_syndrome_weight(code.Hx, 5, "concat_bound", c=2, m=3) == 24
    exact = max_syndrome_weight(code.Hx, 5)
    assert exact <= max_syndrome_weight(code.Hx, 5, "ldpc_bound", c=2)


def test_max_syndrome_weight_budget():
    code = rotated_surface_code(7)
    with pytest.raises(BudgetExceededError):
        max_syndrome_weight(code.Hx, 7, budget=1000)


def test_logical_representatives_tetrahedral():
    code = tetrahedral_code()
    z, x, minimal = logical_representatives(code)
    assert minimal
    assert popcount(z) == 3
    assert code.Hx.matvec(z) == 0
    assert code.Hz.matvec(x) == 0
    assert popcount(z & x) & 1


def test_logical_representatives_budget_fallback():
    code = rotated_surface_code(5)
    z, x, minimal = logical_representatives(code, budget=10)
    assert not minimal
    assert code.Hx.matvec(z) == 0 and not code.Hz.row_space_contains(z)
    assert code.Hz.matvec(x) == 0 and not code.Hx.row_space_contains(x)


def test_css_text_round_trip():
    code = steane_code()
    back = CssCode.from_text(code.to_text())
    assert back.Hx == code.Hx and back.Hz == code.Hz
    assert (back.n, back.k, back.d) == (7, 1, 3)
