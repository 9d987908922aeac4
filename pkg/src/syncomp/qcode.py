"""CSS code constructions and exact syndrome-weight accounting.

Codes are stored as X/Z check matrices over GF(2) with one fixed logical
representative per side.  Constructors attach geometric metadata (cell
coordinates, concatenation levels) that the schedule builders consume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from .errors import BudgetExceededError, DimensionError
from .gf2 import BitMatrix, popcount, weight_masks_indexlex

DEFAULT_CONCAT_QUBIT_CAP = 2401
DEFAULT_ENUM_BUDGET = 2_000_000


@dataclass(frozen=True)
class CssCode:
    """CSS stabilizer code: check matrices, distance, logical representatives."""

    n: int
    k: int
    d: int
    Hx: BitMatrix
    Hz: BitMatrix
    logical_z: int
    logical_x: int
    meta: dict = field(default_factory=dict, compare=False)

    def validate(self) -> None:
        """Check commutation, the rank identity, and the logical pair."""
        if self.Hx.cols != self.n or self.Hz.cols != self.n:
            raise DimensionError("check matrix width differs from qubit count")
        for i in range(self.Hx.rows):
            row = self.Hx.row(i)
            for j in range(self.Hz.rows):
                if popcount(row & self.Hz.row(j)) & 1:
                    raise ValueError(f"Hx row {i} anticommutes with Hz row {j}")
        if self.Hx.rank() + self.Hz.rank() != self.n - self.k:
            raise ValueError("rank(Hx) + rank(Hz) != n - k")
        if self.Hx.matvec(self.logical_z) != 0:
            raise ValueError("logical Z anticommutes with an X check")
        if self.Hz.matvec(self.logical_x) != 0:
            raise ValueError("logical X anticommutes with a Z check")
        if self.Hz.row_space_contains(self.logical_z):
            raise ValueError("logical Z is a stabilizer")
        if self.Hx.row_space_contains(self.logical_x):
            raise ValueError("logical X is a stabilizer")
        if not popcount(self.logical_z & self.logical_x) & 1:
            raise ValueError("logical pair commutes")

    def to_text(self) -> str:
        return f"{self.n} {self.k} {self.d}\n" + self.Hx.to_text() + self.Hz.to_text()

    @classmethod
    def from_text(cls, text: str) -> "CssCode":
        lines = text.splitlines()
        n, k, d = (int(x) for x in lines[0].split(" "))
        hx = BitMatrix.from_text("\n".join(lines[1:]))
        hz = BitMatrix.from_text("\n".join(lines[2 + hx.rows:]))
        lz, lx, minimal = logical_representatives_matrices(hx, hz)
        code = cls(n, k, d, hx, hz, lz, lx,
                   meta={"logicals_minimal": minimal})
        code.validate()
        return code


def rotated_surface_code(d: int) -> CssCode:
    """Rotated layout on a d x d grid, qubit (r, c) -> index r*d + c.

    Cells (i, j) cover the in-grid corners of the unit square at (i, j);
    interior cells alternate Z/X by (i + j) parity, weight-2 half cells sit
    on the top/bottom edges (Z) and left/right edges (X).  Logical Z is the
    first column, logical X the first row.
    """
    if d < 3 or d % 2 == 0:
        raise ValueError("distance must be odd and at least 3")

    def q(r: int, c: int) -> int:
        return r * d + c

    x_cells: list[tuple[int, int]] = []
    z_cells: list[tuple[int, int]] = []
    x_rows: list[int] = []
    z_rows: list[int] = []
    for i in range(-1, d):
        for j in range(-1, d):
            qs = [(i + di, j + dj) for di in (0, 1) for dj in (0, 1)
                  if 0 <= i + di < d and 0 <= j + dj < d]
            if len(qs) < 2:
                continue
            mask = 0
            for (r, c) in qs:
                mask |= 1 << q(r, c)
            even = (i + j) % 2 == 0
            if len(qs) == 4:
                if even:
                    z_cells.append((i, j))
                    z_rows.append(mask)
                else:
                    x_cells.append((i, j))
                    x_rows.append(mask)
            elif i in (-1, d - 1) and even:
                z_cells.append((i, j))
                z_rows.append(mask)
            elif j in (-1, d - 1) and not even:
                x_cells.append((i, j))
                x_rows.append(mask)

    n = d * d
    lz = 0
    for r in range(d):
        lz |= 1 << q(r, 0)
    lx = 0
    for c in range(d):
        lx |= 1 << q(0, c)
    code = CssCode(
        n, 1, d,
        BitMatrix(len(x_rows), n, tuple(x_rows)),
        BitMatrix(len(z_rows), n, tuple(z_rows)),
        lz, lx,
        meta={"family": "surface", "d": d,
              "x_cells": x_cells, "z_cells": z_cells},
    )
    code.validate()
    return code


def tetrahedral_code() -> CssCode:
    """The 15-qubit distance-3 code with four weight-8 X cells and ten
    weight-4 Z faces.

    Column j corresponds to the nonzero 4-bit label j+1; X cell a is the
    set of columns with bit a set.  The Z faces are the six pairwise
    intersections of cells plus one "off-face" x_a & ~x_{a+1} per cell,
    which together span the 10-dimensional face space.
    """
    n = 15

    def pts(predicate) -> int:
        m = 0
        for j in range(n):
            if predicate(j + 1):
                m |= 1 << j
        return m

    x_rows = [pts(lambda v, a=a: (v >> a) & 1) for a in range(4)]
    z_rows = []
    pair_order = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    for a, b in pair_order:
        z_rows.append(pts(lambda v, a=a, b=b: ((v >> a) & 1) and ((v >> b) & 1)))
    for a in range(4):
        b = (a + 1) % 4
        z_rows.append(pts(lambda v, a=a, b=b: ((v >> a) & 1) and not ((v >> b) & 1)))

    # Disjoint 3-face strips: opposite faces of two adjacent cells plus
    # their shared face.  Adjacent-pair XORs reproduce the cells.
    subsets = []
    for a, b in [(0, 1), (1, 2), (2, 3), (3, 0)]:
        f1 = pts(lambda v, a=a, b=b: ((v >> a) & 1) and not ((v >> b) & 1))
        f2 = pts(lambda v, a=a, b=b: ((v >> a) & 1) and ((v >> b) & 1))
        f3 = pts(lambda v, a=a, b=b: not ((v >> a) & 1) and ((v >> b) & 1))
        subsets.append((f1, f2, f3))

    hx = BitMatrix(4, n, tuple(x_rows))
    hz = BitMatrix(10, n, tuple(z_rows))
    lz, lx, _ = logical_representatives_matrices(hx, hz)
    code = CssCode(n, 1, 3, hx, hz, lz, lx,
                   meta={"family": "tetrahedral", "z_strips": subsets})
    code.validate()
    return code


def steane_code() -> CssCode:
    """[[7,1,3]] code; both sides are the Hamming(7,4) check matrix."""
    n = 7
    rows = []
    for bit in range(3):
        m = 0
        for j in range(n):
            if ((j + 1) >> bit) & 1:
                m |= 1 << j
        rows.append(m)
    h = BitMatrix(3, n, tuple(rows))
    lz, lx, _ = logical_representatives_matrices(h, h)
    code = CssCode(n, 1, 3, h, h, lz, lx, meta={"family": "steane"})
    code.validate()
    return code


def concatenate(base: CssCode, levels: int,
                qubit_cap: int = DEFAULT_CONCAT_QUBIT_CAP) -> CssCode:
    """Self-concatenate a k=1 code.

    Level-i stabilizers are base checks acting on level-(i-1) logical
    operators; n grows to base.n**levels and the distance to at least
    base.d**levels.  Row metadata records each check's level.
    """
    if base.k != 1:
        raise ValueError("concatenation requires a k=1 base code")
    if levels < 1:
        raise ValueError("levels must be at least 1")
    if base.n ** levels > qubit_cap:
        raise ValueError(
            f"concatenated code would use {base.n ** levels} qubits "
            f"(cap {qubit_cap})")

    code = base
    levels_x = [1] * base.Hx.rows
    levels_z = [1] * base.Hz.rows
    for level in range(2, levels + 1):
        prev = code
        n_new = base.n * prev.n
        x_rows: list[int] = []
        z_rows: list[int] = []
        new_levels_x: list[int] = []
        new_levels_z: list[int] = []
        for b in range(base.n):
            shift = b * prev.n
            x_rows.extend(r << shift for r in prev.Hx.data)
            z_rows.extend(r << shift for r in prev.Hz.data)
            new_levels_x.extend(levels_x)
            new_levels_z.extend(levels_z)

        def spread(base_mask: int, block_mask: int) -> int:
            out = 0
            for p in range(base.n):
                if (base_mask >> p) & 1:
                    out |= block_mask << (p * prev.n)
            return out

        for r in base.Hx.data:
            x_rows.append(spread(r, prev.logical_x))
            new_levels_x.append(level)
        for r in base.Hz.data:
            z_rows.append(spread(r, prev.logical_z))
            new_levels_z.append(level)
        code = CssCode(
            n_new, 1, base.d * prev.d,
            BitMatrix(len(x_rows), n_new, tuple(x_rows)),
            BitMatrix(len(z_rows), n_new, tuple(z_rows)),
            spread(base.logical_z, prev.logical_z),
            spread(base.logical_x, prev.logical_x),
        )
        levels_x, levels_z = new_levels_x, new_levels_z

    meta = {"family": "concat", "base_n": base.n, "base_d": base.d,
            "levels": levels, "levels_x": levels_x, "levels_z": levels_z,
            "base_c": max(max_column_weight(base.Hx), max_column_weight(base.Hz))}
    out = CssCode(code.n, 1, code.d, code.Hx, code.Hz,
                  code.logical_z, code.logical_x, meta=meta)
    out.validate()
    return out


def max_column_weight(h: BitMatrix) -> int:
    return max(h.column_weights()) if h.cols else 0


def _enum_count(n: int, wmax: int) -> int:
    return sum(math.comb(n, w) for w in range(wmax + 1))


def max_syndrome_weight(h: BitMatrix, d: int, mode: str = "exact",
                        c: int | None = None, m: int | None = None,
                        budget: int = DEFAULT_ENUM_BUDGET) -> int:
    """Largest |H e| over single-type errors of weight <= d - 1.

    mode "exact" enumerates every pattern (subject to budget);
    "ldpc_bound" returns c*(d-1); "concat_bound" returns (d-1)*c*m.
    """
    if mode == "ldpc_bound":
        if c is None:
            raise ValueError("ldpc_bound requires c")
        return c * (d - 1)
    if mode == "concat_bound":
        if c is None or m is None:
            raise ValueError("concat_bound requires c and m")
        return (d - 1) * c * m
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    if h.is_zero():
        return 0
    if _enum_count(h.cols, d - 1) > budget:
        raise BudgetExceededError(
            "exact syndrome-weight enumeration exceeds budget; use a bound mode")
    col_syn = [h.column(j) for j in range(h.cols)]
    best = 0

    def rec(start: int, left: int, acc: int) -> None:
        nonlocal best
        w = popcount(acc)
        if w > best:
            best = w
        if left == 0:
            return
        for j in range(start, h.cols - left + 1):
            rec(j + 1, left - 1, acc ^ col_syn[j])

    rec(0, d - 1, 0)
    return best


def logical_representatives_matrices(
        hx: BitMatrix, hz: BitMatrix,
        budget: int = DEFAULT_ENUM_BUDGET) -> tuple[int, int, bool]:
    """(logical_z, logical_x, minimal) for a k=1 pair of check matrices.

    Searches vectors by increasing weight for the minimum-weight
    representatives; if the enumeration would exceed the budget, falls
    back to any valid representative (minimal=False).
    """
    lz = _search_logical(hx, hz, budget)
    lx = _search_logical(hz, hx, budget)
    minimal = lz is not None and lx is not None
    if lz is None:
        lz = _fallback_logical(hx, hz)
    if lx is None:
        lx = _fallback_logical(hz, hx)
    return lz, lx, minimal


def make_rowspace_reducer(h: BitMatrix):
    """Return reduce(v) -> residual of v against the row space of h.

    reduce(v) == 0 exactly when v lies in the row space.
    """
    basis: list[int] = []
    pivots: list[int] = []
    for row in h.data:
        v = row
        for p, b in zip(pivots, basis):
            if (v >> p) & 1:
                v ^= b
        if v:
            pivots.append((v & -v).bit_length() - 1)
            basis.append(v)

    def reduce(v: int) -> int:
        for p, b in zip(pivots, basis):
            if (v >> p) & 1:
                v ^= b
        return v

    return reduce


def _search_logical(h_commute: BitMatrix, h_modulo: BitMatrix,
                    budget: int) -> int | None:
    n = h_commute.cols
    reduce = make_rowspace_reducer(h_modulo)
    seen = 0
    for w in range(1, n + 1):
        seen += math.comb(n, w)
        if seen > budget:
            return None
        for v in weight_masks_indexlex(n, w):
            if h_commute.matvec(v) == 0 and reduce(v) != 0:
                return v
    return None


def _fallback_logical(h_commute: BitMatrix, h_modulo: BitMatrix) -> int:
    basis = h_commute.nullspace_basis()
    for i in range(basis.rows):
        v = basis.row(i)
        if not h_modulo.row_space_contains(v):
            return v
    raise ValueError("no logical operator exists; is k = 0?")


def logical_representatives(code: CssCode,
                            budget: int = DEFAULT_ENUM_BUDGET) -> tuple[int, int, bool]:
    """Minimum-weight (logical_z, logical_x) search for a k=1 code."""
    if code.k != 1:
        raise ValueError("representative search implemented for k = 1 only")
    return logical_representatives_matrices(code.Hx, code.Hz, budget)
