"""Classical compressor codes: shortened BCH, repetition, identity.

These supply the parity-check matrices used to combine stabilizer
generators.  Distances are certified by brute force rather than assumed,
and decoding is plain minimum-weight enumeration with a fixed tie-break.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DecodeFailureError, DimensionError
from .gf2 import BitMatrix, GF2mField, weight_masks_veclex

FAMILIES = ("bch", "repetition", "identity")


@dataclass(frozen=True)
class ClassicalCode:
    """Length, full-row-rank check matrix, designed distance, family tag."""

    length: int
    checks: BitMatrix
    designed_distance: int
    family: str

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.checks.cols != self.length:
            raise DimensionError("check matrix width differs from code length")

    @property
    def num_checks(self) -> int:
        return self.checks.rows

    def to_text(self) -> str:
        return f"{self.family} {self.designed_distance}\n" + self.checks.to_text()

    @classmethod
    def from_text(cls, text: str) -> "ClassicalCode":
        head, _, rest = text.partition("\n")
        family, delta = head.split(" ")
        checks = BitMatrix.from_text(rest)
        return cls(checks.cols, checks, int(delta), family)


def _independent_rows(rows: list[int], cols: int) -> list[int]:
    """Indices of rows forming a maximal independent subset, in input order."""
    basis: list[int] = []  # rows reduced to echelon, paired with pivot bit
    pivots: list[int] = []
    kept = []
    for idx, row in enumerate(rows):
        v = row
        for p, b in zip(pivots, basis):
            if (v >> p) & 1:
                v ^= b
        if v:
            kept.append(idx)
            pivot = (v & -v).bit_length() - 1
            pivots.append(pivot)
            basis.append(v)
    return kept


def identity_code(length: int) -> ClassicalCode:
    return ClassicalCode(length, BitMatrix.identity(length), length + 1, "identity")


def repetition_parity_check(length: int) -> ClassicalCode:
    """(L-1) x L adjacent-pair parity checks; distance L."""
    if length < 2:
        raise ValueError("repetition code needs length >= 2")
    rows = tuple((1 << i) | (1 << (i + 1)) for i in range(length - 1))
    return ClassicalCode(length, BitMatrix(length - 1, length, rows), length, "repetition")


def bch_parity_check(length: int, delta: int) -> ClassicalCode:
    """Shortened narrow-sense BCH check matrix of designed distance delta.

    Chooses the smallest m with 2^m - 1 >= length, builds t = ceil((delta-1)/2)
    field rows from odd powers of the primitive element over columns
    alpha^0 .. alpha^(length-1), expands each into m binary rows, and drops
    dependent rows.  If no rows are saved versus measuring every bit, the
    identity code is returned instead (family tag "identity").
    """
    if length < 1:
        raise ValueError("length must be positive")
    if delta < 2:
        raise ValueError("designed distance must be at least 2")
    m = 2
    while (1 << m) - 1 < length:
        m += 1
    field = GF2mField.build(m)
    t = (delta - 1 + 1) // 2  # ceil((delta-1)/2)
    raw_rows: list[int] = []
    for k in range(t):
        b = 2 * k + 1
        for bit in range(m):
            row = 0
            for j in range(length):
                if (field.power(b * j) >> bit) & 1:
                    row |= 1 << j
            raw_rows.append(row)
    kept = _independent_rows(raw_rows, length)
    if len(kept) >= length:
        return identity_code(length)
    checks = BitMatrix(len(kept), length, tuple(raw_rows[i] for i in kept))
    return ClassicalCode(length, checks, delta, "bch")


def min_distance_bruteforce(code: ClassicalCode, wmax: int) -> int | None:
    """Smallest weight of a nonzero nullspace vector, or None if > wmax.

    Enumerates every error pattern of weight 1..wmax; feasible for
    length <= 32 with wmax <= 6.
    """
    h = code.checks
    col_syn = [h.column(j) for j in range(code.length)]
    for w in range(1, min(wmax, code.length) + 1):
        if _has_weight_w_codeword(col_syn, code.length, w):
            return w
    return None


def _has_weight_w_codeword(col_syn: list[int], n: int, w: int) -> bool:
    # Depth-first combination walk with an incremental syndrome XOR.
    def rec(start: int, left: int, acc: int) -> bool:
        if left == 0:
            return acc == 0
        for j in range(start, n - left + 1):
            if rec(j + 1, left - 1, acc ^ col_syn[j]):
                return True
        return False

    return rec(0, w, 0)


def classical_mwe_decode(code: ClassicalCode, syndrome: int, wmax: int | None = None) -> int:
    """Minimum-weight v with checks @ v = syndrome.

    Ties inside a weight class go to the lexicographically smallest bit
    vector with bit 0 most significant.  Raises DecodeFailureError when no
    candidate of weight <= wmax exists (default budget ceil(L/2) + 1).
    """
    h = code.checks
    if h.rows == h.cols and h.data == BitMatrix.identity(h.rows).data:
        return syndrome  # unique preimage
    budget = wmax if wmax is not None else math.ceil(code.length / 2) + 1
    for w in range(min(budget, code.length) + 1):
        for v in weight_masks_veclex(code.length, w):
            if h.matvec(v) == syndrome:
                return v
    raise DecodeFailureError(
        f"no error of weight <= {budget} matches the syndrome")


def canonicalize(code: ClassicalCode) -> tuple[ClassicalCode, tuple[int, ...]]:
    """Code with checks in [I | P'] form plus the column permutation used.

    Column k of the new checks is column perm[k] of the old; callers that
    compress generator lists must reorder the generators the same way.
    """
    canon, perm = code.checks.canonical_form()
    return ClassicalCode(code.length, canon, code.designed_distance, code.family), perm
