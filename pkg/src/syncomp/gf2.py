"""Bit-packed GF(2) linear algebra and GF(2^m) field tables.

A :class:`BitMatrix` stores one Python int per row, with bit ``j`` of the
row int holding the entry in column ``j``.  Arbitrary-precision ints give
word-wide XOR row operations for free, so elimination runs on packed
words while every public contract stays bit-level; the packing is not
observable.

Vectors are plain ints under the same convention (bit ``j`` = coordinate
``j``), with the length supplied by context.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import DimensionError, RankDeficientError


def popcount(x: int) -> int:
    return x.bit_count()


def mask_to_list(mask: int, n: int) -> list[int]:
    """Expand a vector int into a list of n bits."""
    return [(mask >> j) & 1 for j in range(n)]


def list_to_mask(bits) -> int:
    m = 0
    for j, b in enumerate(bits):
        if b & 1:
            m |= 1 << j
    return m


def support(mask: int) -> list[int]:
    """Indices of set bits, ascending."""
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return out


@dataclass(frozen=True)
class BitMatrix:
    """Dense binary matrix, one int bitmask per row (bit j = column j)."""

    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise DimensionError(f"expected {self.rows} rows, got {len(self.data)}")
        limit = 1 << self.cols
        for r in self.data:
            if not 0 <= r < limit:
                raise DimensionError("row has bits beyond the declared column count")

    # -- constructors ---------------------------------------------------
    @classmethod
    def from_rows(cls, rows, cols: int) -> "BitMatrix":
        """Build from an iterable of row bitmasks or bit lists."""
        data = []
        for r in rows:
            data.append(r if isinstance(r, int) else list_to_mask(r))
        return cls(len(data), cols, tuple(data))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    # -- element access -------------------------------------------------
    def get(self, i: int, j: int) -> int:
        return (self.data[i] >> j) & 1

    def row(self, i: int) -> int:
        return self.data[i]

    def row_weight(self, i: int) -> int:
        return popcount(self.data[i])

    def column(self, j: int) -> int:
        """Column j as a bitmask over row indices."""
        m = 0
        for i, r in enumerate(self.data):
            if (r >> j) & 1:
                m |= 1 << i
        return m

    def column_weights(self) -> list[int]:
        return [popcount(self.column(j)) for j in range(self.cols)]

    def is_zero(self) -> bool:
        return all(r == 0 for r in self.data)

    # -- structural ops -------------------------------------------------
    def transpose(self) -> "BitMatrix":
        return BitMatrix(self.cols, self.rows, tuple(self.column(j) for j in range(self.cols)))

    def stack(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.cols:
            raise DimensionError("column counts differ")
        return BitMatrix(self.rows + other.rows, self.cols, self.data + other.data)

    def take_rows(self, indices) -> "BitMatrix":
        indices = list(indices)
        return BitMatrix(len(indices), self.cols, tuple(self.data[i] for i in indices))

    def permute_columns(self, perm) -> "BitMatrix":
        """New matrix whose column k is this matrix's column perm[k]."""
        perm = list(perm)
        if sorted(perm) != list(range(self.cols)):
            raise DimensionError("not a permutation of the columns")
        out = []
        for r in self.data:
            m = 0
            for k, src in enumerate(perm):
                if (r >> src) & 1:
                    m |= 1 << k
            out.append(m)
        return BitMatrix(self.rows, self.cols, tuple(out))

    # -- algebra ----------------------------------------------------------
    def matvec(self, v: int) -> int:
        """M @ v for a column vector v (bitmask over cols); result over rows."""
        s = 0
        for i, r in enumerate(self.data):
            if popcount(r & v) & 1:
                s |= 1 << i
        return s

    def vecmat(self, v: int) -> int:
        """v @ M for a row selector v (bitmask over rows); XOR of selected rows."""
        s = 0
        i = 0
        while v:
            if v & 1:
                s ^= self.data[i]
            v >>= 1
            i += 1
        return s

    def matmul(self, other: "BitMatrix") -> "BitMatrix":
        """GF(2) product; entry (i, j) = XOR_k A(i,k) B(k,j)."""
        if self.cols != other.rows:
            raise DimensionError(
                f"inner dimensions differ: {self.cols} vs {other.rows}")
        out = tuple(other.vecmat(r) for r in self.data)
        return BitMatrix(self.rows, other.cols, out)

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        return self.matmul(other)

    def rank(self) -> int:
        work = list(self.data)
        rank = 0
        for col in range(self.cols):
            pivot = None
            for r in range(rank, len(work)):
                if (work[r] >> col) & 1:
                    pivot = r
                    break
            if pivot is None:
                continue
            work[rank], work[pivot] = work[pivot], work[rank]
            for r in range(len(work)):
                if r != rank and ((work[r] >> col) & 1):
                    work[r] ^= work[rank]
            rank += 1
            if rank == len(work):
                break
        return rank

    def rref(self) -> tuple["BitMatrix", list[int]]:
        """Reduced row-echelon form and its pivot columns (ascending)."""
        work = list(self.data)
        pivots: list[int] = []
        rrow = 0
        for col in range(self.cols):
            pivot = None
            for r in range(rrow, len(work)):
                if (work[r] >> col) & 1:
                    pivot = r
                    break
            if pivot is None:
                continue
            work[rrow], work[pivot] = work[pivot], work[rrow]
            for r in range(len(work)):
                if r != rrow and ((work[r] >> col) & 1):
                    work[r] ^= work[rrow]
            pivots.append(col)
            rrow += 1
            if rrow == len(work):
                break
        return BitMatrix(self.rows, self.cols, tuple(work)), pivots

    def nullspace_basis(self) -> "BitMatrix":
        """Rows form a basis of {v : Mv = 0}; row count = cols - rank."""
        red, pivots = self.rref()
        pivot_set = set(pivots)
        free = [c for c in range(self.cols) if c not in pivot_set]
        basis = []
        for f in free:
            v = 1 << f
            for r, c in enumerate(pivots):
                if (red.data[r] >> f) & 1:
                    v |= 1 << c
            basis.append(v)
        return BitMatrix(len(basis), self.cols, tuple(basis))

    def canonical_form(self) -> tuple["BitMatrix", tuple[int, ...]]:
        """Row-reduce to [I | P'] form, permuting columns if needed.

        Returns (C, perm) where column k of C is column perm[k] of the
        row-reduced input.  Pivots take the lowest available column index.
        Requires full row rank.
        """
        red, pivots = self.rref()
        if len(pivots) != self.rows:
            raise RankDeficientError(
                "matrix is rank deficient; remove redundant checks first")
        pivot_set = set(pivots)
        perm = pivots + [c for c in range(self.cols) if c not in pivot_set]
        return red.permute_columns(perm), tuple(perm)

    def row_space_contains(self, v: int) -> bool:
        aug = BitMatrix(self.rows + 1, self.cols, self.data + (v,))
        return aug.rank() == self.rank()

    def same_row_space(self, other: "BitMatrix") -> bool:
        if self.cols != other.cols:
            return False
        ra, rb = self.rank(), other.rank()
        return ra == rb == self.stack(other).rank()

    # -- text format ------------------------------------------------------
    def to_text(self) -> str:
        """`r n` header line then r lines of exactly n characters from {0,1}."""
        lines = [f"{self.rows} {self.cols}"]
        for r in self.data:
            lines.append("".join("1" if (r >> j) & 1 else "0" for j in range(self.cols)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "BitMatrix":
        lines = text.splitlines()
        if not lines:
            raise ValueError("empty matrix text")
        head = lines[0].split(" ")
        if len(head) != 2:
            raise ValueError(f"bad header line: {lines[0]!r}")
        rows, cols = int(head[0]), int(head[1])
        if len(lines) < 1 + rows:
            raise ValueError("matrix text is truncated")
        data = []
        for i in range(rows):
            line = lines[1 + i]
            if len(line) != cols or set(line) - {"0", "1"}:
                raise ValueError(f"bad matrix row {i}: {line!r}")
            data.append(int(line[::-1], 2) if line else 0)
        return cls(rows, cols, tuple(data))


def weight_masks_indexlex(n: int, w: int):
    """Masks of weight w over n bits, ordered by their sorted support tuples."""
    for comb in itertools.combinations(range(n), w):
        m = 0
        for p in comb:
            m |= 1 << p
        yield m


def weight_masks_veclex(n: int, w: int):
    """Masks of weight w over n bits, smallest bit-vector first.

    Order is lexicographic on the bit tuple (v0, v1, ..., v_{n-1}) with
    bit 0 most significant, so 011 sorts before 101 before 110.
    """
    if w == 0:
        yield 0
        return
    if w > n:
        return
    # Gosper's hack over the reversed-bit representation walks weight-w
    # ints in increasing numeric order, which is exactly vector-lex order
    # of the un-reversed mask.
    r = (1 << w) - 1
    top = 1 << n
    while r < top:
        m = 0
        rr = r
        j = 0
        while rr:
            if rr & 1:
                m |= 1 << (n - 1 - j)
            rr >>= 1
            j += 1
        yield m
        c = r & -r
        t = r + c
        r = t | ((((r ^ t) >> 2) // c))


def masks_up_to_weight(n: int, wmax: int, order=weight_masks_indexlex):
    """All masks of weight 0..wmax in increasing-weight order."""
    for w in range(wmax + 1):
        yield from order(n, w)


# One conventional minimal-weight primitive polynomial per extension
# degree, as bitmasks (bit k = coefficient of x^k).  x^m term included.
PRIMITIVE_POLYS: dict[int, int] = {
    2: 0b111,                    # x^2 + x + 1
    3: 0b1011,                   # x^3 + x + 1
    4: 0b10011,                  # x^4 + x + 1
    5: 0b100101,                 # x^5 + x^2 + 1
    6: 0b1000011,                # x^6 + x + 1
    7: 0b10001001,               # x^7 + x^3 + 1
    8: 0b100011101,              # x^8 + x^4 + x^3 + x^2 + 1
    9: 0b1000010001,             # x^9 + x^4 + 1
    10: 0b10000001001,           # x^10 + x^3 + 1
    11: 0b100000000101,          # x^11 + x^2 + 1
    12: 0b1000001010011,         # x^12 + x^6 + x^4 + x + 1
    13: 0b10000000011011,        # x^13 + x^4 + x^3 + x + 1
    14: 0b100010001000011,       # x^14 + x^10 + x^6 + x + 1
    15: 0b1000000000000011,      # x^15 + x + 1
    16: 0b10001000000001011,     # x^16 + x^12 + x^3 + x + 1
}


@dataclass(frozen=True)
class GF2mField:
    """GF(2^m) with exp/log tables over a fixed primitive polynomial.

    Elements are ints whose bits are polynomial coefficients; alpha is the
    class of x.  exp_table[i] = alpha^i for 0 <= i < 2^m - 1, and
    log_table[e] = i for nonzero e.
    """

    m: int
    primitive_poly: int
    exp_table: tuple[int, ...]
    log_table: tuple[int, ...]

    @classmethod
    def build(cls, m: int) -> "GF2mField":
        if m not in PRIMITIVE_POLYS:
            raise ValueError(f"no primitive polynomial on file for m={m}")
        poly = PRIMITIVE_POLYS[m]
        order = (1 << m) - 1
        exp = [0] * order
        log = [-1] * (1 << m)
        val = 1
        for i in range(order):
            if log[val] != -1:
                raise ValueError(f"polynomial for m={m} is not primitive")
            exp[i] = val
            log[val] = i
            val <<= 1
            if val >> m:
                val ^= poly
        if val != 1:
            raise ValueError(f"polynomial for m={m} is not primitive")
        return cls(m, poly, tuple(exp), tuple(log))

    @property
    def order(self) -> int:
        """Multiplicative group order 2^m - 1."""
        return (1 << self.m) - 1

    def power(self, i: int) -> int:
        """alpha^i with the exponent taken mod 2^m - 1."""
        return self.exp_table[i % self.order]

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp_table[(self.log_table[a] + self.log_table[b]) % self.order]

    def log(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no discrete log")
        return self.log_table[a]
