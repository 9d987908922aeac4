"""Measurement-schedule construction by compressing stabilizer generators.

A schedule's per-round matrices are products P @ H where P is a classical
parity-check matrix (whole-side or per-subset) and H holds the generator
rows being combined.  Detectability of the result is certified by brute
force in :func:`theorem1_certificate` instead of being trusted.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .classical import (ClassicalCode, bch_parity_check, canonicalize,
                        identity_code, repetition_parity_check)
from .errors import BudgetExceededError, DimensionError, StrategyError
from .gf2 import BitMatrix, masks_up_to_weight, popcount
from .qcode import CssCode, max_column_weight, max_syndrome_weight

STRATEGIES = (
    "identity",
    "full_bch",
    "disjoint_partition_bch",
    "row_partition_repetition",
    "greedy_ldpc_partition_bch",
    "concat_levels_bch",
)


@dataclass(frozen=True)
class MeasurementSchedule:
    """Composite stabilizers measured each round, plus build provenance."""

    code_ref: str
    per_round_x: BitMatrix
    per_round_z: BitMatrix
    rounds: int
    provenance: dict

    def __post_init__(self):
        if self.rounds < 1:
            raise ValueError("rounds must be at least 1")

    @property
    def per_round_count(self) -> int:
        return self.per_round_x.rows + self.per_round_z.rows

    def to_json(self) -> str:
        def rows_as_strings(m: BitMatrix) -> list[str]:
            return m.to_text().splitlines()[1:]

        doc = {
            "code": self.code_ref,
            "strategy": self.provenance.get("strategy"),
            "rounds": self.rounds,
            "x_rows": rows_as_strings(self.per_round_x),
            "z_rows": rows_as_strings(self.per_round_z),
            "provenance": self.provenance,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "MeasurementSchedule":
        doc = json.loads(text)

        def matrix(rows: list[str]) -> BitMatrix:
            cols = len(rows[0]) if rows else 0
            header = f"{len(rows)} {cols}"
            return BitMatrix.from_text("\n".join([header] + rows) + "\n")

        return cls(doc["code"], matrix(doc["x_rows"]), matrix(doc["z_rows"]),
                   doc["rounds"], doc["provenance"])


def compress_checks(h: BitMatrix, compressor: ClassicalCode) -> BitMatrix:
    """P @ H; the compressor length must equal the generator count."""
    if compressor.length != h.rows:
        raise DimensionError(
            f"compressor length {compressor.length} != generator count {h.rows}")
    return compressor.checks @ h


def greedy_disjoint_partition(h: BitMatrix, c: int) -> list[list[int]]:
    """Partition row indices into subsets with pairwise disjoint supports.

    Rows are considered in index order and assigned to the first subset
    whose rows they do not overlap.  Requires every column weight <= c.
    """
    if any(w > c for w in h.column_weights()):
        raise ValueError(f"a column exceeds the stated weight bound c={c}")
    subsets: list[list[int]] = []
    subset_support: list[int] = []
    for i in range(h.rows):
        row = h.row(i)
        for s, supp in enumerate(subset_support):
            if supp & row == 0:
                subsets[s].append(i)
                subset_support[s] |= row
                break
        else:
            subsets.append([i])
            subset_support.append(row)
    return subsets


def data_syndrome_compose(m: BitMatrix, outer_generator: BitMatrix) -> BitMatrix:
    """Outer-code composition G @ M.

    Row i of the transposed outer generator says which rows of M are
    XORed into measurement stream i; for the distance-d repetition outer
    code this is d stacked copies of M.
    """
    if outer_generator.cols != m.rows:
        raise DimensionError(
            f"outer generator width {outer_generator.cols} != row count {m.rows}")
    return outer_generator @ m


def repetition_outer_generator(streams: int, distance: int) -> BitMatrix:
    """Transposed generator of the distance-d repetition outer code."""
    ident = BitMatrix.identity(streams)
    out = ident
    for _ in range(distance - 1):
        out = out.stack(ident)
    return out


def _compress_subset(h: BitMatrix, subset: list[int], compressor: ClassicalCode,
                     canonical: bool) -> tuple[BitMatrix, dict]:
    """Compress the given generator rows; returns rows plus provenance."""
    perm = None
    if canonical and compressor.family == "bch":
        compressor, perm = canonicalize(compressor)
        subset = [subset[p] for p in perm]
    sub = h.take_rows(subset)
    rows = compress_checks(sub, compressor)
    info = {
        "subset": list(subset),
        "family": compressor.family,
        "delta": compressor.designed_distance,
        "rows_in": len(subset),
        "rows_out": rows.rows,
        "fallback": compressor.family == "identity",
        "compressor_rows": compressor.checks.to_text().splitlines()[1:],
    }
    if perm is not None:
        info["canonical_perm"] = list(perm)
    return rows, info


def _stack_all(parts: list[BitMatrix], cols: int) -> BitMatrix:
    rows: list[int] = []
    for p in parts:
        rows.extend(p.data)
    return BitMatrix(len(rows), cols, tuple(rows))


def _surface_cells(code: CssCode, side: str) -> list[tuple[int, int]]:
    if code.meta.get("family") != "surface":
        raise StrategyError(
            "strategy needs rotated-surface cell geometry; build the code "
            "with rotated_surface_code or pass a matching file")
    return code.meta["x_cells" if side == "x" else "z_cells"]


def _check_disjoint(h: BitMatrix, subsets: list[list[int]], what: str) -> None:
    for subset in subsets:
        supp = 0
        for i in subset:
            if supp & h.row(i):
                raise StrategyError(
                    f"{what}: subset rows {subset} do not have disjoint supports")
            supp |= h.row(i)


def _full_bch_delta(code: CssCode, h: BitMatrix, budget: int) -> tuple[int, str]:
    try:
        w = max_syndrome_weight(h, code.d, "exact", budget=budget)
        return w + 1, "exact"
    except BudgetExceededError:
        c = max_column_weight(h)
        return c * (code.d - 1) + 1, f"ldpc_bound(c={c})"


def build_schedule(code: CssCode, strategy: str, rounds: int,
                   canonical: bool = True,
                   exact_budget: int = 200_000) -> MeasurementSchedule:
    """Build a schedule by applying the strategy per side.

    Compressors of the bch family are put in canonical [I | P'] form by
    default (reordering their subset's generators accordingly) so the
    two-step decoder's precondition holds.
    """
    if strategy not in STRATEGIES:
        raise StrategyError(f"unknown strategy {strategy!r}")
    if rounds < 1:
        raise ValueError("rounds must be at least 1")

    sides = {}
    prov_sides = {}
    for side, h in (("x", code.Hx), ("z", code.Hz)):
        parts: list[BitMatrix] = []
        infos: list[dict] = []

        if strategy == "identity":
            rows, info = _compress_subset(h, list(range(h.rows)),
                                          identity_code(h.rows), canonical)
            parts, infos = [rows], [info]

        elif strategy == "full_bch":
            delta, w_mode = _full_bch_delta(code, h, exact_budget)
            rows, info = _compress_subset(h, list(range(h.rows)),
                                          bch_parity_check(h.rows, delta), canonical)
            info["w_mode"] = w_mode
            parts, infos = [rows], [info]

        elif strategy == "disjoint_partition_bch":
            cells = _surface_cells(code, side)
            # X generators split by column parity, Z by row parity.
            axis = 1 if side == "x" else 0
            subsets = [
                [i for i, cell in enumerate(cells) if cell[axis] % 2 == 1],
                [i for i, cell in enumerate(cells) if cell[axis] % 2 == 0],
            ]
            _check_disjoint(h, subsets, "disjoint_partition_bch")
            for subset in subsets:
                rows, info = _compress_subset(
                    h, subset, bch_parity_check(len(subset), code.d), canonical)
                parts.append(rows)
                infos.append(info)

        elif strategy == "row_partition_repetition":
            cells = _surface_cells(code, side)
            axis = 0 if side == "x" else 1
            half = (code.d - 1) // 2
            subsets = []
            for k in range(half):
                subsets.append([i for i, cell in enumerate(cells)
                                if cell[axis] in (k, k + half)])
            _check_disjoint(h, subsets, "row_partition_repetition")
            for subset in subsets:
                rows, info = _compress_subset(
                    h, subset, repetition_parity_check(len(subset)), canonical)
                parts.append(rows)
                infos.append(info)

        elif strategy == "greedy_ldpc_partition_bch":
            c = max_column_weight(h)
            subsets = greedy_disjoint_partition(h, c)
            for subset in subsets:
                comp = (bch_parity_check(len(subset), code.d)
                        if len(subset) > 1 else identity_code(len(subset)))
                rows, info = _compress_subset(h, subset, comp, canonical)
                parts.append(rows)
                infos.append(info)

        elif strategy == "concat_levels_bch":
            if code.meta.get("family") != "concat":
                raise StrategyError(
                    "concat_levels_bch needs per-level row metadata from concatenate()")
            tags = code.meta["levels_x" if side == "x" else "levels_z"]
            c = code.meta["base_c"]
            delta = c * (code.d - 1) + 1
            n_base = code.meta["base_n"]
            n_total = code.n
            for level in range(1, code.meta["levels"] + 1):
                subset = [i for i, t in enumerate(tags) if t == level]
                rows, info = _compress_subset(
                    h, subset, bch_parity_check(len(subset), delta), canonical)
                info["level"] = level
                # Population predicted by the geometric-thinning formula,
                # reported for comparison only.
                info["formula_population"] = ((n_base - 1) / n_base) ** level * (n_total - 1)
                parts.append(rows)
                infos.append(info)

        sides[side] = _stack_all(parts, code.n)
        prov_sides[side] = infos

    provenance = {
        "strategy": strategy,
        "rounds": rounds,
        "canonical": canonical,
        "x": prov_sides["x"],
        "z": prov_sides["z"],
    }
    ref = code.meta.get("family", "css")
    if "d" in code.meta:
        ref += f"_d{code.meta['d']}"
    return MeasurementSchedule(ref, sides["x"], sides["z"], rounds, provenance)


def tetrahedral_sufficient_z() -> BitMatrix:
    """The four weight-8 cell operators recovered by per-strip repetition.

    Applies the distance-3 repetition checks to each disjoint 3-face strip
    of the tetrahedral code and deduplicates the doubly produced rows.
    """
    from .qcode import tetrahedral_code

    code = tetrahedral_code()
    rep = repetition_parity_check(3)
    produced: list[int] = []
    for strip in code.meta["z_strips"]:
        faces = BitMatrix(3, code.n, tuple(strip))
        rows = compress_checks(faces, rep)
        produced.extend(rows.data)
    unique: list[int] = []
    for r in produced:
        if r not in unique:
            unique.append(r)
    return BitMatrix(len(unique), code.n, tuple(unique))


@dataclass(frozen=True)
class ScheduleStats:
    per_round_x: int
    per_round_z: int
    per_round_total: int
    rounds: int
    total: int
    max_weight_x: int
    mean_weight_x: float
    max_weight_z: int
    mean_weight_z: float
    formula_per_round: int | None
    formula_total: int | None

    def lines(self) -> list[str]:
        out = [
            f"per-round measurements: {self.per_round_total} "
            f"(x: {self.per_round_x}, z: {self.per_round_z})",
            f"total over {self.rounds} rounds: {self.total}",
            f"max/mean stabilizer weight x: {self.max_weight_x} / {self.mean_weight_x:.2f}",
            f"max/mean stabilizer weight z: {self.max_weight_z} / {self.mean_weight_z:.2f}",
        ]
        if self.formula_per_round is not None:
            out.append(
                f"check-count formula: {self.formula_per_round} per round, "
                f"{self.formula_total} total")
        return out


def schedule_stats(schedule: MeasurementSchedule,
                   surface_d: int | None = None) -> ScheduleStats:
    """Measurement counts and stabilizer weights, plus the closed-form
    surface-code check-count prediction ceil(2d log2(d^2 + 1)) when d is
    known."""

    def side_stats(m: BitMatrix) -> tuple[int, float]:
        if m.rows == 0:
            return 0, 0.0
        weights = [m.row_weight(i) for i in range(m.rows)]
        return max(weights), sum(weights) / len(weights)

    mx, ax = side_stats(schedule.per_round_x)
    mz, az = side_stats(schedule.per_round_z)
    per_round = schedule.per_round_count
    formula = None
    if surface_d is not None:
        formula = math.ceil(2 * surface_d * math.log2(surface_d ** 2 + 1))
    return ScheduleStats(
        schedule.per_round_x.rows, schedule.per_round_z.rows, per_round,
        schedule.rounds, per_round * schedule.rounds,
        mx, ax, mz, az,
        formula, None if formula is None else formula * schedule.rounds,
    )


def theorem1_certificate(code: CssCode, schedule: MeasurementSchedule,
                         side: str = "x", wmax: int | None = None,
                         budget: int = 2_000_000) -> tuple[bool, int | None]:
    """Exhaustively check (PH)e = 0 <=> He = 0 for |e| <= wmax.

    Returns (ok, witness 2mask or None).  Errors are single-type: patterns
    tested against Hx are Z-type data errors and vice versa.
    """
    h = code.Hx if side == "x" else code.Hz
    ph = schedule.per_round_x if side == "x" else schedule.per_round_z
    wmax = code.d - 1 if wmax is None else wmax
    if sum(math.comb(code.n, w) for w in range(wmax + 1)) > budget:
        raise BudgetExceededError("detectability enumeration exceeds budget")
    for e in masks_up_to_weight(code.n, wmax):
        if (ph.matvec(e) == 0) != (h.matvec(e) == 0):
            return False, e
    return True, None


def lemma1_schedule_property(code: CssCode, schedule: MeasurementSchedule,
                             side: str = "x") -> tuple[bool, tuple | None]:
    """Repetition lemma check on the schedule's own round structure.

    Enumerates space-time fault sets (data flips at round boundaries plus
    measurement flips) of weight < rounds.  Any set that flips no measured
    bit and also hides from a final perfect generator readout must keep
    the accumulated data error inside the nullspace of H at every round
    boundary.
    """
    h = code.Hx if side == "x" else code.Hz
    ph = schedule.per_round_x if side == "x" else schedule.per_round_z
    rounds = schedule.rounds
    m = ph.rows
    # Locations: (("data", boundary, qubit)) and (("flip", round, row)).
    locations: list[tuple] = []
    for b in range(rounds):
        for q in range(code.n):
            locations.append(("data", b, q))
    for r in range(rounds):
        for j in range(m):
            locations.append(("flip", r, j))

    import itertools

    for weight in range(1, rounds):
        for combo in itertools.combinations(range(len(locations)), weight):
            flips = [0] * rounds
            data_at = [0] * rounds
            for idx in combo:
                kind, a, b = locations[idx]
                if kind == "data":
                    data_at[a] |= 1 << b
                else:
                    flips[a] ^= 1 << b
            acc = 0
            detected = False
            boundary_ok = True
            for r in range(rounds):
                acc ^= data_at[r]
                if ph.matvec(acc) ^ flips[r]:
                    detected = True
                    break
                if h.matvec(acc) != 0:
                    boundary_ok = False
            if detected or h.matvec(acc) != 0:
                continue
            if not boundary_ok:
                return False, tuple(locations[i] for i in combo)
    return True, None
