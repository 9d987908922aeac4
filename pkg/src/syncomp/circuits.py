"""Bare-ancilla measurement circuits for composite stabilizers.

One ancilla serves a whole product of generators; couplings are laid down
generator block by generator block with no cancellation of repeated data
qubits, so the coupling count is the sum of the constituent weights.

Fault propagation uses the spreader orientation of the figure-style
circuit (data as controls, ancilla as target): an ancilla Z at position k
deposits flips on the data qubits coupled after k and leaves the outcome
alone, an ancilla X is a pure measurement flip, and a data flip toggles
the outcome once per later coupling of its qubit.  In the single-type
frame the schedule's detecting side contributes only outcome flips and
data flips, while the opposite side's circuits contribute the hooks; the
sim and decode modules apply that projection.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceededError, StrategyError
from .gf2 import BitMatrix, support

ORDERING_RULES = ("index_order", "surface_zigzag")


@dataclass(frozen=True)
class MeasurementCircuit:
    """Coupling list for one composite stabilizer measurement."""

    n_data: int
    couplings: tuple[int, ...]
    blocks: tuple[tuple[int, int, int], ...]  # (generator index, start, stop)
    composite: int  # XOR of the generator rows

    @property
    def weight(self) -> int:
        return len(self.couplings)

    def suffix_mask(self, position: int) -> int:
        """Parity-set of data qubits coupled strictly after `position`
        couplings have happened."""
        m = 0
        for q in self.couplings[position:]:
            m ^= 1 << q
        return m

    def to_text(self) -> str:
        lines = ["PREP a"]
        for gen, start, stop in self.blocks:
            lines.append(f"# generator {gen}")
            for k in range(start, stop):
                lines.append(f"CX a q{self.couplings[k]}")
        lines.append("MEAS a")
        return "\n".join(lines) + "\n"


def _block_order(qubits: list[int], rule: str, side: str, d: int | None) -> list[int]:
    if rule == "index_order":
        return sorted(qubits)
    if rule == "surface_zigzag":
        if d is None:
            raise StrategyError("surface_zigzag needs the surface distance")
        if side == "z":
            # Hooks from Z blocks deposit Z flips; coupling row-major makes
            # the final pair horizontal, crossing any vertical logical-Z
            # line at most once.
            return sorted(qubits)
        # X blocks spread X flips toward the horizontal logical-X line,
        # so couple column-major and finish on a vertical pair.
        return sorted(qubits, key=lambda q: (q % d, q // d))
    raise StrategyError(f"unknown ordering rule {rule!r}")


def synthesize_product_measurement(generator_rows: list[int], n_data: int,
                                   ordering_rule: str = "index_order",
                                   side: str = "z",
                                   surface_d: int | None = None) -> MeasurementCircuit:
    """Circuit measuring the product of the given generator rows.

    Couplings appear block by block in the order the generators are
    given; repeated qubits across blocks are not cancelled.
    """
    if not generator_rows:
        raise ValueError("need at least one generator")
    if ordering_rule == "surface_zigzag" and surface_d is None:
        raise StrategyError("surface_zigzag requested for a non-surface code")
    couplings: list[int] = []
    blocks: list[tuple[int, int, int]] = []
    composite = 0
    for gi, row in enumerate(generator_rows):
        start = len(couplings)
        couplings.extend(_block_order(support(row), ordering_rule, side, surface_d))
        blocks.append((gi, start, len(couplings)))
        composite ^= row
    return MeasurementCircuit(n_data, tuple(couplings), tuple(blocks), composite)


def schedule_circuits(h: BitMatrix, provenance_side: list[dict],
                      ordering_rule: str = "index_order", side: str = "z",
                      surface_d: int | None = None) -> list[MeasurementCircuit]:
    """One circuit per composite row of a schedule side.

    The provenance records which generator rows each composite combines
    (subset indices plus the compressor's check rows), so overlapping
    couplings are laid down block by block without cancellation.
    """
    circuits: list[MeasurementCircuit] = []
    for info in provenance_side:
        subset = info["subset"]
        for row_text in info["compressor_rows"]:
            gens = [h.row(subset[j])
                    for j, ch in enumerate(row_text) if ch == "1"]
            circuits.append(synthesize_product_measurement(
                gens, h.cols, ordering_rule, side, surface_d))
    return circuits


def propagate_fault(circuit: MeasurementCircuit,
                    fault: tuple) -> tuple[int, int]:
    """(residual data mask, measurement flip bit) for one elementary fault.

    fault is ("ancilla", pauli, position) with pauli in {"X", "Z", "Y"}
    and position in 0..weight (after that many couplings), or
    ("data", qubit, position) injecting a tracked flip at that point.
    Propagation is linear: a fault set's residual and flip are the XORs
    of its members'.
    """
    kind = fault[0]
    if kind == "ancilla":
        _, pauli, pos = fault
        if not 0 <= pos <= circuit.weight:
            raise ValueError("fault position out of range")
        residual = circuit.suffix_mask(pos) if pauli in ("Z", "Y") else 0
        flip = 1 if pauli in ("X", "Y") else 0
        return residual, flip
    if kind == "data":
        _, qubit, pos = fault
        if not 0 <= pos <= circuit.weight:
            raise ValueError("fault position out of range")
        flips = sum(1 for q in circuit.couplings[pos:] if q == qubit)
        return 1 << qubit, flips & 1
    raise ValueError(f"unknown fault kind {kind!r}")


def circuit_distance_probe(model, hz: BitMatrix, wmax: int,
                           budget: int = 5_000_000) -> tuple[int | None, tuple | None]:
    """Least-weight undetected fault combination with a data effect.

    Enumerates fault-location combinations of a FaultModel up to weight
    wmax.  A combination is a witness when its total syndrome is zero
    (over every bit the model tracks, including the perfect final readout
    when the model was built with one) and its final accumulated data
    error falls outside the row space of the opposite-type checks.
    Returns (weight, witness locations) or (None, None).
    """
    import itertools
    import math

    from .qcode import make_rowspace_reducer

    n = len(model.locations)
    if sum(math.comb(n, w) for w in range(1, wmax + 1)) > budget:
        raise BudgetExceededError("fault combination enumeration exceeds budget")
    reduce_hz = make_rowspace_reducer(hz)
    for w in range(1, wmax + 1):
        for combo in itertools.combinations(range(n), w):
            if model.syndrome_of(combo) != 0:
                continue
            if reduce_hz(model.final_error_of(combo)) != 0:
                return w, tuple((model.locations[i].kind,) + model.locations[i].where
                                for i in combo)
    return None, None
