"""Seeded Pauli-frame Monte Carlo over measurement schedules.

Single-error-type frame: the X-side composite stabilizers are measured
against tracked Z-type data flips, and depolarizing strength p on a data
qubit induces a tracked flip with probability 2p/3 (its Z or Y
component).  Every experiment closes with a perfect generator readout of
the final data error, the standard end of a memory experiment; the true
logical effect of a shot is the overlap of that error with the fixed
logical representative.

Randomness comes from splitmix64 streams keyed by (seed, global shot
index), so failure counts are independent of how shots are sharded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .compress import MeasurementSchedule
from .circuits import MeasurementCircuit, schedule_circuits
from .decode import (DecodeVerdict, TwoStepDecoder, build_fault_model,
                     default_wcap, mwe_decode, quantum_lookup_decode)
from .errors import DecodeFailureError
from .gf2 import popcount

NOISE_KINDS = ("code_capacity", "phenomenological",
               "per_measurement_depolarizing", "circuit_depolarizing")
DECODERS = ("lookup", "two_step", "mwe")
RNG_ALGORITHM = "splitmix64"

LEDGER_COLUMNS = ("code", "d", "strategy", "rounds", "noise", "p", "decoder",
                  "shots", "failures", "decode_failures", "seed", "shard")

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class ShotRng:
    """splitmix64 stream for one shot, keyed by (seed, shot index)."""

    __slots__ = ("state",)

    def __init__(self, seed: int, shot_index: int):
        self.state = mix64((seed + (shot_index + 1) * _GOLDEN) & _MASK64)

    def next64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK64
        return mix64(self.state)

    def uniform(self) -> float:
        return (self.next64() >> 11) * (2.0 ** -53)

    def bernoulli(self, q: float) -> bool:
        return self.uniform() < q

    def sample_mask(self, n: int, q: float) -> int:
        """Bitmask of n independent Bernoulli(q) draws via geometric skips."""
        if q <= 0.0 or n == 0:
            return 0
        if q >= 1.0:
            return (1 << n) - 1
        log1q = math.log1p(-q)
        m = 0
        j = 0
        while True:
            u = self.uniform()
            if u == 0.0:
                u = 2.0 ** -53
            j += int(math.log(u) / log1q)
            if j >= n:
                return m
            m |= 1 << j
            j += 1


@dataclass(frozen=True)
class NoiseModel:
    kind: str
    p: float

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")

    @property
    def data_flip_probability(self) -> float:
        """Tracked-flip probability induced by single-qubit depolarizing."""
        return 2.0 * self.p / 3.0


@dataclass(frozen=True)
class TrialBatch:
    schedule_ref: str
    noise: NoiseModel
    decoder: str
    rounds: int
    shots: int
    failures: int
    decode_failures: int
    seed: int
    shard_index: int

    def __post_init__(self):
        if self.failures > self.shots:
            raise ValueError("failures cannot exceed shots")


# Uniform two-qubit depolarizing: (ancilla Pauli, data Pauli) over the 15
# nontrivial pairs, projected onto tracked-frame components
# (ancilla Z part, data Z part).
PAIR_EFFECTS: tuple[tuple[int, int], ...] = tuple(
    (1 if pa in "ZY" else 0, 1 if pq in "ZY" else 0)
    for pa in "IXYZ" for pq in "IXYZ"
)[1:]


def plan_shots(p: float, multiplier: float = 10.0) -> int:
    """ceil(multiplier / p) samples, the floor for resolving a rate near p."""
    if p <= 0:
        raise ValueError("plan_shots needs p > 0")
    return math.ceil(multiplier / p)


def wilson_interval(failures: int, shots: int,
                    z: float = 1.959963984540054) -> tuple[float, float]:
    if shots == 0:
        return 0.0, 1.0
    phat = failures / shots
    denom = 1 + z * z / shots
    centre = (phat + z * z / (2 * shots)) / denom
    half = z * math.sqrt(phat * (1 - phat) / shots + z * z / (4 * shots * shots)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def estimate_logical_rate(batches) -> tuple[float, float, float]:
    """Pooled failure fraction with a 95 percent Wilson interval."""
    shots = sum(b.shots for b in batches)
    failures = sum(b.failures for b in batches)
    if shots < 1:
        raise ValueError("no shots to pool")
    lo, hi = wilson_interval(failures, shots)
    return failures / shots, lo, hi


def _measure_round_plain(ph_rows, e: int, flips: int) -> int:
    bits = 0
    for j, row in enumerate(ph_rows):
        if popcount(row & e) & 1:
            bits |= 1 << j
    return bits ^ flips


def simulate_shot(code, schedule: MeasurementSchedule, noise: NoiseModel,
                  rng: ShotRng,
                  circuits: tuple[list[MeasurementCircuit],
                                  list[MeasurementCircuit]] | None = None
                  ) -> tuple[list[int], int]:
    """Sample one shot; returns (per-round measured bits, final data error)."""
    ph_rows = schedule.per_round_x.data
    m = len(ph_rows)
    n = code.n
    q = noise.data_flip_probability
    p = noise.p
    e = 0
    rounds_bits: list[int] = []

    if noise.kind == "code_capacity":
        e = rng.sample_mask(n, q)
        for _ in range(schedule.rounds):
            rounds_bits.append(_measure_round_plain(ph_rows, e, 0))
        return rounds_bits, e

    if noise.kind == "phenomenological":
        for _ in range(schedule.rounds):
            e ^= rng.sample_mask(n, q)
            flips = rng.sample_mask(m, p)
            rounds_bits.append(_measure_round_plain(ph_rows, e, flips))
        return rounds_bits, e

    if noise.kind == "per_measurement_depolarizing":
        for _ in range(schedule.rounds):
            bits = 0
            for j, row in enumerate(ph_rows):
                e ^= rng.sample_mask(n, q)
                bit = popcount(row & e) & 1
                if rng.bernoulli(p):
                    bit ^= 1
                bits |= bit << j
            rounds_bits.append(bits)
        return rounds_bits, e

    # circuit_depolarizing: the detecting side's couplings contribute
    # outcome flips (ancilla Z part) and data flips (data Z part); the
    # opposite side's circuits, run after the round's readings, contribute
    # hook deposits and data flips.
    if circuits is None:
        raise ValueError("circuit noise needs the synthesized circuits")
    x_circuits, z_circuits = circuits
    for _ in range(schedule.rounds):
        bits = 0
        for ci, circ in enumerate(x_circuits):
            outcome = 0
            for qubit in circ.couplings:
                outcome ^= (e >> qubit) & 1
                if rng.bernoulli(p):
                    za, zq = PAIR_EFFECTS[rng.next64() % 15]
                    if za:
                        outcome ^= 1
                    if zq:
                        e ^= 1 << qubit
            if rng.bernoulli(p):
                outcome ^= 1
            bits |= outcome << ci
        for circ in z_circuits:
            deposits = 0
            for k, qubit in enumerate(circ.couplings):
                if rng.bernoulli(p):
                    za, zq = PAIR_EFFECTS[rng.next64() % 15]
                    if za:
                        deposits ^= circ.suffix_mask(k + 1)
                    if zq:
                        e ^= 1 << qubit
            e ^= deposits
        rounds_bits.append(bits)
    return rounds_bits, e


def run_trials(code, schedule: MeasurementSchedule, noise: NoiseModel,
               decoder: str, shots: int, seed: int, shard_index: int = 0,
               shot_offset: int = 0, ordering_rule: str = "index_order",
               wcap: int | None = None) -> TrialBatch:
    """Run `shots` seeded shots and count logical failures.

    A shot fails when the decoder's logical flip differs from the true
    final-frame flip; decoder failures count as logical failures and are
    also tallied separately.  Identical (inputs, seed, shot indices) give
    identical counts.
    """
    if shots < 1:
        raise ValueError("shots must be at least 1")
    if decoder not in DECODERS:
        raise ValueError(f"unknown decoder {decoder!r}")

    circuits = None
    fault_model = None
    if noise.kind == "circuit_depolarizing":
        surface_d = code.meta.get("d") if code.meta.get("family") == "surface" else None
        circuits = (
            schedule_circuits(code.Hx, schedule.provenance["x"],
                              ordering_rule, "x", surface_d),
            schedule_circuits(code.Hz, schedule.provenance["z"],
                              ordering_rule, "z", surface_d),
        )
    if decoder == "mwe":
        fault_model = build_fault_model(code, schedule, noise.kind,
                                        include_final=True, circuits=circuits)
        if wcap is None:
            wcap = default_wcap(schedule.rounds, code.d)
    two_step = TwoStepDecoder(schedule, code) if decoder == "two_step" else None

    m = schedule.per_round_x.rows
    hx = code.Hx
    lx = code.logical_x
    failures = 0
    decode_failures = 0
    for i in range(shots):
        rng = ShotRng(seed, shot_offset + i)
        rounds_bits, e_final = simulate_shot(code, schedule, noise, rng, circuits)
        s_final = hx.matvec(e_final)
        truth = popcount(e_final & lx) & 1
        verdict: DecodeVerdict
        if decoder == "lookup":
            try:
                _, flip = quantum_lookup_decode(code, rounds_bits, s_final)
                verdict = DecodeVerdict(flip, (), "ok")
            except DecodeFailureError:
                verdict = DecodeVerdict(0, (), "failure")
        elif decoder == "two_step":
            verdict = two_step.decode(rounds_bits, s_final)
        else:
            observed = s_final << (schedule.rounds * m)
            for r, bits in enumerate(rounds_bits):
                observed |= bits << (r * m)
            verdict = mwe_decode(fault_model, observed, wcap)
        if verdict.status != "ok":
            decode_failures += 1
            failures += 1
        elif verdict.logical_flip != truth:
            failures += 1
    return TrialBatch(schedule.code_ref, noise, decoder, schedule.rounds,
                      shots, failures, decode_failures, seed, shard_index)


def shard_bounds(total_shots: int, shards: int) -> list[tuple[int, int]]:
    """Fixed per-shard assignment: contiguous blocks of global shot indices."""
    base, rem = divmod(total_shots, shards)
    out = []
    start = 0
    for i in range(shards):
        count = base + (1 if i < rem else 0)
        out.append((start, count))
        start += count
    return out


def run_sharded(code, schedule: MeasurementSchedule, noise: NoiseModel,
                decoder: str, total_shots: int, seed: int, shards: int = 1,
                ordering_rule: str = "index_order",
                wcap: int | None = None) -> list[TrialBatch]:
    batches = []
    for i, (start, count) in enumerate(shard_bounds(total_shots, shards)):
        if count == 0:
            continue
        batches.append(run_trials(code, schedule, noise, decoder, count, seed,
                                  shard_index=i, shot_offset=start,
                                  ordering_rule=ordering_rule, wcap=wcap))
    return batches


def exact_code_capacity_rate(code, schedule: MeasurementSchedule,
                             p_eff: float) -> float:
    """Closed-form code-capacity failure rate for the lookup decoder.

    Enumerates all 2^n tracked-error patterns with binomial weights;
    feasible for small n only.
    """
    hx = code.Hx
    lx = code.logical_x
    total = 0.0
    for e in range(1 << code.n):
        w = popcount(e)
        _, flip = quantum_lookup_decode(code, [], hx.matvec(e))
        truth = popcount(e & lx) & 1
        if flip != truth:
            total += (p_eff ** w) * ((1 - p_eff) ** (code.n - w))
    return total
