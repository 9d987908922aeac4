"""Post-processing of rate curves: crossings, pseudo-thresholds, slopes,
and the repetition-count calculator for Shor-style extraction."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

from .errors import DimensionError


@dataclass(frozen=True)
class RateCurve:
    d: int
    points: tuple[tuple[float, float, float, float], ...]  # (p, rate, lo, hi)

    def __post_init__(self):
        ps = [p for p, *_ in self.points]
        if ps != sorted(ps):
            raise ValueError("points must be sorted by p")
        for _, rate, lo, hi in self.points:
            if not (0.0 <= rate <= 1.0 and 0.0 <= lo <= 1.0 and 0.0 <= hi <= 1.0):
                raise ValueError("rates must lie in [0, 1]")


def _shared_grid(a: RateCurve, b: RateCurve) -> list[tuple[float, float, float]]:
    rb = {p: rate for p, rate, *_ in b.points}
    out = []
    for p, rate, *_ in a.points:
        if p in rb:
            out.append((p, rate, rb[p]))
    return out


def find_crossing(a: RateCurve, b: RateCurve) -> float | None:
    """p where rate_a - rate_b changes sign, interpolated in log-log space.

    Returns None when there is no strict sign change on the shared grid;
    grid points with a zero rate are skipped (no log).
    """
    grid = [(p, ra, rb) for p, ra, rb in _shared_grid(a, b)
            if ra > 0 and rb > 0 and p > 0]
    if len(grid) < 2:
        return None
    for (p1, ra1, rb1), (p2, ra2, rb2) in zip(grid, grid[1:]):
        d1 = math.log(ra1) - math.log(rb1)
        d2 = math.log(ra2) - math.log(rb2)
        if d1 == 0.0 and d2 == 0.0:
            continue
        if d1 == 0.0:
            return p1
        if d2 == 0.0:
            return p2
        if (d1 < 0) != (d2 < 0):
            x1, x2 = math.log(p1), math.log(p2)
            t = d1 / (d1 - d2)
            return math.exp(x1 + t * (x2 - x1))
    return None


def find_pseudothreshold(curve: RateCurve) -> float | None:
    """Crossing of the curve against the unencoded line rate = p."""
    ident = RateCurve(1, tuple((p, p, p, p) for p, *_ in curve.points))
    return find_crossing(curve, ident)


def fit_suppression_slope(curve: RateCurve,
                          p_range: tuple[float, float] | None = None) -> float:
    """Least-squares slope of log(rate) against log(p).

    Needs at least three points with nonzero rate in range.
    """
    pts = [(p, rate) for p, rate, *_ in curve.points
           if rate > 0 and p > 0 and
           (p_range is None or p_range[0] <= p <= p_range[1])]
    if len(pts) < 3:
        raise ValueError("need at least 3 points with nonzero rate")
    xs = [math.log(p) for p, _ in pts]
    ys = [math.log(r) for _, r in pts]
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / sxx


def fit_suppression_slope_stderr(curve: RateCurve,
                                 p_range: tuple[float, float] | None = None
                                 ) -> tuple[float, float]:
    """Slope plus its standard error from the residuals."""
    pts = [(p, rate) for p, rate, *_ in curve.points
           if rate > 0 and p > 0 and
           (p_range is None or p_range[0] <= p <= p_range[1])]
    if len(pts) < 3:
        raise ValueError("need at least 3 points with nonzero rate")
    xs = [math.log(p) for p, _ in pts]
    ys = [math.log(r) for _, r in pts]
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx
    intercept = my - slope * mx
    if n == 3:
        resid_var = 0.0
    else:
        resid_var = sum((y - intercept - slope * x) ** 2
                        for x, y in zip(xs, ys)) / (n - 2)
    return slope, math.sqrt(resid_var / sxx) if sxx > 0 else 0.0


def shor_success_probability(w: int, p_prime: float) -> float:
    """Chance that a weight-w Shor-style extraction reads out unflipped."""
    return (1.0 + (1.0 - 2.0 * p_prime) ** w) / 2.0


def shor_repetition_bound(w: int, p: float, confidence: float) -> int:
    """Smallest odd repetition count resolving the outcome bias.

    The per-coupling detected-flip probability is p' = p/16; the outcome
    bias after w couplings is b = (1 - 2p')^w and Hoeffding gives
    exp(-N b^2 / 2) <= 1 - confidence.  p = 0 is deterministic (N = 1).
    """
    if w < 1:
        raise ValueError("w must be at least 1")
    if not 0.0 <= p < 0.5:
        raise ValueError("p must lie in [0, 0.5)")
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must lie in (0, 1)")
    p_prime = p / 16.0
    if p_prime == 0.0:
        return 1
    bias = (1.0 - 2.0 * p_prime) ** w
    n = math.ceil(-2.0 * math.log(1.0 - confidence) / (bias * bias))
    return n if n % 2 == 1 else n + 1


def read_ledger(path) -> list[dict]:
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def curves_from_ledger(rows: list[dict], noise: str | None = None,
                       decoder: str | None = None) -> dict[int, RateCurve]:
    """Pool ledger rows into one rate curve per distance."""
    from .sim import wilson_interval

    cells: dict[tuple[int, float], list[dict]] = {}
    for row in rows:
        if noise is not None and row["noise"] != noise:
            continue
        if decoder is not None and row["decoder"] != decoder:
            continue
        cells.setdefault((int(row["d"]), float(row["p"])), []).append(row)
    by_d: dict[int, list[tuple[float, float, float, float]]] = {}
    for (d, p), group in sorted(cells.items()):
        shots = sum(int(r["shots"]) for r in group)
        failures = sum(int(r["failures"]) for r in group)
        lo, hi = wilson_interval(failures, shots)
        by_d.setdefault(d, []).append((p, failures / shots if shots else 0.0, lo, hi))
    return {d: RateCurve(d, tuple(sorted(pts))) for d, pts in by_d.items()}


def curve_tsv(curve: RateCurve) -> str:
    lines = ["# p\trate\tci_low\tci_high"]
    for p, rate, lo, hi in curve.points:
        lines.append(f"{p:.10g}\t{rate:.10g}\t{lo:.10g}\t{hi:.10g}")
    return "\n".join(lines) + "\n"
