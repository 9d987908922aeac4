"""Command-line front end.

Subcommands: build, compress, certify, simulate, analyze.  Exit codes:
0 pass, 1 invariant violated, 2 budget exceeded, 3 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

from . import analyze as _analyze
from . import sim as _sim
from .classical import bch_parity_check, min_distance_bruteforce
from .compress import (MeasurementSchedule, build_schedule, schedule_stats,
                       tetrahedral_sufficient_z, theorem1_certificate)
from .circuits import circuit_distance_probe, schedule_circuits
from .errors import BudgetExceededError, StrategyError
from .gf2 import popcount
from .qcode import (CssCode, concatenate, rotated_surface_code, steane_code,
                    tetrahedral_code)

EXIT_PASS = 0
EXIT_VIOLATION = 1
EXIT_BUDGET = 2
EXIT_USAGE = 3


def _build_code(family: str, d: int | None, base: str | None,
                levels: int | None) -> CssCode:
    if family == "surface":
        if d is None:
            raise StrategyError("surface needs --d")
        return rotated_surface_code(d)
    if family == "tetrahedral":
        return tetrahedral_code()
    if family == "steane":
        return steane_code()
    if family == "concat":
        if base != "steane":
            raise StrategyError("concat supports --base steane")
        if levels is None:
            raise StrategyError("concat needs --levels")
        return concatenate(steane_code(), levels)
    raise StrategyError(f"unknown code family {family!r}")


def _load_code(path: str) -> CssCode:
    with open(path) as f:
        code = CssCode.from_text(f.read())
    # Recover constructor metadata when the matrices match a known family;
    # partition strategies need the cell geometry.
    if code.k == 1 and code.n == code.d * code.d and code.d % 2 == 1 and code.d >= 3:
        candidate = rotated_surface_code(code.d)
        if candidate.Hx == code.Hx and candidate.Hz == code.Hz:
            return candidate
    if (code.n, code.k, code.d) == (15, 1, 3):
        candidate = tetrahedral_code()
        if candidate.Hx == code.Hx and candidate.Hz == code.Hz:
            return candidate
    return code


def cmd_build(args) -> int:
    code = _build_code(args.code, args.d, args.base, args.levels)
    text = code.to_text()
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS


def cmd_compress(args) -> int:
    if args.code_file:
        code = _load_code(args.code_file)
    else:
        code = _build_code(args.code, args.d, args.base, args.levels)
    schedule = build_schedule(code, args.strategy, args.rounds)
    if args.out:
        with open(args.out, "w") as f:
            f.write(schedule.to_json())
    stats = schedule_stats(schedule, code.meta.get("d"))
    for line in stats.lines():
        print(line)
    return EXIT_PASS


def cmd_certify(args) -> int:
    check = args.check
    if check == "classical_distance":
        code = bch_parity_check(args.L, args.delta)
        dist = min_distance_bruteforce(code, args.delta - 1)
        if code.family == "identity":
            print(f"identity fallback for L={args.L} delta={args.delta}: pass")
            return EXIT_PASS
        if dist is not None:
            print(f"FAIL: weight-{dist} codeword below designed distance")
            return EXIT_VIOLATION
        full = min_distance_bruteforce(code, min(args.L, args.delta + 2))
        shown = full if full is not None else f"> {min(args.L, args.delta + 2)}"
        print(f"pass: distance {shown} >= {args.delta}")
        return EXIT_PASS

    if check == "tetrahedral4":
        rows = tetrahedral_sufficient_z()
        seen = {}
        for q in range(15):
            s = tuple((rows.row(i) >> q) & 1 for i in range(rows.rows))
            if s == (0,) * rows.rows or s in seen:
                print(f"FAIL: error on qubit {q} not distinguished")
                return EXIT_VIOLATION
            seen[s] = q
        print(f"pass: {rows.rows} stabilizers distinguish 15/15 single errors")
        return EXIT_PASS

    code = _load_code(args.code_file) if args.code_file else _build_code(
        args.code, args.d, args.base, args.levels)
    if check == "theorem1":
        for strategy in args.strategies.split(","):
            try:
                schedule = build_schedule(code, strategy.strip(), 1)
            except StrategyError as exc:
                print(f"{strategy}: skipped ({exc})")
                continue
            ok, witness = theorem1_certificate(code, schedule, "x",
                                               budget=args.budget)
            if not ok:
                print(f"{strategy}: FAIL witness={witness:#x}")
                return EXIT_VIOLATION
            print(f"{strategy}: pass")
        return EXIT_PASS

    if check == "two_step":
        from .decode import two_step_decode
        schedule = build_schedule(code, "full_bch", args.rounds)
        verdict = two_step_decode(schedule, code,
                                  [0] * args.rounds, 0)
        if verdict.status != "ok" or verdict.logical_flip != 0:
            print("FAIL: trivial syndrome did not decode to the identity")
            return EXIT_VIOLATION
        print("pass: two-step decoder sanity")
        return EXIT_PASS

    if check == "circuit_distance":
        from .decode import build_fault_model
        schedule = build_schedule(code, "identity", args.rounds)
        d_surface = code.meta.get("d") if code.meta.get("family") == "surface" else None
        rule = "surface_zigzag" if d_surface else "index_order"
        circuits = (
            schedule_circuits(code.Hx, schedule.provenance["x"], rule, "x", d_surface),
            schedule_circuits(code.Hz, schedule.provenance["z"], rule, "z", d_surface),
        )
        model = build_fault_model(code, schedule, "circuit_depolarizing",
                                  include_final=True, circuits=circuits)
        weight, witness = circuit_distance_probe(model, code.Hz, args.wmax,
                                                 budget=args.budget)
        if weight is not None:
            print(f"FAIL: undetectable logical fault of weight {weight}: {witness}")
            return EXIT_VIOLATION
        print(f"pass: no undetectable logical fault of weight <= {args.wmax}")
        return EXIT_PASS

    raise StrategyError(f"unknown check {check!r}")


def load_config(path: str) -> dict:
    with open(path) as f:
        config = json.load(f)
    grid = config["p_grid"]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("p_grid must be strictly increasing")
    return config


def config_cells(config: dict):
    code_spec = config["code"]
    ds = code_spec.get("d")
    d_list = ds if isinstance(ds, list) else [ds]
    for d in d_list:
        code = _build_code(code_spec["family"], d, code_spec.get("base"),
                           code_spec.get("levels"))
        schedule = build_schedule(code, config["strategy"], config["rounds"])
        for p in config["p_grid"]:
            yield code, schedule, d, p


def _cell_shots(config: dict, p: float) -> int:
    rule = config["shots"]
    if rule["mode"] == "fixed":
        return rule["value"]
    return _sim.plan_shots(p, rule.get("multiplier", 10))


def _cell_seed(master_seed: int, d: int, p: float, noise: str) -> int:
    key = f"{d}|{p:.12g}|{noise}"
    h = 0
    for ch in key:
        h = _sim.mix64(h * 131 + ord(ch))
    return _sim.mix64(master_seed ^ h)


def cmd_simulate(args) -> int:
    config = load_config(args.config)
    out_dir = config.get("out_dir", ".")
    os.makedirs(out_dir, exist_ok=True)
    ledger_path = os.path.join(out_dir, config.get("ledger", "ledger.csv"))
    write_header = not os.path.exists(ledger_path)
    rows = []
    noise_kind = config["noise"]
    decoder = config["decoder"]
    shards = config.get("shards", 1)
    master_seed = config["seed"]
    for code, schedule, d, p in config_cells(config):
        noise = _sim.NoiseModel(noise_kind, p)
        shots = _cell_shots(config, p)
        seed = _cell_seed(master_seed, d, p, noise_kind)
        batches = _sim.run_sharded(code, schedule, noise, decoder, shots,
                                   seed, shards)
        for b in batches:
            rows.append({
                "code": config["code"]["family"], "d": d,
                "strategy": config["strategy"], "rounds": config["rounds"],
                "noise": noise_kind, "p": f"{p:.10g}", "decoder": decoder,
                "shots": b.shots, "failures": b.failures,
                "decode_failures": b.decode_failures, "seed": seed,
                "shard": b.shard_index,
            })
    with open(ledger_path, "a", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(_sim.LEDGER_COLUMNS))
        if write_header:
            writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {len(rows)} ledger rows to {ledger_path}")
    return EXIT_PASS


def cmd_analyze(args) -> int:
    rows = _analyze.read_ledger(args.ledger)
    curves = _analyze.curves_from_ledger(rows, noise=args.noise,
                                         decoder=args.decoder)
    result: dict = {"crossings": [], "pseudothresholds": [], "slopes": []}
    ds = sorted(curves)
    if args.task in ("crossing", "all"):
        for a, b in zip(ds, ds[1:]):
            p_star = _analyze.find_crossing(curves[a], curves[b])
            result["crossings"].append({"d_low": a, "d_high": b, "p": p_star})
    if args.task in ("pseudothreshold", "all"):
        for d in ds:
            p_star = _analyze.find_pseudothreshold(curves[d])
            result["pseudothresholds"].append({"d": d, "p": p_star})
    if args.task in ("slope", "all"):
        for d in ds:
            try:
                slope = _analyze.fit_suppression_slope(curves[d])
            except ValueError:
                slope = None
            result["slopes"].append({"d": d, "slope": slope})
    out_dir = args.out_dir or "."
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "analysis.json"), "w") as f:
        json.dump(result, f, indent=2)
        f.write("\n")
    for d, curve in curves.items():
        with open(os.path.join(out_dir, f"curve_d{d}.tsv"), "w") as f:
            f.write(_analyze.curve_tsv(curve))
    print(json.dumps(result, indent=2))
    return EXIT_PASS


def _add_code_args(p, file_ok=True):
    p.add_argument("--code", default="surface",
                   help="surface | tetrahedral | steane | concat")
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--base", default=None)
    p.add_argument("--levels", type=int, default=None)
    if file_ok:
        p.add_argument("--code-file", default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="syncomp")
    ap.add_argument("--threads", type=int, default=1,
                    help="accepted for compatibility; shards run sequentially")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="construct a code and write its matrices")
    _add_code_args(p, file_ok=False)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("compress", help="build a schedule and print stats")
    _add_code_args(p)
    p.add_argument("--strategy", default="full_bch")
    p.add_argument("--rounds", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("certify", help="run an exhaustive certificate")
    p.add_argument("check", choices=["theorem1", "two_step", "tetrahedral4",
                                     "classical_distance", "circuit_distance"])
    _add_code_args(p)
    p.add_argument("--L", type=int, default=15)
    p.add_argument("--delta", type=int, default=5)
    p.add_argument("--rounds", type=int, default=3)
    p.add_argument("--wmax", type=int, default=2)
    p.add_argument("--budget", type=int, default=2_000_000)
    p.add_argument("--strategies",
                   default="identity,full_bch,disjoint_partition_bch,"
                           "row_partition_repetition,greedy_ldpc_partition_bch")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("simulate", help="run the cells of a config file")
    p.add_argument("config")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="post-process a ledger CSV")
    p.add_argument("ledger")
    p.add_argument("--task", default="all",
                   choices=["crossing", "pseudothreshold", "slope", "all"])
    p.add_argument("--noise", default=None)
    p.add_argument("--decoder", default=None)
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=cmd_analyze)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (StrategyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
