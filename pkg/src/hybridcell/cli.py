"""Command-line front end: solve, sweep and simulate, emitting CSV files.

Subcommands: throughput-curves, solve-smdp, equilibrium, staircase,
simulate.  Every run writes effective_config.txt next to its outputs so a
rerun from that file (same seed) reproduces the CSVs byte for byte.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

import numpy as np

from . import config as config_mod
from . import game, sim, smdp, wlan
from .errors import ConfigurationError, ConvergenceError, NumericalError

_EXIT_CODES = (
    (ConfigurationError, 2),
    (ValueError, 2),
    (ConvergenceError, 3),
    (NumericalError, 4),
    (OSError, 5),
)


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _write_csv(path: str, header: list, rows: list):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) if not isinstance(v, str) else v
                             for v in row) + "\n")


def _prepare(cfg: config_mod.RunConfig, outdir: str):
    os.makedirs(outdir, exist_ok=True)
    with open(os.path.join(outdir, "effective_config.txt"), "w") as fh:
        fh.write(config_mod.dump_config(cfg))


def cmd_throughput_curves(cfg: config_mod.RunConfig, outdir: str) -> None:
    params = cfg.wlan_params()
    m_ap = cfg["wlan.m_ap"]
    rows = [(0, "nan", 0.0)]
    for m_c in range(1, m_ap + 1):
        theta = wlan.theta_ap(m_c, params)
        rows.append((m_c, theta, m_c * theta))
    _write_csv(os.path.join(outdir, "ap_curve.csv"),
               ["m_c", "theta_per_mobile_bps", "aggregate_bps"], rows)

    table = cfg.umts_table()
    m_3g = cfg["umts.m_3g"]
    rows = []
    for i in range(m_3g):
        n = int(table.n[i])
        rows.append((n, table.eta[i], table.log_eta[i], table.theta_bps[i],
                     n * table.theta_bps[i]))
    _write_csv(os.path.join(outdir, "nodeb_curve.csv"),
               ["N", "eta", "log_eta", "theta_bps", "aggregate_bps"], rows)
    print(f"wrote ap_curve.csv and nodeb_curve.csv to {outdir}")


def cmd_solve_smdp(cfg: config_mod.RunConfig, outdir: str) -> smdp.SolveResult:
    first, second = cfg.servers()
    result = smdp.value_iterate(first, second, cfg.stream_config(),
                                cfg.smdp_config())
    value_rows, policy_rows = [], []
    for s1 in range(first.n_states):
        for s2 in range(second.n_states):
            l1, l2 = first.label(s1), second.label(s2)
            value_rows.append((l1, l2, result.values[s1, s2]))
            for stream in range(3):
                policy_rows.append((l1, l2, smdp.STREAM_NAMES[stream],
                                    int(result.policy[s1, s2, stream])))
    _write_csv(os.path.join(outdir, "value.csv"), ["s1", "s2", "value"],
               value_rows)
    _write_csv(os.path.join(outdir, "policy.csv"),
               ["s1", "s2", "stream", "action"], policy_rows)
    print(f"solved {cfg.setup} in {result.iterations} iterations "
          f"(sup delta {result.sup_delta:.3e}); wrote value.csv, policy.csv")
    return result


def cmd_equilibrium(cfg: config_mod.RunConfig, outdir: str) -> game.ThresholdPolicy:
    gcfg = cfg.game_config()
    eq = game.find_equilibrium(gcfg)
    _write_csv(os.path.join(outdir, "equilibrium.csv"),
               ["l", "q", "g", "tau"], [(eq.l, eq.q, eq.g, gcfg.tau)])
    rows = [(l, float(game.expected_service_time(l, 1.0, gcfg)[l]))
            for l in range(1, gcfg.m_ap)]
    _write_csv(os.path.join(outdir, "v_threshold.csv"),
               ["l", "v_join_threshold"], rows)
    print(f"tau = {gcfg.tau}")
    print(f"equilibrium [L*, q*] = [{eq.l}, {eq.q}], g* = {eq.g}")
    print("V(L, [L,1]) per L:")
    for l, v in rows:
        print(f"  L={l}: {v}")
    return eq


def cmd_staircase(cfg: config_mod.RunConfig, outdir: str) -> None:
    gcfg = cfg.game_config()
    lo, hi = cfg["staircase.lambda_min"], cfg["staircase.lambda_max"]
    step = cfg["staircase.lambda_step"]
    if step <= 0:
        raise ConfigurationError("staircase.lambda_step must be positive")
    grid = []
    lam = lo
    while lam <= hi + 1e-12:
        grid.append(lam)
        lam = lo + len(grid) * step
    sweep = game.staircase_sweep(gcfg, grid)
    rows = [(lam, pol.l, pol.q, pol.g) for lam, pol in sweep]
    _write_csv(os.path.join(outdir, "staircase.csv"),
               ["lambda_ap3g", "L", "q", "g"], rows)
    print(f"wrote staircase.csv with {len(rows)} equilibria "
          f"(g from {rows[0][3]} down to {rows[-1][3]})")


def _pick_states(n1: int, n2: int, count: int) -> list:
    flat = np.unique(np.linspace(0, n1 * n2 - 1, count).round().astype(int))
    return [(int(i) // n2, int(i) % n2) for i in flat]


def cmd_simulate(cfg: config_mod.RunConfig, outdir: str, target: str) -> None:
    sim_cfg = cfg.sim_config()
    if target == "smdp":
        first, second = cfg.servers()
        streams, smdp_cfg = cfg.stream_config(), cfg.smdp_config()
        result = smdp.value_iterate(first, second, streams, smdp_cfg)
        states = _pick_states(first.n_states, second.n_states,
                              cfg["sim.num_states"])
        if sim_cfg.horizon_stages is None:
            r_max = max(abs(smdp.stage_reward((s1, s2), st, a, first, second,
                                              streams, smdp_cfg.beta))
                        for s1 in range(first.n_states)
                        for s2 in range(second.n_states)
                        for st in range(3) for a in smdp.LEGAL_ACTIONS[st])
            v_scale = min(abs(result.values[s]) for s in states)
            bound = 1e-6 * max(v_scale, 1e-3)
            horizon = sim.truncation_horizon(smdp_cfg.gamma, r_max, bound)
            sim_cfg = dataclasses.replace(sim_cfg, horizon_stages=horizon)
        estimates = sim.simulate_discounted_reward(
            result.policy, first, second, streams, smdp_cfg, sim_cfg, states)
        rows = []
        for est in estimates:
            s1, s2 = est.state
            solver = float(result.values[s1, s2])
            z = 0.0 if est.stderr == 0 else (est.mean - solver) / est.stderr
            rows.append((f"{first.label(s1)}:{second.label(s2)}", solver,
                         est.mean, est.stderr, z))
        out = os.path.join(outdir, "simulate_smdp.csv")
    else:
        gcfg = cfg.game_config()
        eq = game.find_equilibrium(gcfg)
        solver_v = game.expected_service_time(eq.l, eq.q, gcfg)
        rows = []
        for m_c in range(gcfg.m_ap):
            mean, stderr = sim.simulate_tagged_service_time(
                eq.l, eq.q, m_c, gcfg, sim_cfg)
            solver = float(solver_v[m_c])
            z = 0.0 if stderr == 0 else (mean - solver) / stderr
            rows.append((str(m_c), solver, mean, stderr, z))
        out = os.path.join(outdir, "simulate_game.csv")
    _write_csv(out, ["state", "solver_value", "sim_mean", "sim_stderr",
                     "z_score"], rows)
    worst = max(abs(r[4]) for r in rows)
    print(f"wrote {os.path.basename(out)} ({len(rows)} states, "
          f"max |z| = {worst:.2f}, backend = {sim.backend_name()})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hybridcell",
        description="WLAN/UMTS hybrid-cell association policy toolkit")
    parser.add_argument("--config", help="path to a key = value config file")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--seed", type=int, help="override sim.seed")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("throughput-curves",
                   help="AP and NodeB throughput curves as CSV")
    sub.add_parser("solve-smdp",
                   help="value iteration; emits value.csv and policy.csv")
    sub.add_parser("equilibrium", help="threshold equilibrium [L*, q*]")
    sub.add_parser("staircase",
                   help="equilibrium sweep over common-stream arrival rates")
    p_sim = sub.add_parser("simulate",
                           help="Monte-Carlo check of solver outputs")
    p_sim.add_argument("--target", choices=("smdp", "game"), default="smdp")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {}
    if args.seed is not None:
        overrides["sim.seed"] = args.seed
    try:
        cfg = config_mod.load_config(args.config, overrides)
        _prepare(cfg, args.out)
        if args.command == "throughput-curves":
            cmd_throughput_curves(cfg, args.out)
        elif args.command == "solve-smdp":
            cmd_solve_smdp(cfg, args.out)
        elif args.command == "equilibrium":
            cmd_equilibrium(cfg, args.out)
        elif args.command == "staircase":
            cmd_staircase(cfg, args.out)
        else:
            cmd_simulate(cfg, args.out, args.target)
    except Exception as exc:  # noqa: BLE001 - map to exit codes at the boundary
        for exc_type, code in _EXIT_CODES:
            if isinstance(exc, exc_type):
                print(f"error: {exc}", file=sys.stderr)
                return code
        raise
    return 0


if __name__ == "__main__":
    sys.exit(main())
