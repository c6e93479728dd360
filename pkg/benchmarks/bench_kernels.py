"""Benchmark the compiled Monte-Carlo kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--reps N]

Runs both simulators on the default AP-NodeB configuration and the Fig-9
style game configuration, reporting wall time, event throughput and the
compiled/fallback speedup.  Also asserts that the discounted-reward kernel
agrees bit for bit across backends.
"""

import argparse
import time

import numpy as np

import hybridcell as hc
from hybridcell import _kernels_py, game, sim, wlan
from hybridcell._backend import available_backends, select_backend


def bench_discounted(backend, reps):
    params = wlan.WlanParams()
    ap = hc.ApServer(params, 18)
    nb = hc.NodeBServer(hc.UmtsParams())
    streams = hc.StreamConfig()
    smdp_cfg = hc.SmdpConfig()
    result = hc.value_iterate(ap, nb, streams, smdp_cfg)
    horizon = 120
    cfg = sim.SimConfig(seed=1, replications=reps, horizon_stages=horizon)
    t0 = time.perf_counter()
    est = sim.simulate_discounted_reward(result.policy, ap, nb, streams,
                                         smdp_cfg, cfg, [(9, 8)],
                                         backend=backend)
    dt = time.perf_counter() - t0
    return dt, reps * horizon, est[0].mean


def bench_tagged(backend, reps):
    mu = game.mu_from_wlan(wlan.WlanParams(zeta=1e-5), 10)
    gcfg = game.GameConfig(lambda_ap=3.0, lambda_ap3g=0.5, m_ap=10,
                           mu=mu, tau=2.5)
    cfg = sim.SimConfig(seed=1, replications=reps)
    thr, tot = sim.tagged_event_tables(5, 0.5, gcfg)
    t0 = time.perf_counter()
    times, counts = backend.run_tagged(cfg.seed, 7, reps, 4, thr, tot)
    dt = time.perf_counter() - t0
    return dt, int(counts.sum()), float(np.mean(times))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--reps", type=int, default=100_000)
    args = parser.parse_args()

    backends = {name: select_backend(name) for name in available_backends()}
    print(f"available backends: {', '.join(backends)}")

    results = {}
    for label, bench in (("discounted", bench_discounted), ("tagged", bench_tagged)):
        print(f"\n{label} kernel, {args.reps} replications:")
        for name, mod in backends.items():
            dt, events, mean = bench(mod, args.reps)
            results[(label, name)] = (dt, mean)
            print(f"  {name:>7}: {dt:8.3f} s  {events / dt / 1e6:8.2f} M events/s"
                  f"  mean={mean:.6f}")
        if len(backends) == 2:
            speedup = results[(label, "python")][0] / results[(label, "cython")][0]
            print(f"  speedup: {speedup:.1f}x")

    if len(backends) == 2:
        d_cy = results[("discounted", "cython")][1]
        d_py = results[("discounted", "python")][1]
        assert d_cy == d_py, "discounted kernels must agree bit for bit"
        print("\ndiscounted kernels agree bit for bit across backends")


if __name__ == "__main__":
    main()
