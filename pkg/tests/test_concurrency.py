"""Concurrent use: independent solves and sweeps share no mutable state."""

from concurrent.futures import ThreadPoolExecutor

import numpy as np

import hybridcell as hc
from hybridcell import game, wlan


def test_parallel_value_iteration_matches_sequential(ap18, nodeb18,
                                                     default_smdp):
    streams = [hc.StreamConfig(lambda_common=lam)
               for lam in (0.005, 0.01, 0.02, 0.04)]
    sequential = [hc.value_iterate(ap18, nodeb18, s, default_smdp)
                  for s in streams]
    with ThreadPoolExecutor(max_workers=4) as pool:
        parallel = list(pool.map(
            lambda s: hc.value_iterate(ap18, nodeb18, s, default_smdp),
            streams))
    for seq, par in zip(sequential, parallel):
        assert np.array_equal(seq.values, par.values)
        assert np.array_equal(seq.policy, par.policy)


def test_parallel_equilibria_match_sequential():
    mu = game.mu_from_wlan(wlan.WlanParams(zeta=1e-5), 10)
    configs = [game.GameConfig(lambda_ap=3.0, lambda_ap3g=lam, m_ap=10,
                               mu=mu, tau=2.5)
               for lam in (0.25, 0.5, 1.0, 2.0)]
    sequential = [game.find_equilibrium(c) for c in configs]
    with ThreadPoolExecutor(max_workers=4) as pool:
        parallel = list(pool.map(game.find_equilibrium, configs))
    assert sequential == parallel
