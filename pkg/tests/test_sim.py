"""Monte-Carlo oracles: reproducibility, unbiasedness, error scaling."""

import dataclasses
import math

import numpy as np
import pytest

import hybridcell as hc
from hybridcell import game, sim, smdp, wlan


@pytest.fixture(scope="module")
def small_setup():
    params = wlan.WlanParams()
    ap = hc.ApServer(params, 6)
    nb = hc.NodeBServer(hc.UmtsParams(m_3g=6))
    streams = hc.StreamConfig()
    return ap, nb, streams


def test_truncation_horizon_bounds_tail():
    h = sim.truncation_horizon(0.8, 7.0, 1e-7)
    tail = 0.8 ** h * 7.0 / 0.2
    assert tail <= 1e-7
    assert 0.8 ** (h - 1) * 7.0 / 0.2 > 1e-7
    assert sim.truncation_horizon(0.0, 7.0, 1e-7) == 1
    assert sim.truncation_horizon(0.8, 0.0, 1e-7) == 1
    with pytest.raises(ValueError):
        sim.truncation_horizon(0.8, 1.0, 0.0)


def test_same_seed_bit_identical(small_setup):
    ap, nb, streams = small_setup
    cfg = hc.SmdpConfig()
    result = hc.value_iterate(ap, nb, streams, cfg)
    sim_cfg = sim.SimConfig(seed=5, replications=3000, horizon_stages=50)
    a = hc.simulate_discounted_reward(result.policy, ap, nb, streams, cfg,
                                      sim_cfg, [(1, 2), (5, 5)])
    b = hc.simulate_discounted_reward(result.policy, ap, nb, streams, cfg,
                                      sim_cfg, [(1, 2), (5, 5)])
    assert a == b
    other = dataclasses.replace(sim_cfg, seed=6)
    c = hc.simulate_discounted_reward(result.policy, ap, nb, streams, cfg,
                                      other, [(1, 2), (5, 5)])
    assert c[0].mean != a[0].mean


def test_zero_arrivals_zero_reward(small_setup):
    ap, nb, _ = small_setup
    streams = hc.StreamConfig(lambda_first=0, lambda_second=0, lambda_common=0)
    cfg = hc.SmdpConfig()
    policy = np.zeros((ap.n_states, nb.n_states, 3), dtype=np.int8)
    est = hc.simulate_discounted_reward(policy, ap, nb, streams, cfg,
                                        sim.SimConfig(seed=1, replications=500,
                                                      horizon_stages=40),
                                        [(3, 3)])
    assert est[0].mean == 0.0
    assert est[0].stderr == 0.0


def test_one_stage_estimate_matches_backup_at_gamma_zero(small_setup):
    ap, nb, streams = small_setup
    cfg = hc.SmdpConfig(gamma=0.0)
    result = hc.value_iterate(ap, nb, streams, cfg)
    sim_cfg = sim.SimConfig(seed=3, replications=50_000)
    est = hc.simulate_discounted_reward(result.policy, ap, nb, streams, cfg,
                                        sim_cfg, [(2, 2)])[0]
    one_step = hc.bellman_backup(np.zeros((7, 6)), ap, nb, streams, cfg)
    assert abs(est.mean - one_step[2, 2]) <= 3 * est.stderr


def test_tagged_hand_example_two_states():
    # the hand-solved 2x2 system: V = [4/3, 5/3] at lambda_ap = lambda_ap3g = 1
    cfg = game.GameConfig(lambda_ap=1.0, lambda_ap3g=1.0, m_ap=2,
                          mu=np.array([1.0, 1.0]), tau=1.0)
    mean, stderr = hc.simulate_tagged_service_time(
        1, 0.0, 1, cfg, sim.SimConfig(seed=17, replications=80_000))
    assert abs(mean - 5.0 / 3.0) <= 3 * stderr
    mean0, stderr0 = hc.simulate_tagged_service_time(
        1, 0.0, 0, cfg, sim.SimConfig(seed=18, replications=80_000))
    assert abs(mean0 - 4.0 / 3.0) <= 3 * stderr0


def test_tagged_no_arrivals_pure_departure_chain():
    # without arrivals the sojourn is a sum of exponential service stages:
    # from m_c = 1 with mu = 1 that is 1 + (1/2) * 1 = 3/2
    cfg = game.GameConfig(lambda_ap=0.0, lambda_ap3g=0.0, m_ap=2,
                          mu=np.array([1.0, 1.0]), tau=1.0)
    v = game.expected_service_time(1, 0.0, cfg)
    assert v[0] == pytest.approx(1.0, abs=1e-12)
    assert v[1] == pytest.approx(1.5, abs=1e-12)
    mean, stderr = hc.simulate_tagged_service_time(
        1, 0.0, 1, cfg, sim.SimConfig(seed=19, replications=80_000))
    assert abs(mean - 1.5) <= 3 * stderr


def test_tagged_policy_identity_same_bits():
    mu = game.mu_from_wlan(wlan.WlanParams(zeta=1e-5), 10)
    cfg = game.GameConfig(lambda_ap=3.0, lambda_ap3g=0.5, m_ap=10, mu=mu,
                          tau=2.5)
    sim_cfg = sim.SimConfig(seed=23, replications=5000)
    a = hc.simulate_tagged_service_time(5, 1.0, 4, cfg, sim_cfg)
    b = hc.simulate_tagged_service_time(6, 0.0, 4, cfg, sim_cfg)
    assert a == b


def test_stderr_scales_with_replications(small_setup):
    ap, nb, streams = small_setup
    cfg = hc.SmdpConfig()
    result = hc.value_iterate(ap, nb, streams, cfg)
    ests = {}
    for reps in (4000, 16000):
        sim_cfg = sim.SimConfig(seed=9, replications=reps, horizon_stages=60)
        ests[reps] = hc.simulate_discounted_reward(
            result.policy, ap, nb, streams, cfg, sim_cfg, [(3, 2)])[0]
    ratio = ests[4000].stderr / ests[16000].stderr
    assert ratio == pytest.approx(2.0, rel=0.2)


def test_tagged_matches_linear_system(small_setup):
    mu = game.mu_from_wlan(wlan.WlanParams(), 10)
    cfg = game.GameConfig(lambda_ap=0.03, lambda_ap3g=0.01, m_ap=10, mu=mu,
                          tau=2.5)
    # (9, 0.3) exercises the top-threshold row pattern (L = M_AP - 1)
    for l, q in ((5, 0.5), (9, 0.3)):
        v = game.expected_service_time(l, q, cfg)
        for m_c in (0, 4, 9):
            mean, stderr = hc.simulate_tagged_service_time(
                l, q, m_c, cfg, sim.SimConfig(seed=31, replications=30_000))
            assert abs(mean - v[m_c]) <= 3 * stderr


def test_sim_config_validation():
    with pytest.raises(ValueError):
        sim.SimConfig(replications=0)
    with pytest.raises(ValueError):
        sim.SimConfig(horizon_stages=0)
    with pytest.raises(ValueError):
        sim.SimConfig(confidence=1.0)
    with pytest.raises(ValueError):
        sim.SimConfig(seed=-1)
    with pytest.raises(ValueError):
        hc.simulate_tagged_service_time(
            1, 0.0, 5,
            game.GameConfig(lambda_ap=1, lambda_ap3g=1, m_ap=4,
                            mu=np.ones(4), tau=1.0),
            sim.SimConfig(seed=0, replications=10))
