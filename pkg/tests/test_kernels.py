"""RNG and kernel backends: external Philox validation, backend agreement."""

import numpy as np
import pytest

import hybridcell as hc
from hybridcell import _kernels_py, game, sim, wlan
from hybridcell._backend import available_backends, select_backend

HAVE_CYTHON = "cython" in available_backends()
needs_cython = pytest.mark.skipif(not HAVE_CYTHON,
                                  reason="compiled kernels not built")


def _numpy_philox_block(key, counter):
    # numpy increments the counter before producing a block
    ctr = list(counter)
    for i in range(4):
        ctr[i] = (ctr[i] + 1) & 0xFFFFFFFFFFFFFFFF
        if ctr[i]:
            break
    bg = np.random.Philox(key=np.array(key, dtype=np.uint64),
                          counter=np.array(counter, dtype=np.uint64))
    return ctr, [int(v) for v in bg.random_raw(4)]


@pytest.mark.parametrize("key,counter", [
    ((123, 0), (0, 0, 0, 0)),
    ((0xDEADBEEF, 0xFACEB00C), (5, 6, 7, 8)),
    ((2**64 - 1, 2**64 - 1), (2**64 - 1,) * 4),
    ((42, 7), (2**64 - 1, 3, 0, 0)),
])
def test_philox_matches_numpy_reference(key, counter):
    ctr, expected = _numpy_philox_block(key, counter)
    got = _kernels_py.philox4x64_10(*[np.uint64(c) for c in ctr],
                                    np.uint64(key[0]), np.uint64(key[1]))
    assert [int(w[0]) for w in got] == expected


@needs_cython
def test_philox_backends_identical():
    cy = select_backend("cython")
    c0 = np.arange(4096, dtype=np.uint64)
    a = _kernels_py.philox4x64_10(c0, 3, 11, 0, 987654321, 17)
    b = cy.philox4x64_10(c0, 3, 11, 0, 987654321, 17)
    for x, y in zip(a, b):
        assert np.array_equal(x, y)


def test_uniform_conversion_range():
    c0 = np.arange(100_000, dtype=np.uint64)
    w0, _, _, _ = _kernels_py.philox4x64_10(c0, 0, 0, 0, 1, 2)
    u = _kernels_py._to_uniform(w0)
    assert np.all(u >= 0.0) and np.all(u < 1.0)
    assert abs(u.mean() - 0.5) < 0.01


@pytest.fixture(scope="module")
def small_smdp():
    params = wlan.WlanParams()
    ap = hc.ApServer(params, 6)
    nb = hc.NodeBServer(hc.UmtsParams(m_3g=6))
    streams = hc.StreamConfig()
    cfg = hc.SmdpConfig()
    result = hc.value_iterate(ap, nb, streams, cfg)
    return ap, nb, streams, cfg, result


@needs_cython
def test_discounted_kernel_bit_identical_across_backends(small_smdp):
    ap, nb, streams, cfg, result = small_smdp
    sim_cfg = sim.SimConfig(seed=99, replications=4000, horizon_stages=70)
    outs = {}
    for name in ("cython", "python"):
        est = sim.simulate_discounted_reward(
            result.policy, ap, nb, streams, cfg, sim_cfg, [(2, 3)],
            backend=select_backend(name))
        outs[name] = est[0]
    assert outs["cython"].mean == outs["python"].mean
    assert outs["cython"].stderr == outs["python"].stderr


@needs_cython
def test_tagged_kernel_streams_identical_across_backends():
    mu = game.mu_from_wlan(wlan.WlanParams(zeta=1e-5), 10)
    cfg = game.GameConfig(lambda_ap=3.0, lambda_ap3g=0.5, m_ap=10, mu=mu,
                          tau=2.5)
    thr, tot = sim.tagged_event_tables(5, 0.5, cfg)
    cy = select_backend("cython")
    t_cy, n_cy = cy.run_tagged(4242, 7, 20_000, 4, thr, tot)
    t_py, n_py = _kernels_py.run_tagged(4242, 7, 20_000, 4, thr, tot)
    # identical event streams; times agree to libm rounding
    assert np.array_equal(n_cy, n_py)
    np.testing.assert_allclose(t_cy, t_py, rtol=1e-12)


def test_tagged_kernel_zero_rate_state_rejected():
    cfg = game.GameConfig(lambda_ap=0.0, lambda_ap3g=0.0, m_ap=3,
                          mu=np.array([0.0, 1.0, 1.0]), tau=1.0)
    with pytest.raises(hc.ConfigurationError):
        sim.tagged_event_tables(1, 0.0, cfg)
