"""Seeded Monte-Carlo oracles for the decision models.

Both simulators run on exactly the chains the solvers define: the
discounted-reward simulator walks the uniformized discrete-time chain
(event categories drawn with their uniformization probabilities, discount
gamma per stage), so its expectation equals the dynamic program's value by
construction; the tagged-mobile simulator walks the birth-death chain
behind the game's linear equations.  Outputs are a deterministic function
of (seed, config): replications use independent counter-based streams, and
aggregation is numpy's pairwise mean, independent of scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import smdp
from ._backend import kernels as _default_kernels
from .errors import ConfigurationError
from .game import GameConfig, ThresholdPolicy
from .servers import ServerModel

_DISCOUNTED_KERNEL = 1
_TAGGED_KERNEL = 2


@dataclass(frozen=True)
class SimConfig:
    """Replication count, seed, horizon and reporting confidence.

    ``horizon_stages=None`` derives a horizon whose geometric truncation
    tail is below ``auto_bias_bound`` in currency units.
    """

    seed: int = 2008
    replications: int = 10_000
    horizon_stages: int | None = None
    confidence: float = 0.99
    auto_bias_bound: float = 1e-8

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if self.horizon_stages is not None and self.horizon_stages < 1:
            raise ValueError("horizon_stages must be >= 1 (or None to derive)")
        if not 0.0 < self.confidence < 1.0:
            raise ValueError("confidence must be in (0, 1)")
        if self.seed < 0 or self.seed > 0xFFFFFFFFFFFFFFFF:
            raise ValueError("seed must fit in 64 bits")


@dataclass(frozen=True)
class SimEstimate:
    state: tuple
    mean: float
    stderr: float


def truncation_horizon(gamma: float, r_max: float, bias_bound: float) -> int:
    """Smallest horizon with gamma^h * r_max / (1 - gamma) <= bias_bound."""
    if bias_bound <= 0:
        raise ValueError("bias_bound must be positive")
    if gamma == 0.0 or r_max <= 0.0:
        return 1
    tail = r_max / (1.0 - gamma)
    if tail <= bias_bound:
        return 1
    return max(1, math.ceil(math.log(bias_bound / tail) / math.log(gamma)))


def _policy_tables(policy: np.ndarray, first: ServerModel, second: ServerModel,
                   streams: smdp.StreamConfig, beta: float):
    n1, n2 = first.n_states, second.n_states
    reward = np.zeros((n1, n2, 3))
    nxt1 = np.zeros((n1, n2, 3), dtype=np.int64)
    nxt2 = np.zeros((n1, n2, 3), dtype=np.int64)
    for s1 in range(n1):
        for s2 in range(n2):
            for stream in range(3):
                action = int(policy[s1, s2, stream])
                reward[s1, s2, stream] = smdp.stage_reward(
                    (s1, s2), stream, action, first, second, streams, beta)
                if action == smdp.ROUTE_FIRST:
                    nxt1[s1, s2, stream] = first.admit(s1)
                    nxt2[s1, s2, stream] = s2
                elif action == smdp.ROUTE_SECOND:
                    nxt1[s1, s2, stream] = s1
                    nxt2[s1, s2, stream] = second.admit(s2)
                else:
                    nxt1[s1, s2, stream] = s1
                    nxt2[s1, s2, stream] = s2
    return reward, nxt1, nxt2


def simulate_discounted_reward(policy: np.ndarray, first: ServerModel,
                               second: ServerModel, streams: smdp.StreamConfig,
                               smdp_config: smdp.SmdpConfig,
                               sim_config: SimConfig,
                               start_states,
                               backend=None) -> list:
    """Estimate the discounted reward under ``policy`` from each start state.

    Returns one SimEstimate per start state; identical (seed, config) gives
    bit-identical results on a given backend.
    """
    kern = backend or _default_kernels
    lam = smdp.uniformization_rate(first, second, streams)
    reward, nxt1, nxt2 = _policy_tables(policy, first, second, streams,
                                        smdp_config.beta)
    mu1 = np.array([first.service_rate(s) for s in range(first.n_states)])
    mu2 = np.array([second.service_rate(s) for s in range(second.n_states)])
    dep1 = np.array([first.depart(s) for s in range(first.n_states)], dtype=np.int64)
    dep2 = np.array([second.depart(s) for s in range(second.n_states)], dtype=np.int64)
    c1 = streams.lambda_first
    c2 = c1 + streams.lambda_second
    c3 = c2 + streams.lambda_common
    horizon = sim_config.horizon_stages
    if horizon is None:
        horizon = truncation_horizon(smdp_config.gamma, float(np.max(reward)),
                                     sim_config.auto_bias_bound)
    estimates = []
    for s1, s2 in start_states:
        tag = (_DISCOUNTED_KERNEL << 32) | (s1 * second.n_states + s2)
        totals = kern.run_discounted(
            sim_config.seed, tag, sim_config.replications, horizon,
            s1, s2, smdp_config.gamma, lam, c1, c2, c3, mu1, mu2,
            reward, nxt1, nxt2, dep1, dep2)
        estimates.append(SimEstimate(
            state=(s1, s2), mean=float(np.mean(totals)),
            stderr=_stderr(totals)))
    return estimates


def tagged_event_tables(l: int, q: float, config: GameConfig):
    """Cumulative event-rate thresholds of the tagged-mobile chain.

    Row m (tagged plus m others): [join, common self-loop, other-departure]
    cumulative rates, with the remainder up to the total being the tagged
    departure at rate mu[m] / (m + 1).
    """
    pol = ThresholdPolicy(l, q).canonical(config.m_ap)
    m_ap = config.m_ap
    thr = np.zeros((m_ap, 3))
    tot = np.zeros(m_ap)
    for m in range(m_ap):
        below_capacity = m <= m_ap - 2
        lam_d = config.lambda_ap if below_capacity else 0.0
        common_active = below_capacity and m <= pol.l - 1
        join_prob = pol.u(m + 1) if common_active else 0.0
        lam_c = config.lambda_ap3g if common_active else 0.0
        join = lam_d + join_prob * lam_c
        selfloop = (1.0 - join_prob) * lam_c
        other = config.mu[m] * m / (m + 1.0)
        thr[m, 0] = join
        thr[m, 1] = join + selfloop
        thr[m, 2] = join + selfloop + other
        tot[m] = join + selfloop + other + config.mu[m] / (m + 1.0)
        if tot[m] <= 0.0:
            raise ConfigurationError(
                f"state m_c={m} has zero total event rate; the tagged chain "
                "would never leave it")
    return thr, tot


def simulate_tagged_service_time(l: int, q: float, m_c: int,
                                 config: GameConfig, sim_config: SimConfig,
                                 backend=None):
    """Estimate the tagged mobile's expected service time from state m_c."""
    if not 0 <= m_c <= config.m_ap - 1:
        raise ValueError(f"m_c must be in 0..{config.m_ap - 1}")
    kern = backend or _default_kernels
    thr, tot = tagged_event_tables(l, q, config)
    tag = (_TAGGED_KERNEL << 32) | m_c
    times, _ = kern.run_tagged(sim_config.seed, tag, sim_config.replications,
                               m_c, thr, tot)
    return float(np.mean(times)), _stderr(times)


def _stderr(samples: np.ndarray) -> float:
    if len(samples) < 2:
        return float("inf")
    return float(np.std(samples, ddof=1) / math.sqrt(len(samples)))


def backend_name(backend=None) -> str:
    return (backend or _default_kernels).BACKEND_NAME
