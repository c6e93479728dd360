"""Two-server routing SMDP solved by value iteration on the uniformized chain.

Three Poisson arrival streams hit a pair of finite-state servers: one
dedicated stream per server and a common stream that can be routed to
either.  Uniformization folds arrivals, state-dependent departures and an
artificial self-loop event into a single event clock of rate Lambda, so the
dynamic program discounts per event:

    V'(s) = sum_k (lambda_k / Lambda) * max_a [R_k(s, a) + gamma * V(succ(s, a))]
          + (mu_1(s1) / Lambda) * gamma * V(depart_1(s))
          + (mu_2(s2) / Lambda) * gamma * V(depart_2(s))
          + ((Lambda - sum lambda - mu_1(s1) - mu_2(s2)) / Lambda) * gamma * V(s)

The stage reward of an arrival is its admission fee (zero on reject or when
routed to a full server) plus beta times the aggregate throughput of the
target server after admission; a rejected common arrival scores the better
of the two unchanged aggregates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, ConvergenceError
from .servers import ServerModel

STREAM_FIRST, STREAM_SECOND, STREAM_COMMON = 0, 1, 2
STREAM_NAMES = ("dedicated_first", "dedicated_second", "common")

REJECT, ROUTE_FIRST, ROUTE_SECOND = 0, 1, 2
LEGAL_ACTIONS = ((REJECT, ROUTE_FIRST), (REJECT, ROUTE_SECOND),
                 (REJECT, ROUTE_FIRST, ROUTE_SECOND))


@dataclass(frozen=True)
class StreamConfig:
    """Arrival rates (1/s) and admission fees for the three streams."""

    lambda_first: float = 0.03
    lambda_second: float = 0.03
    lambda_common: float = 0.01
    f_first: float = 0.0
    f_second: float = 0.0
    f_common_to_first: float = 5.0
    f_common_to_second: float = 5.65

    def __post_init__(self):
        rates = (self.lambda_first, self.lambda_second, self.lambda_common)
        fees = (self.f_first, self.f_second, self.f_common_to_first,
                self.f_common_to_second)
        if any(v < 0 for v in rates + fees):
            raise ValueError("rates and fees must be >= 0")


@dataclass(frozen=True)
class SmdpConfig:
    """Discount per event, throughput-to-currency scale and stopping rule."""

    gamma: float = 0.8
    beta: float = 1e-6
    epsilon: float = 1e-9
    max_iterations: int = 100_000

    def __post_init__(self):
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError("gamma must be in [0, 1)")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.beta < 0:
            raise ValueError("beta must be >= 0")


@dataclass
class SolveResult:
    """Converged value function and greedy policy.

    ``values`` has shape (n1, n2); ``policy`` has shape (n1, n2, 3) holding
    the action (0 reject / 1 route-to-first / 2 route-to-second) per stream.
    """

    values: np.ndarray
    policy: np.ndarray
    iterations: int
    sup_delta: float


def uniformization_rate(first: ServerModel, second: ServerModel,
                        streams: StreamConfig) -> float:
    """Total event rate: all arrivals plus both maximum service rates."""
    mu1_max = max(first.service_rate(s) for s in range(first.n_states))
    mu2_max = max(second.service_rate(s) for s in range(second.n_states))
    lam = (streams.lambda_first + streams.lambda_second + streams.lambda_common
           + mu1_max + mu2_max)
    if lam <= 0:
        raise ConfigurationError("uniformization rate is zero: no events at all")
    return lam


def stage_reward(state: tuple[int, int], stream: int, action: int,
                 first: ServerModel, second: ServerModel,
                 streams: StreamConfig, beta: float) -> float:
    """One-event reward of taking ``action`` for an arrival of ``stream``."""
    s1, s2 = state
    if action not in LEGAL_ACTIONS[stream]:
        raise ValueError(
            f"action {action} illegal for stream {STREAM_NAMES[stream]}")
    agg1 = first.aggregate_throughput(s1)
    agg2 = second.aggregate_throughput(s2)
    if action == REJECT:
        if stream == STREAM_FIRST:
            return beta * agg1
        if stream == STREAM_SECOND:
            return beta * agg2
        return max(beta * agg1, beta * agg2)
    if action == ROUTE_FIRST:
        if first.is_full(s1):
            return beta * agg1
        fee = streams.f_first if stream == STREAM_FIRST else streams.f_common_to_first
        return fee + beta * first.aggregate_throughput(first.admit(s1))
    if second.is_full(s2):
        return beta * agg2
    fee = streams.f_second if stream == STREAM_SECOND else streams.f_common_to_second
    return fee + beta * second.aggregate_throughput(second.admit(s2))


@dataclass
class _Tables:
    """State-indexed arrays backing the vectorized backup."""

    lam: float
    admit1: np.ndarray
    admit2: np.ndarray
    depart1: np.ndarray
    depart2: np.ndarray
    mu1: np.ndarray
    mu2: np.ndarray
    rewards: list = field(default_factory=list)  # rewards[stream][action] or None
    self_weight: np.ndarray = None


def build_tables(first: ServerModel, second: ServerModel,
                 streams: StreamConfig, beta: float) -> _Tables:
    n1, n2 = first.n_states, second.n_states
    t = _Tables(
        lam=uniformization_rate(first, second, streams),
        admit1=np.array([first.admit(s) for s in range(n1)]),
        admit2=np.array([second.admit(s) for s in range(n2)]),
        depart1=np.array([first.depart(s) for s in range(n1)]),
        depart2=np.array([second.depart(s) for s in range(n2)]),
        mu1=np.array([first.service_rate(s) for s in range(n1)]),
        mu2=np.array([second.service_rate(s) for s in range(n2)]),
    )
    for stream in (STREAM_FIRST, STREAM_SECOND, STREAM_COMMON):
        per_action = []
        for action in (REJECT, ROUTE_FIRST, ROUTE_SECOND):
            if action not in LEGAL_ACTIONS[stream]:
                per_action.append(None)
                continue
            r = np.empty((n1, n2))
            for s1 in range(n1):
                for s2 in range(n2):
                    r[s1, s2] = stage_reward((s1, s2), stream, action,
                                             first, second, streams, beta)
            per_action.append(r)
        t.rewards.append(per_action)
    lam_sum = streams.lambda_first + streams.lambda_second + streams.lambda_common
    t.self_weight = (t.lam - lam_sum - t.mu1[:, None] - t.mu2[None, :]) / t.lam
    if np.any(t.self_weight < -1e-12):
        raise ConfigurationError("uniformization rate below total event rate")
    # the state attaining both service maxima can land at -1 ulp
    t.self_weight = np.maximum(t.self_weight, 0.0)
    return t


def _successor_values(v: np.ndarray, action: int, t: _Tables) -> np.ndarray:
    if action == REJECT:
        return v
    if action == ROUTE_FIRST:
        return v[t.admit1, :]
    return v[:, t.admit2]


def _backup(v: np.ndarray, t: _Tables, streams: StreamConfig,
            gamma: float) -> np.ndarray:
    lams = (streams.lambda_first, streams.lambda_second, streams.lambda_common)
    out = np.zeros_like(v)
    for stream, lam_k in enumerate(lams):
        q = None
        for action in LEGAL_ACTIONS[stream]:
            cand = t.rewards[stream][action] + gamma * _successor_values(v, action, t)
            q = cand if q is None else np.maximum(q, cand)
        out += (lam_k / t.lam) * q
    out += gamma * (t.mu1[:, None] / t.lam) * v[t.depart1, :]
    out += gamma * (t.mu2[None, :] / t.lam) * v[:, t.depart2]
    out += gamma * t.self_weight * v
    return out


def bellman_backup(v: np.ndarray, first: ServerModel, second: ServerModel,
                   streams: StreamConfig, config: SmdpConfig) -> np.ndarray:
    """One dynamic-programming sweep over the product state space."""
    t = build_tables(first, second, streams, config.beta)
    return _backup(np.asarray(v, dtype=float), t, streams, config.gamma)


def greedy_policy(v: np.ndarray, first: ServerModel, second: ServerModel,
                  streams: StreamConfig, config: SmdpConfig) -> np.ndarray:
    """Argmax policy with deterministic tie-breaking.

    Exact value ties resolve by preferring a genuine admission (target not
    full) over rejecting, then the target with fewer connected mobiles, then
    the first network; routing into a full server ranks below rejecting
    since it admits nobody.
    """
    n1, n2 = first.n_states, second.n_states
    policy = np.zeros((n1, n2, 3), dtype=np.int8)
    for s1 in range(n1):
        for s2 in range(n2):
            for stream in (STREAM_FIRST, STREAM_SECOND, STREAM_COMMON):
                best = None
                for action in LEGAL_ACTIONS[stream]:
                    if action == REJECT:
                        succ = (s1, s2)
                        rank, occ = 1, 0
                    elif action == ROUTE_FIRST:
                        succ = (first.admit(s1), s2)
                        rank = 2 if first.is_full(s1) else 0
                        occ = first.occupancy(s1)
                    else:
                        succ = (s1, second.admit(s2))
                        rank = 2 if second.is_full(s2) else 0
                        occ = second.occupancy(s2)
                    value = stage_reward((s1, s2), stream, action, first,
                                         second, streams, config.beta)
                    value += config.gamma * v[succ]
                    key = (-value, rank, occ, action)
                    if best is None or key < best[0]:
                        best = (key, action)
                policy[s1, s2, stream] = best[1]
    return policy


def value_iterate(first: ServerModel, second: ServerModel,
                  streams: StreamConfig, config: SmdpConfig) -> SolveResult:
    """Iterate the backup from V = 0 until the sup-norm change drops below
    epsilon, then extract the greedy policy."""
    t = build_tables(first, second, streams, config.beta)
    v = np.zeros((first.n_states, second.n_states))
    delta = np.inf
    for it in range(1, config.max_iterations + 1):
        v_next = _backup(v, t, streams, config.gamma)
        delta = float(np.max(np.abs(v_next - v)))
        v = v_next
        if delta < config.epsilon:
            policy = greedy_policy(v, first, second, streams, config)
            return SolveResult(values=v, policy=policy, iterations=it,
                               sup_delta=delta)
    raise ConvergenceError(
        f"value iteration did not reach epsilon={config.epsilon} within "
        f"{config.max_iterations} iterations (last delta {delta:.3e})",
        last_delta=delta)


@dataclass
class StructureReport:
    """Machine-checkable structural facts about a solved policy."""

    common_balancing: list       # (label1, label2) routed to the less-loaded side
    common_greedy: list          # (label1, label2) routed to the more-loaded side
    common_corner_action: int    # common-stream action with both servers full
    dedicated_first_accept_labels: list
    dedicated_second_accept_labels: list
    dedicated_first_uniform: bool
    dedicated_second_uniform: bool


def policy_structure_report(policy: np.ndarray, first: ServerModel,
                            second: ServerModel) -> StructureReport:
    n1, n2 = first.n_states, second.n_states
    balancing, greedy = [], []
    for s1 in range(n1):
        for s2 in range(n2):
            occ1, occ2 = first.occupancy(s1), second.occupancy(s2)
            action = policy[s1, s2, STREAM_COMMON]
            if action == REJECT or occ1 == occ2:
                continue
            to_less = (action == ROUTE_FIRST) == (occ1 < occ2)
            pair = (first.label(s1), second.label(s2))
            (balancing if to_less else greedy).append(pair)

    def accept_summary(stream, server, axis):
        accepted = policy[:, :, stream] != REJECT
        per_label = accepted.all(axis=axis)
        any_label = accepted.any(axis=axis)
        labels = [server.label(s) for s in np.flatnonzero(per_label)]
        return labels, bool(np.array_equal(per_label, any_label))

    first_labels, first_uniform = accept_summary(STREAM_FIRST, first, 1)
    second_labels, second_uniform = accept_summary(STREAM_SECOND, second, 0)
    return StructureReport(
        common_balancing=balancing,
        common_greedy=greedy,
        common_corner_action=int(policy[n1 - 1, n2 - 1, STREAM_COMMON]),
        dedicated_first_accept_labels=first_labels,
        dedicated_second_accept_labels=second_labels,
        dedicated_first_uniform=first_uniform,
        dedicated_second_uniform=second_uniform,
    )
