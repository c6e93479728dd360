"""Selfish join-the-AP game: tagged-mobile service times and equilibrium.

A mobile that joins the AP with ``m_c`` others present experiences, while
later arrivals follow a common [L, q] threshold rule, an expected service
time V(m_c) solving a birth-death system: dedicated arrivals always join
below capacity, common arrivals join with probability u_{L,q}(occupancy),
and each service completion removes the tagged mobile with probability
1/(m_c + 1).  The outside option is the worst-case NodeB service time tau;
the equilibrium threshold [L*, q*] makes joining at L* exactly indifferent.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import wlan
from .errors import ConvergenceError, NumericalError
from .umts import UmtsParams, UmtsTable

RESIDUAL_RTOL = 1e-9
QSTAR_RTOL = 1e-9
QSTAR_MAX_ITER = 200


@dataclass(frozen=True)
class ThresholdPolicy:
    """Join below L, join with probability q at L, balk above; g = L + q.

    [L, 1] and [L + 1, 0] describe the same behavior; canonical() collapses
    to the q < 1 representative so equal policies compare (and solve) equal.
    """

    l: int
    q: float

    def __post_init__(self):
        if self.l < 0:
            raise ValueError("threshold L must be >= 0")
        if not 0.0 <= self.q <= 1.0:
            raise ValueError("q must be in [0, 1]")

    @property
    def g(self) -> float:
        return self.l + self.q

    def canonical(self, m_ap: int) -> "ThresholdPolicy":
        pol = self
        if pol.q == 1.0:
            pol = ThresholdPolicy(pol.l + 1, 0.0)
        if pol.l >= m_ap:
            pol = ThresholdPolicy(m_ap, 0.0)  # capacity blocks anything beyond
        return pol

    def u(self, m_c: int) -> float:
        if m_c < self.l:
            return 1.0
        if m_c == self.l:
            return self.q
        return 0.0


@dataclass(frozen=True)
class GameConfig:
    """Arrival rates, AP capacity, per-state service rates and outside option.

    ``mu[m]`` is the service-event rate while the tagged mobile sits with m
    others present (m = 0..m_ap-1), taken straight from the WLAN model.
    """

    lambda_ap: float
    lambda_ap3g: float
    m_ap: int
    mu: np.ndarray
    tau: float

    def __post_init__(self):
        if self.lambda_ap < 0 or self.lambda_ap3g < 0:
            raise ValueError("arrival rates must be >= 0")
        if self.m_ap < 2:
            raise ValueError("m_ap must be >= 2")
        if self.tau <= 0:
            raise ValueError("tau must be positive")
        mu = np.asarray(self.mu, dtype=float)
        if mu.shape != (self.m_ap,):
            raise ValueError(f"mu must have shape ({self.m_ap},)")
        if np.any(mu < 0) or np.any(mu[1:] == 0):
            raise ValueError("service rates must be positive for m_c >= 1")
        object.__setattr__(self, "mu", mu)


def mu_from_wlan(params: wlan.WlanParams, m_ap: int,
                 overhead_fn=wlan.overhead) -> np.ndarray:
    """Per-state service rates mu[m] = zeta * theta_AP(m), with mu[0] = 0."""
    return np.array([wlan.mu_ap(m, params, overhead_fn) for m in range(m_ap)])


def tau_worst_case(params: UmtsParams, table: UmtsTable | None = None) -> float:
    """Reciprocal of the slowest NodeB service rate within pole capacity."""
    table = table if table is not None else UmtsTable.builtin()
    if params.m_3g > len(table):
        raise ValueError(f"m_3g={params.m_3g} exceeds table size {len(table)}")
    mu_min = params.zeta * float(np.min(table.theta_bps[:params.m_3g]))
    return 1.0 / mu_min


def service_time_system(l: int, q: float, config: GameConfig):
    """Assemble the M_AP x M_AP linear system A @ V = 1 for policy [l, q]."""
    pol = ThresholdPolicy(l, q).canonical(config.m_ap)
    m_ap, lam_a, lam_c = config.m_ap, config.lambda_ap, config.lambda_ap3g
    a = np.zeros((m_ap, m_ap))
    b = np.ones(m_ap)
    for m in range(m_ap):
        below_capacity = m <= m_ap - 2
        lam_d = lam_a if below_capacity else 0.0
        common_active = below_capacity and m <= pol.l - 1
        join_prob = pol.u(m + 1) if common_active else 0.0
        alpha = config.mu[m] + lam_d + (lam_c if common_active else 0.0)
        a[m, m] = alpha
        if common_active:
            a[m, m] -= (1.0 - join_prob) * lam_c  # non-joining commons self-loop
        if m >= 1:
            a[m, m - 1] = -config.mu[m] * m / (m + 1.0)
        if below_capacity:
            a[m, m + 1] = -(lam_d + join_prob * lam_c)
    return a, b


def expected_service_time(l: int, q: float, config: GameConfig) -> np.ndarray:
    """Tagged-mobile expected service times V(0..M_AP-1) under [l, q]."""
    a, b = service_time_system(l, q, config)
    try:
        v = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"service-time system is singular: {exc}") from exc
    residual = float(np.max(np.abs(a @ v - b)))
    bound = RESIDUAL_RTOL * (1.0 + float(np.max(np.abs(v))))
    if residual > bound:
        raise NumericalError(
            f"service-time solve residual {residual:.3e} exceeds {bound:.3e}")
    if not np.all(np.isfinite(v)) or np.any(v <= 0):
        raise NumericalError("service times must be positive and finite")
    return v


def _v_at_threshold(l: int, q: float, config: GameConfig) -> float:
    return float(expected_service_time(l, q, config)[l])


def find_equilibrium(config: GameConfig) -> ThresholdPolicy:
    """Equilibrium threshold [L*, q*] against the outside option tau.

    Everyone joins if even the fullest AP beats tau.  Otherwise L* is the
    smallest L whose marginal joiner under [L, 1] overshoots tau; q* splits
    the indifference when [L*, 0] still undershoots.
    """
    m_ap, tau = config.m_ap, config.tau
    if float(expected_service_time(m_ap, 0.0, config)[m_ap - 1]) < tau:
        return ThresholdPolicy(m_ap, 0.0)
    l_min = None
    for l in range(1, m_ap):
        if _v_at_threshold(l, 1.0, config) > tau:
            l_min = l
            break
    if l_min is None:
        raise NumericalError(
            "no threshold L in 1..m_ap-1 crosses tau although the full AP "
            "does not beat it; service times are inconsistent")
    if _v_at_threshold(l_min, 0.0, config) >= tau:
        return ThresholdPolicy(l_min, 0.0)

    # V(L_min, [L_min, q]) must rise monotonically in q for the root to be
    # unique; check on a coarse grid before bisecting.
    grid = [_v_at_threshold(l_min, q, config) for q in np.linspace(0.0, 1.0, 101)]
    diffs = np.diff(grid)
    if np.any(diffs < -1e-12 * max(1.0, float(np.max(np.abs(grid))))):
        raise NumericalError(
            f"V(L={l_min}, [L, q]) is not monotone in q; bisection ill-posed")

    lo, hi = 0.0, 1.0
    for _ in range(QSTAR_MAX_ITER):
        mid = 0.5 * (lo + hi)
        v = _v_at_threshold(l_min, mid, config)
        if abs(v - tau) <= QSTAR_RTOL * tau:
            return ThresholdPolicy(l_min, mid)
        if v < tau:
            lo = mid
        else:
            hi = mid
    raise ConvergenceError(
        f"q* bisection did not reach |V - tau| <= {QSTAR_RTOL}*tau in "
        f"{QSTAR_MAX_ITER} iterations", last_delta=abs(v - tau))


def staircase_sweep(config: GameConfig, lambda_common_grid) -> list:
    """Equilibria along an increasing grid of common-stream arrival rates."""
    grid = [float(g) for g in lambda_common_grid]
    if not grid:
        raise ValueError("lambda_common_grid must be non-empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("lambda_common_grid must be strictly increasing")
    return [(lam, find_equilibrium(replace(config, lambda_ap3g=lam)))
            for lam in grid]
