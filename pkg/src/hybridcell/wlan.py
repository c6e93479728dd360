"""Downlink TCP throughput of a saturated 802.11 AP cell with RTS/CTS.

Per-mobile throughput of an AP serving ``m_c`` mobiles is

    theta_AP(m_c) = L_TCP / (m_c * (T_TCPdata + T_TCPack + 2*T_tbo + 2*T_w))

with back-off and collision overheads evaluated for the average number of
backlogged contenders m_b = 1 + m_c/2 (the AP is always backlogged, each
mobile holds a TCP ack to return with probability 1/2).  The overhead model
is a standard saturation analysis: a per-slot attempt probability coupled to
the collision probability through a fixed point, truncated at the retry
limit.  It is pluggable: any callable ``(m_b, params) -> OverheadResult``
can replace :func:`overhead`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NumericalError

#: Absolute bisection tolerance for the collision fixed point.
FIXED_POINT_TOL = 1e-10
FIXED_POINT_MAX_ITER = 200


@dataclass(frozen=True)
class WlanParams:
    """802.11 frame sizes (bits), rates (bits/s), timings (s) and back-off law.

    ``zeta`` is the reciprocal mean download size (1/bits), shared with the
    arrival model; ``w_star`` is the TCP receiver advertised window and must
    stay at 1 (the throughput formula is derived under that assumption).
    """

    l_tcp: float = 8000.0
    l_mac: float = 272.0
    l_iph: float = 320.0
    l_ack: float = 112.0
    l_rts: float = 180.0
    l_cts: float = 112.0
    r_data: float = 11e6
    r_control: float = 2e6
    t_p: float = 144e-6
    t_phy: float = 48e-6
    t_difs: float = 50e-6
    t_sifs: float = 10e-6
    t_slot: float = 20e-6
    cw_min: float = 32.0
    k: int = 7
    b0: float = 16.0
    p: float = 2.0
    w_star: int = 1
    zeta: float = 1e-6

    def __post_init__(self):
        sizes = (self.l_tcp, self.l_mac, self.l_iph, self.l_ack, self.l_rts,
                 self.l_cts)
        rates = (self.r_data, self.r_control)
        times = (self.t_p, self.t_phy, self.t_difs, self.t_sifs, self.t_slot)
        if any(v <= 0 for v in sizes + rates + times):
            raise ValueError("frame sizes, rates and times must be positive")
        if self.k < 1:
            raise ValueError("retry limit k must be >= 1")
        if self.p < 1:
            raise ValueError("back-off multiplier p must be >= 1")
        if self.b0 <= 0 or self.cw_min <= 0 or self.zeta <= 0:
            raise ValueError("b0, cw_min and zeta must be positive")
        if self.w_star != 1:
            raise ValueError("advertised window w_star must be 1")


@dataclass(frozen=True)
class OverheadResult:
    """Per-successful-packet overhead times, all in seconds."""

    t_tbo: float
    t_w: float
    t_tcp_data: float
    t_tcp_ack: float


def backlogged_count(m_c: float) -> float:
    """Average number of backlogged contenders with ``m_c`` connected mobiles."""
    if m_c < 0:
        raise ValueError(f"mobile count must be >= 0, got {m_c}")
    return 1.0 + m_c / 2.0


def _exchange_times(params: WlanParams):
    t_rts = params.t_p + params.t_phy + params.l_rts / params.r_control
    t_cts = params.t_p + params.t_phy + params.l_cts / params.r_control
    t_macack = params.t_p + params.t_phy + params.l_ack / params.r_control
    fixed = (t_rts + params.t_sifs + t_cts + params.t_sifs + params.t_p
             + params.t_phy)
    tail = params.t_sifs + t_macack + params.t_difs
    t_data = fixed + (params.l_mac + params.l_iph + params.l_tcp) / params.r_data + tail
    t_ack = fixed + (params.l_mac + params.l_iph) / params.r_data + tail
    return t_rts, t_data, t_ack


def _attempt_probability(p_c: float, params: WlanParams) -> float:
    # geometric-sum form of (1 - (2p)^K)/(1 - 2p); continuous at p = 1/2
    geo = 0.0
    term = 1.0
    for _ in range(params.k):
        geo += term
        term *= 2.0 * p_c
    return 2.0 / ((params.b0 + 1.0) + p_c * params.b0 * geo)


def collision_probability(m_b: float, params: WlanParams) -> float:
    """Fixed point of p = 1 - (1 - tau(p))^(m_b - 1), by bisection on [0, 1)."""
    if not m_b >= 1:  # also rejects nan
        raise ValueError(f"contender count must be >= 1, got {m_b}")

    def residual(p_c: float) -> float:
        tau = _attempt_probability(p_c, params)
        return p_c - (1.0 - (1.0 - tau) ** (m_b - 1.0))

    lo, hi = 0.0, 1.0 - 1e-12
    f_lo = residual(lo)
    if f_lo == 0.0:
        return lo
    if f_lo > 0.0 or residual(hi) < 0.0:
        raise NumericalError(f"collision fixed point not bracketed at m_b={m_b}")
    for _ in range(FIXED_POINT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if residual(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < FIXED_POINT_TOL:
            return 0.5 * (lo + hi)
    raise NumericalError(
        f"collision fixed point did not converge after {FIXED_POINT_MAX_ITER} "
        f"bisections at m_b={m_b}")


def overhead(m_b: float, params: WlanParams) -> OverheadResult:
    """Back-off, collision and raw exchange times for m_b contenders."""
    t_rts, t_data, t_ack = _exchange_times(params)
    p_c = collision_probability(m_b, params)
    t_tbo = 0.0
    term = params.b0 / 2.0
    for _ in range(params.k + 1):
        t_tbo += term
        term *= p_c * params.p
    t_tbo *= params.t_slot
    # with RTS/CTS a collision costs only the RTS exchange; the expected
    # number of collisions per success is capped by the retry limit
    collisions = min(p_c / (1.0 - p_c), float(params.k))
    t_w = collisions * (t_rts + params.t_difs)
    return OverheadResult(t_tbo=t_tbo, t_w=t_w, t_tcp_data=t_data, t_tcp_ack=t_ack)


def theta_ap(m_c: int, params: WlanParams, overhead_fn=overhead) -> float:
    """Per-mobile downlink TCP throughput (bits/s) with ``m_c`` mobiles."""
    if m_c < 1:
        raise ValueError(
            "per-mobile throughput needs m_c >= 1; use aggregate_throughput_ap "
            "for the empty cell")
    ov = overhead_fn(backlogged_count(m_c), params)
    per_packet = ov.t_tcp_data + ov.t_tcp_ack + 2.0 * ov.t_tbo + 2.0 * ov.t_w
    return params.l_tcp / (m_c * per_packet)


def aggregate_throughput_ap(m_c: int, params: WlanParams, overhead_fn=overhead) -> float:
    """Total cell throughput m_c * theta_AP(m_c); zero for an empty cell."""
    if m_c == 0:
        return 0.0
    return m_c * theta_ap(m_c, params, overhead_fn)


def mu_ap(m_c: int, params: WlanParams, overhead_fn=overhead) -> float:
    """Effective per-mobile service rate zeta * theta_AP(m_c); zero when empty."""
    if m_c == 0:
        return 0.0
    return params.zeta * theta_ap(m_c, params, overhead_fn)
