"""Finite-state server wrappers feeding the two-server decision models.

A server exposes its states as indices ``0..n_states-1`` together with the
aggregate throughput, the per-mobile effective service rate, and saturating
admit/depart transitions.  The AP instantiation indexes states by connected
mobile count; the NodeB instantiation indexes rows of the load-per-user
table (index s holds N = s + 1 mobiles), so a departure from the
single-mobile row clamps back onto itself.
"""

from __future__ import annotations

from typing import Protocol

import numpy as np

from . import umts, wlan


class ServerModel(Protocol):
    n_states: int

    def occupancy(self, s: int) -> int: ...
    def label(self, s: int) -> int: ...
    def aggregate_throughput(self, s: int) -> float: ...
    def service_rate(self, s: int) -> float: ...
    def admit(self, s: int) -> int: ...
    def depart(self, s: int) -> int: ...
    def is_full(self, s: int) -> bool: ...


class ApServer:
    """802.11 AP with states m_c = 0..m_ap."""

    def __init__(self, params: wlan.WlanParams, m_ap: int = 18,
                 overhead_fn=wlan.overhead):
        if m_ap < 1:
            raise ValueError("m_ap must be >= 1")
        self.params = params
        self.m_ap = m_ap
        self.n_states = m_ap + 1
        self._agg = np.array(
            [wlan.aggregate_throughput_ap(m, params, overhead_fn)
             for m in range(self.n_states)])
        self._mu = np.array(
            [wlan.mu_ap(m, params, overhead_fn) for m in range(self.n_states)])

    def occupancy(self, s):
        return s

    def label(self, s):
        return s

    def aggregate_throughput(self, s):
        return float(self._agg[s])

    def service_rate(self, s):
        return float(self._mu[s])

    def admit(self, s):
        return min(s + 1, self.m_ap)

    def depart(self, s):
        return max(s - 1, 0)

    def is_full(self, s):
        return s == self.m_ap


class NodeBServer:
    """WCDMA NodeB with states indexing table rows N = 1..m_3g."""

    def __init__(self, params: umts.UmtsParams, table: umts.UmtsTable | None = None):
        self.params = params
        self.table = table if table is not None else umts.UmtsTable.builtin()
        if params.m_3g > len(self.table):
            raise ValueError(
                f"m_3g={params.m_3g} exceeds table size {len(self.table)}")
        self.n_states = params.m_3g
        n = np.arange(1, self.n_states + 1)
        self._agg = n * self.table.theta_bps[:self.n_states]
        self._mu = params.zeta * self.table.theta_bps[:self.n_states]

    def occupancy(self, s):
        return s + 1

    def label(self, s):
        return s + 1

    def eta(self, s) -> float:
        return float(self.table.eta[s])

    def aggregate_throughput(self, s):
        return float(self._agg[s])

    def service_rate(self, s):
        return float(self._mu[s])

    def admit(self, s):
        return min(s + 1, self.n_states - 1)

    def depart(self, s):
        return max(s - 1, 0)

    def is_full(self, s):
        return s == self.n_states - 1
