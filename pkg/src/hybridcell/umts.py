"""Downlink model of a saturated WCDMA NodeB cell.

The cell always runs at its maximum downlink load, so the load per user
``eta`` drops as mobiles connect.  Per-mobile throughput as a function of
eta comes from a fixed lookup table (radio-layer simulation results); the
closed forms

    Eb/No = (W / theta) * SINR            (linear)
    theta(eta) = eta * W / ((Eb/No) * (1 - alpha_bar + i_bar))

are kept as consistency checks only, since the table values were tuned
independently.  The table is the state space: eta moves exactly one row per
connect/disconnect, clamping at both ends.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

CONNECT = "connect"
DEPART = "depart"

#: (eta, log_eta, N, SINR dB, theta kbps, Eb/No dB), one row per mobile count.
_BUILTIN_ROWS = [
    (0.9,    -0.10536, 1,  0.8423,   572, 9.0612),
    (0.45,   -0.79851, 2,  -2.1804,  465, 6.9503),
    (0.3,    -1.204,   3,  -3.7341,  405, 5.7894),
    (0.225,  -1.4917,  4,  -5.1034,  360, 5.0515),
    (0.18,   -1.7148,  5,  -6.0327,  322, 4.5669),
    (0.15,   -1.8971,  6,  -6.5093,  285, 4.3052),
    (0.1286, -2.0513,  7,  -7.2075,  242, 4.3460),
    (0.1125, -2.1848,  8,  -8.8312,  191, 4.7939),
    (0.1,    -2.3026,  9,  -8.9641,  144, 5.5091),
    (0.09,   -2.4079,  10, -9.1832,  115, 6.0281),
    (0.0818, -2.5033,  11, -9.9324,  96,  6.3985),
    (0.0750, -2.5903,  12, -10.1847, 83,  6.6525),
    (0.0692, -2.6703,  13, -10.7294, 73,  6.8625),
    (0.0643, -2.7444,  14, -10.9023, 65,  7.0447),
    (0.06,   -2.8134,  15, -10.9983, 60,  7.0927),
    (0.0563, -2.8779,  16, -11.1832, 55,  7.1903),
    (0.0529, -2.9386,  17, -11.3802, 51,  7.2549),
    (0.05,   -2.9957,  18, -11.9231, 47,  7.3614),
]

TABLE_CSV_HEADER = ["eta", "log_eta", "N", "sinr_db", "theta_kbps", "ebno_db"]


@dataclass(frozen=True)
class UmtsParams:
    """WCDMA cell constants: chip rate W (chips/s), average orthogonality
    factor, average inter/intra-cell interference ratio, maximum downlink
    load, QoS floor theta_min (bits/s), mean-file-size reciprocal zeta
    (1/bits) and configured pole capacity m_3g."""

    w: float = 3.84e6
    alpha_bar: float = 0.9
    i_bar: float = 0.7
    eta_max: float = 0.9
    theta_min: float = 46e3
    zeta: float = 1e-6
    m_3g: int = 18

    def __post_init__(self):
        if not 0.0 < self.eta_max <= 1.0:
            raise ValueError("eta_max must be in (0, 1]")
        if 1.0 - self.alpha_bar + self.i_bar <= 0.0:
            raise ValueError("1 - alpha_bar + i_bar must be positive")
        if self.theta_min <= 0.0 or self.w <= 0.0 or self.zeta <= 0.0:
            raise ValueError("w, theta_min and zeta must be positive")
        if self.m_3g < 1:
            raise ValueError("m_3g must be >= 1")

    @property
    def interference_term(self) -> float:
        return 1.0 - self.alpha_bar + self.i_bar


class UmtsTable:
    """Ordered load-per-user table; row index = N - 1 mobiles connected."""

    def __init__(self, eta, log_eta, n, sinr_db, theta_bps, ebno_db):
        self.eta = np.asarray(eta, dtype=float)
        self.log_eta = np.asarray(log_eta, dtype=float)
        self.n = np.asarray(n, dtype=int)
        self.sinr_db = np.asarray(sinr_db, dtype=float)
        self.theta_bps = np.asarray(theta_bps, dtype=float)
        self.ebno_db = np.asarray(ebno_db, dtype=float)
        self._validate_shape()

    def _validate_shape(self):
        n_rows = len(self.eta)
        arrays = (self.log_eta, self.n, self.sinr_db, self.theta_bps, self.ebno_db)
        if n_rows == 0 or any(len(a) != n_rows for a in arrays):
            raise ValueError("table columns must be non-empty and equal length")
        if not np.array_equal(self.n, np.arange(1, n_rows + 1)):
            raise ValueError("N column must be 1..n_rows strictly increasing")
        if not np.all(np.diff(self.eta) < 0):
            raise ValueError("eta column must be strictly decreasing")
        if not np.all(np.diff(self.theta_bps) < 0):
            raise ValueError("theta column must be strictly decreasing")

    def __len__(self):
        return len(self.eta)

    @classmethod
    def builtin(cls) -> "UmtsTable":
        cols = list(zip(*_BUILTIN_ROWS))
        return cls(eta=cols[0], log_eta=cols[1], n=cols[2], sinr_db=cols[3],
                   theta_bps=[v * 1e3 for v in cols[4]], ebno_db=cols[5])

    @classmethod
    def from_csv(cls, path, params: UmtsParams | None = None) -> "UmtsTable":
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if [h.strip() for h in header] != TABLE_CSV_HEADER:
                raise ValueError(
                    f"table CSV header must be {','.join(TABLE_CSV_HEADER)}")
            rows = [[float(v) for v in row] for row in reader if row]
        if not rows:
            raise ValueError(f"table CSV {path} has no data rows")
        cols = list(zip(*rows))
        table = cls(eta=cols[0], log_eta=cols[1], n=[int(v) for v in cols[2]],
                    sinr_db=cols[3], theta_bps=[v * 1e3 for v in cols[4]],
                    ebno_db=cols[5])
        if params is not None:
            table.check_consistency(params)
        return table

    def check_consistency(self, params: UmtsParams,
                          load_tol: float = 1e-3, ebno_tol_db: float = 0.75):
        """Verify eta*N = eta_max and the Eb/No relation row by row."""
        load = self.eta * self.n
        worst = np.max(np.abs(load - params.eta_max))
        if worst > load_tol:
            raise ValueError(
                f"eta*N deviates from eta_max={params.eta_max} by {worst:.2e}")
        for i in range(len(self)):
            derived = ebno_from(self.theta_bps[i], self.sinr_db[i], params)
            if abs(derived - self.ebno_db[i]) > ebno_tol_db:
                raise ValueError(
                    f"row N={self.n[i]}: Eb/No {self.ebno_db[i]} dB vs derived "
                    f"{derived:.4f} dB exceeds {ebno_tol_db} dB")

    def index_of_eta(self, eta: float) -> int:
        """Row index of the nearest eta; ties resolve toward smaller N."""
        lo, hi = self.eta[-1], self.eta[0]
        if not lo <= eta <= hi:
            raise ValueError(f"eta={eta} outside table range [{lo}, {hi}]")
        dist = np.abs(self.eta - eta)
        return int(np.argmin(dist))  # argmin takes the first (smaller N) on ties


def n_of_eta(eta: float, table: UmtsTable) -> int:
    """Number of connected mobiles for a load per user of eta."""
    return int(table.n[table.index_of_eta(eta)])


def theta_3g(eta: float, table: UmtsTable) -> float:
    """Per-mobile throughput (bits/s) from the table row nearest eta."""
    return float(table.theta_bps[table.index_of_eta(eta)])


def theta_3g_closed_form(eta: float, ebno_linear: float, params: UmtsParams) -> float:
    """Closed-form throughput eta*W / (EbNo * (1 - alpha_bar + i_bar))."""
    return eta * params.w / (ebno_linear * params.interference_term)


def ebno_from(theta: float, sinr_db: float, params: UmtsParams) -> float:
    """Required Eb/No (dB) for throughput theta at the given SINR."""
    if theta <= 0:
        raise ValueError("theta must be positive")
    return 10.0 * math.log10((params.w / theta) * 10.0 ** (sinr_db / 10.0))


def pole_capacity(params: UmtsParams, ebno_linear: float) -> int:
    """Mobiles supportable at theta_min under full load (floored)."""
    raw = (params.eta_max * params.w
           / (params.theta_min * ebno_linear * params.interference_term))
    return int(math.floor(raw))


def delta_eta(eta: float, direction: str, table: UmtsTable) -> float:
    """Load per user after one connect/depart, clamped to the table ends."""
    idx = table.index_of_eta(eta)
    if direction == CONNECT:
        idx = min(idx + 1, len(table) - 1)
    elif direction == DEPART:
        idx = max(idx - 1, 0)
    else:
        raise ValueError(f"direction must be '{CONNECT}' or '{DEPART}'")
    return float(table.eta[idx])


def mu_3g(eta: float, params: UmtsParams, table: UmtsTable) -> float:
    """Effective per-mobile service rate zeta * theta_3G(eta)."""
    return params.zeta * theta_3g(eta, table)
