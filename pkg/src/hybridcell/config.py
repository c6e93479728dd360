"""Run configuration: flat ``section.key = value`` text with full defaults.

Every run resolves all keys (unknown keys are rejected, missing ones take
the defaults below, common-stream fees depending on the setup) and can dump
the effective configuration, which reparses to an identical RunConfig.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import game, smdp, umts, wlan
from .errors import ConfigurationError
from .servers import ApServer, NodeBServer
from .sim import SimConfig

SETUPS = ("ap-nodeb", "ap-ap", "nodeb-nodeb")

# (type, default); callables receive the resolved setup name
_KEYS = {
    "setup": (str, "ap-nodeb"),
    "wlan.l_tcp": (float, 8000.0),
    "wlan.l_mac": (float, 272.0),
    "wlan.l_iph": (float, 320.0),
    "wlan.l_ack": (float, 112.0),
    "wlan.l_rts": (float, 180.0),
    "wlan.l_cts": (float, 112.0),
    "wlan.r_data": (float, 11e6),
    "wlan.r_control": (float, 2e6),
    "wlan.t_p": (float, 144e-6),
    "wlan.t_phy": (float, 48e-6),
    "wlan.t_difs": (float, 50e-6),
    "wlan.t_sifs": (float, 10e-6),
    "wlan.t_slot": (float, 20e-6),
    "wlan.cw_min": (float, 32.0),
    "wlan.k": (int, 7),
    "wlan.b0": (float, 16.0),
    "wlan.p": (float, 2.0),
    "wlan.w_star": (int, 1),
    "wlan.zeta": (float, 1e-6),
    "wlan.m_ap": (int, 18),
    "umts.w": (float, 3.84e6),
    "umts.alpha_bar": (float, 0.9),
    "umts.i_bar": (float, 0.7),
    "umts.eta_max": (float, 0.9),
    "umts.theta_min": (float, 46e3),
    "umts.zeta": (float, 1e-6),
    "umts.m_3g": (int, 18),
    "umts.table": (str, ""),
    "streams.lambda_first": (float, 0.03),
    "streams.lambda_second": (float, 0.03),
    "streams.lambda_common": (float, 0.01),
    "streams.f_first": (float, 0.0),
    "streams.f_second": (float, 0.0),
    "streams.f_common_to_first": (float, lambda setup: 5.0),
    "streams.f_common_to_second": (float, lambda setup: 5.65 if setup == "ap-nodeb" else 5.0),
    "smdp.gamma": (float, 0.8),
    "smdp.beta": (float, 1e-6),
    "smdp.epsilon": (float, 1e-9),
    "smdp.max_iterations": (int, 100_000),
    "game.lambda_ap": (float, 0.03),
    "game.lambda_ap3g": (float, 0.01),
    "game.m_ap": (int, 18),
    "game.tau": (float, 0.0),  # 0 -> worst-case NodeB service time
    "sim.seed": (int, 2008),
    "sim.replications": (int, 10_000),
    "sim.horizon_stages": (int, 0),  # 0 -> derived from gamma
    "sim.confidence": (float, 0.99),
    "sim.num_states": (int, 5),
    "staircase.lambda_min": (float, 0.25),
    "staircase.lambda_max": (float, 3.0),
    "staircase.lambda_step": (float, 0.25),
}


@dataclass
class RunConfig:
    values: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.values[key]

    @property
    def setup(self) -> str:
        return self.values["setup"]

    # -- model builders ----------------------------------------------------

    def wlan_params(self) -> wlan.WlanParams:
        v = self.values
        return wlan.WlanParams(
            l_tcp=v["wlan.l_tcp"], l_mac=v["wlan.l_mac"], l_iph=v["wlan.l_iph"],
            l_ack=v["wlan.l_ack"], l_rts=v["wlan.l_rts"], l_cts=v["wlan.l_cts"],
            r_data=v["wlan.r_data"], r_control=v["wlan.r_control"],
            t_p=v["wlan.t_p"], t_phy=v["wlan.t_phy"], t_difs=v["wlan.t_difs"],
            t_sifs=v["wlan.t_sifs"], t_slot=v["wlan.t_slot"],
            cw_min=v["wlan.cw_min"], k=v["wlan.k"], b0=v["wlan.b0"],
            p=v["wlan.p"], w_star=v["wlan.w_star"], zeta=v["wlan.zeta"])

    def umts_params(self) -> umts.UmtsParams:
        v = self.values
        return umts.UmtsParams(
            w=v["umts.w"], alpha_bar=v["umts.alpha_bar"], i_bar=v["umts.i_bar"],
            eta_max=v["umts.eta_max"], theta_min=v["umts.theta_min"],
            zeta=v["umts.zeta"], m_3g=v["umts.m_3g"])

    def umts_table(self) -> umts.UmtsTable:
        path = self.values["umts.table"]
        if path:
            return umts.UmtsTable.from_csv(path, self.umts_params())
        return umts.UmtsTable.builtin()

    def servers(self):
        setup = self.setup
        if setup == "ap-ap":
            params = self.wlan_params()
            m_ap = self.values["wlan.m_ap"]
            return ApServer(params, m_ap), ApServer(params, m_ap)
        if setup == "nodeb-nodeb":
            params, table = self.umts_params(), self.umts_table()
            return NodeBServer(params, table), NodeBServer(params, table)
        return (ApServer(self.wlan_params(), self.values["wlan.m_ap"]),
                NodeBServer(self.umts_params(), self.umts_table()))

    def stream_config(self) -> smdp.StreamConfig:
        v = self.values
        return smdp.StreamConfig(
            lambda_first=v["streams.lambda_first"],
            lambda_second=v["streams.lambda_second"],
            lambda_common=v["streams.lambda_common"],
            f_first=v["streams.f_first"], f_second=v["streams.f_second"],
            f_common_to_first=v["streams.f_common_to_first"],
            f_common_to_second=v["streams.f_common_to_second"])

    def smdp_config(self) -> smdp.SmdpConfig:
        v = self.values
        return smdp.SmdpConfig(gamma=v["smdp.gamma"], beta=v["smdp.beta"],
                               epsilon=v["smdp.epsilon"],
                               max_iterations=v["smdp.max_iterations"])

    def sim_config(self) -> SimConfig:
        v = self.values
        horizon = v["sim.horizon_stages"] or None
        return SimConfig(seed=v["sim.seed"], replications=v["sim.replications"],
                         horizon_stages=horizon, confidence=v["sim.confidence"])

    def game_config(self) -> game.GameConfig:
        v = self.values
        tau = v["game.tau"]
        if tau == 0.0:
            tau = game.tau_worst_case(self.umts_params(), self.umts_table())
        mu = game.mu_from_wlan(self.wlan_params(), v["game.m_ap"])
        return game.GameConfig(lambda_ap=v["game.lambda_ap"],
                               lambda_ap3g=v["game.lambda_ap3g"],
                               m_ap=v["game.m_ap"], mu=mu, tau=tau)


def _convert(key: str, raw: str):
    kind, _ = _KEYS[key]
    try:
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
        return raw
    except ValueError as exc:
        raise ConfigurationError(f"bad value for {key}: {raw!r}") from exc


def parse_config(text: str, overrides: dict | None = None) -> RunConfig:
    """Parse ``key = value`` lines, fill defaults, reject unknown keys."""
    given = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected 'key = value'")
        key, _, raw = line.partition("=")
        key, raw = key.strip(), raw.strip()
        if key not in _KEYS:
            raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
        if key in given:
            raise ConfigurationError(f"line {lineno}: duplicate key {key!r}")
        given[key] = _convert(key, raw)
    if overrides:
        for key, value in overrides.items():
            given[key] = _convert(key, str(value))
    setup = given.get("setup", _KEYS["setup"][1])
    if setup not in SETUPS:
        raise ConfigurationError(f"setup must be one of {SETUPS}, got {setup!r}")
    values = {}
    for key, (_, default) in _KEYS.items():
        if key in given:
            values[key] = given[key]
        else:
            values[key] = default(setup) if callable(default) else default
    return RunConfig(values=values)


def load_config(path: str | None, overrides: dict | None = None) -> RunConfig:
    if path is None:
        return parse_config("", overrides)
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, overrides)


def dump_config(config: RunConfig) -> str:
    """Effective configuration; parse_config(dump_config(c)) == c."""
    lines = []
    for key in sorted(_KEYS):
        value = config.values[key]
        text = repr(value) if isinstance(value, float) else str(value)
        lines.append(f"{key} = {text}")
    return "\n".join(lines) + "\n"
