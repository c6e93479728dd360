"""Solver toolkit for user-network association in a WLAN/UMTS hybrid cell.

Computes globally optimal routing policies (value iteration on the
uniformized two-server decision chain), individually optimal threshold
equilibria (selfish join-the-AP game), and validates both against seeded
Monte-Carlo simulation.  The ``hybridcell`` CLI exports policies, value
functions, throughput curves and equilibrium sweeps as CSV.
"""

from .errors import (ConfigurationError, ConvergenceError, HybridCellError,
                     NumericalError)
from .game import (GameConfig, ThresholdPolicy, expected_service_time,
                   find_equilibrium, mu_from_wlan, staircase_sweep,
                   tau_worst_case)
from .servers import ApServer, NodeBServer, ServerModel
from .sim import (SimConfig, SimEstimate, simulate_discounted_reward,
                  simulate_tagged_service_time, truncation_horizon)
from .smdp import (REJECT, ROUTE_FIRST, ROUTE_SECOND, STREAM_COMMON,
                   STREAM_FIRST, STREAM_SECOND, SmdpConfig, SolveResult,
                   StreamConfig, bellman_backup, policy_structure_report,
                   stage_reward, uniformization_rate, value_iterate)
from .umts import UmtsParams, UmtsTable
from .wlan import OverheadResult, WlanParams

__version__ = "0.1.0"

__all__ = [
    "ApServer", "ConfigurationError", "ConvergenceError", "GameConfig",
    "HybridCellError", "NodeBServer", "NumericalError", "OverheadResult",
    "REJECT", "ROUTE_FIRST", "ROUTE_SECOND", "STREAM_COMMON", "STREAM_FIRST",
    "STREAM_SECOND", "ServerModel", "SimConfig", "SimEstimate", "SmdpConfig",
    "SolveResult", "StreamConfig", "ThresholdPolicy", "UmtsParams",
    "UmtsTable", "WlanParams", "bellman_backup", "expected_service_time",
    "find_equilibrium", "mu_from_wlan", "policy_structure_report",
    "simulate_discounted_reward", "simulate_tagged_service_time",
    "stage_reward", "staircase_sweep", "tau_worst_case",
    "truncation_horizon", "uniformization_rate", "value_iterate",
]
