"""FR2 mobility simulator: conditional handover with hand blockage.

Thin wrapper around the compiled `_fchosim` module. The heavy lifting (the
system-level simulator, KPI accounting and the reservation-optimization
policies) lives in C++; this package exposes the main operations.
"""

import json

from _fchosim import (  # noqa: F401
    beam_gain_db,
    default_config_json,
    derive_policy_csv,
    l3_filter,
    panel_rx_gain_db,
    path_loss_db,
    run_campaign,
    run_scenario,
)

__all__ = [
    "beam_gain_db",
    "default_config",
    "default_config_json",
    "derive_policy_csv",
    "l3_filter",
    "panel_rx_gain_db",
    "path_loss_db",
    "run",
    "run_campaign",
    "run_scenario",
]


def default_config():
    """Scenario configuration with full defaults, as a dict."""
    return json.loads(default_config_json())


def run(config=None, policy_csv="", **overrides):
    """Run one scenario from a config dict (defaults filled in) and return
    the result dict with `summary`, `events`, `border_matrix` and
    `reservation_durations_s`."""
    cfg = default_config()
    if config:
        cfg.update(config)
    cfg.update(overrides)
    return run_scenario(json.dumps(cfg), policy_csv)
