"""Coverage simulator for system information broadcast in cell-free massive MIMO."""

from ._core import (  # noqa: F401
    CellfreeError,
    OstbcCode,
    coverage_perfect,
    data_power,
    experiment_config,
    experiment_names,
    hex_spacing,
    lambda_ls,
    lambda_perfect,
    neighbor_grouping,
    normalized_power,
    optimal_pilot_power,
    outage_rate,
    parse_config,
    path_loss_db,
    place_hex,
    place_ppp,
    random_grouping,
    run_scenario,
    validate_config,
)

__all__ = [name for name in dir() if not name.startswith("_")]
