"""System-level parameters shared by every stage of the pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import NoiseParams, PropagationParams, dbm_to_watts, noise_power_w

__all__ = ["SystemConfig", "ConfigError", "EVAL_MODES", "COLORING_STRATEGIES"]

EVAL_MODES = ("ideal", "sinr")
COLORING_STRATEGIES = ("dsatur", "bfs")


class ConfigError(ValueError):
    """Invalid or unusable configuration."""


@dataclass(frozen=True)
class SystemConfig:
    """Scenario parameters. Defaults follow the LTE femtocell setup
    (20 dBm FAPs, 50 femto PRBs of 180 kHz, 15 m coverage radius)."""

    cell_radius_m: float = 100.0
    coverage_radius_m: float = 15.0
    fap_density_per_m2: float = 1.0 / 100.0
    user_density_multiplier: float = 4.0
    n_prbs_total: int = 100
    n_prbs_femto: int = 50
    p_max_dbm: float = 20.0
    demand_bps: float = 1e6
    snr_gap: float = 1.0
    n_topologies: int = 100
    n_channel_draws: int = 10
    outage_fraction: float = 0.8
    eval_mode: str = "ideal"
    coloring_strategy: str = "dsatur"
    sinr_cutoff_m: float = 0.0  # 0 means every co-channel FAP interferes
    master_seed: int = 0
    propagation: PropagationParams = field(default_factory=PropagationParams)
    noise: NoiseParams = field(default_factory=NoiseParams)

    def __post_init__(self):
        if self.cell_radius_m <= 0:
            raise ConfigError("cell_radius_m must be positive")
        if self.coverage_radius_m <= 0:
            raise ConfigError("coverage_radius_m must be positive")
        if self.fap_density_per_m2 <= 0:
            raise ConfigError("fap_density_per_m2 must be positive")
        if self.user_density_multiplier <= 0:
            raise ConfigError("user_density_multiplier must be positive")
        if self.n_prbs_femto < 1:
            raise ConfigError("n_prbs_femto must be >= 1")
        if self.n_prbs_femto > self.n_prbs_total:
            raise ConfigError(
                f"n_prbs_femto ({self.n_prbs_femto}) exceeds n_prbs_total ({self.n_prbs_total})")
        if self.demand_bps <= 0:
            raise ConfigError("demand_bps must be positive")
        if self.snr_gap < 1.0:
            raise ConfigError("snr_gap must be >= 1 (linear)")
        if not 0.0 < self.outage_fraction <= 1.0:
            raise ConfigError("outage_fraction must lie in (0, 1]")
        if self.n_topologies < 1 or self.n_channel_draws < 1:
            raise ConfigError("n_topologies and n_channel_draws must be >= 1")
        if self.eval_mode not in EVAL_MODES:
            raise ConfigError(f"eval_mode must be one of {EVAL_MODES}, got {self.eval_mode!r}")
        if self.coloring_strategy not in COLORING_STRATEGIES:
            raise ConfigError(
                f"coloring_strategy must be one of {COLORING_STRATEGIES}, got {self.coloring_strategy!r}")
        if self.sinr_cutoff_m < 0:
            raise ConfigError("sinr_cutoff_m must be >= 0")
        if self.master_seed < 0:
            raise ConfigError("master_seed must be a non-negative integer")

    @property
    def p_max_w(self):
        return float(dbm_to_watts(self.p_max_dbm))

    @property
    def noise_w(self):
        return noise_power_w(self.noise)

    @property
    def prb_bandwidth_hz(self):
        return self.noise.prb_bandwidth_hz

    @property
    def cell_area_m2(self):
        return np.pi * self.cell_radius_m ** 2
