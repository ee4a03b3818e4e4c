"""Indoor/outdoor propagation model for femtocell links.

Path loss follows the dual-strip style expression

    PL = 38.46 + 20 log10(d_in) + 37.6 log10(d) + L + L_s   [dB]

with ``d_in`` the distance from the FAP to the external wall, ``L`` the
wall/window penetration loss and ``L_s`` log-normal shadowing. Small-scale
fading is Rayleigh, i.e. the received power on each PRB is the average
power times a unit-mean exponential factor.

Everything is carried in linear scale internally; dB only shows up at the
function boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PropagationParams",
    "LinkShadowState",
    "NoiseParams",
    "ChannelRealization",
    "path_loss_db",
    "average_gain",
    "draw_link_states",
    "draw_fading",
    "noise_power_w",
    "db_to_linear",
    "linear_to_db",
    "dbm_to_watts",
]


def db_to_linear(x_db):
    return 10.0 ** (np.asarray(x_db, dtype=float) / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(x)


def dbm_to_watts(x_dbm):
    return 10.0 ** ((np.asarray(x_dbm, dtype=float) - 30.0) / 10.0)


@dataclass(frozen=True)
class PropagationParams:
    d_in_range: tuple[float, float] = (1.0, 5.0)
    wall_loss_db: float = 10.0
    window_loss_db: float = 3.0
    shadow_sigma_db: float = 10.0
    min_distance_m: float = 1.0

    def __post_init__(self):
        lo, hi = self.d_in_range
        if lo < 0 or lo > hi:
            raise ValueError(f"d_in_range must satisfy 0 <= lower <= upper, got {self.d_in_range}")
        if self.shadow_sigma_db < 0:
            raise ValueError("shadow_sigma_db must be non-negative")
        if self.wall_loss_db < 0 or self.window_loss_db < 0:
            raise ValueError("penetration losses must be non-negative")
        if self.min_distance_m <= 0:
            raise ValueError("min_distance_m must be positive")


@dataclass(frozen=True)
class LinkShadowState:
    """Large-scale state of one FAP-user link, fixed for a topology."""

    d_in: float
    penetration_db: float
    shadow_db: float


@dataclass(frozen=True)
class NoiseParams:
    psd_dbm_per_hz: float = -174.0
    noise_figure_db: float = 10.0
    prb_bandwidth_hz: float = 180e3

    def __post_init__(self):
        if self.prb_bandwidth_hz <= 0:
            raise ValueError("prb_bandwidth_hz must be positive")


@dataclass
class ChannelRealization:
    """Instantaneous per-PRB power gains.

    ``gains[l, k, n]`` is the linear gain from FAP ``l`` to user ``k`` on
    PRB ``n``. The harness usually only materializes the serving links, in
    which case ``gains`` has shape ``(K, N)``.
    """

    gains: np.ndarray


def path_loss_db(d_in, d, penetration_db, shadow_db):
    """Path loss in dB.

    Accepts scalars or broadcastable arrays. Raises ``ValueError`` for
    non-positive distances; clamping to the minimum distance is the
    caller's job (see :func:`average_gain`).
    """
    d_in = np.asarray(d_in, dtype=float)
    d = np.asarray(d, dtype=float)
    if np.any(d_in <= 0) or np.any(d <= 0):
        raise ValueError("distances must be positive")
    pl = 38.46 + 20.0 * np.log10(d_in) + 37.6 * np.log10(d) + penetration_db + shadow_db
    return pl if pl.ndim else float(pl)


def average_gain(params, state, d):
    """Average (fading-free) linear gain of a link.

    ``state`` may be a :class:`LinkShadowState` or any object with
    ``d_in``, ``penetration_db`` and ``shadow_db`` attributes holding
    arrays that broadcast against ``d``.
    """
    d = np.maximum(np.asarray(d, dtype=float), params.min_distance_m)
    pl = path_loss_db(state.d_in, d, state.penetration_db, state.shadow_db)
    g = 10.0 ** (-np.asarray(pl) / 10.0)
    return g if g.ndim else float(g)


@dataclass
class LinkStates:
    """Vectorized :class:`LinkShadowState` for a whole ``(L, K)`` link grid."""

    d_in: np.ndarray
    penetration_db: np.ndarray
    shadow_db: np.ndarray

    def link(self, l, k):
        return LinkShadowState(float(self.d_in[l, k]), float(self.penetration_db[l, k]),
                               float(self.shadow_db[l, k]))


def draw_link_states(params, shape, rng):
    """Draw wall distance, penetration type and shadowing for every link."""
    lo, hi = params.d_in_range
    d_in = rng.uniform(lo, hi, size=shape)
    if lo == 0:
        d_in = np.maximum(d_in, np.finfo(float).tiny)
    wall = rng.random(size=shape) < 0.5
    pen = np.where(wall, params.wall_loss_db, params.window_loss_db)
    shadow = rng.normal(0.0, params.shadow_sigma_db, size=shape)
    return LinkStates(d_in, pen, shadow)


def draw_fading(n_prbs, rng, size=None):
    """Unit-mean exponential (Rayleigh power) fading factors.

    Parameters
    ----------
    n_prbs : int
        Number of PRBs; the last axis of the result.
    rng : numpy.random.Generator
    size : tuple of int, optional
        Leading dimensions, e.g. ``(K,)`` for one factor per user and PRB.
    """
    if n_prbs < 1:
        raise ValueError("n_prbs must be >= 1")
    shape = (n_prbs,) if size is None else tuple(size) + (n_prbs,)
    return rng.standard_exponential(size=shape)


def noise_power_w(noise):
    """Thermal noise power over one PRB, in watts."""
    dbm = noise.psd_dbm_per_hz + 10.0 * np.log10(noise.prb_bandwidth_hz) + noise.noise_figure_db
    return float(10.0 ** ((dbm - 30.0) / 10.0))
