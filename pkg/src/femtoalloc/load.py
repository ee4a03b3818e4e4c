"""Per-FAP load estimation.

Each FAP picks, for its served users, a (fractional) number of
subchannels ``w_k`` and a power ``P_k`` so that

    minimize    sum_k w_k
    subject to  w_k b log2(1 + P_k H_k / (w_k sigma^2 Gamma)) >= R_k
                sum_k P_k <= P_max,  P_k >= 0,  0 <= w_k <= W_max

where ``b`` is the PRB bandwidth and ``H_k`` the average channel gain.

Solver
------
At the optimum the rate constraints are tight, so ``w_k = g_k(P_k)`` with
``g_k`` decreasing and convex. Writing ``x = a P / w`` for the per-subchannel
SNR (``a = H / (sigma^2 Gamma)``), the tight constraint gives

    w = R / (b log2(1 + x)),   P = w x / a,
    dg/dP = -a / phi(x),       phi(x) = (1 + x) ln(1 + x) - x.

The KKT condition ``dg_k/dP_k = -mu`` is therefore ``phi(x_k) = a_k / mu``,
which inverts in closed form through the Lambert W function. The total
power is monotone in ``mu``, so a bisection on ``log mu`` enforces the
power budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import lambertw

__all__ = [
    "UserDemand",
    "LoadEstimate",
    "rate_given",
    "min_subchannels",
    "estimate_load",
    "integer_demand",
]

_INNER_RTOL = 1e-9
_MU_RTOL = 1e-12  # slack here shifts N_l and can flip its ceiling


@dataclass(frozen=True)
class UserDemand:
    rate_bps: float
    avg_gain: float

    def __post_init__(self):
        if self.rate_bps <= 0:
            raise ValueError("rate_bps must be positive")
        if self.avg_gain <= 0:
            raise ValueError("avg_gain must be positive")


@dataclass
class LoadEstimate:
    w: np.ndarray
    p: np.ndarray
    n_l: float
    feasible: bool
    n_l_int: int

    def to_dict(self):
        return {"w": self.w.tolist(), "p": self.p.tolist(), "n_l": self.n_l,
                "feasible": self.feasible, "n_l_int": self.n_l_int}


def _snr_coeff(h, cfg):
    return np.asarray(h, dtype=float) / (cfg.noise_w * cfg.snr_gap)


def rate_given(w, p, h, cfg):
    """Rate (bit/s) of ``w`` subchannels carrying total power ``p``.

    Continuous at ``w = 0`` where it returns 0.
    """
    w = np.asarray(w, dtype=float)
    p = np.asarray(p, dtype=float)
    a = _snr_coeff(h, cfg)
    b = cfg.prb_bandwidth_hz
    s = p * a
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        ratio = s / w
        r = np.where(np.isfinite(ratio), w * b * np.log1p(ratio) / math.log(2),
                     w * b * (np.log2(s) - np.log2(w)))
    r = np.where((w > 0) & (s > 0), r, 0.0)
    return r if r.ndim else float(r)


def min_subchannels(p, u, cfg, w_max=None):
    """Smallest ``w`` whose rate at power ``p`` reaches ``u.rate_bps``.

    Returns ``None`` when the demand cannot be met with at most ``w_max``
    subchannels (default: the number of femto PRBs), which includes the
    case where the demand exceeds the wideband limit ``p a b / ln 2``.
    """
    if p < 0:
        raise ValueError("power must be non-negative")
    w_max = float(cfg.n_prbs_femto if w_max is None else w_max)
    a = float(_snr_coeff(u.avg_gain, cfg))
    b = cfg.prb_bandwidth_hz
    R = u.rate_bps
    if p == 0 or R >= p * a * b / math.log(2):
        return None
    if rate_given(w_max, p, u.avg_gain, cfg) < R:
        return None
    lo, hi = 0.0, w_max
    while hi - lo > _INNER_RTOL * hi:
        mid = 0.5 * (lo + hi)
        if rate_given(mid, p, u.avg_gain, cfg) >= R:
            hi = mid
        else:
            lo = mid
    return hi


def _phi(x):
    return (1.0 + x) * np.log1p(x) - x


def _phi_inverse(y):
    """Solve ``(1+x) ln(1+x) - x = y`` for ``x >= 0``."""
    z = (np.asarray(y, dtype=float) - 1.0) / math.e
    z = np.maximum(z, -1.0 / math.e)
    u = 1.0 + lambertw(z, 0).real
    return np.expm1(np.maximum(u, 0.0))


def integer_demand(n_l, n_max):
    """Round a fractional load up to whole PRBs, capped at ``n_max``."""
    if n_l < 0:
        raise ValueError("n_l must be non-negative")
    # tolerance absorbs float noise on loads that are integral in exact arithmetic
    return int(min(math.ceil(n_l - 1e-9), n_max)) if n_l > 1e-9 else 0


def estimate_load(users, p_max, cfg, w_max=None):
    """Minimum total subchannel count for one FAP's users.

    Parameters
    ----------
    users : sequence of UserDemand
    p_max : float
        FAP power budget in watts.
    cfg : SystemConfig
        Supplies PRB bandwidth, noise power, SNR gap and ``n_prbs_femto``.
    w_max : float, optional
        Per-user cap on ``w``; defaults to ``cfg.n_prbs_femto``.

    Returns
    -------
    LoadEstimate
        ``feasible`` is False when no power split meets every demand within
        the cap; then every user is reported at ``w = w_max`` and the FAP
        requests all PRBs.
    """
    n_cap = cfg.n_prbs_femto
    w_max = float(n_cap if w_max is None else w_max)
    if len(users) == 0:
        return LoadEstimate(np.zeros(0), np.zeros(0), 0.0, True, 0)
    R = np.array([u.rate_bps for u in users], dtype=float)
    H = np.array([u.avg_gain for u in users], dtype=float)
    a = _snr_coeff(H, cfg)
    b = cfg.prb_bandwidth_hz

    x_cap = np.expm1(R / (w_max * b) * math.log(2.0))
    p_cap = w_max * x_cap / a

    if p_cap.sum() > p_max * (1.0 + 1e-12):
        # best effort: satisfy the cheapest users first, the rest share the remainder
        p = np.zeros_like(R)
        budget = p_max
        for k in np.argsort(p_cap, kind="stable"):
            p[k] = min(p_cap[k], budget)
            budget -= p[k]
        w = np.full_like(R, w_max)
        return LoadEstimate(w, p, float(w.sum()), False, n_cap)

    def powers(log_mu):
        x = np.maximum(_phi_inverse(a * math.exp(-log_mu)), x_cap)
        w = R / (b * np.log2(1.0 + x))
        return w, w * x / a

    # bracket log(mu): total power decreases as mu grows; start from an equal split
    lo = hi = float(np.median(np.log(a) - np.log(np.maximum(_phi(a * p_max / len(R)), 1e-300))))
    while powers(lo)[1].sum() <= p_max:
        lo -= 10.0
    while powers(hi)[1].sum() > p_max:
        hi += 10.0
    while hi - lo > _MU_RTOL:
        mid = 0.5 * (lo + hi)
        if powers(mid)[1].sum() > p_max:
            lo = mid
        else:
            hi = mid
    w, p = powers(hi)
    n_l = float(w.sum())
    return LoadEstimate(w, p, n_l, True, integer_demand(n_l, n_cap))
