"""Per-FAP max-min fair time-sharing of the PRBs granted to a FAP.

With the FAP power split evenly over its ``n`` PRBs, user ``k`` gets
``r[k, n] = b log2(1 + p h[k, n] / (sigma^2 Gamma))`` on PRB ``n`` and the
FAP solves the linear program

    maximize    t
    subject to  sum_n c[k, n] r[k, n] >= t R_k    for every user k
                sum_k c[k, n] = 1                 for every PRB n
                c >= 0

where ``c[k, n]`` is the fraction of time PRB ``n`` serves user ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

__all__ = ["RateMatrix", "Allocation", "per_prb_rates", "maxmin_allocate", "achieved_rates"]


@dataclass
class RateMatrix:
    """Achievable rate (bit/s) of each served user on each granted PRB."""

    r: np.ndarray  # (K, n)

    @property
    def n_users(self):
        return self.r.shape[0]

    @property
    def n_prbs(self):
        return self.r.shape[1]


@dataclass
class Allocation:
    c: np.ndarray  # (K, n) time fractions
    t: float  # minimum normalized rate
    weights: np.ndarray | None = None  # optimal dual user weights, sum to 1

    def to_dict(self):
        return {"c": self.c.tolist(), "t": self.t}


def per_prb_rates(gains, n_prbs, p_max, cfg):
    """Rate matrix under an equal power split ``p_max / n_prbs``.

    ``gains`` is ``(K, n_prbs)``. With no PRBs granted the result is an
    empty ``(K, 0)`` matrix.
    """
    gains = np.asarray(gains, dtype=float)
    if n_prbs == 0:
        return RateMatrix(np.zeros((gains.shape[0], 0)))
    if gains.ndim != 2 or gains.shape[1] != n_prbs:
        raise ValueError(f"gains must have shape (K, {n_prbs}), got {gains.shape}")
    p = p_max / n_prbs
    r = cfg.prb_bandwidth_hz * np.log2(1.0 + p * gains / (cfg.noise_w * cfg.snr_gap))
    return RateMatrix(r)


def maxmin_allocate(rates, demands):
    """Solve the max-min normalized-rate LP for one FAP.

    Parameters
    ----------
    rates : RateMatrix or array_like, shape (K, n)
    demands : array_like, shape (K,)
        Required rates ``R_k`` (positive).

    Returns
    -------
    Allocation
        ``c`` columns sum to exactly one; ``t`` is recomputed from the
        returned ``c``.
    """
    r = np.asarray(getattr(rates, "r", rates), dtype=float)
    R = np.asarray(demands, dtype=float)
    K, n = r.shape
    if K == 0:
        raise ValueError("at least one user required")
    if R.shape != (K,) or np.any(R <= 0):
        raise ValueError("demands must be positive, one per user")
    if n == 0:
        return Allocation(np.zeros((K, 0)), 0.0, np.full(K, 1.0 / K))
    q = r / R[:, None]
    scale = q.max()
    if scale <= 0:
        return Allocation(np.full((K, n), 1.0 / K), 0.0, np.full(K, 1.0 / K))
    if K == 1:
        return Allocation(np.ones((1, n)), float(q.sum()), np.ones(1))
    q = q / scale

    # variables: c (row-major K x n), then t
    nv = K * n + 1
    cost = np.zeros(nv)
    cost[-1] = -1.0
    A_ub = np.zeros((K, nv))
    for k in range(K):
        A_ub[k, k * n:(k + 1) * n] = -q[k]
    A_ub[:, -1] = 1.0
    A_eq = np.zeros((n, nv))
    for k in range(K):
        A_eq[np.arange(n), k * n + np.arange(n)] = 1.0
    bounds = [(0, None)] * (K * n) + [(0, None)]
    res = linprog(cost, A_ub=A_ub, b_ub=np.zeros(K), A_eq=A_eq, b_eq=np.ones(n),
                  bounds=bounds, method="highs",
                  options={"primal_feasibility_tolerance": 1e-10,
                           "dual_feasibility_tolerance": 1e-10})
    if res.status != 0:
        raise RuntimeError(f"max-min LP failed: {res.message}")
    c = np.clip(res.x[:-1].reshape(K, n), 0.0, None)
    c /= c.sum(axis=0, keepdims=True)
    t = float((c * q).sum(axis=1).min() * scale)
    weights = -np.asarray(res.ineqlin.marginals, dtype=float)
    s = weights.sum()
    weights = weights / s if s > 0 else np.full(K, 1.0 / K)
    return Allocation(c, t, weights)


def achieved_rates(alloc, rates):
    r = np.asarray(getattr(rates, "r", rates), dtype=float)
    if r.shape[1] == 0:
        return np.zeros(r.shape[0])
    return (alloc.c * r).sum(axis=1)
