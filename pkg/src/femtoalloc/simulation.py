"""Monte Carlo harness chaining the three allocation phases.

A trial is identified by two seeds: the topology seed fixes node positions
and per-link large-scale state (wall distance, penetration, shadowing);
the channel seed fixes Rayleigh fading. Seeds are expanded with
:class:`numpy.random.SeedSequence` using a fixed purpose key per random
quantity, so any single trial can be replayed in isolation and sweep
points share topologies (common random numbers across demands).
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .allocation import achieved_rates, maxmin_allocate, per_prb_rates
from .channel import average_gain, draw_fading, draw_link_states
from .coloring import assignment_from_coloring, dsatur_color, expand_graph, greedy_bfs_color
from .config import SystemConfig
from .load import UserDemand, estimate_load
from .topology import assign_users, build_interference_graph, generate_topology, link_distances

__all__ = [
    "SystemConfig",
    "Scenario",
    "Plan",
    "TrialMetrics",
    "TrialRecord",
    "SweepPoint",
    "trial_seeds",
    "make_scenario",
    "make_plan",
    "simulate_trial",
    "run_trial",
    "evaluate_rates_ideal",
    "evaluate_rates_sinr",
    "trial_metrics",
    "aggregate",
    "run_sweep",
]

_POSITIONS, _LINKS, _FADING, _CROSS_FADING = range(4)


def _rng(seed, purpose):
    entropy = list(seed) if isinstance(seed, (tuple, list)) else int(seed)
    return np.random.default_rng(np.random.SeedSequence(entropy, spawn_key=(purpose,)))


def trial_seeds(master_seed, topology_index, draw_index):
    """Topology and channel seeds of trial ``(topology_index, draw_index)``."""
    return (master_seed, topology_index), (master_seed, topology_index, draw_index)


@dataclass
class Scenario:
    """Demand-independent part of a trial."""

    topology: object
    distances: np.ndarray  # (L, K)
    avg_gains: np.ndarray  # (L, K)
    assignment: object
    fap_graph: object


@dataclass
class Plan:
    """Output of load estimation and PRB coloring for one demand level."""

    demands: np.ndarray  # (K,)
    loads: list
    expanded: object
    coloring: object
    prbs: object


@dataclass
class TrialMetrics:
    rates: np.ndarray
    outage_rate: float
    min_rate: float
    max_rate: float


@dataclass
class TrialRecord:
    scenario: Scenario
    plan: Plan
    allocations: list
    ideal_rates: np.ndarray
    rates: np.ndarray
    metrics: TrialMetrics

    def to_dict(self):
        return {
            "topology": self.scenario.topology.to_dict(),
            "assignment": self.scenario.assignment.to_dict(),
            "interference_edges": [list(e) for e in self.scenario.fap_graph.edges()],
            "demands_bps": self.plan.demands.tolist(),
            "loads": [ld.to_dict() for ld in self.plan.loads],
            "coloring": self.plan.coloring.to_dict(),
            "node_owner": self.plan.expanded.owner.tolist(),
            "prbs": self.plan.prbs.to_dict()["prbs"],
            "allocations": [a.to_dict() if a is not None else None for a in self.allocations],
            "ideal_rates_bps": self.ideal_rates.tolist(),
            "rates_bps": self.rates.tolist(),
            "outage_rate": self.metrics.outage_rate,
            "min_rate_bps": self.metrics.min_rate,
            "max_rate_bps": self.metrics.max_rate,
        }


@dataclass
class SweepPoint:
    demand_bps: float
    outage_mean: float
    outage_stderr: float
    min_rate_mean: float
    min_rate_stderr: float
    max_rate_mean: float
    max_rate_stderr: float
    n_trials: int
    seed: int


def make_scenario(cfg, topology_seed, topology=None):
    """Positions, large-scale gains, cell selection and interference graph.

    Pass ``topology`` to reuse fixed positions; the seed then only drives
    the per-link shadowing state.
    """
    topo = generate_topology(cfg, _rng(topology_seed, _POSITIONS)) if topology is None else topology
    dist = link_distances(topo)
    states = draw_link_states(cfg.propagation, dist.shape, _rng(topology_seed, _LINKS))
    gains = average_gain(cfg.propagation, states, dist)
    assignment = assign_users(topo, gains)
    return Scenario(topo, dist, gains, assignment, build_interference_graph(topo))


def make_plan(scenario, cfg, demands=None):
    """Phase 1 per FAP, then Phase 2 at the central server."""
    K = scenario.topology.n_users
    demands = np.full(K, cfg.demand_bps) if demands is None else np.asarray(demands, dtype=float)
    p_max = cfg.p_max_w
    loads = []
    for l, users in enumerate(scenario.assignment.served_users):
        udem = [UserDemand(demands[k], scenario.avg_gains[l, k]) for k in users]
        loads.append(estimate_load(udem, p_max, cfg))
    expanded = expand_graph(scenario.fap_graph, [ld.n_l_int for ld in loads])
    color = dsatur_color if cfg.coloring_strategy == "dsatur" else greedy_bfs_color
    coloring = color(expanded, cfg.n_prbs_femto)
    return Plan(demands, loads, expanded, coloring, assignment_from_coloring(expanded, coloring))


def _fap_powers(prbs, p_max):
    counts = prbs.counts()
    return np.where(counts > 0, p_max / np.maximum(counts, 1), 0.0)


def evaluate_rates_ideal(scenario, plan, fading, cfg):
    """Phase 3 at every FAP under noise-only rates.

    Returns the per-user rates and the list of per-FAP allocations (None
    for FAPs without users).
    """
    K = scenario.topology.n_users
    rates = np.zeros(K)
    allocations = []
    p_max = cfg.p_max_w
    for l, users in enumerate(scenario.assignment.served_users):
        if len(users) == 0:
            allocations.append(None)
            continue
        prbs = plan.prbs.prbs[l]
        h = scenario.avg_gains[l, users][:, None] * fading[np.ix_(users, prbs)]
        rm = per_prb_rates(h, len(prbs), p_max, cfg)
        alloc = maxmin_allocate(rm, plan.demands[users])
        allocations.append(alloc)
        rates[users] = achieved_rates(alloc, rm)
    return rates, allocations


def evaluate_rates_sinr(scenario, plan, allocations, fading, cross_fading, cfg):
    """Re-evaluate rates with co-channel interference from every other FAP.

    The time fractions come from the noise-only solution. ``cross_fading``
    is ``(L, K, N)``; entries of serving links are ignored (``fading``
    covers those). FAPs farther than ``cfg.sinr_cutoff_m`` from a user are
    ignored when the cutoff is positive.
    """
    L, K = scenario.avg_gains.shape
    N = cfg.n_prbs_femto
    serving = scenario.assignment.serving_fap
    usage = np.zeros((L, N))
    for l, prbs in enumerate(plan.prbs.prbs):
        usage[l, prbs] = 1.0
    p = _fap_powers(plan.prbs, cfg.p_max_w)
    weight = p[:, None] * scenario.avg_gains
    weight[serving, np.arange(K)] = 0.0
    if cfg.sinr_cutoff_m > 0:
        weight[scenario.distances > cfg.sinr_cutoff_m] = 0.0
    interference = np.einsum("ik,in,ikn->kn", weight, usage, cross_fading)
    noise = cfg.noise_w
    b = cfg.prb_bandwidth_hz
    rates = np.zeros(K)
    for l, users in enumerate(scenario.assignment.served_users):
        prbs = plan.prbs.prbs[l]
        if len(users) == 0 or len(prbs) == 0:
            continue
        sig = p[l] * scenario.avg_gains[l, users][:, None] * fading[np.ix_(users, prbs)]
        sinr = sig / (interference[np.ix_(users, prbs)] + noise)
        r = b * np.log2(1.0 + sinr / cfg.snr_gap)
        rates[users] = (allocations[l].c * r).sum(axis=1)
    return rates


def trial_metrics(rates, demands, outage_fraction):
    rates = np.asarray(rates, dtype=float)
    if len(rates) == 0:
        return TrialMetrics(rates, 0.0, 0.0, 0.0)
    outage = float(np.mean(rates < outage_fraction * np.asarray(demands)))
    return TrialMetrics(rates, outage, float(rates.min()), float(rates.max()))


def _evaluate(scenario, plan, cfg, channel_seed):
    K = scenario.topology.n_users
    N = cfg.n_prbs_femto
    fading = draw_fading(N, _rng(channel_seed, _FADING), size=(K,))
    ideal, allocations = evaluate_rates_ideal(scenario, plan, fading, cfg)
    rates = ideal
    if cfg.eval_mode == "sinr":
        L = scenario.topology.n_faps
        cross = draw_fading(N, _rng(channel_seed, _CROSS_FADING), size=(L, K))
        rates = evaluate_rates_sinr(scenario, plan, allocations, fading, cross, cfg)
    metrics = trial_metrics(rates, plan.demands, cfg.outage_fraction)
    return TrialRecord(scenario, plan, allocations, ideal, rates, metrics)


def simulate_trial(cfg, topology_seed, channel_seed):
    """Full pipeline for one trial, keeping every intermediate result."""
    scenario = make_scenario(cfg, topology_seed)
    plan = make_plan(scenario, cfg)
    return _evaluate(scenario, plan, cfg, channel_seed)


def run_trial(cfg, topology_seed, channel_seed):
    return simulate_trial(cfg, topology_seed, channel_seed).metrics


def _stderr(x):
    x = np.asarray(x, dtype=float)
    return float(x.std(ddof=1) / math.sqrt(len(x))) if len(x) > 1 else 0.0


def aggregate(trials, cfg, demand_bps=None):
    """Average per-trial outage, minimum and maximum rate."""
    if not trials:
        raise ValueError("no trials to aggregate")
    out = [t.outage_rate for t in trials]
    lo = [t.min_rate for t in trials]
    hi = [t.max_rate for t in trials]
    return SweepPoint(
        demand_bps=float(cfg.demand_bps if demand_bps is None else demand_bps),
        outage_mean=float(np.mean(out)),
        outage_stderr=_stderr(out),
        min_rate_mean=float(np.mean(lo)),
        min_rate_stderr=_stderr(lo),
        max_rate_mean=float(np.mean(hi)),
        max_rate_stderr=_stderr(hi),
        n_trials=len(trials),
        seed=cfg.master_seed,
    )


def _topology_task(args):
    cfg, demands, i = args
    scenario = make_scenario(cfg, trial_seeds(cfg.master_seed, i, 0)[0])
    out = []
    for demand in demands:
        c = dataclasses.replace(cfg, demand_bps=float(demand))
        plan = make_plan(scenario, c)
        out.append([_evaluate(scenario, plan, c, trial_seeds(cfg.master_seed, i, j)[1]).metrics
                    for j in range(cfg.n_channel_draws)])
    return out


def run_sweep(cfg, demands, jobs=1):
    """Sweep the per-user demand, averaging over topologies and fading.

    Returns one :class:`SweepPoint` per demand. Results do not depend on
    ``jobs``.
    """
    demands = [float(d) for d in demands]
    tasks = [(cfg, demands, i) for i in range(cfg.n_topologies)]
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            per_topo = list(ex.map(_topology_task, tasks))
    else:
        per_topo = [_topology_task(t) for t in tasks]
    points = []
    for d_idx, demand in enumerate(demands):
        trials = [m for topo in per_topo for m in topo[d_idx]]
        points.append(aggregate(trials, cfg, demand))
    return points
