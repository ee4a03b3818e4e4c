"""Random placement of FAPs and users, cell selection and the FAP
interference graph."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .config import ConfigError

__all__ = [
    "Topology",
    "CellAssignment",
    "InterferenceGraph",
    "node_counts",
    "uniform_disk",
    "generate_topology",
    "link_distances",
    "assign_users",
    "build_interference_graph",
]


@dataclass
class Topology:
    cell_radius_m: float
    fap_positions: np.ndarray  # (L, 2)
    user_positions: np.ndarray  # (K, 2)
    coverage_radius_m: float

    @property
    def n_faps(self):
        return len(self.fap_positions)

    @property
    def n_users(self):
        return len(self.user_positions)

    def to_dict(self):
        return {
            "cell_radius_m": self.cell_radius_m,
            "coverage_radius_m": self.coverage_radius_m,
            "fap_positions": self.fap_positions.tolist(),
            "user_positions": self.user_positions.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            cell_radius_m=float(d["cell_radius_m"]),
            fap_positions=np.asarray(d["fap_positions"], dtype=float).reshape(-1, 2),
            user_positions=np.asarray(d["user_positions"], dtype=float).reshape(-1, 2),
            coverage_radius_m=float(d["coverage_radius_m"]),
        )

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, s):
        return cls.from_dict(json.loads(s))


@dataclass
class CellAssignment:
    serving_fap: np.ndarray  # (K,) int
    served_users: list  # list of int arrays, one per FAP

    def to_dict(self):
        return {
            "serving_fap": self.serving_fap.tolist(),
            "served_users": [s.tolist() for s in self.served_users],
        }


class InterferenceGraph:
    """Undirected simple graph over FAP indices."""

    def __init__(self, n, edges=()):
        self.n = int(n)
        nbrs = [set() for _ in range(self.n)]
        for i, j in edges:
            if i == j:
                raise ValueError("self-loops are not allowed")
            nbrs[i].add(j)
            nbrs[j].add(i)
        self.neighbors = [tuple(sorted(s)) for s in nbrs]

    @classmethod
    def from_matrix(cls, adj):
        adj = np.asarray(adj, dtype=bool)
        ii, jj = np.nonzero(np.triu(adj, 1))
        return cls(adj.shape[0], zip(ii.tolist(), jj.tolist()))

    def edges(self):
        return [(i, j) for i in range(self.n) for j in self.neighbors[i] if i < j]

    def has_edge(self, i, j):
        return j in self.neighbors[i]

    def degree(self, i):
        return len(self.neighbors[i])

    def matrix(self):
        a = np.zeros((self.n, self.n), dtype=bool)
        for i, j in self.edges():
            a[i, j] = a[j, i] = True
        return a

    def __repr__(self):
        return f"InterferenceGraph(n={self.n}, edges={len(self.edges())})"


def node_counts(cfg):
    """Number of FAPs and users for the configured densities."""
    area = np.pi * cfg.cell_radius_m ** 2
    n_faps = int(round(cfg.fap_density_per_m2 * area))
    n_users = int(round(cfg.user_density_multiplier * cfg.fap_density_per_m2 * area))
    return n_faps, n_users


def uniform_disk(n, radius, rng):
    """``n`` points uniform over a disk (polar sampling, sqrt radius)."""
    r = radius * np.sqrt(rng.random(n))
    theta = 2.0 * np.pi * rng.random(n)
    return np.column_stack((r * np.cos(theta), r * np.sin(theta)))


def generate_topology(cfg, rng):
    n_faps, n_users = node_counts(cfg)
    if n_faps == 0:
        raise ConfigError(
            f"fap density {cfg.fap_density_per_m2} over radius {cfg.cell_radius_m} m yields no FAPs")
    faps = uniform_disk(n_faps, cfg.cell_radius_m, rng)
    users = uniform_disk(n_users, cfg.cell_radius_m, rng)
    return Topology(cfg.cell_radius_m, faps, users, cfg.coverage_radius_m)


def link_distances(topo):
    """Euclidean FAP-to-user distance matrix, shape ``(L, K)``."""
    diff = topo.fap_positions[:, None, :] - topo.user_positions[None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1])


def assign_users(topo, avg_gains):
    """Attach every user to the FAP with the largest average gain.

    All FAPs share the same transmit power, so the strongest average
    received power is the argmax of the gain. Ties go to the lowest index.
    """
    avg_gains = np.asarray(avg_gains, dtype=float)
    n_faps = topo.n_faps
    if avg_gains.shape != (n_faps, topo.n_users):
        raise ValueError(f"avg_gains must have shape {(n_faps, topo.n_users)}, got {avg_gains.shape}")
    if topo.n_users == 0:
        serving = np.zeros(0, dtype=int)
    else:
        serving = np.argmax(avg_gains, axis=0)
    served = [np.flatnonzero(serving == l) for l in range(n_faps)]
    return CellAssignment(serving, served)


def build_interference_graph(topo):
    """Connect FAP pairs closer than twice the coverage radius."""
    if topo.coverage_radius_m <= 0:
        raise ValueError("coverage_radius_m must be positive")
    p = topo.fap_positions
    diff = p[:, None, :] - p[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    adj = dist <= 2.0 * topo.coverage_radius_m
    np.fill_diagonal(adj, False)
    return InterferenceGraph.from_matrix(adj)
