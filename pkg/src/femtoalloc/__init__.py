"""Hierarchical PRB allocation for open-access femtocell networks.

The pipeline has three stages: each FAP estimates how many PRBs its users
need from average channel gains (:mod:`femtoalloc.load`), a central server
colors the load-expanded interference graph to hand out PRBs
(:mod:`femtoalloc.coloring`), and each FAP time-shares its PRBs among its
users with a max-min fair linear program (:mod:`femtoalloc.allocation`).
:mod:`femtoalloc.simulation` wraps the stages in a Monte Carlo harness.
"""

from .allocation import Allocation, RateMatrix, achieved_rates, maxmin_allocate, per_prb_rates
from .channel import (LinkShadowState, NoiseParams, PropagationParams, average_gain, draw_fading,
                      noise_power_w, path_loss_db)
from .coloring import (Coloring, ExpandedGraph, PRBAssignment, assignment_from_coloring,
                       chromatic_oracle, dsatur_color, expand_graph, greedy_bfs_color)
from .config import ConfigError, SystemConfig
from .load import LoadEstimate, UserDemand, estimate_load, integer_demand, min_subchannels, rate_given
from .simulation import SweepPoint, TrialMetrics, aggregate, run_sweep, run_trial, simulate_trial
from .topology import (CellAssignment, InterferenceGraph, Topology, assign_users,
                       build_interference_graph, generate_topology)

__version__ = "0.1.0"
