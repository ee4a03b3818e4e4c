"""PRB assignment to FAPs by coloring a demand-expanded interference graph.

FAP ``l`` with integer demand ``n_l`` is replaced by ``n_l`` mutually
adjacent nodes; nodes of two interfering FAPs are fully connected. Each
color is one PRB, so a proper coloring hands out PRBs without reuse
between interfering FAPs. Nodes are numbered round-robin across FAPs
(round 0 of every FAP first, then round 1, ...) so that lowest-index
tie-breaking does not favour a single FAP.

The expanded graph is dense (a FAP requesting 50 PRBs next to ten others
doing the same contributes ~25k edges), so :func:`dsatur_color` and
:func:`greedy_bfs_color` work directly on the FAP-level structure when
given an :class:`ExpandedGraph`: all uncolored nodes of one FAP share the
same neighbourhood, hence the same saturation and degree. On plain
adjacency lists they run the textbook node-level algorithms; the two
paths produce identical colorings.
"""

from __future__ import annotations

import heapq
import itertools
import json
from collections import deque
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ExpandedGraph",
    "Coloring",
    "PRBAssignment",
    "expand_graph",
    "dsatur_color",
    "greedy_bfs_color",
    "chromatic_oracle",
    "assignment_from_coloring",
    "is_proper",
    "n_colors_used",
    "ORACLE_MAX_NODES",
]

ORACLE_MAX_NODES = 12


@dataclass
class ExpandedGraph:
    """Clique-expanded interference graph.

    Attributes
    ----------
    owner : numpy.ndarray
        FAP index of every node.
    rank : numpy.ndarray
        Position of every node within its FAP's clique.
    fap_graph : InterferenceGraph
        The underlying FAP-level graph.
    fap_nodes : list of list of int
        Node indices per FAP, increasing.
    """

    owner: np.ndarray
    rank: np.ndarray
    fap_graph: object
    fap_nodes: list

    @property
    def n_nodes(self):
        return len(self.owner)

    def degree(self, v):
        l = self.owner[v]
        return len(self.fap_nodes[l]) - 1 + sum(len(self.fap_nodes[m]) for m in self.fap_graph.neighbors[l])

    def adjacency(self):
        """Materialize node-level neighbour sets (small graphs only)."""
        adj = [set() for _ in range(self.n_nodes)]
        for l, nodes in enumerate(self.fap_nodes):
            closed = list(nodes)
            for m in self.fap_graph.neighbors[l]:
                closed.extend(self.fap_nodes[m])
            for v in nodes:
                adj[v].update(closed)
                adj[v].discard(v)
        return adj

    def n_edges(self):
        intra = sum(len(n) * (len(n) - 1) // 2 for n in self.fap_nodes)
        inter = sum(len(self.fap_nodes[i]) * len(self.fap_nodes[j]) for i, j in self.fap_graph.edges())
        return intra + inter


@dataclass
class Coloring:
    """Per-node color; ``-1`` marks a node left uncolored."""

    color: np.ndarray
    palette: int

    @property
    def n_colored(self):
        return int(np.count_nonzero(self.color >= 0))

    def to_dict(self):
        return {"palette": self.palette, "color": self.color.tolist()}


@dataclass
class PRBAssignment:
    prbs: list  # sorted PRB index lists, one per FAP

    def counts(self):
        return np.array([len(p) for p in self.prbs], dtype=int)

    def to_dict(self):
        return {"prbs": [list(map(int, p)) for p in self.prbs]}

    def to_json(self):
        return json.dumps(self.to_dict())


def expand_graph(fap_graph, demands):
    """Build the clique expansion for integer per-FAP demands."""
    demands = [int(d) for d in demands]
    if len(demands) != fap_graph.n:
        raise ValueError("one demand per FAP required")
    if any(d < 0 for d in demands):
        raise ValueError("demands must be non-negative")
    owner, rank = [], []
    fap_nodes = [[] for _ in demands]
    for r in range(max(demands, default=0)):
        for l, d in enumerate(demands):
            if r < d:
                fap_nodes[l].append(len(owner))
                owner.append(l)
                rank.append(r)
    return ExpandedGraph(np.array(owner, dtype=int), np.array(rank, dtype=int), fap_graph, fap_nodes)


def _lowest_free(mask, palette):
    c = ((~mask) & (mask + 1)).bit_length() - 1
    return c if c < palette else -1


def _as_adjacency(g):
    if isinstance(g, ExpandedGraph):
        return g.adjacency()
    return [set(nb) for nb in g]


def dsatur_color(g, palette):
    """Brélaz DSATUR coloring restricted to ``palette`` colors.

    Repeatedly picks the uncolored node with the most distinct neighbour
    colors (ties: larger degree, then lower index) and gives it the
    smallest color not used by its neighbours. A node whose neighbours
    already use every palette color stays uncolored.

    Parameters
    ----------
    g : ExpandedGraph or sequence of iterables
        Either an expanded graph or plain adjacency lists.
    palette : int
    """
    if palette < 1:
        raise ValueError("palette must be >= 1")
    if isinstance(g, ExpandedGraph):
        return _dsatur_expanded(g, palette)
    adj = _as_adjacency(g)
    n = len(adj)
    color = np.full(n, -1, dtype=int)
    seen = [0] * n
    deg = [len(a) for a in adj]
    done = [False] * n
    # lazy max-heap keyed on (saturation, degree, -index)
    heap = [(0, -deg[v], v) for v in range(n)]
    heapq.heapify(heap)
    sat = [0] * n
    while heap:
        s, _, v = heapq.heappop(heap)
        if done[v] or -s != sat[v]:
            continue
        done[v] = True
        c = _lowest_free(seen[v], palette)
        if c < 0:
            continue
        color[v] = c
        bit = 1 << c
        for u in adj[v]:
            if not done[u] and not seen[u] & bit:
                seen[u] |= bit
                sat[u] += 1
                heapq.heappush(heap, (-sat[u], -deg[u], u))
    return Coloring(color, palette)


def _dsatur_expanded(g, palette):
    fg = g.fap_graph
    L = fg.n
    color = np.full(g.n_nodes, -1, dtype=int)
    size = [len(n) for n in g.fap_nodes]
    deg = [size[l] - 1 + sum(size[m] for m in fg.neighbors[l]) for l in range(L)]
    closed = [(l,) + fg.neighbors[l] for l in range(L)]
    seen = [0] * L  # colors present in the closed neighbourhood of each FAP
    nxt = [0] * L  # next uncolored position in each FAP's node list
    sat = [0] * L
    heap = [(0, -deg[l], g.fap_nodes[l][0], l) for l in range(L) if size[l]]
    heapq.heapify(heap)
    while heap:
        s, _, v, l = heapq.heappop(heap)
        if -s != sat[l] or nxt[l] >= size[l] or g.fap_nodes[l][nxt[l]] != v:
            continue
        nxt[l] += 1
        c = _lowest_free(seen[l], palette)
        if c >= 0:
            color[v] = c
            bit = 1 << c
            for m in closed[l]:
                if not seen[m] & bit:
                    seen[m] |= bit
                    sat[m] += 1
                    if nxt[m] < size[m] and m != l:
                        heapq.heappush(heap, (-sat[m], -deg[m], g.fap_nodes[m][nxt[m]], m))
        if nxt[l] < size[l]:
            heapq.heappush(heap, (-sat[l], -deg[l], g.fap_nodes[l][nxt[l]], l))
    return Coloring(color, palette)


def greedy_bfs_color(g, palette):
    """Greedy coloring in breadth-first order.

    Each connected component is traversed from its lowest-index node,
    neighbours are queued in increasing index order, and every visited
    node takes the smallest palette color not used by an already colored
    neighbour (or stays uncolored if none is left). Linear in ``|V|+|E|``.
    """
    if palette < 1:
        raise ValueError("palette must be >= 1")
    if isinstance(g, ExpandedGraph):
        return _bfs_expanded(g, palette)
    adj = [sorted(a) for a in _as_adjacency(g)]
    n = len(adj)
    color = np.full(n, -1, dtype=int)
    queued = [False] * n
    for s in range(n):
        if queued[s]:
            continue
        queued[s] = True
        q = deque([s])
        while q:
            v = q.popleft()
            mask = 0
            for u in adj[v]:
                if color[u] >= 0:
                    mask |= 1 << int(color[u])
                elif not queued[u]:
                    queued[u] = True
                    q.append(u)
            color[v] = _lowest_free(mask, palette)
    return Coloring(color, palette)


def _bfs_expanded(g, palette):
    fg = g.fap_graph
    color = np.full(g.n_nodes, -1, dtype=int)
    closed = [(l,) + fg.neighbors[l] for l in range(fg.n)]
    seen = [0] * fg.n
    queued = np.zeros(g.n_nodes, dtype=bool)
    expanded = [False] * fg.n  # all of a FAP's neighbours-by-FAP have been queued
    for s in range(g.n_nodes):
        if queued[s]:
            continue
        queued[s] = True
        q = deque([s])
        while q:
            v = q.popleft()
            l = g.owner[v]
            if not expanded[l]:
                expanded[l] = True
                new = [u for m in closed[l] for u in g.fap_nodes[m] if not queued[u]]
                new.sort()
                queued[new] = True
                q.extend(new)
            c = _lowest_free(seen[l], palette)
            if c >= 0:
                color[v] = c
                bit = 1 << c
                for m in closed[l]:
                    seen[m] |= bit
    return Coloring(color, palette)


def chromatic_oracle(g):
    """Exact chromatic number by exhaustive search (test oracle).

    Refuses graphs above :data:`ORACLE_MAX_NODES` nodes.
    """
    adj = [sorted(a) for a in _as_adjacency(g)]
    n = len(adj)
    if n > ORACLE_MAX_NODES:
        raise ValueError(f"chromatic_oracle is limited to {ORACLE_MAX_NODES} nodes, got {n}")
    if n == 0:
        return 0
    order = sorted(range(n), key=lambda v: -len(adj[v]))

    def colorable(k):
        col = [-1] * n

        def place(i):
            if i == n:
                return True
            v = order[i]
            used = {col[u] for u in adj[v]}
            # symmetry breaking: never open more than one new color at a time
            top = max(col) + 1
            for c in range(min(k, top + 1)):
                if c not in used:
                    col[v] = c
                    if place(i + 1):
                        return True
                    col[v] = -1
            return False

        return place(0)

    for k in itertools.count(1):
        if colorable(k):
            return k


def is_proper(g, coloring):
    """True if no edge joins two nodes of the same color."""
    c = np.asarray(coloring.color if isinstance(coloring, Coloring) else coloring)
    if np.any(c >= getattr(coloring, "palette", np.inf)):
        return False
    if isinstance(g, ExpandedGraph):
        fg = g.fap_graph
        for l, nodes in enumerate(g.fap_nodes):
            cols = c[nodes]
            cols = cols[cols >= 0]
            if len(set(cols.tolist())) != len(cols):
                return False
        for i, j in fg.edges():
            a = set(c[g.fap_nodes[i]].tolist()) - {-1}
            b = set(c[g.fap_nodes[j]].tolist()) - {-1}
            if a & b:
                return False
        return True
    for v, nb in enumerate(g):
        if c[v] < 0:
            continue
        if any(c[u] == c[v] for u in nb):
            return False
    return True


def n_colors_used(coloring):
    c = coloring.color
    return len(set(c[c >= 0].tolist()))


def assignment_from_coloring(g, coloring):
    """Each FAP receives the colors (PRBs) of its colored nodes."""
    prbs = []
    for nodes in g.fap_nodes:
        cols = coloring.color[nodes] if nodes else np.zeros(0, dtype=int)
        prbs.append(sorted(int(c) for c in cols if c >= 0))
    return PRBAssignment(prbs)
