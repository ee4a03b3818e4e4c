"""
PRB assignment by graph coloring
================================

Every FAP becomes a clique of as many nodes as PRBs it asked for; a proper
coloring of that expanded graph is a conflict-free PRB plan.
"""

# %%
from femtoalloc.coloring import (assignment_from_coloring, chromatic_oracle, dsatur_color,
                                 expand_graph, greedy_bfs_color, n_colors_used)
from femtoalloc.topology import InterferenceGraph

# FAP 0 asks for one PRB and interferes with FAPs 1 and 2, which ask for three each
g = expand_graph(InterferenceGraph(3, [(0, 1), (0, 2)]), [1, 3, 3])
print("nodes:", g.n_nodes, "edges:", g.n_edges())

# %%
for name, color in (("dsatur", dsatur_color), ("bfs", greedy_bfs_color)):
    c = color(g, 50)
    print(name, n_colors_used(c), "colors", assignment_from_coloring(g, c).prbs)
print("exact:", chromatic_oracle(g))

# %%
# with a short palette some requests go unserved; the grant is never more than asked
c = dsatur_color(g, 3)
print("colored", c.n_colored, "of", g.n_nodes, "->", assignment_from_coloring(g, c).counts())
