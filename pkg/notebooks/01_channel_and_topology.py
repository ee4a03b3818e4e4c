"""
Channels and topology
=====================

Drop FAPs and users in a cell, attach each user to its strongest FAP and
build the interference graph.
"""

# %%
import numpy as np

from femtoalloc import SystemConfig
from femtoalloc.channel import PropagationParams, path_loss_db, dbm_to_watts, noise_power_w
from femtoalloc.simulation import make_scenario

# path loss of a user 15 m away, 5 m inside the house, behind a window, 3 dB lucky shadowing
print(path_loss_db(5.0, 15.0, 3.0, -3.0))

# %%
cfg = SystemConfig(cell_radius_m=50.0, fap_density_per_m2=1 / 200)
print("noise per PRB:", noise_power_w(cfg.noise), "W")
print("P_max:", dbm_to_watts(cfg.p_max_dbm), "W")

# %%
# a scenario is everything that does not depend on the demand
sc = make_scenario(cfg, (0, 0))
topo = sc.topology
print(f"{topo.n_faps} FAPs, {topo.n_users} users")
print("users per FAP:", [len(u) for u in sc.assignment.served_users])
print("interference edges:", len(sc.fap_graph.edges()))

# %%
# median average gain of serving links, in dB
serving = sc.avg_gains[sc.assignment.serving_fap, np.arange(topo.n_users)]
print("median serving gain: %.1f dB" % (10 * np.log10(np.median(serving))))

# %%
# shadowing can be turned off to see pure distance-based attachment
flat = SystemConfig(cell_radius_m=50.0, fap_density_per_m2=1 / 200,
                    propagation=PropagationParams(shadow_sigma_db=0.0))
print(make_scenario(flat, (0, 0)).assignment.serving_fap[:10])
