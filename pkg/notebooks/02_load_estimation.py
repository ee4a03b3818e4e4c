"""
How many PRBs does a FAP need?
==============================

Each FAP sizes its request by minimizing the total (fractional) number of
subchannels that meets every user's demand under the power budget.
"""

# %%
import numpy as np

from femtoalloc import SystemConfig
from femtoalloc.load import UserDemand, estimate_load, min_subchannels, rate_given

cfg = SystemConfig()
p_max = cfg.p_max_w

# %%
# one user, all the power: a 1 Mbps demand at a decent channel
u = UserDemand(1e6, 1e-9)
w = min_subchannels(p_max, u, cfg)
print("w =", w, " rate at w:", rate_given(w, p_max, u.avg_gain, cfg))

# %%
# a weak and a strong user share the budget; the weak one gets more power
users = [UserDemand(2e6, 1e-11), UserDemand(2e6, 1e-9)]
est = estimate_load(users, p_max, cfg)
print("w:", est.w, "p:", est.p)
print("N_l = %.4f -> request %d PRBs" % (est.n_l, est.n_l_int))

# %%
# the request grows with the demand until the FAP cannot keep up
for R in (1e6, 4e6, 16e6, 64e6):
    est = estimate_load([UserDemand(R, g) for g in (1e-11, 1e-10, 1e-9)], p_max, cfg)
    print(f"{R / 1e6:5.0f} Mbps  N_l={est.n_l:8.3f}  request={est.n_l_int:3d}  feasible={est.feasible}")

# %%
# an infeasible FAP asks for everything and reports best effort
est = estimate_load([UserDemand(1e9, 1e-10)], p_max, cfg)
print(est.feasible, est.n_l_int, np.round(est.p, 4))
