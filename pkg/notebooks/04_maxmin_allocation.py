"""
Sharing PRBs inside a FAP
=========================

With power split evenly over the granted PRBs, the FAP picks time fractions
that maximize the worst demand-normalized rate.
"""

# %%
import numpy as np

from femtoalloc.allocation import achieved_rates, maxmin_allocate

r = np.array([[2e6, 1e6, 0.5e6],
              [1e6, 2e6, 0.5e6],
              [0.2e6, 0.2e6, 3e6]])
R = np.array([1e6, 1e6, 2e6])
a = maxmin_allocate(r, R)
print("t =", a.t)
print(np.round(a.c, 3))
print("rates:", achieved_rates(a, r))

# %%
# dual weights show which users pin the optimum
print("weights:", np.round(a.weights, 3))

# %%
# scaling every demand scales t inversely and leaves the rates unchanged
b = maxmin_allocate(r, 10 * R)
print(b.t * 10, a.t, np.allclose(achieved_rates(b, r), achieved_rates(a, r)))
