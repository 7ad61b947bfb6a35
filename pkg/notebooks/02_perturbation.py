# coding: utf-8

# # Single-edge updates
#
# Changing the weight of one pair (k, t) by eps changes Q by a rank-one term.
# The update costs O(n^2) and needs no refactorization.

# In[1]:

import time
from fractions import Fraction

import numpy as np

from forestmetric import graph_model as gm
from forestmetric.forest_kernel import accessibility_matrix
from forestmetric.perturbation import (
    EdgeDelta,
    ForestState,
    apply_edge_delta,
    endpoint_reciprocal_identity,
    predict,
    profile_ratio,
    recompute_defects,
)

np.set_printoptions(precision=4, suppress=True)


# Close the path 1-2-3 into a triangle by adding edge (1, 3) with weight 1.

# In[2]:

p3 = gm.path_graph(3)
delta = EdgeDelta(1, 3, 1)
before = ForestState.of(p3, 1.0)
pred = predict(before, delta)
print(pred.dq)
print(pred.dq[0, 2])  # 0.125


# Compare with a full recomputation.

# In[3]:

print(recompute_defects(p3, delta, 1.0))


# The reciprocal of rho at the endpoints moves by exactly eps, and with eps = 1
# the change in rho_13 is -rho rho'.

# In[4]:

after = ForestState.of(apply_edge_delta(p3, delta), 1.0)
print(endpoint_reciprocal_identity(before.rho, after.rho, delta).measures)
print(after.rho[1, 3], 1 / (1 / before.rho[1, 3] + 1))


# Both profiles with respect to (k, t) are scaled by the same factor
# d'_kt / d_kt = 1 / (1 + eps rho_kt).

# In[5]:

chain = profile_ratio(before, after, 1, 3, delta.eps)
print(chain.ratio, chain.defects)


# Removing weight uses a negative eps. Here half of edge (2, 3) is taken away.

# In[6]:

g = gm.WeightedMultigraph(4, ((1, 2, 1), (2, 3, 2), (3, 4, 1), (1, 4, Fraction(1, 2))))
print(recompute_defects(g, EdgeDelta(2, 3, -1), 0.5))


# Timing on 200 vertices.

# In[7]:

rng = np.random.default_rng(0)
big = gm.random_multigraph(rng, 200, 0.05, connected=True, rational=False)
state = ForestState.of(big, 1.0)
step = EdgeDelta(3, 120, 2.0)

start = time.perf_counter()
predict(state, step)
fast = time.perf_counter() - start

start = time.perf_counter()
accessibility_matrix(apply_edge_delta(big, step), 1.0)
slow = time.perf_counter() - start
print(f"update {fast * 1e3:.2f} ms, refactorization {slow * 1e3:.2f} ms")
