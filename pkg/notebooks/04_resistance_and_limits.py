# coding: utf-8

# # Resistance distance and the two limits
#
# As alpha grows, rho approaches the resistance distance.  As alpha shrinks, d
# approaches the discrete metric.  Graphs with several components keep a
# finite forest distance between components in the large-alpha limit.

# In[1]:

import numpy as np

from forestmetric import graph_model as gm
from forestmetric.resistance_limits import (
    alpha_extension_identity_check,
    limit_forest_distance,
    limit_large_alpha,
    limit_small_alpha,
    resistance_distance_matrix,
)

np.set_printoptions(precision=4, suppress=True)


# A unit triangle: one resistor in parallel with two in series gives 2/3.

# In[2]:

print(resistance_distance_matrix(gm.complete_graph(3)).as_array())


# Across components the resistance is infinite.

# In[3]:

g = gm.disjoint_union(gm.complete_graph(2), gm.edgeless(1))
print(resistance_distance_matrix(g).as_array())


# On K2, rho = 2 alpha / (1 + 2 alpha) so the defect is 1 / (1 + 2 alpha).

# In[4]:

rep = limit_large_alpha(gm.complete_graph(2), [1, 10, 100, 1000])
for rec in rep.records:
    print(rec.alpha, rec.max_defect_rho)


# For K2 plus an isolated vertex, d between components tends to (1/2)(1/2 + 1/1) = 3/4.

# In[5]:

print(limit_forest_distance(g))
for rec in limit_large_alpha(g, [1e2, 1e4, 1e6]).records:
    print(rec.alpha, rec.max_defect_d, rec.theta_cross_max)


# Small alpha: the defect from the discrete metric drops linearly.

# In[6]:

for rec in limit_small_alpha(gm.path_graph(3), [1e-2, 1e-4, 1e-6]).records:
    print(rec.alpha, rec.max_defect_d)


# Joining a new vertex to every vertex with weight 1/alpha gives a graph whose
# resistance equals 2 d on the original vertices.

# In[7]:

rng = np.random.default_rng(1)
h = gm.random_multigraph(rng, 8, 0.3, rational=False)
print(alpha_extension_identity_check(h, 2.5).measures)
