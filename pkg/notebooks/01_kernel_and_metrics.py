# coding: utf-8

# # Forest kernel and forest distances
#
# The accessibility matrix Q = (I + alpha L)^-1 of a weighted multigraph, the two
# forest distances built from it, and the bounds they satisfy.

# In[1]:

import numpy as np

from forestmetric import graph_model as gm
from forestmetric.forest_kernel import accessibility_matrix, validate_doubly_stochastic
from forestmetric.metrics import (
    adjusted_forest_distance_matrix,
    bounds_report,
    cumulative_weight_matrix,
    forest_distance_matrix,
)

np.set_printoptions(precision=4, suppress=True)


# A path on three vertices, unit weights. Edge lists are plain text: a header
# line `n=<vertices>` then one `u v w` line per edge.

# In[2]:

p3 = gm.parse_edge_list("n=3\n1 2 1\n2 3 1\n")
print(gm.build_laplacian(p3))


# At alpha = 1 the kernel is (1/8)[[5,2,1],[2,4,2],[1,2,5]]. Rows sum to one.

# In[3]:

q = accessibility_matrix(p3, 1.0)
print(q.q * 8)
print(validate_doubly_stochastic(q).measures)


# Forest distance d and its rescaled form rho = 2 alpha d. The end vertices are
# 1/2 apart; neighbours 5/16.

# In[4]:

d = forest_distance_matrix(q)
rho = adjusted_forest_distance_matrix(q)
print(d.d)
print(rho.d)


# Cumulative connection weight theta = 1/rho - 1/(2 alpha). Vertices 1 and 3 are
# not adjacent, yet theta_13 = 1/2: they are connected through vertex 2.

# In[5]:

print(cumulative_weight_matrix(rho))


# Every upper bound holds with nonnegative slack. For K2 both the connectivity
# bound and the pair-weight bound are attained.

# In[6]:

k2 = gm.complete_graph(2)
qk = accessibility_matrix(k2, 1.0)
rep = bounds_report(k2, qk, forest_distance_matrix(qk), adjusted_forest_distance_matrix(qk))
print(rep.summary())
print(rep.tight_pairs("d_connectivity"))

# Raising alpha shrinks every distance toward the large-alpha limit.

# In[7]:

for alpha in (0.1, 1.0, 10.0, 100.0):
    print(alpha, forest_distance_matrix(accessibility_matrix(p3, alpha))[1, 3])
