# coding: utf-8

# # Counting rooted forests
#
# Each entry of Q counts weighted spanning rooted forests: q_ij is the weight of
# forests in which i lies in a tree rooted at j, divided by the total weight.
# On small graphs the count can be done exactly with fractions.

# In[1]:

from fractions import Fraction

from forestmetric import graph_model as gm
from forestmetric import oracle
from forestmetric.forest_kernel import accessibility_matrix


# P3 has eight rooted forests: the empty forest, four one-edge forests and the
# whole path rooted at each of its three vertices.

# In[2]:

p3 = gm.path_graph(3)
for f in oracle.enumerate_rooted_forests(p3):
    print(f.edges and [(u, v) for u, v, _ in f.edges], f.roots)


# Exact Q at alpha = 1 against the floating-point kernel.

# In[3]:

exact = oracle.accessibility_matrix_exact(p3, 1)
print([[str(x) for x in row] for row in exact])
print(accessibility_matrix(p3, 1.0).q)
print(oracle.forest_distance_exact(p3, 1, 1, 3))


# ## Connection model
#
# Toss a coin for the source, draw a forest with probability proportional to its
# weight, and call the draw unsuccessful when the source is a root whose tree
# misses the target. The failure rate is the forest distance.

# In[4]:

mc = oracle.simulate_connection_model(p3, 1, 1, 3, samples=100_000, seed=7)
print(mc.estimate, mc.stderr, mc.z_score(0.5))

k2 = gm.complete_graph(2)
mc = oracle.simulate_connection_model(k2, 1, 1, 2, samples=100_000, seed=7)
print(mc.estimate, mc.stderr, mc.z_score(1 / 3))


# ## Forests and trees
#
# Adding a vertex joined to everything with unit weight turns each rooted forest
# into a spanning tree: the roots get wired to the new vertex.

# In[5]:

g = gm.WeightedMultigraph(4, ((1, 2, Fraction(1, 2)), (2, 3, 3), (3, 4, 1), (1, 4, 2)))
print(oracle.forests_trees_bijection_check(g).measures)
