# coding: utf-8

# # Peeling a point set into convex layers
#
# Repeatedly taking the convex hull of whatever is left gives the "onion"
# decomposition. Here we look at a few small sets, including the degenerate
# ones (everything on a line, a lone point in the middle).

# In[1]:

import numpy as np

from onionpeel import convex_hull, convex_layers


# Two nested squares, the smallest interesting case.

# In[2]:

squares = [(2, 2), (-2, 2), (-2, -2), (2, -2), (1, 1), (-1, 1), (-1, -1), (1, -1)]
for k, layer in enumerate(convex_layers(squares), start=1):
    print(k, layer.kind.value, layer.vertex_ids)


# Collinear points on the hull boundary are kept, so a 3x3 grid peels into
# the 8-point ring plus the centre.

# In[3]:

grid = [(x, y) for x in range(3) for y in range(3)]
layers = convex_layers(grid)
print(layers.sizes())
print(convex_hull(grid).vertex_ids)


# All points on one line: a single "segment" layer, ordered end to end.

# In[4]:

line = [(t, 2 * t + 1) for t in (5, 0, 3, 1)]
print(convex_layers(line)[0])


# Random points. The number of layers grows in proportion to n^(2/3), so
# the last column should settle down.

# In[5]:

rng = np.random.default_rng(0)
for n in (10, 100, 1000, 5000):
    pts = rng.uniform(0, 1, size=(n, 2))
    k = len(convex_layers(pts))
    print(n, k, round(k / n ** (2 / 3), 2))
