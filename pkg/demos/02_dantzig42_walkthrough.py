# coding: utf-8

# # The 42-city instance, layer by layer
#
# The bundled instance carries a road-distance table plus display
# coordinates. Layers come from the coordinates, lengths from the table.

# In[1]:

from onionpeel import (
    detour_flags,
    farthest_insertion_tour,
    greedy_edge_tour,
    load_dantzig42,
    load_dantzig42_opt_tour,
    nearest_neighbor_tour,
    onion_solve,
)

inst = load_dantzig42()
opt = load_dantzig42_opt_tour(inst)
print(inst.n, "cities; optimum", opt.length)


# In[2]:

report = onion_solve(inst)
print("layer sizes:", report.layers.sizes())
for stage, length in report.lengths:
    print(f"{stage:>10}  {length:g}")


# The merged tour is already within a few percent of optimal. Which cities
# does it route around worst? The detour ratio d(A,B)+d(B,C) over d(A,C)
# picks them out.

# In[3]:

for f in detour_flags(report.tour, 5):
    print(f"city {f.middle + 1:>2}: ratio {f.ratio:.2f}  ({f.prev + 1} -> {f.middle + 1} -> {f.next + 1})")


# Local search around those flags (2-opt, then Or-opt) closes the gap.

# In[4]:

improved = onion_solve(inst, improve=True)
print(improved.length, "vs optimum", opt.length)


# For comparison, the classic construction heuristics.

# In[5]:

nn = min(nearest_neighbor_tour(inst, s).length for s in range(inst.n))
print("nearest neighbour (best start):", nn)
print("nearest neighbour (start 20):   ", nearest_neighbor_tour(inst, 19).length)
print("greedy edge:                    ", greedy_edge_tour(inst, tie_break="high").length)
print("farthest insertion (start 20):  ", farthest_insertion_tour(inst, start=19).length)
