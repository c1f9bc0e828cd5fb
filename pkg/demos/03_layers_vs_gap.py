# coding: utf-8

# # Does the gap grow with the number of layers?
#
# For small random instances we can afford the exact optimum (Held-Karp),
# so the gap of the plain merged tour is measured exactly and grouped by
# how many layers the instance had.

# In[1]:

from onionpeel.bench import format_gap_table, layers_gap_experiment

exp = layers_gap_experiment([8, 10, 12, 14], trials=50, seed=2024)
print(format_gap_table(exp.table))


# Points in convex position have one layer and the hull is optimal, so the
# control batch should show no gap at all.

# In[2]:

control = layers_gap_experiment([8, 10, 12, 14], trials=10, seed=2024, kind="convex")
print(format_gap_table(control.table))


# Whether the growth is linear or faster is hard to say from three or four
# layer counts; the table is only there to look at.

# In[3]:

worst = max(exp.records, key=lambda r: r.gap_percent)
print(worst.instance, worst.layer_count, "layers,", f"{worst.gap_percent:.2f}% over optimal")
