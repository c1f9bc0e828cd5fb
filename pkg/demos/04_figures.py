# coding: utf-8

# # Drawing layers and tours
#
# Writes SVG files next to this script: the layers alone, the merged tour
# with its worst detours circled in red, and the tour after local search.

# In[1]:

from pathlib import Path

from onionpeel import load_dantzig42, onion_solve
from onionpeel.instance import random_uniform_instance
from onionpeel.render import RenderSpec, render_svg

out = Path(__file__).resolve().parent / "figures"
out.mkdir(exist_ok=True)
inst = load_dantzig42()


# In[2]:

(out / "layers.svg").write_text(render_svg(inst, spec=RenderSpec(show_labels=True)))

merged = onion_solve(inst).tour
(out / "merged.svg").write_text(render_svg(inst, merged))

improved = onion_solve(inst, improve=True).tour
(out / "improved.svg").write_text(render_svg(inst, improved, RenderSpec(flag_count=0)))


# A bigger random instance, just to see the onion.

# In[3]:

big = random_uniform_instance(300, 7)
(out / "random300.svg").write_text(render_svg(big, onion_solve(big).tour, RenderSpec(point_radius=2, flag_count=10)))

for f in sorted(out.glob("*.svg")):
    print(f.name, f.stat().st_size, "bytes")
