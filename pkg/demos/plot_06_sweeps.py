"""
Violation along state families
==============================

Best of the three facet inequalities along ``beta`` for the GG family, and
the facet vs Mermin ratio for the GW family.  Output is CSV for plotting.
"""

import math

from bellpoly.figures import custom_sweep, figure_sweep, to_csv

s = custom_sweep("gg", [math.pi / 4], points=7, restarts=8)
print(to_csv(s))

f6 = figure_sweep("fig6", alpha=math.pi / 4, points=7, restarts=8)
print(to_csv(f6))
print("facet ratio >= Mermin ratio everywhere:", all(f >= m - 1e-9 for _, f, m in f6.rows))
