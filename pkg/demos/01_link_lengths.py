"""Link lengths in a 6x6 all-to-all fabric and where copper stops being enough.

Run: python3 demos/01_link_lengths.py
"""

from hpcfabric import NodeGrid, crossover_table, length_histogram
from hpcfabric.media import default_catalog, max_reach_cm

grid = NodeGrid(rows=6, cols=6, pitch_cm=10.0)
hist = length_histogram(grid)

print(f"{grid.node_count} nodes, {hist.total} ordered links, longest {hist.max_length_cm:g} cm")
for length, count in hist.bins.items():
    print(f"  {length:5.0f} cm  {count:4d}  {'#' * (count // 8)}")

# A board trace carries about 500 Gbps-cm. Anything at or beyond the reach goes optical.
print()
for row in crossover_table(grid, [5, 10, 20, 40]):
    print(f"{row.rate_gbps:4.0f} Gbps: reach {row.breakpoint_cm:5.1f} cm, "
          f"{row.optical_count:4d} optical links ({100 * row.optical_fraction:.1f}%)")

print()
for medium in default_catalog():
    print(f"{medium.name:12s} reach at 10 Gbps: {max_reach_cm(medium, 10.0):9.0f} cm")
