"""Energy per bit, connector density and cost zones from the bundled catalog.

Run: python3 demos/05_metrics.py
"""

from hpcfabric.config import bundled, load_catalog
from hpcfabric.metrics import comparison_table, cost_crossover_zone, density_ratio, density_table

cat, _ = load_catalog(bundled("catalog.json"))

print("transceivers, lowest energy first")
for r in comparison_table(cat.transceivers, sort_by="derived_pj_per_bit"):
    printed = "" if r.printed_pj_per_bit is None else f"(printed {r.printed_pj_per_bit:g})"
    print(f"  {r.name:34s} {r.derived_pj_per_bit:7.2f} pJ/bit {printed} {r.pj_flag}")

for e in cat.energy_scaling:
    print(f"\n{e.name}: {e.base_pj_per_bit} -> {e.derived_pj_per_bit:.2f} pJ/bit")

print("\nconnector face density")
for d in density_table(cat.connectors):
    print(f"  {d.name:36s} {d.derived_density:8.3f} Gbps/mm2 {d.flag}")
for num, den, _ in cat.density_comparisons:
    print(f"  {num} / {den}: {density_ratio(cat.connector(num), cat.connector(den)):.2f}x")

print("\ncost bands")
for name, lo, hi in cat.cost_bands:
    print(f"  {name}: ${lo:g}-{hi:g}/Gbps, {cost_crossover_zone(lo)} .. {cost_crossover_zone(hi)}")
