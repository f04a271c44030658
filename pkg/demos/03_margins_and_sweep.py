"""Power budgets for the bundled paths, then a BER sweep with a variable attenuator.

Run: python3 demos/03_margins_and_sweep.py
"""

from dataclasses import replace

from hpcfabric.config import bundled, load_network
from hpcfabric.link_budget import attenuation_sweep, ber_crossing_db, compute_budget

plan, _ = load_network(bundled("testbed_network.json"))

for name, entry in plan.paths.items():
    b = compute_budget(entry.path)
    print(f"{name}: launch {b.launch_oma_dbm:.2f} dBm OMA, received {b.received_oma_dbm:.2f} dBm, "
          f"sensitivity {b.sensitivity_dbm:.1f} dBm, margin {b.margin_db:.2f} dB")
    for s in b.stages[1:]:
        print(f"    {s.name:28s} -{s.loss_db:5.2f} dB -> {s.power_dbm:6.2f} dBm")

path = plan.path("multimode").path
rows = attenuation_sweep(path, 0.0, 12.0, 1.0, plan.ber_model)
print("\nmultimode sweep")
for r in rows:
    print(f"  {r.attenuation_db:4.1f} dB  {r.received_dbm:6.2f} dBm  BER {r.ber:.2e}")
print("BER passes 1e-12 at", ber_crossing_db(rows), "dB")

# swapping the PIN for an APD buys its sensitivity difference, dB for dB
apd = replace(path.rx, detector="APD", sensitivity_dbm=path.rx.sensitivity_dbm - 7.0)
print(f"\nwith a 7 dB better APD: margin {compute_budget(path.with_receiver(apd)).margin_db:.2f} dB")
