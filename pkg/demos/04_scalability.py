"""How far can the star coupler grow before the margin runs out?

Run: python3 demos/04_scalability.py
"""

from hpcfabric.config import bundled, load_network
from hpcfabric.link_budget import max_broadcast_ports, scaling_rows, splitting_loss_db

plan, _ = load_network(bundled("testbed_network.json"))

for entry in plan.scaling:
    ledger = entry.ledger
    print(f"{ledger.name} (base {ledger.base_ports} ports, {ledger.base_margin_db} dB)")
    for ports, margin in scaling_rows(ledger):
        ok = "ok" if margin >= ledger.min_margin_db else "below minimum"
        print(f"  {ports:4d} ports  split {splitting_loss_db(ports):5.2f} dB  "
              f"margin {margin:5.2f} dB  {ok}")
    print(f"  largest coupler at {ledger.min_margin_db} dB minimum: {max_broadcast_ports(ledger)} ports\n")
