"""The bundled four-node DWDM broadcast-and-select plan.

Shows the ITU channel table, which channels the tunable node may still use,
and what happens when it picks one already in use.

Run: python3 demos/02_channel_plan.py
"""

from hpcfabric.config import bundled, load_network
from hpcfabric.dwdm_plan import (
    CollisionError,
    active_channel_assignments,
    channels_in_band,
    free_channels,
    reachability,
)

plan, _ = load_network(bundled("testbed_network.json"))
net = plan.network

for ch, who in active_channel_assignments(net).items():
    c = net.channel(ch)
    print(f"ch {ch}: {c.frequency_thz:.1f} THz  {c.wavelength_nm:.2f} nm  <- {', '.join(who)}")

tunable = net.node("N3").transmitters[0]
print("\nN3 may tune to", sorted(free_channels(net, tunable.tuning, querying="N3")))

for rx, heard in reachability(net).items():
    print(f"{rx} hears {sorted(heard)}")

try:
    reachability(net.retune("N3", 33))
except CollisionError as exc:
    print("\nretuning N3 to 33:", exc)

print(f"\nC band (1530-1565 nm) holds {len(channels_in_band(1530, 1565))} channels at 100 GHz")
