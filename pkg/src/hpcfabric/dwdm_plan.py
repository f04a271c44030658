"""ITU-grid channel math and broadcast-and-select network validation.

The network model is a single star coupler: every node feeds one coupler
input, the coupler broadcasts every wavelength to every output, and each
node's receivers pick their channels with a wavelength filter (an AWG or a
tunable filter). A channel is usable only while exactly one transmitter is
on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Union

from .power_math import ModulationSpec

SPEED_OF_LIGHT_M_S = 299_792_458.0
GRID_BASE_THZ = 190.0
GRID_SPACING_THZ = 0.1


class PlanError(ValueError):
    """Structurally invalid network plan."""


class CollisionError(PlanError):
    def __init__(self, collisions: list[tuple[int, list[str]]]):
        self.collisions = collisions
        detail = "; ".join(
            f"collision on channel {ch} between {', '.join(who)}" for ch, who in collisions
        )
        super().__init__(detail)


@dataclass(frozen=True, order=True)
class ItuChannel:
    index: int
    grid_base_thz: float = GRID_BASE_THZ
    spacing_thz: float = GRID_SPACING_THZ

    def __post_init__(self):
        if not self.frequency_thz > 0:
            raise ValueError(f"channel {self.index} lies below 0 THz on this grid")

    @property
    def frequency_thz(self) -> float:
        return self.grid_base_thz + self.spacing_thz * self.index

    @property
    def wavelength_nm(self) -> float:
        return SPEED_OF_LIGHT_M_S / (self.frequency_thz * 1e12) * 1e9


def channel_frequency_thz(c: ItuChannel | int) -> float:
    return _as_channel(c).frequency_thz


def channel_wavelength_nm(c: ItuChannel | int) -> float:
    return _as_channel(c).wavelength_nm


def _as_channel(c: ItuChannel | int) -> ItuChannel:
    return c if isinstance(c, ItuChannel) else ItuChannel(int(c))


def channels_in_band(lo_nm: float, hi_nm: float,
                     grid_base_thz: float = GRID_BASE_THZ,
                     spacing_thz: float = GRID_SPACING_THZ) -> list[ItuChannel]:
    """Grid channels whose wavelength lies in [lo_nm, hi_nm], ascending by index."""
    if lo_nm >= hi_nm:
        return []
    c_nm_thz = SPEED_OF_LIGHT_M_S * 1e-3  # nm*THz
    n_lo = math.floor((c_nm_thz / hi_nm - grid_base_thz) / spacing_thz) - 1
    n_hi = math.ceil((c_nm_thz / lo_nm - grid_base_thz) / spacing_thz) + 1
    found = []
    for n in range(n_lo, n_hi + 1):
        if grid_base_thz + spacing_thz * n <= 0:
            continue
        ch = ItuChannel(n, grid_base_thz, spacing_thz)
        if lo_nm <= ch.wavelength_nm <= hi_nm:
            found.append(ch)
    return found


# -- passive elements --------------------------------------------------------

@dataclass(frozen=True)
class StarCoupler:
    in_ports: int
    out_ports: int
    excess_db: float = 0.0
    name: str = "star coupler"

    def __post_init__(self):
        _check_ports(self.in_ports, self.out_ports)
        _check_loss(self.excess_db, self.name)


@dataclass(frozen=True)
class Awg:
    """Cyclic arrayed waveguide grating.

    ``direction="demux"`` routes one channel to one port (filter use, excess
    loss only). ``"broadcast"`` is the reverse direction, where a port's light
    is spread over all ports and pays the splitting loss too.
    """

    ports: int
    excess_db: float = 0.0
    base_channel: int = 0
    direction: str = "demux"
    name: str = "awg"

    def __post_init__(self):
        _check_ports(self.ports)
        _check_loss(self.excess_db, self.name)
        if self.direction not in ("demux", "broadcast"):
            raise PlanError(f"{self.name}: direction must be 'demux' or 'broadcast'")


@dataclass(frozen=True)
class Connector:
    loss_db: float
    name: str = "connector"

    def __post_init__(self):
        _check_loss(self.loss_db, self.name)


@dataclass(frozen=True)
class Attenuator:
    loss_db: float
    name: str = "attenuator"

    def __post_init__(self):
        _check_loss(self.loss_db, self.name)


@dataclass(frozen=True)
class FiberSpan:
    length_m: float
    atten_db_per_km: float
    name: str = "fiber"

    def __post_init__(self):
        if self.length_m < 0:
            raise PlanError(f"{self.name}: negative length")
        _check_loss(self.atten_db_per_km, self.name)


PassiveElement = Union[StarCoupler, Awg, Connector, Attenuator, FiberSpan]


def _check_ports(*ports: int) -> None:
    if any(p < 1 for p in ports):
        raise PlanError(f"port counts must be >= 1, got {ports}")


def _check_loss(value: float, name: str) -> None:
    if not value >= 0:
        raise PlanError(f"{name}: loss must be non-negative, got {value}")


def awg_route(channel: ItuChannel | int, awg: Awg) -> int:
    """Output port for a channel on a cyclic AWG."""
    index = channel.index if isinstance(channel, ItuChannel) else int(channel)
    return (index - awg.base_channel) % awg.ports


def awg_channel_for_port(port: int, awg: Awg) -> int:
    """Lowest channel at or above the base that exits ``port``."""
    if not 0 <= port < awg.ports:
        raise IndexError(f"port {port} outside 0..{awg.ports - 1}")
    return awg.base_channel + port


# -- network -----------------------------------------------------------------

@dataclass(frozen=True)
class TransmitterSpec:
    channel: int
    tuning: frozenset[int] = frozenset()
    launch: ModulationSpec | None = None
    rate_gbps: float = 10.0
    electrical_power_mw: float | None = None

    def __post_init__(self):
        tuning = frozenset(self.tuning) or frozenset({self.channel})
        object.__setattr__(self, "tuning", tuning)
        if self.channel not in tuning:
            raise PlanError(f"channel {self.channel} is outside the tuning set {sorted(tuning)}")

    @property
    def tunable(self) -> bool:
        return len(self.tuning) > 1


@dataclass(frozen=True)
class ReceiverSpec:
    detector: str
    sensitivity_dbm: float
    select_channels: frozenset[int] = frozenset()
    filters: tuple[PassiveElement, ...] = ()
    name: str = ""

    def __post_init__(self):
        if self.detector not in ("APD", "PIN"):
            raise PlanError(f"detector must be APD or PIN, got {self.detector!r}")
        object.__setattr__(self, "select_channels", frozenset(self.select_channels))


@dataclass(frozen=True)
class Node:
    name: str
    transmitters: tuple[TransmitterSpec, ...] = ()
    receivers: tuple[ReceiverSpec, ...] = ()


@dataclass(frozen=True)
class BroadcastNetwork:
    nodes: tuple[Node, ...] = ()
    coupler: StarCoupler = field(default_factory=lambda: StarCoupler(4, 4))
    interconnect: tuple[PassiveElement, ...] = ()
    grid_base_thz: float = GRID_BASE_THZ
    spacing_thz: float = GRID_SPACING_THZ

    def __post_init__(self):
        names = [n.name for n in self.nodes]
        if len(set(names)) != len(names):
            raise PlanError("node names must be unique")
        # one trunk fiber per node into the coupler and one back out
        fed = sum(1 for n in self.nodes if n.transmitters)
        fanned = sum(1 for n in self.nodes if n.receivers)
        if fed > self.coupler.in_ports:
            raise PlanError(f"{fed} transmitting nodes exceed {self.coupler.in_ports} coupler inputs")
        if fanned > self.coupler.out_ports:
            raise PlanError(f"{fanned} receiving nodes exceed {self.coupler.out_ports} coupler outputs")

    def node(self, name: str) -> Node:
        for n in self.nodes:
            if n.name == name:
                return n
        raise KeyError(name)

    def channel(self, index: int) -> ItuChannel:
        return ItuChannel(index, self.grid_base_thz, self.spacing_thz)

    def receivers(self) -> list[tuple[str, ReceiverSpec]]:
        out = []
        for node in self.nodes:
            for i, rx in enumerate(node.receivers):
                label = rx.name or (node.name if len(node.receivers) == 1 else f"{node.name}.rx{i}")
                out.append((label, rx))
        return out

    def retune(self, node: str, channel: int, transmitter: int = 0) -> "BroadcastNetwork":
        """Return a copy with one transmitter moved to ``channel``."""
        target = self.node(node)
        txs = list(target.transmitters)
        txs[transmitter] = replace(txs[transmitter], channel=channel)
        new_node = replace(target, transmitters=tuple(txs))
        return replace(self, nodes=tuple(new_node if n.name == node else n for n in self.nodes))


def active_channel_assignments(net: BroadcastNetwork) -> dict[int, list[str]]:
    """Channel -> names of the nodes currently transmitting on it."""
    out: dict[int, list[str]] = {}
    for node in net.nodes:
        for tx in node.transmitters:
            out.setdefault(tx.channel, []).append(node.name)
    return dict(sorted(out.items()))


def detect_collisions(net: BroadcastNetwork) -> list[tuple[int, list[str]]]:
    return [(ch, who) for ch, who in active_channel_assignments(net).items() if len(who) > 1]


def free_channels(net: BroadcastNetwork, channels: Iterable[int],
                  querying: str | None = None) -> set[int]:
    """Channels in ``channels`` not used by anyone except ``querying`` itself."""
    busy = {
        tx.channel
        for node in net.nodes if node.name != querying
        for tx in node.transmitters
    }
    return set(channels) - busy


def coupler_output_channels(net: BroadcastNetwork) -> list[set[int]]:
    """Channel set seen on each coupler output; identical across outputs."""
    present = set(active_channel_assignments(net))
    return [set(present) for _ in range(net.coupler.out_ports)]


def reachability(net: BroadcastNetwork) -> dict[str, set[str]]:
    """Receiver label -> set of node names it can hear."""
    collisions = detect_collisions(net)
    if collisions:
        raise CollisionError(collisions)
    owner = {ch: who[0] for ch, who in active_channel_assignments(net).items()}
    return {
        label: {owner[ch] for ch in rx.select_channels if ch in owner}
        for label, rx in net.receivers()
    }
