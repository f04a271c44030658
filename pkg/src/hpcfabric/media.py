"""Bandwidth-distance products and electrical/optical link classification.

Each transmission medium is summarized by a single bandwidth-distance
product (Gbps-cm), treated as independent of data rate. A link needs an
optical medium once ``rate * length`` reaches the electrical limit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .topology import Link, NodeGrid, length_histogram

DEFAULT_ELECTRICAL_BD_GBPS_CM = 500.0

# Relative slack on the inclusive threshold so 3*0.1-style float noise
# doesn't flip a link that sits exactly on the limit.
_THRESHOLD_RTOL = 1e-12


class MediumClass(str, Enum):
    ELECTRICAL_PCB = "electrical-pcb"
    POLYMER_WAVEGUIDE = "polymer-waveguide"
    MULTIMODE_FIBER = "multimode-fiber"
    SINGLE_MODE_FIBER = "single-mode-fiber"


@dataclass(frozen=True)
class MediumSpec:
    name: str
    medium_class: MediumClass
    bd_gbps_cm: float
    bd_range_gbps_cm: tuple[float, float | None] | None = None
    notes: str = ""

    def __post_init__(self):
        if not self.bd_gbps_cm > 0:
            raise ValueError(f"{self.name}: bandwidth-distance product must be > 0")
        object.__setattr__(self, "medium_class", MediumClass(self.medium_class))


@dataclass(frozen=True)
class MediumCatalog:
    entries: tuple[MediumSpec, ...] = ()

    def __post_init__(self):
        names = [m.name for m in self.entries]
        dupes = sorted({n for n in names if names.count(n) > 1})
        if dupes:
            raise ValueError(f"duplicate medium names: {', '.join(dupes)}")

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def get(self, name: str) -> MediumSpec:
        for m in self.entries:
            if m.name == name:
                return m
        raise KeyError(name)

    def by_class(self, cls: MediumClass | str) -> list[MediumSpec]:
        cls = MediumClass(cls)
        return [m for m in self.entries if m.medium_class is cls]


def default_catalog() -> MediumCatalog:
    return MediumCatalog((
        MediumSpec("electrical", MediumClass.ELECTRICAL_PCB, 500.0, (250.0, 1500.0),
                   "PCB microstrip/stripline; 500 is the most common value"),
        MediumSpec("polymer", MediumClass.POLYMER_WAVEGUIDE, 3000.0, (1500.0, 3000.0),
                   "measured range; ideal limit 6000"),
        MediumSpec("multimode", MediumClass.MULTIMODE_FIBER, 4000.0, (4000.0, 500000.0),
                   "conservative floor of the fiber range"),
        MediumSpec("single-mode", MediumClass.SINGLE_MODE_FIBER, 500000.0, (500000.0, None),
                   "500000 and up"),
    ))


def required_bd(rate_gbps: float, length_cm: float) -> float:
    return rate_gbps * length_cm


def max_reach_cm(medium: MediumSpec | float, rate_gbps: float) -> float:
    bd = medium.bd_gbps_cm if isinstance(medium, MediumSpec) else float(medium)
    if not rate_gbps > 0:
        raise ValueError(f"rate must be positive, got {rate_gbps}")
    return bd / rate_gbps


def _exceeds(bd: float, limit: float) -> bool:
    return bd >= limit * (1.0 - _THRESHOLD_RTOL)


def needs_optical(link: Link | float, rate_gbps: float,
                  bd_limit_gbps_cm: float = DEFAULT_ELECTRICAL_BD_GBPS_CM) -> bool:
    """True when the link's B*d meets or exceeds the electrical limit.

    ``link`` may be a :class:`Link` or a bare length in cm.
    """
    length = link.length_cm if isinstance(link, Link) else float(link)
    return _exceeds(required_bd(rate_gbps, length), bd_limit_gbps_cm)


@dataclass(frozen=True)
class FabricClassification:
    rate_gbps: float
    bd_limit_gbps_cm: float
    electrical_count: int
    optical_count: int
    breakpoint_cm: float = field(default=0.0)

    @property
    def total(self) -> int:
        return self.electrical_count + self.optical_count

    @property
    def optical_fraction(self) -> float:
        return self.optical_count / self.total if self.total else 0.0


def classify_fabric(grid: NodeGrid, rate_gbps: float,
                    bd_limit: float = DEFAULT_ELECTRICAL_BD_GBPS_CM) -> FabricClassification:
    if not (rate_gbps > 0 and bd_limit > 0):
        raise ValueError("rate and B*d limit must be positive")
    hist = length_histogram(grid)
    optical = sum(n for length, n in hist.bins.items()
                  if needs_optical(length, rate_gbps, bd_limit))
    return FabricClassification(
        rate_gbps=rate_gbps,
        bd_limit_gbps_cm=bd_limit,
        electrical_count=hist.total - optical,
        optical_count=optical,
        breakpoint_cm=max_reach_cm(bd_limit, rate_gbps),
    )


def crossover_table(grid: NodeGrid, rates: Sequence[float] | Iterable[float],
                    bd_limit: float = DEFAULT_ELECTRICAL_BD_GBPS_CM) -> list[FabricClassification]:
    rates = list(rates)
    if not rates:
        raise ValueError("need at least one rate")
    if any(b < a for a, b in zip(rates, rates[1:])):
        raise ValueError("rates must be ascending")
    return [classify_fabric(grid, r, bd_limit) for r in rates]
