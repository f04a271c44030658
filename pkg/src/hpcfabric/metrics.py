"""Comparison metrics for interconnect options.

Energy per bit, connector face density and cost-per-Gbps zoning, plus
printed-vs-derived comparison tables over catalog records. Catalog values
are kept as quoted; whenever a derived number disagrees with its printed
counterpart the row gets a flag. The data itself is never adjusted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Mapping, Sequence

# derived vs printed beyond this relative gap is a mismatch, not rounding
MISMATCH_RTOL = 0.05

ELECTRICAL_FAVORED = "electrical-favored"
CROSSOVER = "crossover"
OPTICAL_FAVORED = "optical-favored"


def energy_per_bit_pj(total_power_mw: float, lanes: int, rate_per_lane_gbps: float) -> float:
    """pJ/bit from transceiver power; 1 mW per Gbps is 1 pJ/bit."""
    if not (total_power_mw > 0 and lanes >= 1 and rate_per_lane_gbps > 0):
        raise ValueError("power, lane count and rate must all be positive")
    return total_power_mw / (lanes * rate_per_lane_gbps)


def scale_energy_per_bit(base_pj: float, base_rate_gbps: float, new_rate_gbps: float) -> float:
    """Energy per bit after a rate change at constant power."""
    if not (base_rate_gbps > 0 and new_rate_gbps > 0):
        raise ValueError("rates must be positive")
    return base_pj * base_rate_gbps / new_rate_gbps


def cost_crossover_zone(cost_usd_per_gbps: float, band: tuple[float, float] = (1.0, 2.0)) -> str:
    if not cost_usd_per_gbps > 0:
        raise ValueError(f"cost must be positive, got {cost_usd_per_gbps}")
    lo, hi = band
    if cost_usd_per_gbps > hi:
        return ELECTRICAL_FAVORED
    if cost_usd_per_gbps < lo:
        return OPTICAL_FAVORED
    return CROSSOVER


def _decimals(x: float) -> int:
    exp = Decimal(str(x)).normalize().as_tuple().exponent
    return max(0, -exp)


def rounds_to(derived: float, printed: float) -> bool:
    """Whether ``derived`` rounds (half-up) to ``printed`` at the printed precision."""
    q = Decimal(1).scaleb(-_decimals(printed))
    return Decimal(repr(derived)).quantize(q, rounding=ROUND_HALF_UP) == Decimal(str(printed)).quantize(q)


def compare_printed(derived: float, printed: float | None) -> str:
    """'' when consistent, else 'rounding' or 'mismatch'."""
    if printed is None:
        return ""
    if not math.isclose(derived, printed, rel_tol=MISMATCH_RTOL):
        return "mismatch"
    if not rounds_to(derived, printed):
        return "rounding"
    return ""


@dataclass(frozen=True)
class TransceiverRecord:
    name: str
    lanes: int
    rate_per_lane_gbps: float
    total_power_mw: float
    wavelength_nm: float | None = None
    reach_m: float | None = None
    bd_per_lane_gbps_cm: float | None = None
    printed_pj_per_bit: float | None = None
    cost_usd_per_gbps: tuple[float, float] | None = None
    notes: str = ""

    def __post_init__(self):
        if self.lanes < 1:
            raise ValueError(f"{self.name}: lanes must be >= 1")
        if not (self.rate_per_lane_gbps > 0 and self.total_power_mw > 0):
            raise ValueError(f"{self.name}: power and rate must be positive")

    @property
    def aggregate_gbps(self) -> float:
        return self.lanes * self.rate_per_lane_gbps

    @property
    def energy_per_bit_pj(self) -> float:
        return energy_per_bit_pj(self.total_power_mw, self.lanes, self.rate_per_lane_gbps)

    @property
    def derived_bd_gbps_cm(self) -> float | None:
        if self.reach_m is None:
            return None
        return self.rate_per_lane_gbps * self.reach_m * 100.0


@dataclass(frozen=True)
class ConnectorDensityRecord:
    name: str
    channels_per_fiber: int
    fibers: int
    rate_gbps: float
    width_mm: float
    height_mm: float
    printed_density: float | None = None

    def __post_init__(self):
        if min(self.channels_per_fiber, self.fibers) < 1 or min(
            self.rate_gbps, self.width_mm, self.height_mm
        ) <= 0:
            raise ValueError(f"{self.name}: all fields must be positive")

    @property
    def bandwidth_gbps(self) -> float:
        return self.channels_per_fiber * self.fibers * self.rate_gbps

    @property
    def area_mm2(self) -> float:
        return self.width_mm * self.height_mm


def interconnect_density(rec: ConnectorDensityRecord) -> float:
    """Aggregate bandwidth over connector face area, Gbps/mm^2."""
    return rec.bandwidth_gbps / rec.area_mm2


def density_ratio(a: ConnectorDensityRecord, b: ConnectorDensityRecord) -> float:
    return interconnect_density(a) / interconnect_density(b)


@dataclass(frozen=True)
class PowerBreakdown:
    """Share of link power per functional block (fractions summing to 1)."""

    blocks: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        total = sum(self.blocks.values())
        if any(v < 0 for v in self.blocks.values()) or not math.isclose(total, 1.0, abs_tol=1e-6):
            raise ValueError(f"block fractions must be non-negative and sum to 1, got {total}")

    @classmethod
    def from_absolute(cls, blocks_mw: Mapping[str, float]) -> "PowerBreakdown":
        total = sum(blocks_mw.values())
        return cls({k: v / total for k, v in blocks_mw.items()})

    def power_mw(self, block: str, total_mw: float) -> float:
        return self.blocks[block] * total_mw


@dataclass(frozen=True)
class EnergyScalingRecord:
    """A quoted pJ/bit figure projected to a faster line rate at fixed power."""

    name: str
    base_pj_per_bit: float
    base_rate_gbps: float
    new_rate_gbps: float
    printed_pj_per_bit: float | None = None

    @property
    def derived_pj_per_bit(self) -> float:
        return scale_energy_per_bit(self.base_pj_per_bit, self.base_rate_gbps, self.new_rate_gbps)

    @property
    def flag(self) -> str:
        return compare_printed(self.derived_pj_per_bit, self.printed_pj_per_bit)


@dataclass(frozen=True)
class ComparisonRow:
    name: str
    lanes: int
    rate_per_lane_gbps: float
    total_power_mw: float
    derived_pj_per_bit: float
    printed_pj_per_bit: float | None
    pj_flag: str
    reach_m: float | None
    derived_bd_gbps_cm: float | None
    printed_bd_gbps_cm: float | None
    bd_flag: str

    @property
    def pj_rel_diff(self) -> float | None:
        if self.printed_pj_per_bit is None:
            return None
        return (self.derived_pj_per_bit - self.printed_pj_per_bit) / self.printed_pj_per_bit


def comparison_table(records: Sequence[TransceiverRecord],
                     sort_by: str | None = None, reverse: bool = False) -> list[ComparisonRow]:
    if not records:
        raise ValueError("comparison table needs at least one record")
    rows = []
    for r in records:
        pj = r.energy_per_bit_pj
        bd = r.derived_bd_gbps_cm
        bd_flag = ""
        if bd is not None and r.bd_per_lane_gbps_cm is not None:
            if not math.isclose(bd, r.bd_per_lane_gbps_cm, rel_tol=MISMATCH_RTOL):
                bd_flag = "mismatch"
        rows.append(ComparisonRow(
            name=r.name,
            lanes=r.lanes,
            rate_per_lane_gbps=r.rate_per_lane_gbps,
            total_power_mw=r.total_power_mw,
            derived_pj_per_bit=pj,
            printed_pj_per_bit=r.printed_pj_per_bit,
            pj_flag=compare_printed(pj, r.printed_pj_per_bit),
            reach_m=r.reach_m,
            derived_bd_gbps_cm=bd,
            printed_bd_gbps_cm=r.bd_per_lane_gbps_cm,
            bd_flag=bd_flag,
        ))
    if sort_by is not None:
        # None sorts last regardless of direction
        rows.sort(key=lambda row: (getattr(row, sort_by) is None, getattr(row, sort_by) or 0),
                  reverse=reverse)
    return rows


@dataclass(frozen=True)
class DensityRow:
    name: str
    bandwidth_gbps: float
    area_mm2: float
    derived_density: float
    printed_density: float | None
    flag: str


def density_table(records: Sequence[ConnectorDensityRecord]) -> list[DensityRow]:
    return [
        DensityRow(
            name=r.name,
            bandwidth_gbps=r.bandwidth_gbps,
            area_mm2=r.area_mm2,
            derived_density=interconnect_density(r),
            printed_density=r.printed_density,
            flag=compare_printed(interconnect_density(r), r.printed_density),
        )
        for r in records
    ]
