"""Optical power budgets, link margins, BER sweeps and coupler scaling.

Budgets are carried on OMA (optical modulation amplitude) from launch to the
receiver input. Receiver sensitivity is the OMA giving BER 1e-12, so
``margin = received - sensitivity`` and a negative margin means an
infeasible link. That is reported, never raised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .dwdm_plan import (
    Attenuator,
    Awg,
    Connector,
    FiberSpan,
    PassiveElement,
    ReceiverSpec,
    StarCoupler,
)
from .power_math import ModulationSpec, ber_from_q, mw_to_dbm, oma_from_modulation

TARGET_BER = 1e-12
# BER values below this are reported as 0 (error-free)
BER_FLOOR = 1e-300


class InfeasibleError(ValueError):
    def __init__(self, message: str, deficit_db: float):
        super().__init__(message)
        self.deficit_db = deficit_db


def splitting_loss_db(ports: int) -> float:
    """Ideal 1:n power split, 10*log10(n)."""
    if ports < 1:
        raise ValueError(f"ports must be >= 1, got {ports}")
    return 10.0 * math.log10(ports)


def element_loss_db(e: PassiveElement) -> float:
    if isinstance(e, StarCoupler):
        return splitting_loss_db(e.out_ports) + e.excess_db
    if isinstance(e, Awg):
        if e.direction == "broadcast":
            return splitting_loss_db(e.ports) + e.excess_db
        return e.excess_db
    if isinstance(e, (Connector, Attenuator)):
        return e.loss_db
    if isinstance(e, FiberSpan):
        return e.length_m * e.atten_db_per_km / 1000.0
    raise TypeError(f"not a passive element: {e!r}")


@dataclass(frozen=True)
class OpticalPath:
    launch: ModulationSpec
    elements: tuple[PassiveElement, ...]
    rx: ReceiverSpec
    name: str = ""

    def with_attenuation(self, loss_db: float) -> "OpticalPath":
        """Copy of the path with a variable attenuator appended before the receiver."""
        return replace(self, elements=self.elements + (Attenuator(loss_db, "variable attenuator"),))

    def with_receiver(self, rx: ReceiverSpec) -> "OpticalPath":
        return replace(self, rx=rx)


@dataclass(frozen=True)
class BudgetStage:
    name: str
    loss_db: float
    power_dbm: float


@dataclass(frozen=True)
class BudgetReport:
    launch_oma_dbm: float
    stages: tuple[BudgetStage, ...]
    received_oma_dbm: float
    sensitivity_dbm: float
    margin_db: float

    @property
    def total_loss_db(self) -> float:
        return self.launch_oma_dbm - self.received_oma_dbm

    @property
    def feasible(self) -> bool:
        return self.margin_db >= 0.0


def compute_budget(path: OpticalPath) -> BudgetReport:
    launch = mw_to_dbm(oma_from_modulation(path.launch))
    stages = [BudgetStage("launch", 0.0, launch)]
    running = launch
    total = 0.0
    for e in path.elements:
        loss = element_loss_db(e)
        total += loss
        # accumulate losses separately so received == launch - sum(losses) exactly
        running = launch - total
        stages.append(BudgetStage(getattr(e, "name", type(e).__name__), loss, running))
    received = launch - total
    return BudgetReport(
        launch_oma_dbm=launch,
        stages=tuple(stages),
        received_oma_dbm=received,
        sensitivity_dbm=path.rx.sensitivity_dbm,
        margin_db=received - path.rx.sensitivity_dbm,
    )


@dataclass(frozen=True)
class BerModel:
    """Q grows as a power of the received OMA, anchored at the sensitivity point.

    ``Q = q_at_sensitivity * 10**(slope_exponent * (P - P_sens) / 10)``;
    exponent 1 is the thermal-noise-limited case (Q linear in OMA).
    """

    q_at_sensitivity: float = 7.0345
    slope_exponent: float = 1.0

    def __post_init__(self):
        if not (self.q_at_sensitivity > 0 and self.slope_exponent > 0):
            raise ValueError("q_at_sensitivity and slope_exponent must be positive")

    def q(self, received_dbm: float, sensitivity_dbm: float) -> float:
        return self.q_at_sensitivity * 10.0 ** (
            self.slope_exponent * (received_dbm - sensitivity_dbm) / 10.0
        )


def ber_at_power(received_oma_dbm: float, rx: ReceiverSpec,
                 model: BerModel = BerModel()) -> float:
    return ber_from_q(model.q(received_oma_dbm, rx.sensitivity_dbm))


def reported_ber(ber: float) -> float:
    return 0.0 if ber < BER_FLOOR else ber


@dataclass(frozen=True)
class SweepRow:
    attenuation_db: float
    received_dbm: float
    ber: float


def attenuation_points(start_db: float, stop_db: float, step_db: float) -> np.ndarray:
    if not step_db > 0:
        raise ValueError(f"step must be positive, got {step_db}")
    if stop_db < start_db:
        raise ValueError(f"start {start_db} is above stop {stop_db}")
    n = int(math.floor((stop_db - start_db) / step_db + 1e-9)) + 1
    # rounding keeps 0.1-style steps from drifting (0.30000000000000004)
    return np.round(start_db + step_db * np.arange(n), 12)


def attenuation_sweep(path: OpticalPath, atten_start_db: float, atten_stop_db: float,
                      step_db: float, model: BerModel = BerModel()) -> list[SweepRow]:
    base = compute_budget(path).received_oma_dbm
    rows = []
    for a in attenuation_points(atten_start_db, atten_stop_db, step_db):
        received = base - float(a)
        rows.append(SweepRow(float(a), received, reported_ber(ber_at_power(received, path.rx, model))))
    return rows


def ber_crossing_db(rows: Sequence[SweepRow], target: float = TARGET_BER) -> float | None:
    """First swept attenuation whose BER exceeds ``target``."""
    for row in rows:
        if row.ber > target:
            return row.attenuation_db
    return None


# -- broadcast-domain scaling -------------------------------------------------

def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


@dataclass(frozen=True)
class ScalingLedger:
    """Margin extrapolation for swapping in larger star couplers.

    ``excess_delta_db`` maps port counts to the extra excess loss relative to
    the base coupler; a size between entries inherits the nearest smaller
    entry, so the delta never shrinks as the coupler grows.
    """

    base_ports: int
    base_margin_db: float
    excess_delta_db: Mapping[int, float] = field(default_factory=dict)
    min_margin_db: float = 3.0
    name: str = ""
    max_ports: int = 1 << 20

    def __post_init__(self):
        if not is_power_of_two(self.base_ports):
            raise ValueError(f"base ports must be a power of two, got {self.base_ports}")
        deltas = {int(k): float(v) for k, v in self.excess_delta_db.items()}
        if any(v < 0 for v in deltas.values()):
            raise ValueError("excess loss deltas must be non-negative")
        ordered = [deltas[k] for k in sorted(deltas)]
        if any(b < a for a, b in zip(ordered, ordered[1:])):
            raise ValueError("excess loss deltas must not decrease with port count")
        object.__setattr__(self, "excess_delta_db", dict(sorted(deltas.items())))

    def excess_delta(self, ports: int) -> float:
        applicable = [v for k, v in self.excess_delta_db.items() if k <= ports]
        return applicable[-1] if applicable else 0.0


def predict_scaled_margin(ledger: ScalingLedger, ports: int) -> float:
    if not is_power_of_two(ports):
        raise ValueError(f"coupler port count must be a power of two, got {ports}")
    if ports < ledger.base_ports:
        raise ValueError(f"{ports} ports is below the {ledger.base_ports}-port base")
    extra_split = splitting_loss_db(ports) - splitting_loss_db(ledger.base_ports)
    return ledger.base_margin_db - extra_split - ledger.excess_delta(ports)


def scaling_rows(ledger: ScalingLedger) -> list[tuple[int, float]]:
    """(ports, predicted margin) from the base through the first infeasible doubling."""
    rows = []
    ports = ledger.base_ports
    while ports <= ledger.max_ports:
        margin = predict_scaled_margin(ledger, ports)
        rows.append((ports, margin))
        if margin < ledger.min_margin_db:
            break
        ports *= 2
    return rows


def max_broadcast_ports(ledger: ScalingLedger) -> int:
    if ledger.base_margin_db < ledger.min_margin_db:
        deficit = ledger.min_margin_db - ledger.base_margin_db
        raise InfeasibleError(
            f"base margin {ledger.base_margin_db:.2f} dB is {deficit:.2f} dB short "
            f"of the {ledger.min_margin_db:.2f} dB minimum",
            deficit,
        )
    best = ledger.base_ports
    ports = best * 2
    while ports <= ledger.max_ports and predict_scaled_margin(ledger, ports) >= ledger.min_margin_db:
        best = ports
        ports *= 2
    return best
