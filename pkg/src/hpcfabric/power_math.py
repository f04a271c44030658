"""Optical power arithmetic.

Conversions between dBm and mW, extinction-ratio / OMA identities for
two-level (NRZ) modulation, and the Gaussian-noise Q-factor <-> BER map.

Quantities are plain floats; the unit lives in the name (``_dbm``, ``_mw``,
``_db``). Crossing between the log and linear scales only happens through
:func:`dbm_to_mw` / :func:`mw_to_dbm`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import bisect

SQRT2 = math.sqrt(2.0)

# Q where ber_from_q(Q) is far below any useful target; upper bracket for inversion.
_Q_BRACKET_MAX = 40.0


def dbm_to_mw(p_dbm: float) -> float:
    if not math.isfinite(p_dbm):
        raise ValueError(f"power level must be finite, got {p_dbm!r} dBm")
    return 10.0 ** (p_dbm / 10.0)


def mw_to_dbm(p_mw: float) -> float:
    if not p_mw > 0.0:
        raise ValueError(f"{p_mw!r} mW has no dBm representation (must be > 0)")
    return 10.0 * math.log10(p_mw)


def db_to_ratio(db: float) -> float:
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class ModulationSpec:
    """Average launch power plus extinction ratio of an NRZ transmitter.

    ``extinction_ratio_db`` may be ``math.inf`` for an ideal zero level.
    """

    average_mw: float
    extinction_ratio_db: float

    def __post_init__(self):
        if not self.average_mw >= 0.0:
            raise ValueError(f"average power must be non-negative, got {self.average_mw}")
        if not self.extinction_ratio_db > 0.0:
            # 0 dB ER carries no modulation: OMA would be zero
            raise ValueError(
                f"extinction ratio must be > 0 dB, got {self.extinction_ratio_db}"
            )

    @property
    def ratio(self) -> float:
        return db_to_ratio(self.extinction_ratio_db)

    @classmethod
    def from_oma(cls, oma_mw: float, extinction_ratio_db: float) -> "ModulationSpec":
        """Build the spec that reproduces a measured OMA at a given extinction ratio."""
        if not oma_mw > 0.0:
            raise ValueError(f"OMA must be > 0 mW, got {oma_mw}")
        if not extinction_ratio_db > 0.0:
            raise ValueError(f"extinction ratio must be > 0 dB, got {extinction_ratio_db}")
        if math.isinf(extinction_ratio_db):
            return cls(oma_mw / 2.0, extinction_ratio_db)
        r = db_to_ratio(extinction_ratio_db)
        return cls(oma_mw * (r + 1.0) / (2.0 * (r - 1.0)), extinction_ratio_db)


def levels_from_modulation(m: ModulationSpec) -> tuple[float, float]:
    """Return the (high, low) optical levels in mW."""
    p = m.average_mw
    if math.isinf(m.extinction_ratio_db):
        return 2.0 * p, 0.0
    r = m.ratio
    return 2.0 * p * r / (r + 1.0), 2.0 * p / (r + 1.0)


def oma_from_modulation(m: ModulationSpec) -> float:
    """Optical modulation amplitude P1 - P0 in mW.

    Written as ``2*P*(r-1)/(r+1)`` rather than subtracting the levels so small
    extinction ratios keep full precision.
    """
    if math.isinf(m.extinction_ratio_db):
        return 2.0 * m.average_mw
    r = m.ratio
    return 2.0 * m.average_mw * (r - 1.0) / (r + 1.0)


def ber_from_q(q: float) -> float:
    """Gaussian-noise bit error ratio, 0.5*erfc(q/sqrt(2)).

    Underflows to 0.0 for q above ~38; callers reporting BER treat that as
    error-free.
    """
    if q < 0.0:
        raise ValueError(f"Q must be non-negative, got {q}")
    return 0.5 * math.erfc(q / SQRT2)


def q_from_ber(ber: float) -> float:
    """Invert :func:`ber_from_q` by bisection (|dq| < 1e-6)."""
    if not 0.0 < ber <= 0.5:
        raise ValueError(f"BER must lie in (0, 0.5], got {ber}")
    if ber == 0.5:
        return 0.0
    return bisect(lambda q: ber_from_q(q) - ber, 0.0, _Q_BRACKET_MAX, xtol=1e-9, rtol=1e-12)
