"""Planning models for electrical and optical links in all-to-all compute fabrics."""

from .dwdm_plan import BroadcastNetwork, ItuChannel
from .link_budget import BerModel, OpticalPath, ScalingLedger, compute_budget
from .media import classify_fabric, crossover_table
from .power_math import ModulationSpec, dbm_to_mw, mw_to_dbm
from .topology import NodeGrid, length_histogram

__version__ = "0.1.0"

__all__ = [
    "BerModel",
    "BroadcastNetwork",
    "ItuChannel",
    "ModulationSpec",
    "NodeGrid",
    "OpticalPath",
    "ScalingLedger",
    "classify_fabric",
    "compute_budget",
    "crossover_table",
    "dbm_to_mw",
    "length_histogram",
    "mw_to_dbm",
]
