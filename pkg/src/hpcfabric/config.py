"""JSON input files: system configs, network plans and metric catalogs.

Every document carries a versioned ``"schema"`` tag and is validated with
jsonschema before being turned into model objects. Problems surface as
:class:`ConfigError` (bad shape or values) or :class:`UnknownReference`
(a name that doesn't resolve).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from .dwdm_plan import (
    Attenuator,
    Awg,
    BroadcastNetwork,
    Connector,
    FiberSpan,
    Node,
    PassiveElement,
    PlanError,
    ReceiverSpec,
    StarCoupler,
    TransmitterSpec,
)
from .link_budget import BerModel, OpticalPath, ScalingLedger
from .media import DEFAULT_ELECTRICAL_BD_GBPS_CM, MediumCatalog, MediumSpec, default_catalog
from .metrics import (
    ConnectorDensityRecord,
    EnergyScalingRecord,
    PowerBreakdown,
    TransceiverRecord,
)
from .power_math import ModulationSpec, dbm_to_mw
from .topology import NodeGrid

SYSTEM_SCHEMA_ID = "hpcfabric.system/1"
NETWORK_SCHEMA_ID = "hpcfabric.network/1"
CATALOG_SCHEMA_ID = "hpcfabric.catalog/1"


class ConfigError(ValueError):
    pass


class UnknownReference(KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


def bundled(name: str) -> Path:
    """Path to a data file shipped with the package."""
    return Path(str(resources.files("hpcfabric") / "data" / name))


def read_json(path: str | Path) -> tuple[dict, str]:
    """Parse a JSON file; returns (document, sha256 of the raw bytes)."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return doc, hashlib.sha256(raw).hexdigest()


# -- schemas -----------------------------------------------------------------

_NUM = {"type": "number"}
_NONNEG = {"type": "number", "minimum": 0}
_POS = {"type": "number", "exclusiveMinimum": 0}
_POS_INT = {"type": "integer", "minimum": 1}
_CHANNEL = {"type": "integer"}

_ELEMENT = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["star_coupler", "awg", "connector", "attenuator", "fiber"]},
        "name": {"type": "string"},
        "in_ports": _POS_INT,
        "out_ports": _POS_INT,
        "ports": _POS_INT,
        "excess_db": _NONNEG,
        "base_channel": _CHANNEL,
        "direction": {"enum": ["demux", "broadcast"]},
        "loss_db": _NONNEG,
        "length_m": _NONNEG,
        "atten_db_per_km": _NONNEG,
    },
    "allOf": [
        {"if": {"properties": {"kind": {"const": "star_coupler"}}},
         "then": {"required": ["in_ports", "out_ports"]}},
        {"if": {"properties": {"kind": {"const": "awg"}}},
         "then": {"required": ["ports"]}},
        {"if": {"properties": {"kind": {"enum": ["connector", "attenuator"]}}},
         "then": {"required": ["loss_db"]}},
        {"if": {"properties": {"kind": {"const": "fiber"}}},
         "then": {"required": ["length_m", "atten_db_per_km"]}},
    ],
    "additionalProperties": False,
}

_LAUNCH = {
    "type": "object",
    "required": ["extinction_ratio_db"],
    "properties": {
        "average_mw": _NONNEG,
        "oma_dbm": _NUM,
        "extinction_ratio_db": _POS,
    },
    "oneOf": [{"required": ["average_mw"]}, {"required": ["oma_dbm"]}],
    "additionalProperties": False,
}

_RECEIVER = {
    "type": "object",
    "required": ["detector", "sensitivity_dbm"],
    "properties": {
        "name": {"type": "string"},
        "detector": {"enum": ["APD", "PIN"]},
        "sensitivity_dbm": _NUM,
        "select_channels": {"type": "array", "items": _CHANNEL},
        "filters": {"type": "array", "items": _ELEMENT},
    },
    "additionalProperties": False,
}

_TRANSMITTER = {
    "type": "object",
    "required": ["channel"],
    "properties": {
        "channel": _CHANNEL,
        "tuning": {"type": "array", "items": _CHANNEL},
        "launch": _LAUNCH,
        "rate_gbps": _POS,
        "electrical_power_mw": _POS,
    },
    "additionalProperties": False,
}

_QUOTED_BY_KEY = {"type": "object", "additionalProperties": _NUM}

SYSTEM_SCHEMA = {
    "type": "object",
    "required": ["schema", "grid", "rates_gbps"],
    "properties": {
        "schema": {"const": SYSTEM_SCHEMA_ID},
        "grid": {
            "type": "object",
            "required": ["rows", "cols", "pitch_cm"],
            "properties": {"rows": _POS_INT, "cols": _POS_INT, "pitch_cm": _POS},
            "additionalProperties": False,
        },
        "rates_gbps": {"type": "array", "items": _POS, "minItems": 1},
        "electrical_bd_limit_gbps_cm": _POS,
        "electrical_medium": {"type": "string"},
        "media_catalog": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "class", "bd_gbps_cm"],
                "properties": {
                    "name": {"type": "string"},
                    "class": {"enum": ["electrical-pcb", "polymer-waveguide",
                                       "multimode-fiber", "single-mode-fiber"]},
                    "bd_gbps_cm": _POS,
                    "bd_range_gbps_cm": {"type": "array", "minItems": 2, "maxItems": 2,
                                         "items": {"type": ["number", "null"]}},
                    "notes": {"type": "string"},
                },
                "additionalProperties": False,
            },
        },
        "quoted": {
            "type": "object",
            "properties": {
                "optical_count": _QUOTED_BY_KEY,
                "optical_percent": _QUOTED_BY_KEY,
                "percent_tolerance": _NONNEG,
            },
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}

NETWORK_SCHEMA = {
    "type": "object",
    "required": ["schema"],
    "properties": {
        "schema": {"const": NETWORK_SCHEMA_ID},
        "grid": {
            "type": "object",
            "properties": {"base_thz": _POS, "spacing_thz": _POS},
            "additionalProperties": False,
        },
        "coupler": {
            "type": "object",
            "required": ["in_ports", "out_ports"],
            "properties": {"in_ports": _POS_INT, "out_ports": _POS_INT,
                           "excess_db": _NONNEG, "name": {"type": "string"}},
            "additionalProperties": False,
        },
        "nodes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name"],
                "properties": {
                    "name": {"type": "string"},
                    "transmitters": {"type": "array", "items": _TRANSMITTER},
                    "receivers": {"type": "array", "items": _RECEIVER},
                },
                "additionalProperties": False,
            },
        },
        "paths": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["launch", "receiver"],
                "properties": {
                    "description": {"type": "string"},
                    "launch": _LAUNCH,
                    "elements": {"type": "array", "items": _ELEMENT},
                    "receiver": _RECEIVER,
                    "rate_gbps": _POS,
                    "quoted_received_dbm": _NUM,
                    "quoted_margin_db": _NUM,
                },
                "additionalProperties": False,
            },
        },
        "quoted_wavelength_nm": _QUOTED_BY_KEY,
        "ber_model": {
            "type": "object",
            "properties": {"q_at_sensitivity": _POS, "slope_exponent": _POS},
            "additionalProperties": False,
        },
        "scaling": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["base_ports", "base_margin_db"],
                "properties": {
                    "name": {"type": "string"},
                    "base_ports": _POS_INT,
                    "base_margin_db": _NUM,
                    "excess_delta_db": {"type": "object", "additionalProperties": _NONNEG},
                    "min_margin_db": _NUM,
                    "quoted_margin_db": _QUOTED_BY_KEY,
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

CATALOG_SCHEMA = {
    "type": "object",
    "required": ["schema", "transceivers"],
    "properties": {
        "schema": {"const": CATALOG_SCHEMA_ID},
        "transceivers": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["name", "lanes", "rate_per_lane_gbps", "total_power_mw"],
                "properties": {
                    "name": {"type": "string"},
                    "group": {"type": "string"},
                    "wavelength_nm": {"type": ["number", "null"]},
                    "lanes": _POS_INT,
                    "rate_per_lane_gbps": _POS,
                    "total_power_mw": _POS,
                    "reach_m": {"type": ["number", "null"], "exclusiveMinimum": 0},
                    "bd_per_lane_gbps_cm": {"type": ["number", "null"]},
                    "printed_pj_per_bit": {"type": ["number", "null"]},
                    "notes": {"type": "string"},
                },
                "additionalProperties": False,
            },
        },
        "connectors": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "channels_per_fiber", "fibers", "rate_gbps",
                             "width_mm", "height_mm"],
                "properties": {
                    "name": {"type": "string"},
                    "channels_per_fiber": _POS_INT,
                    "fibers": _POS_INT,
                    "rate_gbps": _POS,
                    "width_mm": _POS,
                    "height_mm": _POS,
                    "printed_density": {"type": ["number", "null"]},
                },
                "additionalProperties": False,
            },
        },
        "density_comparisons": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["numerator", "denominator"],
                "properties": {"numerator": {"type": "string"},
                               "denominator": {"type": "string"},
                               "quoted_ratio": _NUM},
                "additionalProperties": False,
            },
        },
        "energy_scaling": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "base_pj_per_bit", "base_rate_gbps", "new_rate_gbps"],
                "properties": {
                    "name": {"type": "string"},
                    "base_pj_per_bit": _POS,
                    "base_rate_gbps": _POS,
                    "new_rate_gbps": _POS,
                    "printed_pj_per_bit": _NUM,
                },
                "additionalProperties": False,
            },
        },
        "cost_bands": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "usd_per_gbps"],
                "properties": {
                    "name": {"type": "string"},
                    "usd_per_gbps": {"type": "array", "items": _POS, "minItems": 2, "maxItems": 2},
                },
                "additionalProperties": False,
            },
        },
        "power_breakdowns": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "blocks"],
                "properties": {
                    "name": {"type": "string"},
                    "blocks": {"type": "object", "additionalProperties": _NONNEG},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}


def _validate(doc: Any, schema: dict, source: str) -> None:
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        lines = []
        for err in errors:
            where = "/".join(str(p) for p in err.absolute_path) or "<root>"
            lines.append(f"{source}: {where}: {err.message}")
        raise ConfigError("\n".join(lines))


# -- system config -----------------------------------------------------------

@dataclass(frozen=True)
class SystemConfig:
    grid: NodeGrid
    media_catalog: MediumCatalog
    rates_gbps: tuple[float, ...]
    electrical_bd_limit: float
    quoted_optical_count: dict[float, int] = field(default_factory=dict)
    quoted_optical_percent: dict[float, float] = field(default_factory=dict)
    percent_tolerance: float = 1.0


def _keyed_by_rate(d: dict) -> dict:
    try:
        return {float(k): v for k, v in d.items()}
    except ValueError as exc:
        raise ConfigError(f"quoted values must be keyed by rate: {exc}") from exc


def parse_system(doc: dict, source: str = "<config>") -> SystemConfig:
    _validate(doc, SYSTEM_SCHEMA, source)
    g = doc["grid"]
    if "media_catalog" in doc:
        try:
            catalog = MediumCatalog(tuple(
                MediumSpec(
                    m["name"], m["class"], m["bd_gbps_cm"],
                    tuple(m["bd_range_gbps_cm"]) if "bd_range_gbps_cm" in m else None,
                    m.get("notes", ""),
                )
                for m in doc["media_catalog"]
            ))
        except ValueError as exc:
            raise ConfigError(f"{source}: media_catalog: {exc}") from exc
    else:
        catalog = default_catalog()

    if "electrical_bd_limit_gbps_cm" in doc:
        limit = float(doc["electrical_bd_limit_gbps_cm"])
    elif "electrical_medium" in doc:
        try:
            limit = catalog.get(doc["electrical_medium"]).bd_gbps_cm
        except KeyError:
            raise UnknownReference(
                f"{source}: electrical_medium {doc['electrical_medium']!r} is not in the media catalog"
            ) from None
    else:
        limit = DEFAULT_ELECTRICAL_BD_GBPS_CM

    rates = tuple(float(r) for r in doc["rates_gbps"])
    if list(rates) != sorted(rates):
        raise ConfigError(f"{source}: rates_gbps: rates must be ascending")
    quoted = doc.get("quoted", {})
    return SystemConfig(
        grid=NodeGrid(g["rows"], g["cols"], float(g["pitch_cm"])),
        media_catalog=catalog,
        rates_gbps=rates,
        electrical_bd_limit=limit,
        quoted_optical_count={k: int(v) for k, v in _keyed_by_rate(quoted.get("optical_count", {})).items()},
        quoted_optical_percent=_keyed_by_rate(quoted.get("optical_percent", {})),
        percent_tolerance=float(quoted.get("percent_tolerance", 1.0)),
    )


def load_system(path: str | Path) -> tuple[SystemConfig, str]:
    doc, digest = read_json(path)
    return parse_system(doc, str(path)), digest


# -- network plan ------------------------------------------------------------

@dataclass(frozen=True)
class PathEntry:
    path: OpticalPath
    description: str = ""
    rate_gbps: float | None = None
    quoted_received_dbm: float | None = None
    quoted_margin_db: float | None = None


@dataclass(frozen=True)
class ScalingEntry:
    ledger: ScalingLedger
    quoted_margin_db: dict[int, float] = field(default_factory=dict)
    has_own_minimum: bool = False


@dataclass(frozen=True)
class NetworkPlanFile:
    network: BroadcastNetwork
    paths: dict[str, PathEntry]
    ber_model: BerModel
    scaling: tuple[ScalingEntry, ...]
    quoted_wavelength_nm: dict[int, float] = field(default_factory=dict)

    def path(self, name: str) -> PathEntry:
        try:
            return self.paths[name]
        except KeyError:
            known = ", ".join(sorted(self.paths)) or "none defined"
            raise UnknownReference(f"unknown path {name!r} (known: {known})") from None


def parse_element(d: dict) -> PassiveElement:
    kind = d["kind"]
    name = d.get("name")
    extra = {"name": name} if name else {}
    if kind == "star_coupler":
        return StarCoupler(d["in_ports"], d["out_ports"], d.get("excess_db", 0.0), **extra)
    if kind == "awg":
        return Awg(d["ports"], d.get("excess_db", 0.0), d.get("base_channel", 0),
                   d.get("direction", "demux"), **extra)
    if kind == "connector":
        return Connector(d["loss_db"], **extra)
    if kind == "attenuator":
        return Attenuator(d["loss_db"], **extra)
    if kind == "fiber":
        return FiberSpan(d["length_m"], d["atten_db_per_km"], **extra)
    raise ConfigError(f"unknown element kind {kind!r}")


def parse_launch(d: dict) -> ModulationSpec:
    er = float(d["extinction_ratio_db"])
    if "oma_dbm" in d:
        return ModulationSpec.from_oma(dbm_to_mw(d["oma_dbm"]), er)
    return ModulationSpec(float(d["average_mw"]), er)


def parse_receiver(d: dict) -> ReceiverSpec:
    return ReceiverSpec(
        detector=d["detector"],
        sensitivity_dbm=float(d["sensitivity_dbm"]),
        select_channels=frozenset(d.get("select_channels", ())),
        filters=tuple(parse_element(f) for f in d.get("filters", ())),
        name=d.get("name", ""),
    )


def parse_network(doc: dict, source: str = "<network>") -> NetworkPlanFile:
    _validate(doc, NETWORK_SCHEMA, source)
    try:
        grid = doc.get("grid", {})
        nodes = []
        for n in doc.get("nodes", []):
            txs = tuple(
                TransmitterSpec(
                    channel=t["channel"],
                    tuning=frozenset(t.get("tuning", ())),
                    launch=parse_launch(t["launch"]) if "launch" in t else None,
                    rate_gbps=float(t.get("rate_gbps", 10.0)),
                    electrical_power_mw=t.get("electrical_power_mw"),
                )
                for t in n.get("transmitters", [])
            )
            rxs = tuple(parse_receiver(r) for r in n.get("receivers", []))
            nodes.append(Node(n["name"], txs, rxs))
        c = doc.get("coupler", {"in_ports": max(len(nodes), 1), "out_ports": max(len(nodes), 1)})
        coupler = StarCoupler(c["in_ports"], c["out_ports"], c.get("excess_db", 0.0),
                              c.get("name", "star coupler"))
        kwargs = {}
        if "base_thz" in grid:
            kwargs["grid_base_thz"] = float(grid["base_thz"])
        if "spacing_thz" in grid:
            kwargs["spacing_thz"] = float(grid["spacing_thz"])
        network = BroadcastNetwork(tuple(nodes), coupler, **kwargs)

        paths = {}
        for name, p in sorted(doc.get("paths", {}).items()):
            path = OpticalPath(
                launch=parse_launch(p["launch"]),
                elements=tuple(parse_element(e) for e in p.get("elements", ())),
                rx=parse_receiver(p["receiver"]),
                name=name,
            )
            paths[name] = PathEntry(path, p.get("description", ""), p.get("rate_gbps"),
                                    p.get("quoted_received_dbm"), p.get("quoted_margin_db"))

        bm = doc.get("ber_model", {})
        ber_model = BerModel(**bm)

        scaling = []
        for s in doc.get("scaling", []):
            kw = {}
            if "min_margin_db" in s:
                kw["min_margin_db"] = float(s["min_margin_db"])
            ledger = ScalingLedger(
                base_ports=s["base_ports"],
                base_margin_db=float(s["base_margin_db"]),
                excess_delta_db={int(k): v for k, v in s.get("excess_delta_db", {}).items()},
                name=s.get("name", f"base {s['base_ports']}"),
                **kw,
            )
            quoted = {int(k): float(v) for k, v in s.get("quoted_margin_db", {}).items()}
            scaling.append(ScalingEntry(ledger, quoted, "min_margin_db" in s))
    except (PlanError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{source}: {exc}") from exc
    try:
        quoted_wl = {int(k): float(v) for k, v in doc.get("quoted_wavelength_nm", {}).items()}
    except ValueError as exc:
        raise ConfigError(f"{source}: quoted_wavelength_nm: keys must be channel numbers") from exc
    return NetworkPlanFile(network, paths, ber_model, tuple(scaling), quoted_wl)


def load_network(path: str | Path) -> tuple[NetworkPlanFile, str]:
    doc, digest = read_json(path)
    return parse_network(doc, str(path)), digest


# -- metric catalog ----------------------------------------------------------

@dataclass(frozen=True)
class MetricCatalog:
    transceivers: tuple[TransceiverRecord, ...]
    groups: dict[str, str] = field(default_factory=dict)
    connectors: tuple[ConnectorDensityRecord, ...] = ()
    density_comparisons: tuple[tuple[str, str, float | None], ...] = ()
    energy_scaling: tuple[EnergyScalingRecord, ...] = ()
    cost_bands: tuple[tuple[str, float, float], ...] = ()
    power_breakdowns: tuple[tuple[str, PowerBreakdown], ...] = ()

    def connector(self, name: str) -> ConnectorDensityRecord:
        for c in self.connectors:
            if c.name == name:
                return c
        raise UnknownReference(f"unknown connector {name!r}")


def _row(section: str, i: int, d: dict, build):
    try:
        return build(d)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{section} row {i} ({d.get('name', '?')}): {exc}") from exc


def parse_catalog(doc: dict, source: str = "<catalog>") -> MetricCatalog:
    _validate(doc, CATALOG_SCHEMA, source)
    txs = tuple(
        _row("transceivers", i, d, lambda d: TransceiverRecord(
            name=d["name"],
            lanes=d["lanes"],
            rate_per_lane_gbps=float(d["rate_per_lane_gbps"]),
            total_power_mw=float(d["total_power_mw"]),
            wavelength_nm=d.get("wavelength_nm"),
            reach_m=d.get("reach_m"),
            bd_per_lane_gbps_cm=d.get("bd_per_lane_gbps_cm"),
            printed_pj_per_bit=d.get("printed_pj_per_bit"),
            notes=d.get("notes", ""),
        ))
        for i, d in enumerate(doc["transceivers"])
    )
    names = [t.name for t in txs]
    if len(set(names)) != len(names):
        raise ConfigError(f"{source}: transceivers: names must be unique")
    connectors = tuple(
        _row("connectors", i, d, lambda d: ConnectorDensityRecord(
            d["name"], d["channels_per_fiber"], d["fibers"], float(d["rate_gbps"]),
            float(d["width_mm"]), float(d["height_mm"]), d.get("printed_density"),
        ))
        for i, d in enumerate(doc.get("connectors", []))
    )
    cat = MetricCatalog(
        transceivers=txs,
        groups={d["name"]: d.get("group", "") for d in doc["transceivers"]},
        connectors=connectors,
        density_comparisons=tuple(
            (d["numerator"], d["denominator"], d.get("quoted_ratio"))
            for d in doc.get("density_comparisons", [])
        ),
        energy_scaling=tuple(
            _row("energy_scaling", i, d, lambda d: EnergyScalingRecord(
                d["name"], d["base_pj_per_bit"], d["base_rate_gbps"], d["new_rate_gbps"],
                d.get("printed_pj_per_bit"),
            ))
            for i, d in enumerate(doc.get("energy_scaling", []))
        ),
        cost_bands=tuple(
            (d["name"], float(d["usd_per_gbps"][0]), float(d["usd_per_gbps"][1]))
            for d in doc.get("cost_bands", [])
        ),
        power_breakdowns=tuple(
            (d["name"], _row("power_breakdowns", i, d, lambda d: PowerBreakdown(dict(d["blocks"]))))
            for i, d in enumerate(doc.get("power_breakdowns", []))
        ),
    )
    for num, den, _ in cat.density_comparisons:
        cat.connector(num)
        cat.connector(den)
    return cat


def load_catalog(path: str | Path) -> tuple[MetricCatalog, str]:
    doc, digest = read_json(path)
    return parse_catalog(doc, str(path)), digest
