import json

import pytest

from hpcfabric.config import (
    ConfigError,
    UnknownReference,
    bundled,
    load_system,
    parse_catalog,
    parse_network,
    parse_system,
    read_json,
)


def _doc(name):
    return read_json(bundled(name))[0]


def test_bundled_files_load(system_config, plan, catalog):
    assert system_config.grid.node_count == 36
    assert system_config.electrical_bd_limit == 500.0
    assert system_config.rates_gbps == (5.0, 10.0, 20.0)
    assert set(plan.paths) == {"multimode", "dwdm", "dwdm_32x32"}
    assert len(catalog.transceivers) == 10


def test_digest_is_stable(tmp_path):
    p = tmp_path / "sys.json"
    p.write_text(json.dumps(_doc("system_6x6.json")))
    assert load_system(p)[1] == load_system(p)[1]
    assert len(load_system(p)[1]) == 64


def test_missing_field_names_path():
    doc = _doc("system_6x6.json")
    del doc["grid"]["pitch_cm"]
    with pytest.raises(ConfigError, match="grid: 'pitch_cm' is a required property"):
        parse_system(doc)


def test_unknown_medium_is_reference_error():
    doc = _doc("system_6x6.json")
    doc["electrical_medium"] = "unobtainium"
    with pytest.raises(UnknownReference, match="unobtainium"):
        parse_system(doc)


def test_rates_must_ascend():
    doc = _doc("system_6x6.json")
    doc["rates_gbps"] = [20, 10]
    with pytest.raises(ConfigError):
        parse_system(doc)


def test_wrong_schema_tag():
    doc = _doc("system_6x6.json")
    doc["schema"] = "something/else"
    with pytest.raises(ConfigError):
        parse_system(doc)


def test_unknown_path_name(plan):
    with pytest.raises(UnknownReference):
        plan.path("nope")


def test_network_negative_loss_rejected():
    doc = _doc("testbed_network.json")
    doc["paths"]["dwdm"]["elements"][0]["excess_db"] = -1
    with pytest.raises(ConfigError):
        parse_network(doc)


def test_empty_catalog_rejected():
    doc = _doc("catalog.json")
    doc["transceivers"] = []
    with pytest.raises(ConfigError):
        parse_catalog(doc)


def test_catalog_row_error_names_row():
    doc = _doc("catalog.json")
    doc["transceivers"][0]["lanes"] = 0
    with pytest.raises(ConfigError, match="transceivers"):
        parse_catalog(doc)


def test_bad_json(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    with pytest.raises(ConfigError):
        read_json(p)
