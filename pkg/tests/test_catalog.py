from __future__ import annotations

import json

import pytest

from causal_assembly.catalog import load_catalog, load_object, parse_object
from causal_assembly.errors import CatalogError


def test_fixture_catalog_loads_four_objects(catalog):
    assert list(catalog.objects) == ["candle", "desk_lamp", "flashlight", "kerosene_lamp"]


def test_fixture_categories(catalog):
    assert catalog.category_of("candle") == "burn_fuel"
    assert catalog.category_of("kerosene_lamp") == "burn_fuel"
    assert catalog.category_of("desk_lamp") == "electric"
    assert catalog.category_of("flashlight") == "electric"


def test_paper_named_parts_present(catalog):
    lamp = catalog.object("desk_lamp")
    assert {p.display_name for p in lamp.parts} == {"shade", "light bulb", "base with cables"}
    flashlight = catalog.object("flashlight")
    assert {p.id for p in flashlight.parts} == {"case", "head", "batteries"}


def test_unknown_object_raises(catalog):
    with pytest.raises(CatalogError, match="unknown object"):
        catalog.object("toaster")


def test_empty_directory_gives_empty_catalog(tmp_path):
    catalog = load_catalog(tmp_path)
    assert catalog.objects == {}


def test_missing_directory_rejected(tmp_path):
    with pytest.raises(CatalogError, match="not found"):
        load_catalog(tmp_path / "nope")


def test_malformed_json_rejected(tmp_path):
    (tmp_path / "bad.json").write_text("{not json", encoding="utf-8")
    with pytest.raises(CatalogError):
        load_catalog(tmp_path)


def test_missing_field_rejected(tmp_path):
    (tmp_path / "bad.json").write_text(json.dumps({"id": "x"}), encoding="utf-8")
    with pytest.raises(CatalogError, match="display_name"):
        load_object(tmp_path / "bad.json")


def test_unknown_connector_kind_rejected():
    doc = {
        "id": "x",
        "display_name": "x",
        "parts": [
            {
                "id": "p",
                "display_name": "p",
                "connectors": [
                    {"id": "c", "kind": "magnet", "size": 1.0, "accepted_primitives": ["connect"]}
                ],
            }
        ],
    }
    with pytest.raises(CatalogError, match="magnet"):
        parse_object(doc)


def test_override_entry_parsed():
    doc = {
        "id": "x",
        "display_name": "x",
        "parts": [
            {"id": "a", "display_name": "a", "connectors": [
                {"id": "c", "kind": "plug", "size": 1.0, "accepted_primitives": ["connect"]}]},
            {"id": "b", "display_name": "b", "connectors": [
                {"id": "c", "kind": "socket", "size": 1.0, "accepted_primitives": ["connect"]}]},
        ],
        "compat_overrides": [{"a": "b.c", "b": "a.c", "p": 0.5}],
    }
    obj = parse_object(doc)
    assert len(obj.compat_overrides) == 1


def test_duplicate_object_ids_rejected(tmp_path, fixture_dir):
    source = (fixture_dir / "catalog" / "candle.json").read_text()
    (tmp_path / "one.json").write_text(source, encoding="utf-8")
    (tmp_path / "two.json").write_text(source, encoding="utf-8")
    with pytest.raises(CatalogError, match="duplicate object id"):
        load_catalog(tmp_path)


def test_category_of_unlisted_object(tmp_path, fixture_dir):
    source = (fixture_dir / "catalog" / "candle.json").read_text()
    (tmp_path / "candle.json").write_text(source, encoding="utf-8")
    (tmp_path / "categories.json").write_text(
        json.dumps({"v": 1, "categories": []}), encoding="utf-8"
    )
    with pytest.raises(CatalogError, match="without a category"):
        load_catalog(tmp_path)


def test_category_listing_unknown_member(tmp_path):
    (tmp_path / "categories.json").write_text(
        json.dumps({"v": 1, "categories": [{"id": "x", "members": ["ghost"]}]}),
        encoding="utf-8",
    )
    with pytest.raises(CatalogError, match="ghost"):
        load_catalog(tmp_path)
