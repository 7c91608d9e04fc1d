"""Load object kits and category fixtures from JSON catalog files.

A catalog directory holds one ``*.json`` document per object plus a
``categories.json`` grouping objects by how they produce light. The
package ships a fixture catalog under ``causal_assembly/fixtures``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from .errors import CatalogError
from .objects import Connector, ConnectorKind, ConnectorRef, ObjectSpec, Part, Primitive

CATEGORIES_FILENAME = "categories.json"


def default_catalog_dir() -> Path:
    return Path(str(resources.files("causal_assembly") / "fixtures" / "catalog"))


def default_fixture_dir() -> Path:
    return Path(str(resources.files("causal_assembly") / "fixtures"))


def _require(doc: Mapping[str, Any], key: str, kind: type, where: str) -> Any:
    if key not in doc:
        raise CatalogError(f"{where}: missing field {key!r}")
    value = doc[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool):
        raise CatalogError(f"{where}: field {key!r} must be a {kind.__name__}")
    return value


def _parse_connector(doc: Any, where: str) -> Connector:
    if not isinstance(doc, dict):
        raise CatalogError(f"{where}: connector entries must be objects")
    cid = _require(doc, "id", str, where)
    where = f"{where}, connector {cid!r}"
    kind_text = _require(doc, "kind", str, where)
    try:
        kind = ConnectorKind(kind_text)
    except ValueError:
        raise CatalogError(f"{where}: unknown kind {kind_text!r}") from None
    size = _require(doc, "size", float, where)
    prims_raw = _require(doc, "accepted_primitives", list, where)
    prims: set[Primitive] = set()
    for p in prims_raw:
        try:
            prims.add(Primitive(p))
        except ValueError:
            raise CatalogError(f"{where}: unknown primitive {p!r}") from None
    try:
        return Connector(
            id=cid, kind=kind, size=size, accepted_primitives=frozenset(prims)
        )
    except ValueError as exc:
        raise CatalogError(f"{where}: {exc}") from None


def _parse_part(doc: Any, where: str) -> Part:
    if not isinstance(doc, dict):
        raise CatalogError(f"{where}: part entries must be objects")
    pid = _require(doc, "id", str, where)
    where = f"{where}, part {pid!r}"
    display = _require(doc, "display_name", str, where)
    connectors_raw = _require(doc, "connectors", list, where)
    connectors = tuple(_parse_connector(c, where) for c in connectors_raw)
    try:
        return Part(id=pid, display_name=display, connectors=connectors)
    except ValueError as exc:
        raise CatalogError(f"{where}: {exc}") from None


def parse_object(doc: Any, where: str = "object document") -> ObjectSpec:
    if not isinstance(doc, dict):
        raise CatalogError(f"{where}: top level must be an object")
    oid = _require(doc, "id", str, where)
    where = f"{where} ({oid!r})"
    display = _require(doc, "display_name", str, where)
    parts_raw = _require(doc, "parts", list, where)
    parts = tuple(_parse_part(p, where) for p in parts_raw)

    overrides: dict[tuple[ConnectorRef, ConnectorRef], float] = {}
    for entry in doc.get("compat_overrides", []):
        if not isinstance(entry, dict):
            raise CatalogError(f"{where}: override entries must be objects")
        try:
            ra = ConnectorRef.parse(_require(entry, "a", str, where))
            rb = ConnectorRef.parse(_require(entry, "b", str, where))
        except ValueError as exc:
            raise CatalogError(f"{where}: {exc}") from None
        p = _require(entry, "p", float, where)
        a, b = sorted((ra, rb))
        overrides[(a, b)] = p

    try:
        return ObjectSpec(
            id=oid, display_name=display, parts=parts, compat_overrides=overrides
        )
    except (ValueError, KeyError) as exc:
        raise CatalogError(f"{where}: {exc}") from None


def load_object(path: Path) -> ObjectSpec:
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CatalogError(f"{path}: {exc}") from None
    return parse_object(doc, where=str(path))


@dataclass(frozen=True)
class Catalog:
    """All loaded objects plus the category partition, in stable id order."""

    objects: Mapping[str, ObjectSpec]
    categories: Mapping[str, frozenset[str]]

    def object(self, object_id: str) -> ObjectSpec:
        try:
            return self.objects[object_id]
        except KeyError:
            raise CatalogError(f"unknown object: {object_id!r}") from None

    def category_of(self, object_id: str) -> str:
        self.object(object_id)
        for category, members in self.categories.items():
            if object_id in members:
                return category
        raise CatalogError(f"object {object_id!r} has no category")


def _load_categories(path: Path, object_ids: set[str]) -> dict[str, frozenset[str]]:
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CatalogError(f"{path}: {exc}") from None
    if not isinstance(doc, dict):
        raise CatalogError(f"{path}: top level must be an object")
    entries = _require(doc, "categories", list, str(path))

    categories: dict[str, frozenset[str]] = {}
    claimed: dict[str, str] = {}
    for entry in entries:
        if not isinstance(entry, dict):
            raise CatalogError(f"{path}: category entries must be objects")
        cid = _require(entry, "id", str, str(path))
        members = _require(entry, "members", list, str(path))
        if cid in categories:
            raise CatalogError(f"{path}: duplicate category {cid!r}")
        for member in members:
            if member not in object_ids:
                raise CatalogError(f"{path}: category {cid!r} lists unknown object {member!r}")
            if member in claimed:
                raise CatalogError(
                    f"{path}: object {member!r} in both {claimed[member]!r} and {cid!r}"
                )
            claimed[member] = cid
        categories[cid] = frozenset(members)

    uncategorized = sorted(object_ids - set(claimed))
    if uncategorized:
        raise CatalogError(f"{path}: objects without a category: {', '.join(uncategorized)}")
    return categories


def load_catalog(directory: Path | None = None) -> Catalog:
    """Read every object document in the directory plus categories.json.

    Any malformed file aborts the load; a catalog is all-or-nothing.
    """
    directory = Path(directory) if directory is not None else default_catalog_dir()
    if not directory.is_dir():
        raise CatalogError(f"catalog directory not found: {directory}")

    objects: dict[str, ObjectSpec] = {}
    for path in sorted(directory.glob("*.json")):
        if path.name == CATEGORIES_FILENAME:
            continue
        obj = load_object(path)
        if obj.id in objects:
            raise CatalogError(f"{path}: duplicate object id {obj.id!r}")
        objects[obj.id] = obj
    objects = dict(sorted(objects.items()))

    categories_path = directory / CATEGORIES_FILENAME
    if categories_path.exists():
        categories = _load_categories(categories_path, set(objects))
    else:
        categories = {}

    return Catalog(objects=objects, categories=categories)
