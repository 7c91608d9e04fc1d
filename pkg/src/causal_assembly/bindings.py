"""Function bindings: which capability labels a human ascribed to each part.

A binding is authored once for the training object (step 1) and again for
each test object (step 3). Labels the model never mentions are kept but
flagged novel; evaluation cannot use them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Mapping

from .errors import CatalogError, UnknownPartError
from .model import CausalModel, normalize_label
from .objects import ObjectSpec

PROVENANCE_MODEL = "from_model_vocabulary"
PROVENANCE_NOVEL = "novel"


@dataclass(frozen=True)
class FunctionBinding:
    object_id: str
    entries: Mapping[str, frozenset[str]]
    provenance: Mapping[str, str]

    def active_labels(self, parts: Iterable[str]) -> frozenset[str]:
        """Union of bound labels over the given part ids."""
        active: set[str] = set()
        for part_id in parts:
            active.update(self.entries.get(part_id, frozenset()))
        return frozenset(active)

    @property
    def novel_labels(self) -> tuple[str, ...]:
        return tuple(
            sorted(l for l, src in self.provenance.items() if src == PROVENANCE_NOVEL)
        )

    def to_doc(self) -> dict[str, Any]:
        return {
            "v": 1,
            "object_id": self.object_id,
            "entries": {p: sorted(labels) for p, labels in sorted(self.entries.items())},
            "provenance": dict(sorted(self.provenance.items())),
        }


def bind(
    obj: ObjectSpec, model: CausalModel, entries: Mapping[str, Iterable[str]]
) -> FunctionBinding:
    """Attach normalized labels to parts, tagging each label's provenance.

    A label is from the model's vocabulary iff it names a function node;
    anything else (including intermediate-effect names) is novel and can
    never switch a root on.
    """
    normalized: dict[str, frozenset[str]] = {}
    provenance: dict[str, str] = {}
    for part_id, labels in entries.items():
        if part_id not in obj.part_map:
            raise UnknownPartError(part_id, obj.id)
        label_set = frozenset(normalize_label(l) for l in labels)
        normalized[part_id] = label_set
        for label in label_set:
            if label in model.function_nodes:
                provenance[label] = PROVENANCE_MODEL
            else:
                provenance[label] = PROVENANCE_NOVEL
    for part in obj.parts:
        normalized.setdefault(part.id, frozenset())
    return FunctionBinding(object_id=obj.id, entries=normalized, provenance=provenance)


def load_binding_entries(path: Path) -> tuple[str, dict[str, list[str]]]:
    """Read a binding file: {object_id, entries: {part_id: [labels]}}."""
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CatalogError(f"{path}: {exc}") from None
    if not isinstance(doc, dict):
        raise CatalogError(f"{path}: top level must be an object")
    object_id = doc.get("object_id")
    entries = doc.get("entries")
    if not isinstance(object_id, str) or not isinstance(entries, dict):
        raise CatalogError(f"{path}: expected fields object_id and entries")
    parsed: dict[str, list[str]] = {}
    for part_id, labels in entries.items():
        if not isinstance(labels, list) or not all(isinstance(l, str) for l in labels):
            raise CatalogError(f"{path}: entries[{part_id!r}] must be a list of strings")
        parsed[part_id] = list(labels)
    return object_id, parsed
