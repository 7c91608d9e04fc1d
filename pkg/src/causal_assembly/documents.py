"""Canonical JSON document rendering shared by the CLI and the service.

Documents are the machine-facing output format: schema-versioned dicts
serialized with sorted keys so identical inputs give byte-identical bytes.
"""

from __future__ import annotations

import json
from typing import Any

from .catalog import Catalog
from .dsl import model_hash
from .model import CausalModel
from .objects import ObjectSpec
from .planning import Plan
from .transfer import TransferResult


def canonical_json(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def plan_to_doc(obj: ObjectSpec, model: CausalModel, plan: Plan) -> dict[str, Any]:
    return {
        "v": 1,
        "object_id": obj.id,
        "model_hash": model_hash(model),
        "steps": [
            {
                "primitive": step.action.primitive.value,
                "from": str(step.action.a),
                "to": str(step.action.b),
                "text": step.text,
            }
            for step in plan.steps
        ],
        "expected_value": float(plan.expected_value),
        "achieves_goal": plan.achieves_goal,
        "stats": {
            "states": plan.states,
            "iterations": plan.iterations,
            "residual": float(plan.residual),
        },
    }


def object_to_doc(obj: ObjectSpec) -> dict[str, Any]:
    return {
        "id": obj.id,
        "display_name": obj.display_name,
        "parts": [
            {
                "id": part.id,
                "display_name": part.display_name,
                "connectors": [
                    {
                        "id": c.id,
                        "kind": c.kind.value,
                        "size": c.size,
                        "accepted_primitives": sorted(
                            p.value for p in c.accepted_primitives
                        ),
                    }
                    for c in part.connectors
                ],
            }
            for part in obj.parts
        ],
    }


def catalog_to_doc(catalog: Catalog) -> dict[str, Any]:
    objects = []
    for obj in catalog.objects.values():
        doc = object_to_doc(obj)
        if catalog.categories:
            doc["category"] = catalog.category_of(obj.id)
        objects.append(doc)
    return {"v": 1, "objects": objects}


def transfer_to_doc(result: TransferResult) -> dict[str, Any]:
    doc = result.to_doc()
    doc["training"] = list(result.training_objects)
    return doc
