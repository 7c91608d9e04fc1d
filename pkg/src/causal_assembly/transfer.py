"""Generalization protocol: replan for a test object under a frozen model.

The training model is never edited here; a test object only gets a fresh
function binding. Near vs far describes whether the test object shares a
light-production category with any training object.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional, Sequence

from .bindings import FunctionBinding, bind, load_binding_entries
from .catalog import Catalog
from .dsl import model_hash, parse_model
from .errors import CatalogError, ConditionMismatch, StateSpaceExceeded
from .model import CausalModel
from .objects import AssemblyState, ObjectSpec, applicable_actions
from .planning import Plan, PlannerConfig, PlanningProblem, plan

RELATION_NEAR = "near"
RELATION_FAR = "far"

CONDITION_NEAR = "near"
CONDITION_FAR = "far"

REASON_GOAL_UNREACHABLE = "goal_unreachable_under_model"
REASON_NO_CONNECTIONS = "no_compatible_connections"
REASON_STATE_SPACE = "state_space_exceeded"


@dataclass(frozen=True)
class TransferResult:
    training_objects: tuple[str, ...]
    test_object: str
    relation: str
    success: bool
    plan: Optional[Plan]
    reason: Optional[str]
    warnings: tuple[str, ...]

    def to_doc(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "v": 1,
            "test_object": self.test_object,
            "relation": self.relation,
            "outcome": "success" if self.success else "failure",
            "warnings": list(self.warnings),
        }
        if self.reason is not None:
            doc["reason"] = self.reason
        if self.plan is not None:
            doc["plan"] = {
                "steps": [
                    {
                        "primitive": s.action.primitive.value,
                        "from": str(s.action.a),
                        "to": str(s.action.b),
                        "text": s.text,
                    }
                    for s in self.plan.steps
                ],
                "expected_value": float(self.plan.expected_value),
                "achieves_goal": self.plan.achieves_goal,
            }
        return doc


def category_relation(
    catalog: Catalog, training_objects: Sequence[str], test_object: str
) -> str:
    """Near iff the test object shares a category with any training object."""
    test_category = catalog.category_of(test_object)
    for training in training_objects:
        if catalog.category_of(training) == test_category:
            return RELATION_NEAR
    return RELATION_FAR


def binding_warnings(binding: FunctionBinding) -> tuple[str, ...]:
    return tuple(
        f"novel function label (not in the model): {label}"
        for label in binding.novel_labels
    )


def check_transfer(
    model: CausalModel,
    training_objects: Sequence[str],
    test_object: ObjectSpec,
    binding: FunctionBinding,
    catalog: Catalog,
    config: PlannerConfig | None = None,
) -> TransferResult:
    """Plan for the test object under the frozen training model.

    Planner breakdowns surface as failure reasons on the result, never as
    exceptions.
    """
    config = config or PlannerConfig()
    relation = category_relation(catalog, training_objects, test_object.id)
    warnings = binding_warnings(binding)

    problem = PlanningProblem(
        object=test_object, model=model, binding=binding, config=config
    )
    reason: Optional[str] = None
    result_plan: Optional[Plan] = None
    success = False
    try:
        result_plan = plan(problem)
    except StateSpaceExceeded:
        reason = REASON_STATE_SPACE
    else:
        if result_plan.achieves_goal:
            success = True
        elif not applicable_actions(test_object, AssemblyState.empty()):
            reason = REASON_NO_CONNECTIONS
        else:
            reason = REASON_GOAL_UNREACHABLE

    return TransferResult(
        training_objects=tuple(training_objects),
        test_object=test_object.id,
        relation=relation,
        success=success,
        plan=result_plan,
        reason=reason,
        warnings=warnings,
    )


@dataclass(frozen=True)
class ExperimentTest:
    object_id: str
    entries: Mapping[str, list[str]]
    expect: str  # "success" | "failure"


@dataclass(frozen=True)
class ExperimentSpec:
    condition: str
    training: tuple[str, ...]
    model: CausalModel
    tests: tuple[ExperimentTest, ...]


@dataclass(frozen=True)
class ExperimentReport:
    spec: ExperimentSpec
    results: tuple[TransferResult, ...]

    @property
    def expectations_met(self) -> bool:
        return all(
            (r.success and t.expect == "success")
            or (not r.success and t.expect == "failure")
            for t, r in zip(self.spec.tests, self.results)
        )

    def to_doc(self) -> dict[str, Any]:
        return {
            "v": 1,
            "condition": self.spec.condition,
            "training": list(self.spec.training),
            "model_hash": model_hash(self.spec.model),
            "results": [r.to_doc() for r in self.results],
        }


def _check_condition(catalog: Catalog, condition: str, training: Sequence[str]) -> None:
    if condition not in (CONDITION_NEAR, CONDITION_FAR):
        raise ConditionMismatch(f"unknown condition: {condition!r}")
    if len(training) < 2:
        raise ConditionMismatch("training requires at least two objects")
    categories = {catalog.category_of(t) for t in training}
    if condition == CONDITION_NEAR and len(categories) != 1:
        raise ConditionMismatch(
            "near condition requires training objects from one category"
        )
    if condition == CONDITION_FAR and len(categories) < 2:
        raise ConditionMismatch(
            "far condition requires training objects from different categories"
        )


def run_experiment(
    catalog: Catalog,
    spec: ExperimentSpec,
    config: PlannerConfig | None = None,
) -> ExperimentReport:
    """Run every test transfer under the frozen model and collect results."""
    _check_condition(catalog, spec.condition, spec.training)
    results = []
    for test in spec.tests:
        if test.expect not in ("success", "failure"):
            raise ConditionMismatch(f"unknown expectation: {test.expect!r}")
        obj = catalog.object(test.object_id)
        binding = bind(obj, spec.model, test.entries)
        results.append(
            check_transfer(spec.model, spec.training, obj, binding, catalog, config)
        )
    return ExperimentReport(spec=spec, results=tuple(results))


def load_experiment_spec(path: Path) -> ExperimentSpec:
    """Read an experiment config; model/binding paths resolve relative to it."""
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CatalogError(f"{path}: {exc}") from None
    if not isinstance(doc, dict):
        raise CatalogError(f"{path}: top level must be an object")

    condition = doc.get("condition")
    training = doc.get("training")
    model_ref = doc.get("model")
    tests_raw = doc.get("tests")
    if (
        not isinstance(condition, str)
        or not isinstance(training, list)
        or not isinstance(model_ref, str)
        or not isinstance(tests_raw, list)
    ):
        raise CatalogError(f"{path}: expected fields condition, training, model, tests")

    base = path.parent
    model_path = (base / model_ref).resolve()
    try:
        model = parse_model(model_path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise CatalogError(f"{model_path}: {exc}") from None

    tests: list[ExperimentTest] = []
    for entry in tests_raw:
        if not isinstance(entry, dict):
            raise CatalogError(f"{path}: test entries must be objects")
        object_id = entry.get("object")
        binding_ref = entry.get("binding")
        expect = entry.get("expect")
        if (
            not isinstance(object_id, str)
            or not isinstance(binding_ref, str)
            or expect not in ("success", "failure")
        ):
            raise CatalogError(
                f"{path}: each test needs object, binding, and expect success|failure"
            )
        bound_object, entries = load_binding_entries((base / binding_ref).resolve())
        if bound_object != object_id:
            raise CatalogError(
                f"{path}: binding {binding_ref!r} is for {bound_object!r}, "
                f"not {object_id!r}"
            )
        tests.append(ExperimentTest(object_id=object_id, entries=entries, expect=expect))

    return ExperimentSpec(
        condition=condition, training=tuple(training), model=model, tests=tuple(tests)
    )
