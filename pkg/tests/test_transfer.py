from __future__ import annotations

import json
import random

import pytest

from causal_assembly.bindings import bind
from causal_assembly.dsl import model_hash, parse_model
from causal_assembly.errors import CatalogError, ConditionMismatch
from causal_assembly.planning import PlannerConfig
from causal_assembly.transfer import (
    REASON_GOAL_UNREACHABLE,
    REASON_NO_CONNECTIONS,
    REASON_STATE_SPACE,
    ExperimentSpec,
    ExperimentTest,
    category_relation,
    check_transfer,
    load_experiment_spec,
    run_experiment,
)
from generators import random_binary_object, random_binding, random_valid_model

CONJUNCTION = parse_model(
    'goal: light\n"provide electricity" AND "turn electricity into light" CAUSES light\n'
)

PAPER_FLASHLIGHT_ENTRIES = {
    "case": ["hold things together"],
    "head": ["diffuse light", "provide electricity"],
    "batteries": ["provide electricity"],
}


def test_relation_near_within_category(catalog):
    assert category_relation(catalog, ["desk_lamp"], "flashlight") == "near"


def test_relation_far_across_categories(catalog):
    assert category_relation(catalog, ["desk_lamp"], "candle") == "far"


def test_relation_symmetric_in_training_order(catalog):
    a = category_relation(catalog, ["desk_lamp", "candle"], "kerosene_lamp")
    b = category_relation(catalog, ["candle", "desk_lamp"], "kerosene_lamp")
    assert a == b == "near"


def test_successful_near_transfer(catalog):
    flashlight = catalog.object("flashlight")
    binding = bind(
        flashlight,
        CONJUNCTION,
        {"head": ["turn electricity into light"], "batteries": ["provide electricity"]},
    )
    result = check_transfer(CONJUNCTION, ["desk_lamp"], flashlight, binding, catalog)
    assert result.success
    assert result.relation == "near"
    assert result.plan.achieves_goal
    assert len(result.plan.steps) == 2


def test_mislabeled_flashlight_fails_with_goal_unreachable(catalog):
    flashlight = catalog.object("flashlight")
    binding = bind(flashlight, CONJUNCTION, PAPER_FLASHLIGHT_ENTRIES)
    result = check_transfer(CONJUNCTION, ["desk_lamp"], flashlight, binding, catalog)
    assert not result.success
    assert result.reason == REASON_GOAL_UNREACHABLE
    assert result.relation == "near"
    assert any("hold things together" in w for w in result.warnings)


def test_no_compatible_connections_reason(catalog):
    # all-plug connectors: nothing can ever join
    from causal_assembly.objects import Connector, ConnectorKind, ObjectSpec, Part, Primitive

    obj = ObjectSpec(
        id="loose",
        display_name="loose",
        parts=(
            Part("a", "a", (Connector("c", ConnectorKind.PLUG, 1.0,
                                      frozenset({Primitive.CONNECT})),)),
            Part("b", "b", (Connector("c", ConnectorKind.PLUG, 1.0,
                                      frozenset({Primitive.CONNECT})),)),
        ),
    )
    catalog_with_loose = _catalog_plus(catalog, obj, "electric")
    binding = bind(obj, CONJUNCTION, {})
    result = check_transfer(CONJUNCTION, ["desk_lamp"], obj, binding, catalog_with_loose)
    assert not result.success
    assert result.reason == REASON_NO_CONNECTIONS


def test_state_space_reason(catalog):
    flashlight = catalog.object("flashlight")
    binding = bind(flashlight, CONJUNCTION, {})
    result = check_transfer(
        CONJUNCTION, ["desk_lamp"], flashlight, binding, catalog,
        config=PlannerConfig(max_states=1),
    )
    assert not result.success
    assert result.reason == REASON_STATE_SPACE
    assert result.plan is None


def _catalog_plus(catalog, obj, category):
    from causal_assembly.catalog import Catalog

    objects = dict(catalog.objects)
    objects[obj.id] = obj
    categories = {
        cid: (members | {obj.id} if cid == category else members)
        for cid, members in catalog.categories.items()
    }
    return Catalog(objects=dict(sorted(objects.items())), categories=categories)


def test_check_transfer_leaves_model_unchanged(catalog):
    flashlight = catalog.object("flashlight")
    binding = bind(flashlight, CONJUNCTION, PAPER_FLASHLIGHT_ENTRIES)
    before = model_hash(CONJUNCTION)
    check_transfer(CONJUNCTION, ["desk_lamp"], flashlight, binding, catalog)
    assert model_hash(CONJUNCTION) == before


def test_removing_novel_labels_preserves_outcome(catalog):
    rng = random.Random(31)
    model = CONJUNCTION
    for object_id in catalog.objects:
        obj = catalog.object(object_id)
        entries = {
            part.id: (["provide electricity"] if rng.random() < 0.5 else [])
            + (["shine brightly"] if rng.random() < 0.5 else [])
            + (["turn electricity into light"] if rng.random() < 0.4 else [])
            for part in obj.parts
        }
        stripped = {
            part: [l for l in labels if l != "shine brightly"]
            for part, labels in entries.items()
        }
        with_novel = check_transfer(
            model, ["desk_lamp"], obj, bind(obj, model, entries), catalog
        )
        without = check_transfer(
            model, ["desk_lamp"], obj, bind(obj, model, stripped), catalog
        )
        assert with_novel.success == without.success
        assert with_novel.reason == without.reason


def test_superset_binding_never_hurts(catalog):
    # activating more function labels can flip failure to success, never the reverse
    model = CONJUNCTION
    for object_id in ("flashlight", "desk_lamp", "kerosene_lamp"):
        obj = catalog.object(object_id)
        small_entries = {obj.parts[0].id: ["provide electricity"]}
        big_entries = {
            part.id: ["provide electricity", "turn electricity into light"]
            for part in obj.parts
        }
        small = check_transfer(model, ["desk_lamp"], obj, bind(obj, model, small_entries), catalog)
        big = check_transfer(model, ["desk_lamp"], obj, bind(obj, model, big_entries), catalog)
        if small.success:
            assert big.success


def test_run_experiment_near_condition_fixture(catalog, fixture_dir):
    spec = load_experiment_spec(fixture_dir / "experiments" / "near_condition.json")
    report = run_experiment(catalog, spec)
    assert [r.test_object for r in report.results] == ["flashlight", "candle"]
    assert report.results[0].success
    assert not report.results[1].success
    assert report.expectations_met


def test_run_experiment_far_condition_fixture(catalog, fixture_dir):
    spec = load_experiment_spec(fixture_dir / "experiments" / "far_condition.json")
    report = run_experiment(catalog, spec)
    assert all(r.success for r in report.results)
    assert report.expectations_met
    assert {r.relation for r in report.results} == {"near"}


def test_far_condition_rejects_same_category_training(catalog, fixture_dir):
    spec = load_experiment_spec(fixture_dir / "experiments" / "far_condition.json")
    bad = ExperimentSpec(
        condition="far",
        training=("desk_lamp", "flashlight"),
        model=spec.model,
        tests=spec.tests,
    )
    with pytest.raises(ConditionMismatch):
        run_experiment(catalog, bad)


def test_near_condition_rejects_cross_category_training(catalog, fixture_dir):
    spec = load_experiment_spec(fixture_dir / "experiments" / "near_condition.json")
    bad = ExperimentSpec(
        condition="near",
        training=("desk_lamp", "candle"),
        model=spec.model,
        tests=spec.tests,
    )
    with pytest.raises(ConditionMismatch):
        run_experiment(catalog, bad)


def test_experiment_report_document_shape(catalog, fixture_dir):
    spec = load_experiment_spec(fixture_dir / "experiments" / "near_condition.json")
    report = run_experiment(catalog, spec)
    doc = report.to_doc()
    assert doc["v"] == 1
    assert doc["condition"] == "near"
    assert doc["model_hash"] == model_hash(spec.model)
    assert len(doc["results"]) == 2
    success_doc = doc["results"][0]
    assert success_doc["outcome"] == "success"
    assert success_doc["plan"]["achieves_goal"]
    failure_doc = doc["results"][1]
    assert failure_doc["outcome"] == "failure"
    assert failure_doc["reason"] == REASON_GOAL_UNREACHABLE


def test_load_experiment_spec_rejects_object_binding_mismatch(tmp_path, fixture_dir):
    binding = fixture_dir / "bindings" / "candle_fuel.json"
    config = {
        "v": 1,
        "condition": "near",
        "training": ["desk_lamp", "flashlight"],
        "model": str(fixture_dir / "models" / "electric_conjunction.cm"),
        "tests": [{"object": "flashlight", "binding": str(binding), "expect": "success"}],
    }
    path = tmp_path / "exp.json"
    path.write_text(json.dumps(config), encoding="utf-8")
    with pytest.raises(CatalogError, match="candle"):
        load_experiment_spec(path)


def test_random_transfers_never_raise(catalog):
    rng = random.Random(123)
    model = random_valid_model(rng)
    for _ in range(10):
        obj = random_binary_object(rng)
        binding = random_binding(rng, obj, model)
        extended = _catalog_plus(catalog, obj, "electric")
        result = check_transfer(model, ["desk_lamp"], obj, binding, extended)
        assert result.success == (result.reason is None)
