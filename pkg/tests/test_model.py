from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from causal_assembly.dsl import parse_model
from causal_assembly.errors import InvalidModelError
from causal_assembly.model import (
    CausalModel,
    CausalRule,
    evaluate,
    to_graph_export,
    validate_model,
)
from generators import random_valid_model
from oracles import fixpoint_evaluate

CONJUNCTION = parse_model(
    'goal: light\n"provide electricity" AND "turn electricity into light" CAUSES light\n'
)


def test_conjunction_satisfied():
    result = evaluate(CONJUNCTION, {"provide electricity", "turn electricity into light"})
    assert result.goal == 1


def test_conjunction_half_satisfied():
    result = evaluate(CONJUNCTION, {"provide electricity"})
    assert result.goal == 0


def test_unknown_active_labels_ignored():
    result = evaluate(CONJUNCTION, {"provide electricity", "no such function"})
    assert result.goal == 0
    assert "no such function" not in result.values


def test_mislabeled_flashlight_functions_do_not_reach_goal():
    active = {"hold things together", "diffuse light", "provide electricity"}
    assert evaluate(CONJUNCTION, active).goal == 0


def test_or_across_rules():
    model = parse_model("goal: light\na CAUSES light\nb CAUSES light\n")
    assert evaluate(model, {"a"}).goal == 1
    assert evaluate(model, {"b"}).goal == 1
    assert evaluate(model, set()).goal == 0


def test_chain_through_intermediate():
    model = parse_model('goal: light\n"burn fuel" CAUSES flame\nflame CAUSES light\n')
    assert evaluate(model, {"burn fuel"}).goal == 1
    # intermediate labels in the active set do not act as roots
    assert evaluate(model, {"flame"}).goal == 0


def test_validate_accepts_chain():
    model = parse_model('goal: light\n"burn fuel" CAUSES flame\nflame CAUSES light\n')
    assert validate_model(model).ok


def test_validate_rejects_causeless_declared_intermediate():
    model = parse_model("goal: light\nintermediate: flame\nflame CAUSES light\n")
    report = validate_model(model)
    assert not report.ok
    codes = {v.code for v in report.violations}
    assert "intermediate_without_cause" in codes
    assert any(v.node == "flame" for v in report.violations)
    assert any("flame" in v.message for v in report.violations)


def test_validate_rejects_cycle():
    model = parse_model("goal: light\na CAUSES b\nb CAUSES a\na CAUSES light\n")
    report = validate_model(model)
    assert not report.ok
    cycle = next(v for v in report.violations if v.code == "cycle")
    assert "a -> b -> a" in cycle.message or "b -> a -> b" in cycle.message


def test_validate_rejects_goal_without_cause():
    model = CausalModel(
        goal_label="light",
        rules=(CausalRule(antecedents=frozenset({"a"}), effect="heat"),),
    )
    report = validate_model(model)
    assert any(v.code == "goal_without_cause" for v in report.violations)


def test_validate_rejects_goal_as_cause():
    model = parse_model("goal: light\na CAUSES light\nlight CAUSES warmth\n")
    report = validate_model(model)
    assert any(v.code == "goal_used_as_cause" for v in report.violations)


def test_unused_effect_is_a_warning_not_a_violation():
    model = parse_model("goal: light\na CAUSES light\nb CAUSES sparks\n")
    report = validate_model(model)
    assert report.ok
    assert any(w.code == "effect_unused" and w.node == "sparks" for w in report.warnings)


def test_evaluate_refuses_invalid_model():
    model = parse_model("goal: light\nintermediate: flame\nflame CAUSES light\n")
    with pytest.raises(InvalidModelError):
        evaluate(model, set())


def test_evaluate_matches_fixpoint_oracle_on_random_models():
    rng = random.Random(7)
    for _ in range(50):
        model = random_valid_model(rng)
        roots = sorted(model.function_nodes)
        for _ in range(10):
            active = {r for r in roots if rng.random() < 0.5}
            assert evaluate(model, active).values == fixpoint_evaluate(model, active)


@given(st.data())
@settings(max_examples=60)
def test_evaluate_monotone_in_active_set(data):
    rng = random.Random(data.draw(st.integers(0, 10**6)))
    model = random_valid_model(rng)
    roots = sorted(model.function_nodes)
    small = set(data.draw(st.sets(st.sampled_from(roots), max_size=len(roots))))
    extra = set(data.draw(st.sets(st.sampled_from(roots), max_size=len(roots))))
    low = evaluate(model, small).values
    high = evaluate(model, small | extra).values
    for node in model.nodes:
        assert low[node] <= high[node]


@given(st.data())
@settings(max_examples=60)
def test_adding_a_rule_never_decreases_values(data):
    rng = random.Random(data.draw(st.integers(0, 10**6)))
    model = random_valid_model(rng)
    roots = sorted(model.function_nodes)
    active = {r for r in roots if rng.random() < 0.5}
    before = evaluate(model, active).values

    # a fresh root feeding the goal is always safe to add
    extended = CausalModel(
        goal_label=model.goal_label,
        rules=model.rules
        + (CausalRule(antecedents=frozenset({"extra root"}), effect=model.goal_label),),
    )
    after = evaluate(extended, active).values
    for node in model.nodes:
        assert before[node] <= after[node]


def test_graph_export_one_rule_model():
    export = to_graph_export(CONJUNCTION)
    assert len(export["nodes"]) == 3
    assert len(export["rule_groups"]) == 1
    assert export["rule_groups"][0]["antecedents"] == [
        "provide electricity",
        "turn electricity into light",
    ]
    kinds = {n["label"]: n["kind"] for n in export["nodes"]}
    assert kinds["light"] == "goal"
    assert kinds["provide electricity"] == "function"


def test_graph_export_preserves_or_structure():
    model = parse_model("goal: light\na CAUSES light\nb CAUSES light\n")
    export = to_graph_export(model)
    groups = [g for g in export["rule_groups"] if g["effect"] == "light"]
    assert len(groups) == 2


def test_graph_export_chain():
    model = parse_model('goal: light\n"burn fuel" CAUSES flame\nflame CAUSES light\n')
    export = to_graph_export(model)
    assert len(export["nodes"]) == 3
    assert len(export["rule_groups"]) == 2
    kinds = {n["label"]: n["kind"] for n in export["nodes"]}
    assert kinds["flame"] == "intermediate"


def test_graph_export_refuses_invalid_model():
    model = parse_model("goal: light\na CAUSES b\nb CAUSES a\na CAUSES light\n")
    with pytest.raises(InvalidModelError):
        to_graph_export(model)
