from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from causal_assembly.dsl import format_label, model_hash, parse_model, serialize_model
from causal_assembly.errors import ParseError
from causal_assembly.model import CausalModel, CausalRule

CONJUNCTION = (
    "goal: light\n"
    '"provide electricity" AND "turn electricity into light" CAUSES light\n'
)

CHAIN = 'goal: light\n"burn fuel" CAUSES flame\nflame CAUSES light\n'


def test_parse_conjunction_rule():
    model = parse_model(CONJUNCTION)
    assert model.goal_label == "light"
    assert model.function_nodes == {"provide electricity", "turn electricity into light"}
    assert len(model.rules) == 1
    assert model.rules[0].effect == "light"


def test_parse_two_rule_chain():
    model = parse_model(CHAIN)
    assert model.function_nodes == {"burn fuel"}
    assert model.intermediate_nodes == {"flame"}
    assert model.goal_label == "light"
    assert len(model.rules) == 2


def test_keywords_case_insensitive():
    model = parse_model('GOAL: light\n"a" and "b" causes light\n')
    assert model.function_nodes == {"a", "b"}


def test_labels_case_normalized():
    model = parse_model('goal: LIGHT\n"Provide Electricity" CAUSES Light\n')
    assert model.goal_label == "light"
    assert model.function_nodes == {"provide electricity"}


def test_comments_and_blank_lines_ignored():
    source = "# heading\n\ngoal: light  # trailing\n\n# more\nwick CAUSES light\n"
    model = parse_model(source)
    assert len(model.rules) == 1


def test_intermediate_declaration():
    model = parse_model("goal: light\nintermediate: flame\nflame CAUSES light\n")
    assert model.declared_intermediates == {"flame"}
    assert "flame" in model.intermediate_nodes


def test_self_cause_rejected():
    with pytest.raises(ParseError) as exc:
        parse_model('goal: light\n"a" CAUSES a\na CAUSES light\n')
    assert "own causes" in str(exc.value)
    assert exc.value.line == 2


def test_missing_goal_rejected():
    with pytest.raises(ParseError) as exc:
        parse_model("# nothing here\n")
    assert "goal" in exc.value.message


def test_rule_before_goal_rejected():
    with pytest.raises(ParseError) as exc:
        parse_model("a CAUSES light\ngoal: light\n")
    assert exc.value.line == 1


def test_duplicate_goal_rejected():
    with pytest.raises(ParseError) as exc:
        parse_model("goal: light\ngoal: heat\n")
    assert exc.value.line == 2


def test_unterminated_quote_positions():
    with pytest.raises(ParseError) as exc:
        parse_model('goal: light\n"left open CAUSES light\n')
    assert exc.value.line == 2
    assert exc.value.column == 1


def test_missing_causes_keyword():
    with pytest.raises(ParseError) as exc:
        parse_model("goal: light\na b CAUSES light\n")
    assert "expected 'AND' or 'CAUSES'" in exc.value.message


def test_missing_effect():
    with pytest.raises(ParseError):
        parse_model("goal: light\na CAUSES\n")


def test_trailing_garbage_after_effect():
    with pytest.raises(ParseError) as exc:
        parse_model("goal: light\na CAUSES light extra\n")
    assert "after the effect" in exc.value.message


def test_quoted_label_may_contain_keywords_and_comma():
    model = parse_model('goal: light\n"socket and plug, joined" CAUSES light\n')
    assert "socket and plug, joined" in model.function_nodes


_label_chars = st.text(
    alphabet=st.characters(
        whitelist_categories=("Ll", "Nd"), whitelist_characters=" _-"
    ),
    min_size=1,
    max_size=20,
).filter(lambda s: s.strip())


@st.composite
def models(draw):
    n_roots = draw(st.integers(1, 4))
    roots = draw(
        st.lists(_label_chars, min_size=n_roots, max_size=n_roots, unique_by=lambda s: s.strip().lower())
    )
    roots = [r.strip().lower() for r in roots]
    goal = "the goal"
    rules = []
    for chunk_start in range(0, len(roots), 2):
        chunk = roots[chunk_start : chunk_start + 2]
        if goal in chunk:
            continue
        rules.append(CausalRule(antecedents=frozenset(chunk), effect=goal))
    return CausalModel(goal_label=goal, rules=tuple(rules))


@given(models())
@settings(max_examples=100)
def test_serialize_parse_round_trip(model):
    # canonical serialization must survive a parse without structural drift
    reparsed = parse_model(serialize_model(model))
    assert reparsed.goal_label == model.goal_label
    assert set(reparsed.rules) == set(model.rules)
    assert reparsed.nodes == model.nodes
    assert model_hash(reparsed) == model_hash(model)


def test_serialize_is_stable():
    model = parse_model(CONJUNCTION)
    assert serialize_model(model) == serialize_model(parse_model(serialize_model(model)))


def test_format_label_quotes_when_needed():
    assert format_label("flame") == "flame"
    assert format_label("burn fuel") == '"burn fuel"'
    assert format_label("and") == '"and"'
    with pytest.raises(ValueError):
        format_label('has "quotes"')
