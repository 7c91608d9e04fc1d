"""Causal models of how part functions combine to produce a goal effect.

A model is a set of rules over three node kinds: function nodes (roots,
activated by object parts), intermediate-effect nodes, and a single goal
node. Antecedents within a rule conjoin; multiple rules with the same
effect disjoin. Evaluation is deterministic and binary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .errors import InvalidModelError

NODE_FUNCTION = "function"
NODE_INTERMEDIATE = "intermediate"
NODE_GOAL = "goal"


def normalize_label(text: str) -> str:
    """Trim and lowercase a node label. Label identity is case-insensitive."""
    label = text.strip().lower()
    if not label:
        raise ValueError("node label is empty after trimming")
    return label


@dataclass(frozen=True)
class CausalRule:
    """One rule: every antecedent active makes the effect active."""

    antecedents: frozenset[str]
    effect: str

    def __post_init__(self):
        if not self.antecedents:
            raise ValueError("rule has no antecedents")
        if self.effect in self.antecedents:
            raise ValueError(f"effect appears in its own causes: {self.effect!r}")


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    message: str
    node: str | None = None
    rule_index: int | None = None

    def to_doc(self) -> dict:
        doc = {"code": self.code, "message": self.message}
        if self.node is not None:
            doc["node"] = self.node
        if self.rule_index is not None:
            doc["rule_index"] = self.rule_index
        return doc


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[ValidationIssue, ...] = ()
    warnings: tuple[ValidationIssue, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_doc(self) -> dict:
        return {
            "v": 1,
            "ok": self.ok,
            "violations": [v.to_doc() for v in self.violations],
            "warnings": [w.to_doc() for w in self.warnings],
        }


@dataclass(frozen=True)
class CausalModel:
    """A parsed model: goal label, ordered rules, optional declared intermediates.

    Construction is purely structural; semantic invariants (acyclicity,
    every intermediate caused, goal produced) live in :func:`validate_model`.
    """

    goal_label: str
    rules: tuple[CausalRule, ...]
    declared_intermediates: frozenset[str] = frozenset()

    @cached_property
    def nodes(self) -> frozenset[str]:
        labels = {self.goal_label} | set(self.declared_intermediates)
        for rule in self.rules:
            labels.add(rule.effect)
            labels.update(rule.antecedents)
        return frozenset(labels)

    @cached_property
    def effects(self) -> frozenset[str]:
        return frozenset(rule.effect for rule in self.rules)

    @cached_property
    def function_nodes(self) -> frozenset[str]:
        """Root nodes: labels that are never the effect of any rule."""
        return frozenset(
            self.nodes - self.effects - self.declared_intermediates - {self.goal_label}
        )

    @cached_property
    def intermediate_nodes(self) -> frozenset[str]:
        return frozenset(
            (self.effects - {self.goal_label}) | self.declared_intermediates
        )

    @cached_property
    def rules_by_effect(self) -> Mapping[str, tuple[CausalRule, ...]]:
        grouped: dict[str, list[CausalRule]] = {}
        for rule in self.rules:
            grouped.setdefault(rule.effect, []).append(rule)
        return {effect: tuple(rules) for effect, rules in grouped.items()}

    @cached_property
    def validation(self) -> ValidationReport:
        return validate_model(self)

    @cached_property
    def topological_order(self) -> tuple[str, ...] | None:
        """Nodes sorted so every antecedent precedes its effects; None if cyclic.

        Ties are broken lexicographically so the order is a pure function
        of the rule set.
        """
        dependents: dict[str, set[str]] = {node: set() for node in self.nodes}
        indegree: dict[str, int] = {node: 0 for node in self.nodes}
        for rule in self.rules:
            for antecedent in rule.antecedents:
                if rule.effect not in dependents[antecedent]:
                    dependents[antecedent].add(rule.effect)
                    indegree[rule.effect] += 1
        ready = sorted(node for node, deg in indegree.items() if deg == 0)
        order: list[str] = []
        while ready:
            node = ready.pop(0)
            order.append(node)
            added = False
            for dependent in dependents[node]:
                indegree[dependent] -= 1
                if indegree[dependent] == 0:
                    ready.append(dependent)
                    added = True
            if added:
                ready.sort()
        if len(order) != len(self.nodes):
            return None
        return tuple(order)


@dataclass(frozen=True)
class NodeValuation:
    """Binary value per node for one active-function set."""

    values: Mapping[str, int]
    goal_label: str

    @property
    def goal(self) -> int:
        return self.values[self.goal_label]


def _find_cycle(model: CausalModel) -> list[str]:
    """Return one directed cycle as a node path, first node repeated at the end."""
    children: dict[str, set[str]] = {node: set() for node in model.nodes}
    for rule in model.rules:
        for antecedent in rule.antecedents:
            children[antecedent].add(rule.effect)

    WHITE, GRAY, BLACK = 0, 1, 2
    color = {node: WHITE for node in model.nodes}
    stack: list[str] = []

    def visit(node: str) -> list[str] | None:
        color[node] = GRAY
        stack.append(node)
        for child in sorted(children[node]):
            if color[child] == GRAY:
                start = stack.index(child)
                return stack[start:] + [child]
            if color[child] == WHITE:
                found = visit(child)
                if found:
                    return found
        stack.pop()
        color[node] = BLACK
        return None

    for node in sorted(model.nodes):
        if color[node] == WHITE:
            found = visit(node)
            if found:
                return found
    return []


def validate_model(model: CausalModel) -> ValidationReport:
    """Check every semantic invariant; violations are report contents, not failures."""
    violations: list[ValidationIssue] = []
    warnings: list[ValidationIssue] = []

    if model.goal_label not in model.effects:
        violations.append(
            ValidationIssue(
                code="goal_without_cause",
                message=f"goal effect is never caused: {model.goal_label}",
                node=model.goal_label,
            )
        )

    for index, rule in enumerate(model.rules):
        if model.goal_label in rule.antecedents:
            violations.append(
                ValidationIssue(
                    code="goal_used_as_cause",
                    message=f"goal effect used as a cause: {model.goal_label}",
                    node=model.goal_label,
                    rule_index=index,
                )
            )

    if model.goal_label in model.declared_intermediates:
        violations.append(
            ValidationIssue(
                code="goal_declared_intermediate",
                message=f"goal effect declared as an intermediate: {model.goal_label}",
                node=model.goal_label,
            )
        )

    for node in sorted(model.declared_intermediates - model.effects):
        if node == model.goal_label:
            continue
        violations.append(
            ValidationIssue(
                code="intermediate_without_cause",
                message=f"intermediate effect without causes: {node}",
                node=node,
            )
        )

    if model.topological_order is None:
        cycle = _find_cycle(model)
        violations.append(
            ValidationIssue(
                code="cycle",
                message="cycle: " + " -> ".join(cycle),
                node=cycle[0] if cycle else None,
            )
        )

    # Effects that can never influence the goal are legal but almost always
    # a modeling mistake; surface them without rejecting the model.
    if model.topological_order is not None and model.goal_label in model.effects:
        feeds_goal = {model.goal_label}
        frontier = [model.goal_label]
        while frontier:
            node = frontier.pop()
            for rule in model.rules_by_effect.get(node, ()):
                for antecedent in rule.antecedents:
                    if antecedent not in feeds_goal:
                        feeds_goal.add(antecedent)
                        frontier.append(antecedent)
        for node in sorted(model.effects - feeds_goal):
            warnings.append(
                ValidationIssue(
                    code="effect_unused",
                    message=f"effect never contributes to the goal: {node}",
                    node=node,
                )
            )

    return ValidationReport(violations=tuple(violations), warnings=tuple(warnings))


def evaluate(model: CausalModel, active_functions: Iterable[str]) -> NodeValuation:
    """Evaluate every node for the given set of active function labels.

    Roots take value 1 iff their label is active; a non-root takes value 1
    iff some rule for it has all antecedents at 1. Labels that name no root
    are ignored. Raises InvalidModelError when the model fails validation,
    so evaluation is defined exactly on valid models.
    """
    report = model.validation
    if not report.ok:
        raise InvalidModelError(report)

    active = set()
    for label in active_functions:
        try:
            active.add(normalize_label(label))
        except ValueError:
            continue

    order = model.topological_order
    assert order is not None  # valid models are acyclic
    roots = model.function_nodes
    values: dict[str, int] = {}
    for node in order:
        if node in roots:
            values[node] = 1 if node in active else 0
        else:
            satisfied = any(
                all(values[a] for a in rule.antecedents)
                for rule in model.rules_by_effect.get(node, ())
            )
            values[node] = 1 if satisfied else 0
    return NodeValuation(values=values, goal_label=model.goal_label)


def node_kind(model: CausalModel, label: str) -> str:
    if label == model.goal_label:
        return NODE_GOAL
    if label in model.function_nodes:
        return NODE_FUNCTION
    return NODE_INTERMEDIATE


def to_graph_export(model: CausalModel) -> dict:
    """Export nodes and per-rule antecedent bundles for rendering.

    One rule group per rule keeps AND-bundles distinguishable from
    OR-alternatives (two groups with the same effect). Ordering is
    lexicographic by label, then original rule index.
    """
    report = model.validation
    if not report.ok:
        raise InvalidModelError(report)

    nodes = [
        {"label": label, "kind": node_kind(model, label)}
        for label in sorted(model.nodes)
    ]
    indexed = sorted(
        enumerate(model.rules), key=lambda pair: (pair[1].effect, pair[0])
    )
    rule_groups = [
        {"effect": rule.effect, "antecedents": sorted(rule.antecedents)}
        for _, rule in indexed
    ]
    return {
        "v": 1,
        "goal": model.goal_label,
        "nodes": nodes,
        "rule_groups": rule_groups,
    }
