"""Text format for causal models.

    goal: light
    intermediate: flame          # optional, comma-separated
    "burn fuel" CAUSES flame
    flame CAUSES light

Keywords (goal:, intermediate:, AND, CAUSES) are case-insensitive; labels
are case-normalized. Labels are bare words or double-quoted free text.
Comments run from an unquoted # to the end of the line.
"""

from __future__ import annotations

import hashlib
import re

from .errors import ParseError
from .model import CausalModel, CausalRule, normalize_label

_KEYWORDS = {"and", "causes"}
_GOAL_HEADER = re.compile(r"^(\s*)goal(\s*):", re.IGNORECASE)
_INTERMEDIATE_HEADER = re.compile(r"^(\s*)intermediate(s)?(\s*):", re.IGNORECASE)
_BARE_SAFE = re.compile(r"^[a-z0-9_-]+$")

_TOKEN_LABEL = "label"
_TOKEN_AND = "and"
_TOKEN_CAUSES = "causes"
_TOKEN_COMMA = "comma"


class _Token:
    __slots__ = ("kind", "value", "column")

    def __init__(self, kind: str, value: str, column: int):
        self.kind = kind
        self.value = value
        self.column = column


def _tokenize(text: str, line_no: int, start_col: int = 1) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        col = start_col + i
        if ch.isspace():
            i += 1
            continue
        if ch == "#":
            break
        if ch == ",":
            tokens.append(_Token(_TOKEN_COMMA, ",", col))
            i += 1
            continue
        if ch == '"':
            end = text.find('"', i + 1)
            if end < 0:
                raise ParseError("unterminated quoted label", line_no, col)
            raw = text[i + 1 : end]
            if not raw.strip():
                raise ParseError("empty quoted label", line_no, col)
            tokens.append(_Token(_TOKEN_LABEL, normalize_label(raw), col))
            i = end + 1
            continue
        j = i
        while j < n and not text[j].isspace() and text[j] not in '",#':
            j += 1
        word = text[i:j]
        lowered = word.lower()
        if lowered == "and":
            tokens.append(_Token(_TOKEN_AND, lowered, col))
        elif lowered == "causes":
            tokens.append(_Token(_TOKEN_CAUSES, lowered, col))
        else:
            tokens.append(_Token(_TOKEN_LABEL, lowered, col))
        i = j
    return tokens


def _parse_single_label(text: str, line_no: int, start_col: int, what: str) -> str:
    tokens = _tokenize(text, line_no, start_col)
    if not tokens:
        raise ParseError(f"expected a label after '{what}'", line_no, start_col)
    head = tokens[0]
    if head.kind != _TOKEN_LABEL:
        raise ParseError(
            f"expected a label after '{what}', found {head.value!r}",
            line_no,
            head.column,
        )
    if len(tokens) > 1:
        extra = tokens[1]
        raise ParseError(
            f"unexpected {extra.value!r} after the {what} label", line_no, extra.column
        )
    return head.value


def _parse_label_list(text: str, line_no: int, start_col: int, what: str) -> list[str]:
    tokens = _tokenize(text, line_no, start_col)
    labels: list[str] = []
    expect_label = True
    for token in tokens:
        if expect_label:
            if token.kind != _TOKEN_LABEL:
                raise ParseError(
                    f"expected a label in the {what} list, found {token.value!r}",
                    line_no,
                    token.column,
                )
            labels.append(token.value)
            expect_label = False
        else:
            if token.kind != _TOKEN_COMMA:
                raise ParseError(
                    f"expected ',' between {what} labels, found {token.value!r}",
                    line_no,
                    token.column,
                )
            expect_label = True
    if not labels:
        raise ParseError(f"expected at least one {what} label", line_no, start_col)
    if expect_label:
        raise ParseError(f"trailing ',' in the {what} list", line_no, start_col)
    return labels


def _parse_rule(tokens: list[_Token], line_no: int) -> CausalRule:
    pos = 0

    def peek() -> _Token | None:
        return tokens[pos] if pos < len(tokens) else None

    antecedents: list[str] = []
    token = peek()
    if token is None or token.kind != _TOKEN_LABEL:
        found = token.value if token else "end of line"
        column = token.column if token else 1
        raise ParseError(
            f"rule has no causes: expected a label, found {found!r}", line_no, column
        )
    antecedents.append(token.value)
    pos += 1

    while True:
        token = peek()
        if token is None:
            raise ParseError(
                "expected 'AND' or 'CAUSES' after a cause label",
                line_no,
                tokens[-1].column + len(tokens[-1].value),
            )
        if token.kind == _TOKEN_AND:
            pos += 1
            token = peek()
            if token is None or token.kind != _TOKEN_LABEL:
                found = token.value if token else "end of line"
                column = token.column if token else tokens[-1].column
                raise ParseError(
                    f"expected a label after 'AND', found {found!r}", line_no, column
                )
            antecedents.append(token.value)
            pos += 1
            continue
        if token.kind == _TOKEN_CAUSES:
            pos += 1
            break
        raise ParseError(
            f"expected 'AND' or 'CAUSES', found {token.value!r}", line_no, token.column
        )

    token = peek()
    if token is None or token.kind != _TOKEN_LABEL:
        found = token.value if token else "end of line"
        column = token.column if token else tokens[-1].column
        raise ParseError(
            f"expected an effect label after 'CAUSES', found {found!r}",
            line_no,
            column,
        )
    effect = token.value
    effect_column = token.column
    pos += 1

    token = peek()
    if token is not None:
        raise ParseError(
            f"unexpected {token.value!r} after the effect label", line_no, token.column
        )

    try:
        return CausalRule(antecedents=frozenset(antecedents), effect=effect)
    except ValueError as exc:
        raise ParseError(str(exc), line_no, effect_column) from None


def parse_model(source: str) -> CausalModel:
    """Parse model source text. Returns a structurally well-formed model;
    semantic checks are validate_model's job."""
    goal: str | None = None
    declared: set[str] = set()
    rules: list[CausalRule] = []

    for line_no, line in enumerate(source.splitlines(), start=1):
        tokens = _tokenize(line, line_no)
        if not tokens:
            continue

        goal_match = _GOAL_HEADER.match(line)
        if goal_match:
            if goal is not None:
                raise ParseError(
                    "duplicate goal declaration", line_no, goal_match.start(0) + 1
                )
            rest_col = goal_match.end(0) + 1
            goal = _parse_single_label(line[goal_match.end(0) :], line_no, rest_col, "goal:")
            continue

        inter_match = _INTERMEDIATE_HEADER.match(line)
        if inter_match:
            rest_col = inter_match.end(0) + 1
            declared.update(
                _parse_label_list(
                    line[inter_match.end(0) :], line_no, rest_col, "intermediate"
                )
            )
            continue

        if goal is None:
            raise ParseError(
                "expected a 'goal:' declaration before the first rule",
                line_no,
                tokens[0].column,
            )
        rules.append(_parse_rule(tokens, line_no))

    if goal is None:
        raise ParseError("missing 'goal:' declaration", 1, 1)

    return CausalModel(
        goal_label=goal,
        rules=tuple(rules),
        declared_intermediates=frozenset(declared),
    )


def format_label(label: str) -> str:
    """Render a normalized label, quoting unless it is a safe bare word."""
    if '"' in label or "\n" in label:
        raise ValueError(f"label cannot be serialized: {label!r}")
    if _BARE_SAFE.match(label) and label not in _KEYWORDS:
        return label
    return f'"{label}"'


def serialize_model(model: CausalModel) -> str:
    """Canonical text for a model; parse(serialize(m)) == m for normalized models."""
    lines = [f"goal: {format_label(model.goal_label)}"]
    if model.declared_intermediates:
        joined = ", ".join(
            format_label(label) for label in sorted(model.declared_intermediates)
        )
        lines.append(f"intermediate: {joined}")
    for rule in model.rules:
        causes = " AND ".join(format_label(a) for a in sorted(rule.antecedents))
        lines.append(f"{causes} CAUSES {format_label(rule.effect)}")
    return "\n".join(lines) + "\n"


def model_hash(model: CausalModel) -> str:
    """Content hash of the canonical serialization."""
    return hashlib.sha256(serialize_model(model).encode("utf-8")).hexdigest()
