"""Object kits: parts, connectors, assembly states, and join actions.

State tracks topology only (which parts are placed, which connector pairs
are joined); poses are out of scope. Connector compatibility feeds the
planner's transition probabilities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping


class Primitive(str, Enum):
    CONNECT = "connect"
    INSERT = "insert"
    SCREW = "screw"


class ConnectorKind(str, Enum):
    SOCKET = "socket"
    PLUG = "plug"
    THREAD = "thread"
    SURFACE = "surface"


# plug mates with socket; thread and surface mate with themselves
COMPLEMENTS = {
    ConnectorKind.PLUG: ConnectorKind.SOCKET,
    ConnectorKind.SOCKET: ConnectorKind.PLUG,
    ConnectorKind.THREAD: ConnectorKind.THREAD,
    ConnectorKind.SURFACE: ConnectorKind.SURFACE,
}

# decay rate for the relative size-mismatch penalty
SIZE_MISMATCH_DECAY = 4.0


@dataclass(frozen=True)
class Connector:
    id: str
    kind: ConnectorKind
    size: float
    accepted_primitives: frozenset[Primitive]

    def __post_init__(self):
        if self.size <= 0:
            raise ValueError(f"connector {self.id!r}: size must be positive")
        if not self.accepted_primitives:
            raise ValueError(f"connector {self.id!r}: no accepted primitives")


@dataclass(frozen=True)
class Part:
    id: str
    display_name: str
    connectors: tuple[Connector, ...]

    def __post_init__(self):
        if not self.connectors:
            raise ValueError(f"part {self.id!r} has no connectors")
        ids = [c.id for c in self.connectors]
        if len(set(ids)) != len(ids):
            raise ValueError(f"part {self.id!r} has duplicate connector ids")

    def connector(self, connector_id: str) -> Connector:
        for c in self.connectors:
            if c.id == connector_id:
                return c
        raise KeyError(f"part {self.id!r} has no connector {connector_id!r}")


@dataclass(frozen=True, order=True)
class ConnectorRef:
    """A connector qualified by its part, e.g. base.socket."""

    part: str
    connector: str

    def __str__(self) -> str:
        return f"{self.part}.{self.connector}"

    @classmethod
    def parse(cls, text: str) -> "ConnectorRef":
        part, sep, connector = text.partition(".")
        if not sep or not part or not connector:
            raise ValueError(f"expected 'part.connector', got {text!r}")
        return cls(part=part, connector=connector)


@dataclass(frozen=True)
class Joint:
    """An unordered joined connector pair, tagged with the primitive used."""

    a: ConnectorRef
    b: ConnectorRef
    primitive: Primitive

    @classmethod
    def make(cls, x: ConnectorRef, y: ConnectorRef, primitive: Primitive) -> "Joint":
        a, b = sorted((x, y))
        return cls(a=a, b=b, primitive=primitive)

    @property
    def refs(self) -> tuple[ConnectorRef, ConnectorRef]:
        return (self.a, self.b)


@dataclass(frozen=True)
class AssemblyAction:
    """A join primitive applied to a free connector pair (a < b canonically)."""

    primitive: Primitive
    a: ConnectorRef
    b: ConnectorRef

    @classmethod
    def make(
        cls, primitive: Primitive, x: ConnectorRef, y: ConnectorRef
    ) -> "AssemblyAction":
        if x == y:
            raise ValueError("action endpoints must differ")
        a, b = sorted((x, y))
        return cls(primitive=primitive, a=a, b=b)

    @property
    def sort_key(self):
        return (self.primitive.value, self.a, self.b)

    def __str__(self) -> str:
        return f"{self.primitive.value} {self.a} {self.b}"


@dataclass(frozen=True)
class AssemblyState:
    placed_parts: frozenset[str]
    joints: frozenset[Joint]

    def __post_init__(self):
        seen: set[ConnectorRef] = set()
        for joint in self.joints:
            if joint.a.part == joint.b.part:
                raise ValueError(f"joint endpoints on the same part: {joint.a.part!r}")
            for ref in joint.refs:
                if ref.part not in self.placed_parts:
                    raise ValueError(f"joint references unplaced part: {ref.part!r}")
                if ref in seen:
                    raise ValueError(f"connector in more than one joint: {ref}")
                seen.add(ref)

    @classmethod
    def empty(cls) -> "AssemblyState":
        return cls(placed_parts=frozenset(), joints=frozenset())

    @cached_property
    def occupied(self) -> frozenset[ConnectorRef]:
        refs: set[ConnectorRef] = set()
        for joint in self.joints:
            refs.update(joint.refs)
        return frozenset(refs)

    def key(self) -> str:
        """Stable textual identity, for documents and debugging."""
        placed = ",".join(sorted(self.placed_parts))
        joints = ";".join(
            f"{j.a}+{j.b}:{j.primitive.value}"
            for j in sorted(self.joints, key=lambda j: (j.a, j.b))
        )
        return f"placed[{placed}] joints[{joints}]"


@dataclass(frozen=True, eq=False)
class ObjectSpec:
    id: str
    display_name: str
    parts: tuple[Part, ...]
    compat_overrides: Mapping[tuple[ConnectorRef, ConnectorRef], float] = field(
        default_factory=dict
    )

    def __post_init__(self):
        ids = [p.id for p in self.parts]
        if len(set(ids)) != len(ids):
            raise ValueError(f"object {self.id!r} has duplicate part ids")
        for (ra, rb), p in self.compat_overrides.items():
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"override {ra}/{rb}: probability {p} out of [0,1]")
            for ref in (ra, rb):
                self.connector(ref)  # raises if the reference is dangling

    @cached_property
    def part_map(self) -> Mapping[str, Part]:
        return {p.id: p for p in self.parts}

    def part(self, part_id: str) -> Part:
        try:
            return self.part_map[part_id]
        except KeyError:
            raise KeyError(f"object {self.id!r} has no part {part_id!r}") from None

    def connector(self, ref: ConnectorRef) -> Connector:
        return self.part(ref.part).connector(ref.connector)

    @cached_property
    def connector_refs(self) -> tuple[ConnectorRef, ...]:
        return tuple(
            ConnectorRef(part.id, c.id) for part in self.parts for c in part.connectors
        )

    def override_for(self, x: ConnectorRef, y: ConnectorRef) -> float | None:
        a, b = sorted((x, y))
        return self.compat_overrides.get((a, b))


def geometric_compatibility(c1: Connector, c2: Connector) -> float:
    """Success probability from kind complementarity and relative size mismatch.

    Non-complementary kinds or disjoint primitive sets give 0; otherwise
    exp(-k * |s1 - s2| / max(s1, s2)), which is 1 at equal sizes.
    """
    if COMPLEMENTS[c1.kind] != c2.kind:
        return 0.0
    if not (c1.accepted_primitives & c2.accepted_primitives):
        return 0.0
    mismatch = abs(c1.size - c2.size) / max(c1.size, c2.size)
    return math.exp(-SIZE_MISMATCH_DECAY * mismatch)


def compatibility(obj: ObjectSpec, x: ConnectorRef, y: ConnectorRef) -> float:
    """Pair compatibility: the override when present, else the geometric model."""
    override = obj.override_for(x, y)
    if override is not None:
        return override
    return geometric_compatibility(obj.connector(x), obj.connector(y))


def applicable_actions(obj: ObjectSpec, state: AssemblyState) -> list[AssemblyAction]:
    """Every join currently allowed, in (primitive, from, to) lexicographic order.

    Both connectors must be free, the primitive accepted by both sides,
    compatibility positive, and at least one endpoint part already placed
    (the very first action may place any pair).
    """
    occupied = state.occupied
    first_action = not state.placed_parts
    refs = obj.connector_refs
    actions: list[AssemblyAction] = []
    for i, ra in enumerate(refs):
        if ra in occupied:
            continue
        for rb in refs[i + 1 :]:
            if rb in occupied or rb.part == ra.part:
                continue
            if not first_action and not (
                ra.part in state.placed_parts or rb.part in state.placed_parts
            ):
                continue
            if compatibility(obj, ra, rb) <= 0.0:
                continue
            ca = obj.connector(ra)
            cb = obj.connector(rb)
            for primitive in sorted(ca.accepted_primitives & cb.accepted_primitives):
                actions.append(AssemblyAction.make(primitive, ra, rb))
    actions.sort(key=lambda a: a.sort_key)
    return actions


def apply_action(
    obj: ObjectSpec, state: AssemblyState, action: AssemblyAction
) -> AssemblyState:
    """Successor state after a successful join; the input state is untouched.

    Raises ValueError when the action is not applicable in this state:
    that is a caller bug, not a planning outcome.
    """
    ca = obj.connector(action.a)
    cb = obj.connector(action.b)
    if action.a.part == action.b.part:
        raise ValueError("action endpoints on the same part")
    occupied = state.occupied
    for ref in (action.a, action.b):
        if ref in occupied:
            raise ValueError(f"connector already joined: {ref}")
    if action.primitive not in (ca.accepted_primitives & cb.accepted_primitives):
        raise ValueError(
            f"primitive {action.primitive.value!r} not accepted by both connectors"
        )
    if compatibility(obj, action.a, action.b) <= 0.0:
        raise ValueError(f"incompatible connectors: {action.a} / {action.b}")
    if state.placed_parts and not (
        action.a.part in state.placed_parts or action.b.part in state.placed_parts
    ):
        raise ValueError("neither endpoint part is placed")
    return AssemblyState(
        placed_parts=state.placed_parts | {action.a.part, action.b.part},
        joints=state.joints | {Joint.make(action.a, action.b, action.primitive)},
    )


def assembled_component(obj: ObjectSpec, state: AssemblyState) -> frozenset[str]:
    """Largest connected component of the joint graph.

    Ties break toward the component containing the lexicographically
    smallest part id. A placed part with no joints is a size-1 component.
    """
    if not state.placed_parts:
        return frozenset()
    neighbors: dict[str, set[str]] = {p: set() for p in state.placed_parts}
    for joint in state.joints:
        neighbors[joint.a.part].add(joint.b.part)
        neighbors[joint.b.part].add(joint.a.part)

    components: list[frozenset[str]] = []
    remaining = set(state.placed_parts)
    while remaining:
        seed = min(remaining)
        seen = {seed}
        frontier = [seed]
        while frontier:
            part = frontier.pop()
            for other in neighbors[part]:
                if other not in seen:
                    seen.add(other)
                    frontier.append(other)
        remaining -= seen
        components.append(frozenset(seen))

    components.sort(key=lambda comp: (-len(comp), min(comp)))
    return components[0]
