"""MDP construction and solving for assembly planning.

States are assembly configurations reachable from the empty state, actions
are connector joins, transition success probability is the pair's
compatibility (failure leaves the state unchanged), and reward is +1 for
goal states, -1 for dead ends, and a small per-step cost otherwise. Goal
and dead-end states are absorbing: a backup credits an absorbing successor
with its reward and no discounted continuation.

Value iteration runs on flat numpy arrays over the (state, action) table;
policy ties break toward the lexicographically smallest action.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bindings import FunctionBinding
from .errors import NonConvergenceError, StateSpaceExceeded
from .model import CausalModel, evaluate
from .objects import (
    AssemblyAction,
    AssemblyState,
    ObjectSpec,
    applicable_actions,
    apply_action,
    assembled_component,
    compatibility,
)

TERMINAL_NONE = 0
TERMINAL_GOAL = 1
TERMINAL_DEAD_END = 2


@dataclass(frozen=True)
class PlannerConfig:
    discount: float = 0.95
    goal_reward: float = 1.0
    dead_end_reward: float = -1.0
    step_reward: float = -0.01
    convergence_epsilon: float = 1e-6
    max_states: int = 100_000
    max_iterations: int = 10_000

    def __post_init__(self):
        if not 0.0 < self.discount < 1.0:
            raise ValueError("discount must be in (0, 1)")
        if self.convergence_epsilon <= 0:
            raise ValueError("convergence_epsilon must be positive")
        if self.max_states <= 0 or self.max_iterations <= 0:
            raise ValueError("max_states and max_iterations must be positive")
        if not self.goal_reward > 0 > self.dead_end_reward:
            raise ValueError("need goal reward > 0 > dead-end reward")


@dataclass(frozen=True)
class PlanningProblem:
    object: ObjectSpec
    model: CausalModel
    binding: FunctionBinding
    config: PlannerConfig = field(default_factory=PlannerConfig)


@dataclass(frozen=True)
class StateSpace:
    """Reachable states plus the flattened (state, action) transition table.

    Row r of the table is action ``actions[r]`` taken in state
    ``action_state[r]``; rows are grouped by state and ordered
    lexicographically within each group, so ``action_start[i]`` slices
    state i's rows. Absorbing states own no rows.
    """

    states: tuple[AssemblyState, ...]
    index: dict[str, int]
    terminal: np.ndarray  # int8 per state
    rewards: np.ndarray  # float64 per state
    actions: tuple[AssemblyAction, ...]
    action_state: np.ndarray  # int64 per row: owning state
    action_succ: np.ndarray  # int64 per row: success successor
    action_prob: np.ndarray  # float64 per row: success probability
    action_start: np.ndarray  # int64 per state + sentinel: row offsets

    def actions_of(self, state_index: int) -> tuple[AssemblyAction, ...]:
        lo, hi = self.action_start[state_index], self.action_start[state_index + 1]
        return self.actions[lo:hi]

    @property
    def goal_count(self) -> int:
        return int(np.count_nonzero(self.terminal == TERMINAL_GOAL))

    @property
    def dead_end_count(self) -> int:
        return int(np.count_nonzero(self.terminal == TERMINAL_DEAD_END))


@dataclass(frozen=True)
class PlanStep:
    action: AssemblyAction
    text: str


@dataclass(frozen=True)
class Plan:
    steps: tuple[PlanStep, ...]
    expected_value: float
    achieves_goal: bool
    states: int
    iterations: int
    residual: float


def is_goal_state(problem: PlanningProblem, state: AssemblyState) -> bool:
    """The assembled structure's bound functions make the model's goal true."""
    component = assembled_component(problem.object, state)
    active = problem.binding.active_labels(component)
    return evaluate(problem.model, active).goal == 1


def reward(problem: PlanningProblem, state: AssemblyState) -> float:
    cfg = problem.config
    if is_goal_state(problem, state):
        return cfg.goal_reward
    if not applicable_actions(problem.object, state):
        return cfg.dead_end_reward
    return cfg.step_reward


def transition(
    problem: PlanningProblem, state: AssemblyState, action: AssemblyAction
) -> list[tuple[AssemblyState, float]]:
    """Outcome distribution: success applies the join, failure stays put."""
    p = compatibility(problem.object, action.a, action.b)
    succ = apply_action(problem.object, state, action)
    if p >= 1.0:
        return [(succ, 1.0)]
    return [(succ, p), (state, 1.0 - p)]


def enumerate_states(problem: PlanningProblem) -> StateSpace:
    """Breadth-first closure from the empty state under success transitions.

    Raises StateSpaceExceeded as soon as the closure would grow past
    config.max_states.
    """
    cfg = problem.config
    obj = problem.object

    states: list[AssemblyState] = [AssemblyState.empty()]
    index: dict[str, int] = {states[0].key(): 0}
    terminal: list[int] = []
    state_rewards: list[float] = []
    flat_actions: list[AssemblyAction] = []
    action_state: list[int] = []
    action_succ: list[int] = []
    action_prob: list[float] = []
    action_start: list[int] = []

    cursor = 0
    while cursor < len(states):
        state = states[cursor]
        action_start.append(len(flat_actions))
        if is_goal_state(problem, state):
            terminal.append(TERMINAL_GOAL)
            state_rewards.append(cfg.goal_reward)
            cursor += 1
            continue
        actions = applicable_actions(obj, state)
        if not actions:
            terminal.append(TERMINAL_DEAD_END)
            state_rewards.append(cfg.dead_end_reward)
            cursor += 1
            continue
        terminal.append(TERMINAL_NONE)
        state_rewards.append(cfg.step_reward)
        for action in actions:
            succ = apply_action(obj, state, action)
            key = succ.key()
            succ_index = index.get(key)
            if succ_index is None:
                if len(states) >= cfg.max_states:
                    raise StateSpaceExceeded(cfg.max_states)
                succ_index = len(states)
                index[key] = succ_index
                states.append(succ)
            flat_actions.append(action)
            action_state.append(cursor)
            action_succ.append(succ_index)
            action_prob.append(compatibility(obj, action.a, action.b))
        cursor += 1
    action_start.append(len(flat_actions))

    return StateSpace(
        states=tuple(states),
        index=index,
        terminal=np.asarray(terminal, dtype=np.int8),
        rewards=np.asarray(state_rewards, dtype=np.float64),
        actions=tuple(flat_actions),
        action_state=np.asarray(action_state, dtype=np.int64),
        action_succ=np.asarray(action_succ, dtype=np.int64),
        action_prob=np.asarray(action_prob, dtype=np.float64),
        action_start=np.asarray(action_start, dtype=np.int64),
    )


def value_iteration(
    problem: PlanningProblem, space: StateSpace
) -> tuple[np.ndarray, np.ndarray, int, float]:
    """Solve the MDP; returns (values, policy, iterations, final residual).

    values[s] is R(s) for absorbing s and the converged Bellman value
    otherwise. policy[s] is a row index into the flat action table, or -1
    where no action applies.
    """
    cfg = problem.config
    n = len(space.states)
    gamma = cfg.discount
    nonabs = space.terminal == TERMINAL_NONE

    values = space.rewards.copy()
    values[nonabs] = 0.0
    policy = np.full(n, -1, dtype=np.int64)
    if not nonabs.any():
        return values, policy, 0, 0.0

    nonabs_indices = np.flatnonzero(nonabs)
    # every non-absorbing state owns >= 1 row, so these segments are non-empty
    seg_starts = space.action_start[nonabs_indices]
    p = space.action_prob
    succ = space.action_succ
    own = space.action_state
    r_succ = space.rewards[succ]
    succ_nonabs = nonabs[succ]
    step = cfg.step_reward

    iterations = 0
    residual = np.inf
    while residual >= cfg.convergence_epsilon:
        if iterations >= cfg.max_iterations:
            raise NonConvergenceError(iterations, float(residual))
        cont = np.where(succ_nonabs, values[succ], 0.0)
        q = p * (r_succ + gamma * cont) + (1.0 - p) * (step + gamma * values[own])
        new_nonabs = np.maximum.reduceat(q, seg_starts)
        residual = float(np.max(np.abs(new_nonabs - values[nonabs_indices])))
        values[nonabs_indices] = new_nonabs
        iterations += 1

    cont = np.where(succ_nonabs, values[succ], 0.0)
    q = p * (r_succ + gamma * cont) + (1.0 - p) * (step + gamma * values[own])
    for i in nonabs_indices:
        lo, hi = space.action_start[i], space.action_start[i + 1]
        policy[i] = lo + int(np.argmax(q[lo:hi]))
    return values, policy, iterations, residual


def render_step(obj: ObjectSpec, action: AssemblyAction) -> str:
    pa = obj.part(action.a.part)
    pb = obj.part(action.b.part)
    return (
        f"{action.primitive.value} {pa.display_name} ({action.a.connector}) "
        f"to {pb.display_name} ({action.b.connector})"
    )


def extract_plan(
    problem: PlanningProblem,
    space: StateSpace,
    values: np.ndarray,
    policy: np.ndarray,
    iterations: int,
    residual: float,
) -> Plan:
    """Nominal rollout (every action succeeds) from the empty state.

    Stops at a goal state, a dead end, or the first state revisit.
    """
    steps: list[PlanStep] = []
    current = 0
    visited = {0}
    while space.terminal[current] == TERMINAL_NONE:
        row = policy[current]
        if row < 0:
            break
        nxt = int(space.action_succ[row])
        if nxt in visited:
            break
        action = space.actions[row]
        steps.append(PlanStep(action=action, text=render_step(problem.object, action)))
        visited.add(nxt)
        current = nxt
    return Plan(
        steps=tuple(steps),
        expected_value=float(values[0]),
        achieves_goal=bool(space.terminal[current] == TERMINAL_GOAL),
        states=len(space.states),
        iterations=iterations,
        residual=residual,
    )


def plan(problem: PlanningProblem) -> Plan:
    """Full pipeline: enumerate, solve, extract."""
    space = enumerate_states(problem)
    values, policy, iterations, residual = value_iteration(problem, space)
    return extract_plan(problem, space, values, policy, iterations, residual)
