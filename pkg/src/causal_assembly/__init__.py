"""Plan assembly sequences from human-authored causal models.

Humans describe how part functions combine into a goal effect; the model
compiles into an MDP reward function; value iteration produces a plan.
The same model, frozen, is re-planned against new objects to test near
and far generalization.
"""

from .bindings import FunctionBinding, bind
from .catalog import Catalog, load_catalog, load_object, parse_object
from .dsl import model_hash, parse_model, serialize_model
from .errors import (
    CatalogError,
    CausalAssemblyError,
    ConditionMismatch,
    InvalidModelError,
    NonConvergenceError,
    ParseError,
    StaleVersionError,
    StateSpaceExceeded,
    UnknownPartError,
    UnknownSessionError,
)
from .model import (
    CausalModel,
    CausalRule,
    NodeValuation,
    ValidationIssue,
    ValidationReport,
    evaluate,
    to_graph_export,
    validate_model,
)
from .objects import (
    AssemblyAction,
    AssemblyState,
    Connector,
    ConnectorKind,
    ConnectorRef,
    Joint,
    ObjectSpec,
    Part,
    Primitive,
    applicable_actions,
    apply_action,
    assembled_component,
    compatibility,
    geometric_compatibility,
)
from .planning import (
    Plan,
    PlannerConfig,
    PlanningProblem,
    PlanStep,
    StateSpace,
    enumerate_states,
    extract_plan,
    is_goal_state,
    plan,
    reward,
    transition,
    value_iteration,
)
from .transfer import (
    ExperimentReport,
    ExperimentSpec,
    ExperimentTest,
    TransferResult,
    category_relation,
    check_transfer,
    load_experiment_spec,
    run_experiment,
)

__version__ = "0.1.0"

__all__ = [
    "AssemblyAction",
    "AssemblyState",
    "Catalog",
    "CatalogError",
    "CausalAssemblyError",
    "CausalModel",
    "CausalRule",
    "ConditionMismatch",
    "Connector",
    "ConnectorKind",
    "ConnectorRef",
    "ExperimentReport",
    "ExperimentSpec",
    "ExperimentTest",
    "FunctionBinding",
    "InvalidModelError",
    "Joint",
    "NodeValuation",
    "NonConvergenceError",
    "ObjectSpec",
    "ParseError",
    "Part",
    "Plan",
    "PlanStep",
    "PlannerConfig",
    "PlanningProblem",
    "Primitive",
    "StaleVersionError",
    "StateSpace",
    "StateSpaceExceeded",
    "TransferResult",
    "UnknownPartError",
    "UnknownSessionError",
    "ValidationIssue",
    "ValidationReport",
    "applicable_actions",
    "apply_action",
    "assembled_component",
    "bind",
    "category_relation",
    "check_transfer",
    "compatibility",
    "enumerate_states",
    "evaluate",
    "extract_plan",
    "geometric_compatibility",
    "is_goal_state",
    "load_catalog",
    "load_experiment_spec",
    "load_object",
    "model_hash",
    "parse_model",
    "parse_object",
    "plan",
    "reward",
    "run_experiment",
    "serialize_model",
    "to_graph_export",
    "transition",
    "validate_model",
    "value_iteration",
]
