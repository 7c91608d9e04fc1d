"""Command-line driver: validate models, plan assemblies, run transfers
and batch experiments without the HTTP service.

Exit codes: 0 success, 1 domain failure (invalid model, plan that misses
the goal, unmet experiment expectations), 2 usage or input errors
(syntax errors, missing files, condition mismatches), 3 state-space cap
exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

from . import documents
from .bindings import bind, load_binding_entries
from .catalog import Catalog, load_catalog
from .dsl import parse_model
from .errors import (
    CatalogError,
    ConditionMismatch,
    NonConvergenceError,
    ParseError,
    StateSpaceExceeded,
    UnknownPartError,
)
from .model import CausalModel, validate_model
from .planning import (
    PlannerConfig,
    PlanningProblem,
    enumerate_states,
    plan,
)
from .transfer import check_transfer, load_experiment_spec, run_experiment

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_CAP = 3


def _fail(message: str) -> None:
    print(f"error: {message}", file=sys.stderr)


def _read_model(path: Path) -> CausalModel:
    try:
        source = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CatalogError(f"{path}: {exc}") from None
    return parse_model(source)


def _planner_config(args: argparse.Namespace) -> PlannerConfig:
    return PlannerConfig(
        discount=args.discount,
        convergence_epsilon=args.epsilon,
        max_states=args.max_states,
        max_iterations=args.max_iterations,
    )


def _add_planner_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--discount", type=float, default=0.95)
    parser.add_argument("--epsilon", type=float, default=1e-6)
    parser.add_argument("--max-states", type=int, default=100_000)
    parser.add_argument("--max-iterations", type=int, default=10_000)


def _add_catalog_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--catalog",
        type=Path,
        default=None,
        help="catalog directory (default: the packaged fixture catalog)",
    )


def _add_format_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        choices=("text", "document"),
        default="text",
        help="text is human-first; document is canonical JSON",
    )


def _load_bound_object(
    catalog: Catalog, object_id: str, model: CausalModel, binding_path: Path
):
    obj = catalog.object(object_id)
    bound_object, entries = load_binding_entries(binding_path)
    if bound_object != obj.id:
        raise CatalogError(
            f"binding file {binding_path} is for {bound_object!r}, not {obj.id!r}"
        )
    return obj, bind(obj, model, entries)


def cmd_validate(args: argparse.Namespace) -> int:
    model = _read_model(args.model)
    report = validate_model(model)
    if args.format == "document":
        print(documents.canonical_json(report.to_doc()), end="")
    else:
        for violation in report.violations:
            print(f"violation: {violation.message}")
        for warning in report.warnings:
            print(f"warning: {warning.message}")
        if report.ok:
            print("model is valid")
    return EXIT_OK if report.ok else EXIT_DOMAIN


def cmd_plan(args: argparse.Namespace) -> int:
    model = _read_model(args.model)
    report = validate_model(model)
    if not report.ok:
        for violation in report.violations:
            _fail(f"invalid model: {violation.message}")
        return EXIT_DOMAIN
    catalog = load_catalog(args.catalog)
    obj, binding = _load_bound_object(catalog, args.object, model, args.binding)
    problem = PlanningProblem(
        object=obj, model=model, binding=binding, config=_planner_config(args)
    )
    result = plan(problem)

    doc = documents.plan_to_doc(obj, model, result)
    if args.out:
        args.out.write_text(documents.canonical_json(doc), encoding="utf-8")
    if args.format == "document":
        print(documents.canonical_json(doc), end="")
    else:
        for i, step in enumerate(result.steps, start=1):
            print(f"{i}. {step.text}")
        if not result.steps:
            print("(no steps)")
        print(f"achieves goal: {'yes' if result.achieves_goal else 'no'}")
        print(f"expected value: {result.expected_value:.6f}")
    return EXIT_OK if result.achieves_goal else EXIT_DOMAIN


def cmd_transfer(args: argparse.Namespace) -> int:
    model = _read_model(args.model)
    report = validate_model(model)
    if not report.ok:
        for violation in report.violations:
            _fail(f"invalid model: {violation.message}")
        return EXIT_DOMAIN
    catalog = load_catalog(args.catalog)
    obj, binding = _load_bound_object(catalog, args.test_object, model, args.binding)
    result = check_transfer(
        model, args.training, obj, binding, catalog, _planner_config(args)
    )

    if args.format == "document":
        print(documents.canonical_json(documents.transfer_to_doc(result)), end="")
    else:
        print(f"test object: {result.test_object}")
        print(f"relation: {result.relation}")
        if result.success:
            print("outcome: success")
            for i, step in enumerate(result.plan.steps, start=1):
                print(f"{i}. {step.text}")
        else:
            print(f"outcome: failure ({result.reason})")
        for warning in result.warnings:
            print(f"warning: {warning}")
    return EXIT_OK if result.success else EXIT_DOMAIN


def cmd_experiment(args: argparse.Namespace) -> int:
    spec = load_experiment_spec(args.config)
    catalog = load_catalog(args.catalog)
    report = run_experiment(catalog, spec, _planner_config(args))
    doc = report.to_doc()

    if args.out:
        args.out.write_text(documents.canonical_json(doc), encoding="utf-8")
    if args.format == "document":
        print(documents.canonical_json(doc), end="")
    else:
        print(f"condition: {spec.condition}")
        print(f"training: {', '.join(spec.training)}")
        for test, result in zip(spec.tests, report.results):
            outcome = "success" if result.success else f"failure ({result.reason})"
            verdict = (
                "ok"
                if (result.success and test.expect == "success")
                or (not result.success and test.expect == "failure")
                else "UNEXPECTED"
            )
            print(
                f"{result.test_object}: {outcome} "
                f"[{result.relation}, expected {test.expect}] {verdict}"
            )
    return EXIT_OK if report.expectations_met else EXIT_DOMAIN


def cmd_enumerate(args: argparse.Namespace) -> int:
    catalog = load_catalog(args.catalog)
    obj = catalog.object(args.object)
    if args.model:
        model = _read_model(args.model)
        report = validate_model(model)
        if not report.ok:
            for violation in report.violations:
                _fail(f"invalid model: {violation.message}")
            return EXIT_DOMAIN
        if args.binding:
            _, entries = load_binding_entries(args.binding)
        else:
            entries = {}
        binding = bind(obj, model, entries)
    else:
        # a goal-free enumeration: no state can satisfy an unbindable model
        model = parse_model('goal: light\n"__unreachable__" CAUSES light\n')
        binding = bind(obj, model, {})

    problem = PlanningProblem(
        object=obj, model=model, binding=binding, config=_planner_config(args)
    )
    space = enumerate_states(problem)
    print(f"states: {len(space.states)}")
    print(f"actions: {len(space.actions)}")
    print(f"goal states: {space.goal_count}")
    print(f"dead ends: {space.dead_end_count}")
    return EXIT_OK


def cmd_catalog(args: argparse.Namespace) -> int:
    catalog = load_catalog(args.catalog)
    if args.format == "document":
        print(documents.canonical_json(documents.catalog_to_doc(catalog)), end="")
    else:
        for obj in catalog.objects.values():
            parts = ", ".join(p.display_name for p in obj.parts)
            category = (
                f" [{catalog.category_of(obj.id)}]" if catalog.categories else ""
            )
            print(f"{obj.id}{category}: {parts}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="causal-assembly",
        description="Plan assemblies from human-authored causal models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a model file")
    p_validate.add_argument("model", type=Path)
    _add_format_flag(p_validate)
    p_validate.set_defaults(func=cmd_validate)

    p_plan = sub.add_parser("plan", help="plan an assembly for one object")
    p_plan.add_argument("--object", required=True)
    p_plan.add_argument("--model", type=Path, required=True)
    p_plan.add_argument("--binding", type=Path, required=True)
    p_plan.add_argument("--out", type=Path, default=None)
    _add_catalog_flag(p_plan)
    _add_format_flag(p_plan)
    _add_planner_flags(p_plan)
    p_plan.set_defaults(func=cmd_plan)

    p_transfer = sub.add_parser(
        "transfer", help="replan for a test object under a frozen model"
    )
    p_transfer.add_argument("--test-object", required=True)
    p_transfer.add_argument("--model", type=Path, required=True)
    p_transfer.add_argument("--binding", type=Path, required=True)
    p_transfer.add_argument("--training", nargs="+", required=True)
    _add_catalog_flag(p_transfer)
    _add_format_flag(p_transfer)
    _add_planner_flags(p_transfer)
    p_transfer.set_defaults(func=cmd_transfer)

    p_exp = sub.add_parser("experiment", help="run a transfer experiment config")
    p_exp.add_argument("config", type=Path)
    p_exp.add_argument("--out", type=Path, default=None)
    _add_catalog_flag(p_exp)
    _add_format_flag(p_exp)
    _add_planner_flags(p_exp)
    p_exp.set_defaults(func=cmd_experiment)

    p_enum = sub.add_parser("enumerate", help="print state-space statistics")
    p_enum.add_argument("--object", required=True)
    p_enum.add_argument("--model", type=Path, default=None)
    p_enum.add_argument("--binding", type=Path, default=None)
    _add_catalog_flag(p_enum)
    _add_planner_flags(p_enum)
    p_enum.set_defaults(func=cmd_enumerate)

    p_cat = sub.add_parser("catalog", help="list the object catalog")
    _add_catalog_flag(p_cat)
    _add_format_flag(p_cat)
    p_cat.set_defaults(func=cmd_catalog)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        _fail(f"syntax error: {exc}")
        return EXIT_USAGE
    except ConditionMismatch as exc:
        _fail(str(exc))
        return EXIT_USAGE
    except (CatalogError, UnknownPartError, ValueError) as exc:
        _fail(str(exc))
        return EXIT_USAGE
    except StateSpaceExceeded as exc:
        _fail(str(exc))
        return EXIT_CAP
    except NonConvergenceError as exc:
        _fail(str(exc))
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
