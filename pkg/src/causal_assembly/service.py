"""HTTP facade over the authoring, planning, and transfer pipeline.

Sessions persist the three-step protocol: bind training-object functions,
author and validate a causal model (planning against it), then bind test
objects under the frozen model. The model text is stored at step 2 and the
transfer endpoint accepts no model field at all, so freezing is enforced
by the server, not by client goodwill.

Run directly with ``python -m causal_assembly.service``.
"""

from __future__ import annotations

import argparse
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, ConfigDict

from . import documents
from .bindings import bind
from .catalog import Catalog, load_catalog
from .dsl import parse_model
from .errors import (
    CatalogError,
    ParseError,
    StaleVersionError,
    StateSpaceExceeded,
    UnknownPartError,
    UnknownSessionError,
)
from .model import to_graph_export, validate_model
from .planning import PlannerConfig, PlanningProblem, plan
from .sessions import SessionStore
from .transfer import check_transfer


@dataclass(frozen=True)
class ServiceSettings:
    catalog_dir: Optional[Path] = None
    data_dir: Path = Path("./sessions")
    planner: PlannerConfig = field(default_factory=PlannerConfig)
    worker_cap: int = 4

    @classmethod
    def from_env(cls, env: Optional[dict[str, str]] = None) -> "ServiceSettings":
        env = dict(os.environ if env is None else env)
        prefix = "CAUSAL_ASSEMBLY_"
        catalog_dir = env.get(prefix + "CATALOG_DIR")
        data_dir = env.get(prefix + "DATA_DIR", "./sessions")
        planner = PlannerConfig(
            discount=float(env.get(prefix + "DISCOUNT", 0.95)),
            convergence_epsilon=float(env.get(prefix + "EPSILON", 1e-6)),
            max_states=int(env.get(prefix + "MAX_STATES", 100_000)),
        )
        return cls(
            catalog_dir=Path(catalog_dir) if catalog_dir else None,
            data_dir=Path(data_dir),
            planner=planner,
            worker_cap=int(env.get(prefix + "WORKER_CAP", 4)),
        )


class Step1Body(BaseModel):
    model_config = ConfigDict(extra="forbid", protected_namespaces=())
    version: int
    object_id: str
    entries: dict[str, list[str]]


class ModelBody(BaseModel):
    model_config = ConfigDict(extra="forbid", protected_namespaces=())
    version: int
    source: str


class PlanBody(BaseModel):
    model_config = ConfigDict(extra="forbid", protected_namespaces=())
    version: int
    object_id: str
    entries: dict[str, list[str]]


class TransferBody(BaseModel):
    # extra="forbid" is load-bearing: a request smuggling a model field in
    # at step 3 must be rejected, not silently ignored
    model_config = ConfigDict(extra="forbid", protected_namespaces=())
    version: int
    test_object: str
    entries: dict[str, list[str]]


class ValidateBody(BaseModel):
    model_config = ConfigDict(extra="forbid", protected_namespaces=())
    source: str


def _parse_or_400(source: str):
    try:
        return parse_model(source)
    except ParseError as exc:
        raise HTTPException(
            status_code=400,
            detail={"message": exc.message, "line": exc.line, "column": exc.column},
        ) from None


def create_app(settings: Optional[ServiceSettings] = None) -> FastAPI:
    settings = settings or ServiceSettings.from_env()
    # a malformed catalog should kill startup, not produce half-working routes
    catalog: Catalog = load_catalog(settings.catalog_dir)
    store = SessionStore(settings.data_dir)
    plan_limiter = threading.BoundedSemaphore(settings.worker_cap)

    app = FastAPI(title="causal-assembly")
    app.state.catalog = catalog
    app.state.store = store
    app.state.settings = settings

    def object_or_404(object_id: str):
        try:
            return catalog.object(object_id)
        except CatalogError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None

    def session_or_404(session_id: str) -> dict[str, Any]:
        try:
            return store.get(session_id)
        except UnknownSessionError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None

    def update_or_409(session_id: str, version: int, mutate) -> dict[str, Any]:
        try:
            return store.update(session_id, version, mutate)
        except UnknownSessionError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None
        except StaleVersionError as exc:
            raise HTTPException(
                status_code=409,
                detail={
                    "message": "stale version",
                    "expected": exc.expected,
                    "actual": exc.actual,
                },
            ) from None

    @app.get("/api/objects")
    def list_objects() -> dict[str, Any]:
        return documents.catalog_to_doc(catalog)

    @app.post("/api/models/validate")
    def validate(body: ValidateBody) -> dict[str, Any]:
        model = _parse_or_400(body.source)
        report = validate_model(model)
        if not report.ok:
            raise HTTPException(
                status_code=422, detail={"ok": False, "report": report.to_doc()}
            )
        return {
            "v": 1,
            "ok": True,
            "report": report.to_doc(),
            "graph": to_graph_export(model),
        }

    @app.post("/api/sessions", status_code=201)
    def create_session() -> dict[str, Any]:
        return store.create()

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str) -> dict[str, Any]:
        return session_or_404(session_id)

    @app.put("/api/sessions/{session_id}/step1")
    def save_step1(session_id: str, body: Step1Body) -> dict[str, Any]:
        obj = object_or_404(body.object_id)
        for part_id in body.entries:
            if part_id not in obj.part_map:
                raise HTTPException(
                    status_code=422,
                    detail=f"object {obj.id!r} has no part {part_id!r}",
                )
        binding_doc = {"object_id": body.object_id, "entries": body.entries}

        def mutate(doc: dict[str, Any]) -> None:
            doc["step1"] = binding_doc

        updated = update_or_409(session_id, body.version, mutate)
        return {"v": 1, "binding": binding_doc, "version": updated["version"]}

    @app.post("/api/sessions/{session_id}/model")
    def save_model(session_id: str, body: ModelBody) -> dict[str, Any]:
        session_or_404(session_id)
        model = _parse_or_400(body.source)
        report = validate_model(model)
        if not report.ok:
            raise HTTPException(
                status_code=422, detail={"ok": False, "report": report.to_doc()}
            )
        graph = to_graph_export(model)

        def mutate(doc: dict[str, Any]) -> None:
            doc["step2"] = {
                "source": body.source,
                "report": report.to_doc(),
                "graph": graph,
                "plan": None,
            }

        updated = update_or_409(session_id, body.version, mutate)
        return {
            "v": 1,
            "report": report.to_doc(),
            "graph": graph,
            "version": updated["version"],
        }

    @app.post("/api/sessions/{session_id}/plan")
    def plan_endpoint(session_id: str, body: PlanBody) -> dict[str, Any]:
        session = session_or_404(session_id)
        if not session.get("step2"):
            raise HTTPException(
                status_code=409, detail="no validated model in this session"
            )
        obj = object_or_404(body.object_id)
        model = parse_model(session["step2"]["source"])
        try:
            binding = bind(obj, model, body.entries)
        except UnknownPartError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None

        problem = PlanningProblem(
            object=obj, model=model, binding=binding, config=settings.planner
        )
        with plan_limiter:
            try:
                result = plan(problem)
            except StateSpaceExceeded as exc:
                # a failed planning run is a result the UI must show
                payload = {"v": 1, "plan": None, "reason": "state_space_exceeded"}
                updated = update_or_409(
                    session_id,
                    body.version,
                    lambda doc: doc["step2"].__setitem__("plan", payload),
                )
                return {**payload, "version": updated["version"]}

        plan_doc = documents.plan_to_doc(obj, model, result)

        def mutate(doc: dict[str, Any]) -> None:
            doc["step2"]["plan"] = plan_doc

        updated = update_or_409(session_id, body.version, mutate)
        return {"v": 1, "plan": plan_doc, "version": updated["version"]}

    @app.post("/api/sessions/{session_id}/transfer")
    def transfer_endpoint(session_id: str, body: TransferBody) -> dict[str, Any]:
        session = session_or_404(session_id)
        step2 = session.get("step2")
        if not step2 or not step2.get("plan"):
            raise HTTPException(
                status_code=409,
                detail="transfer requires a validated model and a step-2 plan",
            )
        step1 = session.get("step1")
        if not step1:
            raise HTTPException(
                status_code=409, detail="transfer requires a step-1 training binding"
            )
        obj = object_or_404(body.test_object)
        # the frozen model: exactly the bytes stored at step 2
        model = parse_model(step2["source"])
        try:
            binding = bind(obj, model, body.entries)
        except UnknownPartError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None

        with plan_limiter:
            result = check_transfer(
                model,
                [step1["object_id"]],
                obj,
                binding,
                catalog,
                settings.planner,
            )
        result_doc = result.to_doc()

        def mutate(doc: dict[str, Any]) -> None:
            doc["step3"]["results"].append(result_doc)

        updated = update_or_409(session_id, body.version, mutate)
        return {"v": 1, "result": result_doc, "version": updated["version"]}

    return app


def main(argv: Optional[list[str]] = None) -> None:
    parser = argparse.ArgumentParser(
        prog="causal-assembly-service",
        description="Serve the assembly-planning HTTP API.",
    )
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument("--catalog-dir", type=Path, default=None)
    parser.add_argument("--data-dir", type=Path, default=Path("./sessions"))
    parser.add_argument("--discount", type=float, default=0.95)
    parser.add_argument("--epsilon", type=float, default=1e-6)
    parser.add_argument("--max-states", type=int, default=100_000)
    parser.add_argument("--worker-cap", type=int, default=4)
    args = parser.parse_args(argv)

    settings = ServiceSettings(
        catalog_dir=args.catalog_dir,
        data_dir=args.data_dir,
        planner=PlannerConfig(
            discount=args.discount,
            convergence_epsilon=args.epsilon,
            max_states=args.max_states,
        ),
        worker_cap=args.worker_cap,
    )
    import uvicorn

    uvicorn.run(create_app(settings), host=args.host, port=args.port)


if __name__ == "__main__":
    main()
