"""HTTP JSON API for the annotation service.

Endpoints: POST /tasks (bulk create), GET /tasks/next?annotator=ID,
POST /labels, GET /resolutions, GET /export (CSV). All payloads are UTF-8
JSON. Label submission and task assignment are serialized through the
store's single writer lock; reads are concurrent. When a built web UI is
present under webui/ it is served at /ui.
"""
from __future__ import annotations

from pathlib import Path
from typing import Literal

from fastapi import FastAPI, HTTPException, Query, Response
from fastapi.responses import FileResponse, PlainTextResponse
from pydantic import BaseModel, Field

from .store import (
    CONDUCT_DEFINITION,
    GUIDELINE_QUESTION,
    AnnotationStore,
    DuplicateLabelError,
    DuplicateTaskError,
    InvalidLabelError,
    NotAssignedError,
    TaskResolvedError,
    UnknownAnnotatorError,
    UnknownTaskError,
)

__all__ = ["create_app"]


class TaskIn(BaseModel):
    user_id: int = Field(ge=0)
    card: dict


class CreateTasksRequest(BaseModel):
    tasks: list[TaskIn]


class CreateTasksResponse(BaseModel):
    created: int
    total: int


class TaskOut(BaseModel):
    user_id: int
    card: dict
    required_annotations: int
    labels_so_far: int
    guidelines: dict[str, str]


class LabelRequest(BaseModel):
    user_id: int = Field(ge=0)
    annotator: str = Field(min_length=1)
    label: Literal["hateful", "not_hateful"]
    timestamp: str = ""


class LabelResponse(BaseModel):
    user_id: int
    status: Literal["open", "resolved"]


class ResolutionOut(BaseModel):
    user_id: int
    label: str
    votes_for: int
    votes_against: int
    n_annotators: int


class ResolutionsResponse(BaseModel):
    resolved: list[ResolutionOut]
    open_tasks: int
    total_tasks: int


def create_app(store: AnnotationStore, webui_dir: Path | None = None) -> FastAPI:
    app = FastAPI(title="annotation service")

    @app.post("/tasks", response_model=CreateTasksResponse)
    def create_tasks(request: CreateTasksRequest) -> CreateTasksResponse:
        try:
            created = store.create_tasks((t.user_id, t.card) for t in request.tasks)
        except DuplicateTaskError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        return CreateTasksResponse(created=created, total=store.task_count())

    @app.get("/tasks/next", response_model=TaskOut, responses={204: {"description": "queue exhausted"}})
    def next_task(annotator: str = Query(min_length=1)):
        try:
            task = store.next_task(annotator)
        except UnknownAnnotatorError as exc:
            raise HTTPException(status_code=403, detail=str(exc)) from exc
        if task is None:
            return Response(status_code=204)
        return TaskOut(
            user_id=task.user_id,
            card=task.card,
            required_annotations=task.required,
            labels_so_far=len(task.labels),
            guidelines={"question": GUIDELINE_QUESTION, "definition": CONDUCT_DEFINITION},
        )

    @app.post("/labels", response_model=LabelResponse)
    def submit_label(request: LabelRequest) -> LabelResponse:
        try:
            status = store.submit_label(
                request.user_id, request.annotator, request.label, request.timestamp
            )
        except (UnknownTaskError, UnknownAnnotatorError) as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except DuplicateLabelError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        except (TaskResolvedError, NotAssignedError, InvalidLabelError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return LabelResponse(user_id=request.user_id, status=status)

    @app.get("/resolutions", response_model=ResolutionsResponse)
    def resolutions() -> ResolutionsResponse:
        resolved = [ResolutionOut(**vars(r)) for r in store.resolutions()]
        return ResolutionsResponse(
            resolved=resolved,
            open_tasks=store.open_count(),
            total_tasks=store.task_count(),
        )

    @app.get("/export", response_class=PlainTextResponse)
    def export() -> str:
        return store.export_csv()

    if webui_dir is not None and (webui_dir / "index.html").exists():

        @app.get("/ui")
        def ui_index() -> FileResponse:
            return FileResponse(webui_dir / "index.html")

        @app.get("/ui/{asset}")
        def ui_asset(asset: str) -> FileResponse:
            target = (webui_dir / asset).resolve()
            if webui_dir.resolve() not in target.parents or not target.is_file():
                raise HTTPException(status_code=404)
            return FileResponse(target)

    return app
