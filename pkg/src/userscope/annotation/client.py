"""Thin HTTP client for the annotation service.

Used by the CLI (import-labels, headless annotation scripts) and by tests
driving the service end to end. Label submission is idempotent from the
caller's point of view: resubmitting the same (task, annotator) label after
a dropped response is answered with the duplicate rejection, which the
client treats as success.
"""
from __future__ import annotations

from dataclasses import dataclass

import httpx

from .store import Resolution, parse_export_csv

__all__ = ["AnnotationClient"]


@dataclass
class TaskView:
    user_id: int
    card: dict
    required_annotations: int
    labels_so_far: int
    guidelines: dict


class AnnotationClient:
    def __init__(self, base_url: str, timeout: float = 10.0):
        self._http = httpx.Client(base_url=base_url, timeout=timeout)

    def close(self) -> None:
        self._http.close()

    def __enter__(self) -> "AnnotationClient":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def create_tasks(self, cards: list[tuple[int, dict]]) -> int:
        response = self._http.post(
            "/tasks", json={"tasks": [{"user_id": uid, "card": card} for uid, card in cards]}
        )
        response.raise_for_status()
        return response.json()["created"]

    def next_task(self, annotator: str) -> TaskView | None:
        response = self._http.get("/tasks/next", params={"annotator": annotator})
        if response.status_code == 204:
            return None
        response.raise_for_status()
        return TaskView(**response.json())

    def submit_label(self, user_id: int, annotator: str, label: str, timestamp: str = "") -> str:
        response = self._http.post(
            "/labels",
            json={"user_id": user_id, "annotator": annotator, "label": label, "timestamp": timestamp},
        )
        if response.status_code == 409:
            return "duplicate"  # already recorded; safe after a lost response
        response.raise_for_status()
        return response.json()["status"]

    def resolutions(self) -> list[Resolution]:
        response = self._http.get("/resolutions")
        response.raise_for_status()
        return [Resolution(**row) for row in response.json()["resolved"]]

    def export_csv(self) -> str:
        response = self._http.get("/export")
        response.raise_for_status()
        return response.text

    def export_resolutions(self) -> list[Resolution]:
        return parse_export_csv(self.export_csv())
