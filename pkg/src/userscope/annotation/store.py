"""Event-sourced annotation store with majority-vote adjudication.

Every user under review is one task. A task needs 3 independent labels;
unanimity resolves it, any disagreement immediately raises the requirement
to 5, and at 5 labels the strict 3-of-5 majority resolves it (binary labels
with an odd count can never tie). Assignments and labels are appended to a
JSONL journal as they happen, so replaying the journal reconstructs the
exact service state; snapshots are an optimization, not the record.

All mutation goes through a single lock: a task is handed to an annotator
at most once, and duplicate (task, annotator) labels are rejected even
under concurrent sessions.
"""
from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable

from ..records import UserId

__all__ = [
    "VALID_LABELS",
    "GUIDELINE_QUESTION",
    "CONDUCT_DEFINITION",
    "AnnotationTask",
    "Resolution",
    "AnnotationStore",
    "AnnotationError",
    "DuplicateTaskError",
    "UnknownAnnotatorError",
    "UnknownTaskError",
    "NotAssignedError",
    "DuplicateLabelError",
    "TaskResolvedError",
    "InvalidLabelError",
    "parse_export_csv",
]

VALID_LABELS = ("hateful", "not_hateful")

# Instruction text shown with every task. Annotators judge the whole
# profile context, not isolated posts.
GUIDELINE_QUESTION = (
    "Does this account endorse content that is humiliating, derogatory or "
    "insulting towards some group of individuals (gender, religion, race, "
    "nationality) or support narratives associated with hate groups (white "
    "genocide, holocaust denial, jewish conspiracy, racial superiority)?"
)
CONDUCT_DEFINITION = (
    "Accounts may not promote violence against or directly attack or "
    "threaten other people on the basis of race, ethnicity, national "
    "origin, sexual orientation, gender, gender identity, religious "
    "affiliation, age, disability, or disease. Accounts whose primary "
    "purpose is inciting harm towards others on the basis of these "
    "categories are likewise disallowed."
)


class AnnotationError(Exception):
    """Base class for store-level rejections."""


class DuplicateTaskError(AnnotationError):
    pass


class UnknownAnnotatorError(AnnotationError):
    pass


class UnknownTaskError(AnnotationError):
    pass


class NotAssignedError(AnnotationError):
    pass


class DuplicateLabelError(AnnotationError):
    pass


class TaskResolvedError(AnnotationError):
    pass


class InvalidLabelError(AnnotationError):
    pass


@dataclass
class AnnotationTask:
    user_id: UserId
    card: dict
    required: int = 3
    status: str = "open"  # open | resolved
    labels: dict[str, tuple[str, str]] = field(default_factory=dict)  # annotator -> (label, ts)
    shown_to: set[str] = field(default_factory=set)

    def votes(self) -> dict[str, int]:
        counts = {label: 0 for label in VALID_LABELS}
        for label, _ in self.labels.values():
            counts[label] += 1
        return counts

    def needed(self) -> int:
        return self.required - len(self.labels)


@dataclass(frozen=True)
class Resolution:
    user_id: UserId
    label: str
    votes_for: int
    votes_against: int
    n_annotators: int


class AnnotationStore:
    def __init__(
        self,
        journal_path: Path | str | None = None,
        *,
        open_registration: bool = True,
        annotators: Iterable[str] = (),
    ) -> None:
        self._lock = threading.RLock()
        self._tasks: dict[UserId, AnnotationTask] = {}
        self._order: list[UserId] = []
        self._annotators: set[str] = set(annotators)
        self._open_registration = open_registration
        self._journal: IO[str] | None = None
        if journal_path is not None:
            path = Path(journal_path)
            if path.exists():
                self._replay(path)
            path.parent.mkdir(parents=True, exist_ok=True)
            self._journal = open(path, "a", encoding="utf-8")

    # ---- journal -----------------------------------------------------------

    def _append(self, event: dict) -> None:
        if self._journal is not None:
            self._journal.write(json.dumps(event, sort_keys=True) + "\n")
            self._journal.flush()

    def _replay(self, path: Path) -> None:
        for line in path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            event = json.loads(line)
            kind = event["event"]
            if kind == "task_created":
                self._apply_create(event["user_id"], event["card"])
            elif kind == "annotator_registered":
                self._annotators.add(event["annotator"])
            elif kind == "task_shown":
                self._tasks[event["user_id"]].shown_to.add(event["annotator"])
            elif kind == "label":
                self._apply_label(event["user_id"], event["annotator"], event["label"], event["ts"])
            else:
                raise ValueError(f"unknown journal event: {kind}")

    def close(self) -> None:
        if self._journal is not None:
            self._journal.close()
            self._journal = None

    # ---- registration ------------------------------------------------------

    def register_annotator(self, annotator: str) -> None:
        if not annotator or not annotator.strip():
            raise UnknownAnnotatorError("annotator id must be non-empty")
        with self._lock:
            if annotator not in self._annotators:
                self._annotators.add(annotator)
                self._append({"event": "annotator_registered", "annotator": annotator})

    def _check_annotator(self, annotator: str) -> None:
        if not annotator or not annotator.strip():
            raise UnknownAnnotatorError("annotator id must be non-empty")
        if annotator in self._annotators:
            return
        if self._open_registration:
            self.register_annotator(annotator)
        else:
            raise UnknownAnnotatorError(f"unknown annotator: {annotator}")

    # ---- tasks -------------------------------------------------------------

    def _apply_create(self, user_id: UserId, card: dict) -> AnnotationTask:
        task = AnnotationTask(user_id=user_id, card=card)
        self._tasks[user_id] = task
        self._order.append(user_id)
        return task

    def create_tasks(self, cards: Iterable[tuple[UserId, dict]]) -> int:
        """One open task per sampled user; a duplicate user is an error and
        leaves the task set unchanged."""
        with self._lock:
            cards = list(cards)
            for user_id, _ in cards:
                if user_id in self._tasks:
                    raise DuplicateTaskError(f"task already exists for user {user_id}")
            seen = set()
            for user_id, _ in cards:
                if user_id in seen:
                    raise DuplicateTaskError(f"user {user_id} appears twice in the batch")
                seen.add(user_id)
            for user_id, card in cards:
                self._apply_create(user_id, card)
                self._append({"event": "task_created", "user_id": user_id, "card": card})
            return len(cards)

    def next_task(self, annotator: str) -> AnnotationTask | None:
        """An open task this annotator has not seen, favoring tasks closest
        to resolution; None when the annotator has exhausted the queue."""
        with self._lock:
            self._check_annotator(annotator)
            candidates = [
                t
                for uid in self._order
                if (t := self._tasks[uid]).status == "open"
                and annotator not in t.shown_to
                and annotator not in t.labels
                and t.needed() > 0
            ]
            if not candidates:
                return None
            task = min(candidates, key=lambda t: (t.needed(), t.user_id))
            task.shown_to.add(annotator)
            self._append({"event": "task_shown", "user_id": task.user_id, "annotator": annotator})
            return task

    def submit_label(self, user_id: UserId, annotator: str, label: str, ts: str = "") -> str:
        """Append one label and run the adjudication rule; returns the task
        status afterwards ("open" or "resolved")."""
        if label not in VALID_LABELS:
            raise InvalidLabelError(f"label must be one of {VALID_LABELS}, got {label!r}")
        with self._lock:
            self._check_annotator(annotator)
            task = self._tasks.get(user_id)
            if task is None:
                raise UnknownTaskError(f"no task for user {user_id}")
            if task.status == "resolved":
                raise TaskResolvedError(f"task {user_id} is already resolved")
            if annotator in task.labels:
                raise DuplicateLabelError(f"annotator {annotator} already labeled user {user_id}")
            if annotator not in task.shown_to:
                raise NotAssignedError(f"annotator {annotator} was never assigned user {user_id}")
            self._apply_label(user_id, annotator, label, ts)
            self._append(
                {"event": "label", "user_id": user_id, "annotator": annotator, "label": label, "ts": ts}
            )
            return task.status

    def _apply_label(self, user_id: UserId, annotator: str, label: str, ts: str) -> None:
        task = self._tasks[user_id]
        task.shown_to.add(annotator)
        task.labels[annotator] = (label, ts)
        count = len(task.labels)
        if count == 3:
            votes = task.votes()
            if max(votes.values()) == 3:
                task.status = "resolved"
            else:
                task.required = 5
        elif count == 5:
            task.status = "resolved"

    # ---- queries -----------------------------------------------------------

    def task(self, user_id: UserId) -> AnnotationTask:
        try:
            return self._tasks[user_id]
        except KeyError:
            raise UnknownTaskError(f"no task for user {user_id}") from None

    def task_count(self) -> int:
        return len(self._tasks)

    def open_count(self) -> int:
        return sum(1 for t in self._tasks.values() if t.status == "open")

    def resolutions(self) -> list[Resolution]:
        out = []
        for uid in sorted(self._tasks):
            task = self._tasks[uid]
            if task.status != "resolved":
                continue
            votes = task.votes()
            final = max(VALID_LABELS, key=lambda lab: votes[lab])
            out.append(
                Resolution(
                    user_id=uid,
                    label=final,
                    votes_for=votes[final],
                    votes_against=len(task.labels) - votes[final],
                    n_annotators=len(task.labels),
                )
            )
        return out

    def export_csv(self) -> str:
        """Resolved tasks as CSV; header-only when nothing is resolved."""
        lines = ["user_id,label,votes_for,votes_against,n_annotators"]
        for r in self.resolutions():
            lines.append(f"{r.user_id},{r.label},{r.votes_for},{r.votes_against},{r.n_annotators}")
        return "\n".join(lines) + "\n"

    # ---- snapshots / integrity ----------------------------------------------

    def state_dict(self) -> dict:
        """Canonical full state, used for snapshots and replay checks."""
        return {
            "annotators": sorted(self._annotators),
            "tasks": [
                {
                    "user_id": uid,
                    "card": self._tasks[uid].card,
                    "required": self._tasks[uid].required,
                    "status": self._tasks[uid].status,
                    "labels": {
                        a: list(v) for a, v in sorted(self._tasks[uid].labels.items())
                    },
                    "shown_to": sorted(self._tasks[uid].shown_to),
                }
                for uid in self._order
            ],
        }

    def state_digest(self) -> str:
        payload = json.dumps(self.state_dict(), sort_keys=True).encode()
        return hashlib.sha256(payload).hexdigest()

    def write_snapshot(self, path: Path | str) -> None:
        Path(path).write_text(json.dumps(self.state_dict(), sort_keys=True), encoding="utf-8")


def parse_export_csv(text: str) -> list[Resolution]:
    """Inverse of AnnotationStore.export_csv."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "user_id,label,votes_for,votes_against,n_annotators":
        raise ValueError("not a label export file")
    out = []
    for line in lines[1:]:
        uid, label, vfor, vagainst, n = line.split(",")
        out.append(Resolution(int(uid), label, int(vfor), int(vagainst), int(n)))
    return out
