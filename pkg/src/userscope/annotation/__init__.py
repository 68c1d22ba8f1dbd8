from .store import (
    CONDUCT_DEFINITION,
    GUIDELINE_QUESTION,
    VALID_LABELS,
    AnnotationError,
    AnnotationStore,
    AnnotationTask,
    DuplicateLabelError,
    DuplicateTaskError,
    InvalidLabelError,
    NotAssignedError,
    Resolution,
    TaskResolvedError,
    UnknownAnnotatorError,
    UnknownTaskError,
    parse_export_csv,
)
from .api import create_app
from .client import AnnotationClient

__all__ = [
    "CONDUCT_DEFINITION",
    "GUIDELINE_QUESTION",
    "VALID_LABELS",
    "AnnotationError",
    "AnnotationStore",
    "AnnotationTask",
    "AnnotationClient",
    "DuplicateLabelError",
    "DuplicateTaskError",
    "InvalidLabelError",
    "NotAssignedError",
    "Resolution",
    "TaskResolvedError",
    "UnknownAnnotatorError",
    "UnknownTaskError",
    "create_app",
    "parse_export_csv",
]
