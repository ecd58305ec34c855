"""Interactive canvas state: strokes in progress, committed elements,
undo/redo, and conversion into a normalized search query (with text-button
fusion).

The canvas is a fixed logical 450x800 portrait space; clients map device
pixels onto it.  Mutating operations return ``True`` when applied and
``False`` for the no-op cases (nothing to undo/redo/remove), so callers can
surface the distinction without exceptions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .categories import CATEGORIES, TEXT_BUTTON
from .classify import ElementPrediction, classify_template
from .errors import EmptyQueryError, InvalidInputError, InvalidStateError
from .strokes import Sketch

CANVAS_WIDTH = 450.0
CANVAS_HEIGHT = 800.0

FUSION_CONTAINMENT = 0.9
MIN_DIM = 1e-3

Recognizer = Callable[[Sketch], ElementPrediction]


@dataclass(frozen=True)
class PlacedElement:
    """A committed query element: category + tight stroke bbox, canvas units."""

    category: str
    bbox: tuple[float, float, float, float]  # (cx, cy, w, h)
    strokes: tuple[np.ndarray, ...] = field(repr=False, default=())


@dataclass(frozen=True)
class QueryElement:
    category: str
    bbox: tuple[float, float, float, float]  # normalized (cx, cy, w, h)
    compound_tag: str | None = None

    @property
    def effective_category(self) -> str:
        """The category used for matching (fusion tag wins)."""
        return self.compound_tag or self.category


@dataclass(frozen=True)
class SearchQuery:
    elements: tuple[QueryElement, ...]

    def __post_init__(self):
        if not self.elements:
            raise EmptyQueryError("query has no elements")


def _as_stroke(points) -> np.ndarray:
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] != 2:
        raise InvalidInputError("a stroke is a (n >= 1, 2) array of points")
    if not np.isfinite(arr).all():
        raise InvalidInputError("stroke points must be finite")
    arr[:, 0] = np.clip(arr[:, 0], 0.0, CANVAS_WIDTH)
    arr[:, 1] = np.clip(arr[:, 1], 0.0, CANVAS_HEIGHT)
    return arr


class CanvasState:
    """One user's drawing surface; not safe for unsynchronized sharing."""

    def __init__(self):
        self.committed: list[PlacedElement] = []
        self.current_strokes: list[np.ndarray] = []
        self.redo_stack: list[np.ndarray] = []

    # -- stroke-level edits -------------------------------------------------

    def add_stroke(self, points) -> None:
        stroke = _as_stroke(points)
        self.current_strokes.append(stroke)
        self.redo_stack.clear()

    def undo_stroke(self) -> bool:
        if not self.current_strokes:
            return False
        self.redo_stack.append(self.current_strokes.pop())
        return True

    def redo_stroke(self) -> bool:
        if not self.redo_stack:
            return False
        self.current_strokes.append(self.redo_stack.pop())
        return True

    def remove_last_icon(self) -> bool:
        """Drop the most recent committed element (its strokes are gone for
        good — they do not come back onto the canvas)."""
        if not self.committed:
            return False
        self.committed.pop()
        return True

    # -- classification & commit --------------------------------------------

    def current_sketch(self) -> Sketch | None:
        if not self.current_strokes:
            return None
        return Sketch(tuple(np.array(s) for s in self.current_strokes))

    def predict_current(self, recognizer: Recognizer | None = None) -> ElementPrediction | None:
        sketch = self.current_sketch()
        if sketch is None:
            return None
        return (recognizer or classify_template)(sketch)

    def commit_element(
        self, chosen: str | None = None, recognizer: Recognizer | None = None
    ) -> PlacedElement:
        """Turn the in-progress sketch into a PlacedElement.

        ``chosen`` defaults to the recognizer's rank-1 category.  Clears the
        current strokes and the redo stack.
        """
        if not self.current_strokes:
            raise InvalidStateError("nothing drawn: commit requires at least one stroke")
        if chosen is None:
            prediction = self.predict_current(recognizer)
            chosen = prediction.top1()
        elif chosen not in CATEGORIES:
            raise InvalidInputError(f"unknown category: {chosen!r}")
        pts = np.concatenate(self.current_strokes, axis=0)
        x1, y1 = pts.min(axis=0)
        x2, y2 = pts.max(axis=0)
        element = PlacedElement(
            category=chosen,
            bbox=((x1 + x2) / 2.0, (y1 + y2) / 2.0, x2 - x1, y2 - y1),
            strokes=tuple(self.current_strokes),
        )
        self.committed.append(element)
        self.current_strokes = []
        self.redo_stack.clear()
        return element


def _overlap(a: tuple[float, float, float, float], b: tuple[float, float, float, float]) -> float:
    ax1, ay1 = a[0] - a[2] / 2, a[1] - a[3] / 2
    ax2, ay2 = a[0] + a[2] / 2, a[1] + a[3] / 2
    bx1, by1 = b[0] - b[2] / 2, b[1] - b[3] / 2
    bx2, by2 = b[0] + b[2] / 2, b[1] + b[3] / 2
    return max(0.0, min(ax2, bx2) - max(ax1, bx1)) * max(0.0, min(ay2, by2) - max(ay1, by1))


def _normalized_bbox(bbox: tuple[float, float, float, float]) -> tuple[float, float, float, float]:
    cx, cy, w, h = bbox
    return (
        min(max(cx / CANVAS_WIDTH, 0.0), 1.0),
        min(max(cy / CANVAS_HEIGHT, 0.0), 1.0),
        min(max(w / CANVAS_WIDTH, MIN_DIM), 1.0),
        min(max(h / CANVAS_HEIGHT, MIN_DIM), 1.0),
    )


def build_query(state: CanvasState) -> SearchQuery:
    """Normalize committed elements and fuse text-inside-square pairs.

    A squiggle whose (normalized, clamped) bbox is >= 90% contained in a
    square's bbox fuses with that square into a single element tagged
    ``text_button`` carrying the square's bbox.  Each square claims at most
    one squiggle — the most-contained one, earlier commit winning ties —
    with squares considered in commit order.  Everything else passes through.
    """
    if not state.committed:
        raise EmptyQueryError("nothing committed: draw at least one element")
    boxes = [_normalized_bbox(el.bbox) for el in state.committed]
    claimed: set[int] = set()
    fused_square: dict[int, str] = {}
    for si, el in enumerate(state.committed):
        if el.category != "square":
            continue
        best: tuple[float, int] | None = None  # (-containment, index) minimized
        for qi, other in enumerate(state.committed):
            if other.category != "squiggle" or qi in claimed:
                continue
            qbox = boxes[qi]
            containment = _overlap(qbox, boxes[si]) / (qbox[2] * qbox[3])
            if containment >= FUSION_CONTAINMENT and (best is None or -containment < best[0]):
                best = (-containment, qi)
        if best is not None:
            claimed.add(best[1])
            fused_square[si] = TEXT_BUTTON
    out: list[QueryElement] = []
    for i, el in enumerate(state.committed):
        if i in claimed:
            continue
        out.append(QueryElement(category=el.category, bbox=boxes[i], compound_tag=fused_square.get(i)))
    return SearchQuery(elements=tuple(out))


# -- session snapshots (replay format for the eval harness) -----------------


@dataclass(frozen=True)
class SessionSnapshot:
    """Committed elements (category + canvas-unit bbox) plus optional target."""

    elements: tuple[tuple[str, tuple[float, float, float, float]], ...]
    target: str | None = None


def snapshot_of(state: CanvasState, target: str | None = None) -> SessionSnapshot:
    return SessionSnapshot(
        elements=tuple((el.category, el.bbox) for el in state.committed), target=target
    )


def replay_snapshot(snapshot: SessionSnapshot) -> CanvasState:
    """Rebuild canvas state by committing each element as a two-point
    diagonal stroke spanning its bbox (tight bbox therefore reproduced)."""
    state = CanvasState()
    for category, (cx, cy, w, h) in snapshot.elements:
        state.add_stroke([[cx - w / 2, cy - h / 2], [cx + w / 2, cy + h / 2]])
        state.commit_element(chosen=category)
    return state


def _snapshot_to_dict(snap: SessionSnapshot) -> dict:
    doc = {
        "elements": [
            {"category": cat, "bbox": [float(v) for v in bbox]} for cat, bbox in snap.elements
        ]
    }
    if snap.target is not None:
        doc["target"] = snap.target
    return doc


def _snapshot_from_dict(doc: dict) -> SessionSnapshot:
    if not isinstance(doc, dict) or not isinstance(doc.get("elements"), list):
        raise InvalidInputError("snapshot record must have an elements list")
    elements = []
    for item in doc["elements"]:
        cat = item.get("category") if isinstance(item, dict) else None
        bbox = item.get("bbox") if isinstance(item, dict) else None
        if cat not in CATEGORIES:
            raise InvalidInputError(f"snapshot has unknown category: {cat!r}")
        if not (isinstance(bbox, list) and len(bbox) == 4):
            raise InvalidInputError("snapshot bbox must be [cx, cy, w, h]")
        elements.append((cat, tuple(float(v) for v in bbox)))
    target = doc.get("target")
    if target is not None and not isinstance(target, str):
        raise InvalidInputError("snapshot target must be a string id")
    return SessionSnapshot(elements=tuple(elements), target=target)


def save_sessions(snapshots: Sequence[SessionSnapshot], path) -> None:
    lines = [json.dumps(_snapshot_to_dict(s), sort_keys=True) for s in snapshots]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


def load_sessions(path) -> list[SessionSnapshot]:
    out = []
    for ln, line in enumerate(Path(path).read_text().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"{path}:{ln}: bad JSON ({exc.msg})") from exc
        out.append(_snapshot_from_dict(doc))
    return out
