"""Stroke data model and the deterministic preprocessing pipeline.

A doodle is an ordered sequence of strokes; each stroke is an (n, 2) float
array of x/y points in drawing order.  The pipeline feeding both recognizers
is normalize -> resample -> delta_encode, all pure functions over immutable
values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInputError

DEFAULT_SPACING = 0.02


@dataclass(frozen=True)
class Sketch:
    """An ordered, nonempty sequence of strokes, each a (n, 2) float64 array."""

    strokes: tuple[np.ndarray, ...]

    def __post_init__(self):
        if not self.strokes:
            raise InvalidInputError("sketch must contain at least one stroke")
        cleaned = []
        for s in self.strokes:
            arr = np.asarray(s, dtype=np.float64)
            if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 1:
                raise InvalidInputError("stroke must be a (n>=1, 2) array")
            if not np.all(np.isfinite(arr)):
                raise InvalidInputError("stroke points must be finite")
            cleaned.append(arr)
        object.__setattr__(self, "strokes", tuple(cleaned))

    @classmethod
    def from_lists(cls, strokes: Iterable[Sequence[Sequence[float]]]) -> "Sketch":
        return cls(tuple(np.asarray(s, dtype=np.float64) for s in strokes))

    @property
    def n_strokes(self) -> int:
        return len(self.strokes)

    @property
    def n_points(self) -> int:
        return sum(len(s) for s in self.strokes)

    def points(self) -> np.ndarray:
        """All points of all strokes, concatenated in drawing order."""
        return np.concatenate(self.strokes, axis=0)

    def bounds(self) -> tuple[float, float, float, float]:
        """(min_x, min_y, max_x, max_y) of the joint bounding box."""
        pts = self.points()
        lo = pts.min(axis=0)
        hi = pts.max(axis=0)
        return float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])


def normalize(sketch: Sketch) -> Sketch:
    """Translate the joint bounding box to (0,0) and scale its larger side to 1.

    Aspect ratio is preserved.  A zero-extent sketch (all points coincident)
    is translated only; its scale factor stays 1.
    """
    x0, y0, x1, y1 = sketch.bounds()
    extent = max(x1 - x0, y1 - y0)
    scale = 1.0 / extent if extent > 0.0 else 1.0
    origin = np.array([x0, y0])
    return Sketch(tuple((s - origin) * scale for s in sketch.strokes))


def _stroke_arc_lengths(stroke: np.ndarray) -> np.ndarray:
    deltas = np.diff(stroke, axis=0)
    return np.sqrt(deltas[:, 0] ** 2 + deltas[:, 1] ** 2)


def _resample_stroke(stroke: np.ndarray, spacing: float) -> np.ndarray:
    seg = _stroke_arc_lengths(stroke)
    keep = seg > 0.0
    if not np.any(keep):
        p = stroke[0]
        return np.stack([p, p])
    # Drop zero-length segments so interpolation abscissae are strictly increasing.
    pts = np.concatenate([stroke[:1], stroke[1:][keep]], axis=0)
    cum = np.concatenate([[0.0], np.cumsum(seg[keep])])
    total = float(cum[-1])
    n = int(np.floor(total / spacing + 1e-9))
    pos = spacing * np.arange(n + 1, dtype=np.float64)
    if total - pos[-1] > 1e-9:
        pos = np.append(pos, total)
    else:
        pos[-1] = total
    out = np.empty((len(pos), 2))
    out[:, 0] = np.interp(pos, cum, pts[:, 0])
    out[:, 1] = np.interp(pos, cum, pts[:, 1])
    # Endpoints are original points by construction; pin them bit-exactly.
    out[0] = pts[0]
    out[-1] = pts[-1]
    return out


def resample(sketch: Sketch, spacing: float = DEFAULT_SPACING) -> Sketch:
    """Replace each stroke with points at arc-length steps of `spacing`.

    Sample positions run 0, spacing, 2*spacing, ... along the stroke's
    polyline; the original first and last points are always kept, so the
    final gap may be shorter than `spacing`.  Single-point (or zero-length)
    strokes become two coincident points.
    """
    if spacing <= 0.0:
        raise InvalidInputError(f"spacing must be > 0, got {spacing}")
    return Sketch(tuple(_resample_stroke(s, spacing) for s in sketch.strokes))


def delta_encode(sketch: Sketch) -> np.ndarray:
    """Encode a sketch as (dx, dy, pen_lift) steps, shape (n_points, 3).

    The first step is the offset from (0,0) to the first point; pen_lift is 1
    exactly at each stroke's last point.  Inverse of :func:`delta_decode`.
    """
    pts = sketch.points()
    steps = np.zeros((len(pts), 3))
    steps[0, :2] = pts[0]
    steps[1:, :2] = np.diff(pts, axis=0)
    end = -1
    for s in sketch.strokes:
        end += len(s)
        steps[end, 2] = 1.0
    return steps


def delta_decode(steps: np.ndarray) -> Sketch:
    """Rebuild a sketch from (dx, dy, pen_lift) steps."""
    steps = np.asarray(steps, dtype=np.float64)
    if steps.ndim != 2 or steps.shape[1] != 3 or len(steps) == 0:
        raise InvalidInputError("encoded sketch must be a nonempty (n, 3) array")
    flags = steps[:, 2]
    if not np.all(np.isin(flags, (0.0, 1.0))):
        raise InvalidInputError("pen_lift flags must be 0 or 1")
    if flags[-1] != 1.0:
        raise InvalidInputError("last step must lift the pen")
    pts = np.cumsum(steps[:, :2], axis=0)
    ends = np.flatnonzero(flags == 1.0) + 1
    starts = np.concatenate([[0], ends[:-1]])
    return Sketch(tuple(pts[a:b] for a, b in zip(starts, ends)))


def translate(sketch: Sketch, dx: float, dy: float) -> Sketch:
    return Sketch(tuple(s + np.array([dx, dy]) for s in sketch.strokes))


def scale(sketch: Sketch, factor: float) -> Sketch:
    if factor <= 0.0:
        raise InvalidInputError("scale factor must be > 0")
    return Sketch(tuple(s * factor for s in sketch.strokes))


def to_stroke_lists(sketch: Sketch) -> list[list[list[float]]]:
    """Sketch as [[xs, ys], ...] pairs, the interchange representation."""
    return [[s[:, 0].tolist(), s[:, 1].tolist()] for s in sketch.strokes]


def from_stroke_lists(pairs: Sequence[Sequence[Sequence[float]]]) -> Sketch:
    strokes = []
    for pair in pairs:
        if len(pair) != 2 or len(pair[0]) != len(pair[1]):
            raise InvalidInputError("each stroke must be an [xs, ys] pair of equal length")
        strokes.append(np.stack([pair[0], pair[1]], axis=1))
    return Sketch(tuple(strokes))


def load_sketches(path) -> list[tuple[str | None, Sketch]]:
    """Read newline-delimited (label, sketch) records.

    Accepts both this package's records and the public simplified-drawing
    convention: stroke data under "strokes" or "drawing", label under
    "label" or "word".
    """
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InvalidInputError(f"{path}: line {lineno}: not valid JSON: {exc}") from exc
            raw = rec.get("strokes", rec.get("drawing"))
            if raw is None:
                raise InvalidInputError(f"{path}: line {lineno}: no 'strokes' or 'drawing' key")
            label = rec.get("label", rec.get("word"))
            records.append((label, from_stroke_lists(raw)))
    if not records:
        raise InvalidInputError(f"{path}: no sketch records")
    return records


def save_sketches(records: Iterable[tuple[str | None, Sketch]], path) -> None:
    """Write (label, sketch) records in the interchange convention ("word"/"drawing")."""
    with open(path, "w", encoding="utf-8") as fh:
        for label, sketch in records:
            rec = {"drawing": to_stroke_lists(sketch)}
            if label is not None:
                rec = {"word": label, **rec}
            fh.write(json.dumps(rec, separators=(",", ":")) + "\n")
