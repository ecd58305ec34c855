"""Template-matching recognizer: partial doodle -> ranked top-3 categories.

The recognizer reduces a sketch to a 64-point cloud (scale/translation
invariant via normalization), takes the minimum symmetric Chamfer distance
to each category's templates, and converts distances to a 23-way confidence
distribution with a softmax at temperature `tau`.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from . import kernels
from .categories import CATEGORIES
from .errors import InvalidInputError
from .strokes import DEFAULT_SPACING, Sketch, load_sketches, normalize, resample, save_sketches
from .templates import all_template_sketches

POINT_CLOUD_SIZE = 64
DEFAULT_TAU = 0.05

STROKE_BUCKETS = ("1", "2", "3", "4", "5", "6", "7", "8", "9+")

LIBRARY_MANIFEST_VERSION = 1


def point_cloud(sketch: Sketch, n: int = POINT_CLOUD_SIZE) -> np.ndarray:
    """Reduce a sketch to n points at uniform arc-length positions over the
    concatenated strokes (pen-up jumps carry no length)."""
    polylines: list[tuple[np.ndarray, np.ndarray]] = []
    bounds = [0.0]
    for s in sketch.strokes:
        if len(s) < 2:
            continue
        d = np.diff(s, axis=0)
        seglen = np.sqrt(d[:, 0] ** 2 + d[:, 1] ** 2)
        keep = seglen > 0
        if not keep.any():
            continue
        pts = np.concatenate([s[:1], s[1:][keep]], axis=0)
        cum = np.concatenate([[0.0], np.cumsum(seglen[keep])])
        polylines.append((pts, cum))
        bounds.append(bounds[-1] + float(cum[-1]))
    if not polylines:
        # Degenerate doodle (a dot): every sample sits on it.
        return np.tile(sketch.strokes[0][0], (n, 1))
    total = bounds[-1]
    targets = np.linspace(0.0, total, n)
    # Boundary positions belong to the earlier stroke (strict-less count).
    owner = np.searchsorted(np.asarray(bounds[1:-1]), targets, side="left")
    out = np.empty((n, 2))
    for k, (pts, cum) in enumerate(polylines):
        mask = owner == k
        if not mask.any():
            continue
        local = np.clip(targets[mask] - bounds[k], 0.0, cum[-1])
        out[mask, 0] = np.interp(local, cum, pts[:, 0])
        out[mask, 1] = np.interp(local, cum, pts[:, 1])
    return out


@dataclass(frozen=True)
class ElementPrediction:
    """Top-3 (category, confidence) entries plus the full 23-way distribution."""

    entries: tuple[tuple[str, float], ...]
    confidences: np.ndarray = field(repr=False)

    def top1(self) -> str:
        return self.entries[0][0]

    def top_categories(self) -> tuple[str, ...]:
        return tuple(cat for cat, _ in self.entries)

    def confidence_for(self, category: str) -> float:
        return float(self.confidences[CATEGORIES.index(category)])


def prediction_from_confidences(conf: np.ndarray) -> ElementPrediction:
    """Wrap a 23-way confidence vector; ties broken by category name."""
    order = sorted(range(len(CATEGORIES)), key=lambda i: (-conf[i], CATEGORIES[i]))
    entries = tuple((CATEGORIES[i], float(conf[i])) for i in order[:3])
    return ElementPrediction(entries=entries, confidences=conf)


def softmax_confidences(scores: np.ndarray) -> np.ndarray:
    z = scores - scores.max()
    e = np.exp(z)
    return e / e.sum()


@dataclass
class TemplateLibrary:
    """Per-category 64-point template clouds, stacked for the batch kernel."""

    categories: tuple[str, ...]
    bank: np.ndarray  # (n_templates, 64, 2), grouped by category
    ranges: dict[str, tuple[int, int]]  # category -> [start, end) rows of bank
    sketches: list[tuple[str, Sketch]]  # source doodles, in bank order

    def __post_init__(self):
        if tuple(self.categories) != CATEGORIES:
            raise InvalidInputError("library must cover exactly the 23 categories")
        for cat in self.categories:
            start, end = self.ranges.get(cat, (0, 0))
            if end <= start:
                raise InvalidInputError(f"category {cat!r} has no templates")
        if self.bank.shape[1:] != (POINT_CLOUD_SIZE, 2):
            raise InvalidInputError("templates must be 64-point clouds")
        if self.bank.min() < -1e-9 or self.bank.max() > 1 + 1e-9:
            raise InvalidInputError("template clouds must lie in the unit box")

    @property
    def n_templates(self) -> int:
        return len(self.bank)


def sketch_to_cloud(sketch: Sketch, spacing: float = DEFAULT_SPACING) -> np.ndarray:
    """Full preprocessing: normalize, resample, 64-point cloud."""
    return point_cloud(resample(normalize(sketch), spacing))


def build_library(records: Iterable[tuple[str, Sketch]]) -> TemplateLibrary:
    """Assemble a library from labeled sketches (every category required)."""
    by_cat: dict[str, list[Sketch]] = {cat: [] for cat in CATEGORIES}
    for label, sketch in records:
        if label not in by_cat:
            raise InvalidInputError(f"unknown template category: {label!r}")
        by_cat[label].append(sketch)
    clouds = []
    ranges = {}
    ordered: list[tuple[str, Sketch]] = []
    pos = 0
    for cat in CATEGORIES:
        group = by_cat[cat]
        if not group:
            raise InvalidInputError(f"category {cat!r} has no templates")
        for sk in group:
            clouds.append(sketch_to_cloud(sk))
            ordered.append((cat, sk))
        ranges[cat] = (pos, pos + len(group))
        pos += len(group)
    bank = np.ascontiguousarray(np.stack(clouds))
    return TemplateLibrary(categories=CATEGORIES, bank=bank, ranges=ranges, sketches=ordered)


@functools.lru_cache(maxsize=1)
def builtin_library() -> TemplateLibrary:
    """The shipped procedural library: 10 template variants per category."""
    return build_library(all_template_sketches())


def save_library(lib: TemplateLibrary, base_path) -> None:
    """Write `<base>.ndjson` (doodle records) and `<base>.manifest.json`."""
    base = Path(base_path)
    save_sketches(lib.sketches, base.with_suffix(".ndjson"))
    manifest = {
        "version": LIBRARY_MANIFEST_VERSION,
        "categories": {cat: list(lib.ranges[cat]) for cat in lib.categories},
    }
    base.with_suffix(".manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))


def load_library(base_path) -> TemplateLibrary:
    """Read a library written by :func:`save_library` (ranges label the records)."""
    base = Path(base_path)
    manifest = json.loads(base.with_suffix(".manifest.json").read_text())
    if manifest.get("version") != LIBRARY_MANIFEST_VERSION:
        raise InvalidInputError(
            f"library manifest version {manifest.get('version')!r}, expected {LIBRARY_MANIFEST_VERSION}"
        )
    records = load_sketches(base.with_suffix(".ndjson"))
    labeled: list[tuple[str, Sketch]] = []
    for cat, (start, end) in manifest["categories"].items():
        if not 0 <= start < end <= len(records):
            raise InvalidInputError(f"manifest range for {cat!r} out of bounds")
        for label, sketch in records[start:end]:
            if label is not None and label != cat:
                raise InvalidInputError(f"record label {label!r} disagrees with manifest range {cat!r}")
            labeled.append((cat, sketch))
    return build_library(labeled)


def classify_cloud(cloud: np.ndarray, lib: TemplateLibrary, tau: float = DEFAULT_TAU) -> ElementPrediction:
    dists = kernels.chamfer_batch(cloud, lib.bank)
    per_cat = np.empty(len(CATEGORIES))
    for ci, cat in enumerate(CATEGORIES):
        start, end = lib.ranges[cat]
        per_cat[ci] = dists[start:end].min()
    conf = softmax_confidences(-per_cat / tau)
    return prediction_from_confidences(conf)


def classify_template(
    sketch: Sketch, lib: TemplateLibrary | None = None, tau: float = DEFAULT_TAU
) -> ElementPrediction:
    """Classify a (partial or complete) doodle against a template library."""
    lib = lib or builtin_library()
    return classify_cloud(sketch_to_cloud(sketch), lib, tau)


Recognizer = Callable[[Sketch], ElementPrediction]


def stroke_count_report(
    records: Sequence[tuple[str, Sketch]], recognizer: Recognizer | None = None
) -> dict[str, dict[str, float | None]]:
    """Mean true-category confidence (percent) per category and stroke-count bucket.

    Buckets are total stroke counts 1..8 and 9+; cells with no sketches are None.
    """
    recognizer = recognizer or classify_template
    sums: dict[tuple[str, str], list[float]] = {}
    for label, sketch in records:
        if label not in CATEGORIES:
            raise InvalidInputError(f"unknown category label: {label!r}")
        bucket = str(sketch.n_strokes) if sketch.n_strokes <= 8 else "9+"
        pred = recognizer(sketch)
        sums.setdefault((label, bucket), []).append(pred.confidence_for(label))
    table: dict[str, dict[str, float | None]] = {}
    for cat in CATEGORIES:
        row: dict[str, float | None] = {}
        for bucket in STROKE_BUCKETS:
            vals = sums.get((cat, bucket))
            row[bucket] = 100.0 * sum(vals) / len(vals) if vals else None
        table[cat] = row
    return table


def format_stroke_report(table: dict[str, dict[str, float | None]]) -> str:
    """Tab-separated report; cells are integer percents (Python round), '-' when empty."""
    lines = ["category\t" + "\t".join(STROKE_BUCKETS)]
    for cat in CATEGORIES:
        cells = []
        for bucket in STROKE_BUCKETS:
            val = table[cat][bucket]
            cells.append("-" if val is None else str(round(val)))
        lines.append(cat + "\t" + "\t".join(cells))
    return "\n".join(lines) + "\n"
