"""Screen-corpus ingestion and the persistent search index.

A corpus directory holds one hierarchy file per screen (``<id>.json``) plus
optional ``<id>.thumb`` / ``<id>.full`` screenshots.  Hierarchy schema::

    {"id": str, "app": str, "width": px, "height": px,
     "root": {"label"?: str, "bounds"?: [x1, y1, x2, y2],
              "visible"?: bool, "children"?: [...]}}

Bounds are absolute pixels; ``visible: false`` hides the whole subtree.
Icon-class labels are namespaced ``icon:<name>`` (e.g. ``icon:share``);
component labels are plain strings (``Text``, ``Card``, ``Slider``, ...).

The index file is a versioned binary (magic ``PSDX1``): magic, u32 LE header
length, canonical JSON header, then the raw little-endian arrays the header
declares.  Postings and idf are derived data — recomputed on load so a
rebuilt file is byte-identical.
"""

from __future__ import annotations

import functools
import json
import math
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .categories import CATEGORIES, N_QUERY_CATEGORIES, QUERY_CATEGORIES, TEXT_BUTTON
from .errors import CorpusError, IndexFormatError, InvalidInputError, VersionMismatchError

MAGIC = b"PSDX1"
FORMAT_VERSION = 1

ICON_PREFIX = "icon:"
ICON_WILDCARD = "icon:*"

MIN_DIM = 1e-3

# name, dtype, element count per unit (offsets has N+1 entries, the rest E)
_ARRAY_SPECS = (
    ("offsets", "<i8"),
    ("label_idx", "<u2"),
    ("masks", "<u4"),
    ("cx", "<f8"),
    ("cy", "<f8"),
    ("w", "<f8"),
    ("h", "<f8"),
)


@dataclass(frozen=True)
class CategoryMapping:
    """Doodle category -> the corpus labels it may stand for.

    ``icon:*`` in a label set matches every ``icon:``-prefixed label (the
    catch-all doodle for icons with no dedicated primitive).
    """

    rules: dict[str, tuple[str, ...]]

    def __post_init__(self):
        missing = [c for c in CATEGORIES if c not in self.rules]
        if missing:
            raise InvalidInputError(f"mapping lacks categories: {', '.join(missing)}")
        unknown = [c for c in self.rules if c not in QUERY_CATEGORIES]
        if unknown:
            raise InvalidInputError(f"mapping has unknown categories: {', '.join(unknown)}")
        if TEXT_BUTTON not in self.rules:
            object.__setattr__(
                self, "rules", dict(self.rules) | {TEXT_BUTTON: ("Text Button",)}
            )

    def matches(self, category: str, label: str) -> bool:
        targets = self.rules.get(category, ())
        return label in targets or (ICON_WILDCARD in targets and label.startswith(ICON_PREFIX))

    def categories_for(self, label: str) -> frozenset[str]:
        return frozenset(c for c in QUERY_CATEGORIES if self.matches(c, label))

    def label_mask(self, label: str) -> int:
        mask = 0
        for i, cat in enumerate(QUERY_CATEGORIES):
            if self.matches(cat, label):
                mask |= 1 << i
        return mask

    @staticmethod
    def from_file(path) -> "CategoryMapping":
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidInputError(f"cannot read mapping file: {exc}") from exc
        if not isinstance(raw, dict) or not all(
            isinstance(v, list) and all(isinstance(s, str) for s in v) for v in raw.values()
        ):
            raise InvalidInputError("mapping file must be a JSON object of string lists")
        return CategoryMapping({k: tuple(v) for k, v in raw.items()})


@functools.lru_cache(maxsize=1)
def default_mapping() -> CategoryMapping:
    return CategoryMapping.from_file(Path(__file__).parent / "data" / "default_mapping.json")


def map_category(label: str, mapping: CategoryMapping | None = None) -> frozenset[str]:
    """All doodle categories a corpus label can satisfy (may be empty)."""
    return (mapping or default_mapping()).categories_for(label)


@dataclass(frozen=True)
class ScreenElement:
    label: str
    cx: float
    cy: float
    w: float
    h: float
    mask: int  # bitmask over QUERY_CATEGORIES

    @property
    def bbox(self) -> tuple[float, float, float, float]:
        return (self.cx, self.cy, self.w, self.h)


@dataclass(frozen=True)
class ScreenDocument:
    id: str
    app: str
    width: int
    height: int
    elements: tuple[ScreenElement, ...]


class CorpusIndex:
    """Immutable flat-array index over a screen corpus.

    Elements for screen ``i`` live in rows ``offsets[i]:offsets[i+1]`` of the
    parallel arrays.  ``postings``/``idf`` are derived from the masks.
    """

    def __init__(
        self,
        *,
        screen_ids: tuple[str, ...],
        apps: tuple[str, ...],
        widths: np.ndarray,
        heights: np.ndarray,
        labels: tuple[str, ...],
        offsets: np.ndarray,
        label_idx: np.ndarray,
        masks: np.ndarray,
        cx: np.ndarray,
        cy: np.ndarray,
        w: np.ndarray,
        h: np.ndarray,
        warnings: tuple[str, ...] = (),
        unmapped_count: int = 0,
    ):
        n = len(screen_ids)
        e = len(label_idx)
        if len(offsets) != n + 1 or offsets[0] != 0 or offsets[-1] != e:
            raise IndexFormatError("offsets array inconsistent with screen/element counts")
        if np.any(np.diff(offsets) < 0):
            raise IndexFormatError("offsets must be non-decreasing")
        if not (len(apps) == len(widths) == len(heights) == n):
            raise IndexFormatError("per-screen arrays disagree on screen count")
        if not (len(masks) == len(cx) == len(cy) == len(w) == len(h) == e):
            raise IndexFormatError("per-element arrays disagree on element count")
        if e and int(label_idx.max(initial=0)) >= len(labels):
            raise IndexFormatError("label index out of range")
        self.screen_ids = screen_ids
        self.apps = apps
        self.widths = np.asarray(widths, dtype=np.int64)
        self.heights = np.asarray(heights, dtype=np.int64)
        self.labels = labels
        self.offsets = np.ascontiguousarray(offsets, dtype=np.int64)
        self.label_idx = np.ascontiguousarray(label_idx, dtype=np.uint16)
        self.masks = np.ascontiguousarray(masks, dtype=np.uint32)
        self.cx = np.ascontiguousarray(cx, dtype=np.float64)
        self.cy = np.ascontiguousarray(cy, dtype=np.float64)
        self.w = np.ascontiguousarray(w, dtype=np.float64)
        self.h = np.ascontiguousarray(h, dtype=np.float64)
        self.warnings = warnings
        self.unmapped_count = int(unmapped_count)
        self._id_to_pos = {sid: i for i, sid in enumerate(screen_ids)}
        self._screen_masks = self._combine_masks()
        self.category_screen_counts = {
            cat: int(np.count_nonzero(self._screen_masks & np.uint32(1 << i)))
            for i, cat in enumerate(QUERY_CATEGORIES)
        }
        counts = np.array([self.category_screen_counts[c] for c in QUERY_CATEGORIES], dtype=np.float64)
        self.idf = np.log(n / (1.0 + counts)) + 1.0 if n else np.zeros(N_QUERY_CATEGORIES)
        self.postings = {
            cat: np.nonzero(self._screen_masks & np.uint32(1 << i))[0]
            for i, cat in enumerate(QUERY_CATEGORIES)
        }

    def _combine_masks(self) -> np.ndarray:
        n = len(self.screen_ids)
        combined = np.zeros(n, dtype=np.uint32)
        lengths = np.diff(self.offsets)
        nonempty = lengths > 0
        if self.masks.size and nonempty.any():
            starts = self.offsets[:-1][nonempty]
            combined[nonempty] = np.bitwise_or.reduceat(self.masks, starts)
        return combined

    @property
    def n_screens(self) -> int:
        return len(self.screen_ids)

    @property
    def n_elements(self) -> int:
        return len(self.label_idx)

    def idf_for(self, category: str) -> float:
        return float(self.idf[QUERY_CATEGORIES.index(category)])

    def position_of(self, screen_id: str) -> int | None:
        return self._id_to_pos.get(screen_id)

    def document(self, pos: int) -> ScreenDocument:
        lo, hi = int(self.offsets[pos]), int(self.offsets[pos + 1])
        elements = tuple(
            ScreenElement(
                label=self.labels[self.label_idx[j]],
                cx=float(self.cx[j]),
                cy=float(self.cy[j]),
                w=float(self.w[j]),
                h=float(self.h[j]),
                mask=int(self.masks[j]),
            )
            for j in range(lo, hi)
        )
        return ScreenDocument(
            id=self.screen_ids[pos],
            app=self.apps[pos],
            width=int(self.widths[pos]),
            height=int(self.heights[pos]),
            elements=elements,
        )

    def documents(self):
        for pos in range(self.n_screens):
            yield self.document(pos)


def _clamped_bbox(
    bounds, width: float, height: float
) -> tuple[float, float, float, float] | None:
    if not (isinstance(bounds, (list, tuple)) and len(bounds) == 4):
        return None
    try:
        x1, y1, x2, y2 = (float(v) for v in bounds)
    except (TypeError, ValueError):
        return None
    if not all(math.isfinite(v) for v in (x1, y1, x2, y2)) or x2 < x1 or y2 < y1:
        return None
    # Clip to the screen rectangle; fully-offscreen boxes collapse to an edge
    # sliver and survive via the minimum-dimension clamp.
    x1, x2 = (min(max(v, 0.0), width) for v in (x1, x2))
    y1, y2 = (min(max(v, 0.0), height) for v in (y1, y2))
    cx = (x1 + x2) / 2.0 / width
    cy = (y1 + y2) / 2.0 / height
    w = (x2 - x1) / width
    h = (y2 - y1) / height
    return (
        min(max(cx, 0.0), 1.0),
        min(max(cy, 0.0), 1.0),
        min(max(w, MIN_DIM), 1.0),
        min(max(h, MIN_DIM), 1.0),
    )


def _walk_visible(root: dict):
    """Depth-first traversal skipping invisible subtrees and non-dict nodes."""
    stack = [root]
    while stack:
        node = stack.pop()
        if not isinstance(node, dict) or not node.get("visible", True):
            continue
        yield node
        children = node.get("children")
        if isinstance(children, list):
            stack.extend(reversed(children))


def ingest(corpus_dir, mapping: CategoryMapping | None = None) -> CorpusIndex:
    """Build an index from a corpus directory (sorted filename order).

    Malformed screen files are skipped and recorded in ``warnings``; a corpus
    yielding zero valid screens is an error.
    """
    mapping = mapping or default_mapping()
    root_dir = Path(corpus_dir)
    if not root_dir.is_dir():
        raise CorpusError(f"not a corpus directory: {root_dir}")
    files = sorted(p for p in root_dir.iterdir() if p.name.endswith(".json") and p.is_file())

    screen_ids: list[str] = []
    apps: list[str] = []
    widths: list[int] = []
    heights: list[int] = []
    warnings: list[str] = []
    rows: list[tuple[str, int, float, float, float, float]] = []  # label, mask, bbox
    offsets = [0]
    unmapped = 0
    seen_ids: set[str] = set()

    for path in files:
        try:
            doc = json.loads(path.read_text())
        except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
            warnings.append(f"{path.name}: unreadable ({exc.__class__.__name__})")
            continue
        if not isinstance(doc, dict):
            warnings.append(f"{path.name}: not an object")
            continue
        sid = doc.get("id")
        root = doc.get("root")
        width = doc.get("width")
        height = doc.get("height")
        if not isinstance(sid, str) or not sid:
            warnings.append(f"{path.name}: missing id")
            continue
        if sid in seen_ids:
            warnings.append(f"{path.name}: duplicate id {sid!r}")
            continue
        if not isinstance(root, dict):
            warnings.append(f"{path.name}: missing root node")
            continue
        if (
            not isinstance(width, (int, float))
            or not isinstance(height, (int, float))
            or isinstance(width, bool)
            or isinstance(height, bool)
            or width <= 0
            or height <= 0
        ):
            warnings.append(f"{path.name}: bad screen dimensions")
            continue
        seen_ids.add(sid)
        screen_ids.append(sid)
        app = doc.get("app")
        apps.append(app if isinstance(app, str) else "")
        widths.append(int(width))
        heights.append(int(height))
        for node in _walk_visible(root):
            label = node.get("label")
            if not isinstance(label, str) or not label:
                continue
            mask = mapping.label_mask(label)
            if mask == 0:
                unmapped += 1
                continue
            bbox = _clamped_bbox(node.get("bounds"), float(width), float(height))
            if bbox is None:
                continue
            rows.append((label, mask, *bbox))
        offsets.append(len(rows))

    if not screen_ids:
        raise CorpusError(f"no valid screens in {root_dir}")

    labels = tuple(sorted({r[0] for r in rows}))
    if len(labels) > np.iinfo(np.uint16).max:
        raise CorpusError("too many distinct labels for the index format")
    label_pos = {lab: i for i, lab in enumerate(labels)}
    e = len(rows)
    label_idx = np.fromiter((label_pos[r[0]] for r in rows), dtype=np.uint16, count=e)
    masks = np.fromiter((r[1] for r in rows), dtype=np.uint32, count=e)
    cols = [np.fromiter((r[k] for r in rows), dtype=np.float64, count=e) for k in (2, 3, 4, 5)]
    return CorpusIndex(
        screen_ids=tuple(screen_ids),
        apps=tuple(apps),
        widths=np.array(widths, dtype=np.int64),
        heights=np.array(heights, dtype=np.int64),
        labels=labels,
        offsets=np.array(offsets, dtype=np.int64),
        label_idx=label_idx,
        masks=masks,
        cx=cols[0],
        cy=cols[1],
        w=cols[2],
        h=cols[3],
        warnings=tuple(warnings),
        unmapped_count=unmapped,
    )


def save_index(index: CorpusIndex, path) -> None:
    """Write the versioned binary index (canonical JSON header + raw arrays)."""
    header = {
        "version": FORMAT_VERSION,
        "counts": {
            "screens": index.n_screens,
            "elements": index.n_elements,
            "unmapped": index.unmapped_count,
        },
        "query_categories": list(QUERY_CATEGORIES),
        "labels": list(index.labels),
        "screen_ids": list(index.screen_ids),
        "apps": list(index.apps),
        "widths": [int(v) for v in index.widths],
        "heights": [int(v) for v in index.heights],
        "warnings": list(index.warnings),
        "category_screen_counts": index.category_screen_counts,
        "arrays": [[name, dtype] for name, dtype in _ARRAY_SPECS],
    }
    blob = json.dumps(header, sort_keys=True, separators=(",", ":")).encode()
    chunks = [MAGIC, struct.pack("<I", len(blob)), blob]
    for name, dtype in _ARRAY_SPECS:
        chunks.append(np.ascontiguousarray(getattr(index, name), dtype=dtype).tobytes())
    Path(path).write_bytes(b"".join(chunks))


def load_index(path) -> CorpusIndex:
    raw = Path(path).read_bytes()
    if len(raw) >= 5 and raw[:4] == MAGIC[:4] and raw[:5] != MAGIC:
        raise VersionMismatchError(raw[:5].decode("ascii", "replace"), MAGIC.decode())
    if raw[:5] != MAGIC:
        raise IndexFormatError("not an index file (bad magic)")
    if len(raw) < 9:
        raise IndexFormatError("truncated index file")
    (hlen,) = struct.unpack("<I", raw[5:9])
    if len(raw) < 9 + hlen:
        raise IndexFormatError("truncated index header")
    try:
        header = json.loads(raw[9 : 9 + hlen])
    except json.JSONDecodeError as exc:
        raise IndexFormatError(f"bad index header: {exc}") from exc
    version = header.get("version")
    if version != FORMAT_VERSION:
        raise VersionMismatchError(str(version), str(FORMAT_VERSION))
    if tuple(header.get("query_categories", ())) != QUERY_CATEGORIES:
        raise IndexFormatError("index built for a different category vocabulary")
    counts = header.get("counts", {})
    n = counts.get("screens")
    e = counts.get("elements")
    if not isinstance(n, int) or not isinstance(e, int):
        raise IndexFormatError("index header lacks counts")
    declared = [tuple(item) for item in header.get("arrays", [])]
    if declared != list(_ARRAY_SPECS):
        raise IndexFormatError("index declares an unexpected array layout")
    payload = raw[9 + hlen :]
    arrays = {}
    offset = 0
    for name, dtype in _ARRAY_SPECS:
        count = n + 1 if name == "offsets" else e
        size = count * np.dtype(dtype).itemsize
        if offset + size > len(payload):
            raise IndexFormatError("truncated index payload")
        arrays[name] = np.frombuffer(payload, dtype=dtype, count=count, offset=offset).copy()
        offset += size
    if offset != len(payload):
        raise IndexFormatError("index payload has trailing bytes")
    index = CorpusIndex(
        screen_ids=tuple(header["screen_ids"]),
        apps=tuple(header["apps"]),
        widths=np.array(header["widths"], dtype=np.int64),
        heights=np.array(header["heights"], dtype=np.int64),
        labels=tuple(header["labels"]),
        offsets=arrays["offsets"],
        label_idx=arrays["label_idx"],
        masks=arrays["masks"],
        cx=arrays["cx"],
        cy=arrays["cy"],
        w=arrays["w"],
        h=arrays["h"],
        warnings=tuple(header.get("warnings", ())),
        unmapped_count=counts.get("unmapped", 0),
    )
    stored = header.get("category_screen_counts")
    if stored is not None and stored != index.category_screen_counts:
        raise IndexFormatError("stored category counts disagree with element masks")
    return index
