"""Synthetic corpora, queries, and fixtures for tests and benchmarks.

Everything here is deterministic given a seed.  Three producers:

- :func:`synthetic_index` — an in-memory index at arbitrary scale (no files),
  for ranking oracles and latency benchmarks.
- :func:`write_corpus_dir` — a real on-disk corpus (hierarchy JSON plus
  ``<id>.thumb`` / ``<id>.full`` screenshots) for ingest/service tests.
- :func:`sample_queries` — queries derived from target screens by sampling
  elements with bounded jitter, for retrieval-accuracy measurements.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .canvas import (
    CANVAS_HEIGHT,
    CANVAS_WIDTH,
    QueryElement,
    SearchQuery,
    SessionSnapshot,
    build_query,
    replay_snapshot,
)
from .categories import TEXT_BUTTON
from .corpus import CorpusIndex, CategoryMapping, default_mapping
from .errors import InvalidInputError

# label pool: (corpus label, sampling weight).  Mix of component labels,
# supported icon classes, catch-all icons (only `cloud` matches), and
# unmappable chrome that ingest must drop.
LABEL_POOL: tuple[tuple[str, float], ...] = (
    ("Text", 3.0),
    ("Card", 1.2),
    ("List Item", 1.0),
    ("Modal", 0.25),
    ("Image", 1.5),
    ("Slider", 0.6),
    ("On/Off Switch", 0.6),
    ("Checkbox", 0.7),
    ("Drop Down Menu", 0.5),
    ("Rating Bar", 0.35),
    ("Text Button", 1.1),
    ("icon:avatar", 0.35),
    ("icon:back", 0.5),
    ("icon:camera", 0.3),
    ("icon:cancel", 0.4),
    ("icon:envelope", 0.3),
    ("icon:forward", 0.35),
    ("icon:house", 0.45),
    ("icon:left_arrow", 0.3),
    ("icon:menu", 0.55),
    ("icon:play", 0.35),
    ("icon:plus", 0.45),
    ("icon:search", 0.6),
    ("icon:setting", 0.45),
    ("icon:share", 0.4),
    ("icon:star", 0.4),
    ("icon:bell", 0.3),  # no dedicated doodle: matched by cloud only
    ("icon:globe", 0.2),  # likewise
)

UNMAPPED_LABELS: tuple[tuple[str, float], ...] = (
    ("Toolbar", 0.8),
    ("Web View", 0.4),
    ("Background Image", 0.5),
)

SCREEN_W = 1440
SCREEN_H = 2560


def _sample_elements(rng: np.random.Generator, total: int, labels: np.ndarray, weights: np.ndarray):
    """Vectorized element attribute sampling: (label, cx, cy, w, h) arrays."""
    lab = rng.choice(len(labels), size=total, p=weights)
    w = rng.uniform(0.04, 0.55, total)
    h = rng.uniform(0.02, 0.28, total)
    cx = rng.uniform(0.0, 1.0, total) * (1.0 - w) + w / 2.0
    cy = rng.uniform(0.0, 1.0, total) * (1.0 - h) + h / 2.0
    return lab, cx, cy, w, h


def synthetic_index(
    n_screens: int,
    seed: int = 0,
    min_elements: int = 5,
    max_elements: int = 25,
    mapping: CategoryMapping | None = None,
) -> CorpusIndex:
    """An in-memory synthetic index; ids are ``syn<zero-padded>`` so
    lexicographic and numeric order agree."""
    if n_screens < 1:
        raise InvalidInputError("need at least one screen")
    mapping = mapping or default_mapping()
    rng = np.random.default_rng(seed)
    labels = np.array([lab for lab, _ in LABEL_POOL])
    weights = np.array([wt for _, wt in LABEL_POOL])
    weights = weights / weights.sum()
    counts = rng.integers(min_elements, max_elements + 1, n_screens)
    offsets = np.zeros(n_screens + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    total = int(offsets[-1])
    lab, cx, cy, w, h = _sample_elements(rng, total, labels, weights)
    mask_table = np.array([mapping.label_mask(str(s)) for s in labels], dtype=np.uint32)
    width = max(4, len(str(n_screens - 1)))
    return CorpusIndex(
        screen_ids=tuple(f"syn{i:0{width}d}" for i in range(n_screens)),
        apps=tuple(f"app{i % 97:02d}" for i in range(n_screens)),
        widths=np.full(n_screens, SCREEN_W, dtype=np.int64),
        heights=np.full(n_screens, SCREEN_H, dtype=np.int64),
        labels=tuple(sorted(set(labels.tolist()))),
        offsets=offsets,
        label_idx=np.searchsorted(np.array(sorted(set(labels.tolist()))), labels[lab]).astype(
            np.uint16
        ),
        masks=mask_table[lab],
        cx=cx,
        cy=cy,
        w=np.maximum(w, 1e-3),
        h=np.maximum(h, 1e-3),
    )


def _preferred_category(label: str, mapping: CategoryMapping) -> str | None:
    """The doodle category someone sketching this element would pick: the
    dedicated primitive when one exists, the catch-all cloud otherwise."""
    cats = mapping.categories_for(label) - {TEXT_BUTTON}
    specific = sorted(cats - {"cloud"})
    if specific:
        return specific[0]
    return "cloud" if "cloud" in cats else None


def sample_queries(
    index: CorpusIndex,
    n_queries: int,
    seed: int = 0,
    k_range: tuple[int, int] = (4, 8),
    center_jitter: float = 0.05,
    size_jitter: float = 0.10,
    mapping: CategoryMapping | None = None,
) -> list[tuple[str, SearchQuery]]:
    """Derive (target_id, query) pairs by sampling and jittering elements of
    random target screens.

    Text Button elements are skipped (sketching one takes a square + squiggle
    pair, exercised by the canvas-fusion paths, not here); targets must offer
    at least ``k_range[0]`` other mappable elements.
    """
    mapping = mapping or default_mapping()
    rng = np.random.default_rng(seed)
    eligible_cat = {
        lab: _preferred_category(lab, mapping)
        for lab in index.labels
        if lab != "Text Button" and _preferred_category(lab, mapping) is not None
    }
    candidates = [
        s
        for s in range(index.n_screens)
        if sum(
            index.labels[index.label_idx[j]] in eligible_cat
            for j in range(index.offsets[s], index.offsets[s + 1])
        )
        >= k_range[0]
    ]
    if not candidates:
        raise InvalidInputError("no screen has enough mappable elements for a query")
    out: list[tuple[str, SearchQuery]] = []
    for _ in range(n_queries):
        s = candidates[rng.integers(len(candidates))]
        rows = [
            j
            for j in range(index.offsets[s], index.offsets[s + 1])
            if index.labels[index.label_idx[j]] in eligible_cat
        ]
        k = min(int(rng.integers(k_range[0], k_range[1] + 1)), len(rows))
        picked = rng.choice(len(rows), size=k, replace=False)
        elements = []
        for pi in sorted(picked.tolist()):
            j = rows[pi]
            cat = eligible_cat[index.labels[index.label_idx[j]]]
            cx = float(index.cx[j]) + float(rng.uniform(-center_jitter, center_jitter))
            cy = float(index.cy[j]) + float(rng.uniform(-center_jitter, center_jitter))
            w = float(index.w[j]) * (1.0 + float(rng.uniform(-size_jitter, size_jitter)))
            h = float(index.h[j]) * (1.0 + float(rng.uniform(-size_jitter, size_jitter)))
            elements.append(
                QueryElement(
                    category=cat,
                    bbox=(
                        min(max(cx, 0.0), 1.0),
                        min(max(cy, 0.0), 1.0),
                        min(max(w, 1e-3), 1.0),
                        min(max(h, 1e-3), 1.0),
                    ),
                )
            )
        out.append((index.screen_ids[s], SearchQuery(elements=tuple(elements))))
    return out


def query_to_snapshot(target: str, query: SearchQuery) -> SessionSnapshot:
    """Convert a query to a replayable canvas snapshot (canvas units).

    Squiggles that the canvas would fuse into a square are dropped so replay
    reproduces the remaining elements one-for-one.
    """
    elements = [
        (
            el.category,
            (
                el.bbox[0] * CANVAS_WIDTH,
                el.bbox[1] * CANVAS_HEIGHT,
                el.bbox[2] * CANVAS_WIDTH,
                el.bbox[3] * CANVAS_HEIGHT,
            ),
        )
        for el in query.elements
    ]
    snap = SessionSnapshot(elements=tuple(elements), target=target)
    fused = build_query(replay_snapshot(snap))
    if len(fused.elements) != len(elements):
        keep = []
        state = replay_snapshot(snap)
        for i, el in enumerate(state.committed):
            probe = SessionSnapshot(
                elements=tuple(
                    (e.category, e.bbox) for j, e in enumerate(state.committed) if j != i
                ),
                target=target,
            )
            if el.category == "squiggle" and len(
                build_query(replay_snapshot(probe)).elements
            ) == len(probe.elements):
                continue  # dropping this squiggle removes the fusion
            keep.append((el.category, el.bbox))
        snap = SessionSnapshot(elements=tuple(keep), target=target)
    return snap


# -- on-disk corpora ---------------------------------------------------------


def _color_for(label: str) -> tuple[int, int, int]:
    h = 2166136261
    for ch in label.encode():
        h = ((h ^ ch) * 16777619) & 0xFFFFFFFF
    return (64 + h % 160, 64 + (h >> 8) % 160, 64 + (h >> 16) % 160)


def _write_images(dir_path: Path, screen_id: str, elements) -> None:
    from PIL import Image, ImageDraw

    full = Image.new("RGB", (450, 800), (245, 245, 245))
    draw = ImageDraw.Draw(full)
    for label, cx, cy, w, h in elements:
        x1 = int((cx - w / 2) * 450)
        y1 = int((cy - h / 2) * 800)
        x2 = int((cx + w / 2) * 450)
        y2 = int((cy + h / 2) * 800)
        draw.rectangle([x1, y1, max(x1 + 1, x2), max(y1 + 1, y2)], fill=_color_for(label))
    full.save(dir_path / f"{screen_id}.full", format="PNG")
    thumb = full.resize((90, 160))
    thumb.save(dir_path / f"{screen_id}.thumb", format="PNG")


def write_corpus_dir(
    out_dir,
    n_screens: int,
    seed: int = 0,
    min_elements: int = 5,
    max_elements: int = 18,
    thumbnails: bool = True,
    extra_screens: list[dict] | None = None,
) -> list[str]:
    """Write a synthetic corpus directory; returns the screen ids written.

    ``extra_screens`` are pre-built hierarchy documents (planted fixtures);
    they are written alongside the generated ones.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    labels = np.array([lab for lab, _ in LABEL_POOL + UNMAPPED_LABELS])
    weights = np.array([wt for _, wt in LABEL_POOL + UNMAPPED_LABELS])
    weights = weights / weights.sum()
    ids = []
    width = max(4, len(str(max(n_screens - 1, 0))))
    for i in range(n_screens):
        sid = f"syn{i:0{width}d}"
        k = int(rng.integers(min_elements, max_elements + 1))
        lab, cx, cy, w, h = _sample_elements(rng, k, labels, weights)
        children = []
        els = []
        for j in range(k):
            label = str(labels[lab[j]])
            x1 = (cx[j] - w[j] / 2) * SCREEN_W
            y1 = (cy[j] - h[j] / 2) * SCREEN_H
            x2 = (cx[j] + w[j] / 2) * SCREEN_W
            y2 = (cy[j] + h[j] / 2) * SCREEN_H
            children.append(
                {"label": label, "bounds": [round(x1), round(y1), round(x2), round(y2)]}
            )
            els.append((label, cx[j], cy[j], w[j], h[j]))
        doc = {
            "id": sid,
            "app": f"app{i % 97:02d}",
            "width": SCREEN_W,
            "height": SCREEN_H,
            "root": {"bounds": [0, 0, SCREEN_W, SCREEN_H], "children": children},
        }
        (out / f"{sid}.json").write_text(json.dumps(doc, sort_keys=True))
        if thumbnails:
            _write_images(out, sid, els)
        ids.append(sid)
    for doc in extra_screens or []:
        sid = doc["id"]
        (out / f"{sid}.json").write_text(json.dumps(doc, sort_keys=True))
        if thumbnails:
            els = [
                (
                    c["label"],
                    (c["bounds"][0] + c["bounds"][2]) / 2 / doc["width"],
                    (c["bounds"][1] + c["bounds"][3]) / 2 / doc["height"],
                    (c["bounds"][2] - c["bounds"][0]) / doc["width"],
                    (c["bounds"][3] - c["bounds"][1]) / doc["height"],
                )
                for c in doc["root"].get("children", [])
                if "label" in c and "bounds" in c
            ]
            _write_images(out, sid, els)
        ids.append(sid)
    return ids


# -- the scripted demo session ----------------------------------------------
# Two sliders, a switch, a card, and two text lines: the canonical
# multi-element walkthrough.  Canvas-unit bboxes (450x800 logical space).

SCRIPTED_SESSION: tuple[tuple[str, tuple[float, float, float, float]], ...] = (
    ("slider", (225.0, 250.0, 300.0, 30.0)),
    ("slider", (225.0, 350.0, 300.0, 30.0)),
    ("switch", (350.0, 120.0, 90.0, 50.0)),
    # aspect kept under ~1.4 so the live recognizer self-identifies the card
    ("square", (225.0, 550.0, 300.0, 220.0)),
    ("squiggle", (110.0, 690.0, 160.0, 24.0)),
    ("squiggle", (230.0, 740.0, 200.0, 24.0)),
)

PLANTED_ID = "planted0000"

_LABEL_FOR_SCRIPT = {
    "slider": "Slider",
    "switch": "On/Off Switch",
    "square": "Card",
    "squiggle": "Text",
}


def planted_screen_doc(screen_id: str = PLANTED_ID) -> dict:
    """A hierarchy document whose elements sit exactly where the scripted
    session sketches them (normalized canvas -> pixel space)."""
    children = []
    for cat, (cx, cy, w, h) in SCRIPTED_SESSION:
        ncx, ncy = cx / CANVAS_WIDTH, cy / CANVAS_HEIGHT
        nw, nh = w / CANVAS_WIDTH, h / CANVAS_HEIGHT
        children.append(
            {
                "label": _LABEL_FOR_SCRIPT[cat],
                "bounds": [
                    round((ncx - nw / 2) * SCREEN_W),
                    round((ncy - nh / 2) * SCREEN_H),
                    round((ncx + nw / 2) * SCREEN_W),
                    round((ncy + nh / 2) * SCREEN_H),
                ],
            }
        )
    return {
        "id": screen_id,
        "app": "demo",
        "width": SCREEN_W,
        "height": SCREEN_H,
        "root": {"bounds": [0, 0, SCREEN_W, SCREEN_H], "children": children},
    }


def scripted_strokes(category: str, bbox: tuple[float, float, float, float]) -> list[list[list[float]]]:
    """Stroke point lists that draw ``category`` inside a canvas-unit bbox.

    Uses the shipped template geometry scaled into the box, so the live
    recognizer identifies each element by itself (no explicit `chosen`)."""
    from .strokes import normalize
    from .templates import category_sketch

    cx, cy, w, h = bbox
    sk = normalize(category_sketch(category, 0))
    xs = np.concatenate([s[:, 0] for s in sk.strokes])
    ys = np.concatenate([s[:, 1] for s in sk.strokes])
    sw = max(float(xs.max() - xs.min()), 1e-9)
    sh = max(float(ys.max() - ys.min()), 1e-9)
    out = []
    for s in sk.strokes:
        pts = np.empty_like(s)
        pts[:, 0] = (s[:, 0] - xs.min()) / sw * w + (cx - w / 2)
        pts[:, 1] = (s[:, 1] - ys.min()) / sh * h + (cy - h / 2)
        out.append(pts.tolist())
    return out


def write_demo_corpus(out_dir, n_screens: int = 99, seed: int = 424242) -> list[str]:
    """Corpus-with-a-planted-screen fixture used by the end-to-end tests."""
    return write_corpus_dir(
        out_dir, n_screens=n_screens, seed=seed, extra_screens=[planted_screen_doc()]
    )
