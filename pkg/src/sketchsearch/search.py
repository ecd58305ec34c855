"""Query-to-corpus ranking.

Every screen is scored against the query with a maximum-weight one-to-one
assignment over per-pair scores (category compatibility gate, then
idf-weighted position + shape similarity), normalized to [0,1] by the
query's total idf.  Ranking is deterministic: score descending, then screen
id ascending.  Results are served 80 per page.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .canvas import QueryElement, SearchQuery
from .categories import QUERY_CATEGORIES
from .corpus import CorpusIndex, ScreenDocument, ScreenElement

PAGE_SIZE = 80

POSITION_WEIGHT = 0.7
SHAPE_WEIGHT = 0.3

_ROOT2 = math.sqrt(2.0)


def _idf_array(idf) -> np.ndarray:
    """Accept a CorpusIndex or a bare per-query-category idf vector."""
    if isinstance(idf, CorpusIndex):
        return idf.idf
    arr = np.asarray(idf, dtype=np.float64)
    if arr.shape != (len(QUERY_CATEGORIES),):
        raise ValueError(f"idf vector must have {len(QUERY_CATEGORIES)} entries")
    return arr


def _query_arrays(query: SearchQuery):
    nq = len(query.elements)
    q_cat = np.empty(nq, dtype=np.int64)
    q_cx = np.empty(nq)
    q_cy = np.empty(nq)
    q_w = np.empty(nq)
    q_h = np.empty(nq)
    for i, el in enumerate(query.elements):
        q_cat[i] = QUERY_CATEGORIES.index(el.effective_category)
        q_cx[i], q_cy[i], q_w[i], q_h[i] = el.bbox
    return q_cat, q_cx, q_cy, q_w, q_h


def pair_score(
    q: QueryElement,
    e: ScreenElement,
    idf,
    w_pos: float = POSITION_WEIGHT,
    w_shape: float = SHAPE_WEIGHT,
) -> float:
    """Scalar reference for one query-element/screen-element pair."""
    idf_vec = _idf_array(idf)
    cat = q.effective_category
    bit = 1 << QUERY_CATEGORIES.index(cat)
    if not e.mask & bit:
        return 0.0
    qcx, qcy, qw, qh = q.bbox
    dist = math.hypot(e.cx - qcx, e.cy - qcy)
    pos = max(0.0, 1.0 - dist / _ROOT2)
    shape = (min(e.w, qw) / max(e.w, qw)) * (min(e.h, qh) / max(e.h, qh))
    return idf_vec[QUERY_CATEGORIES.index(cat)] * (w_pos * pos + w_shape * shape)


def _screen_arrays(screen: ScreenDocument):
    e = len(screen.elements)
    masks = np.empty(e, dtype=np.uint32)
    cx = np.empty(e)
    cy = np.empty(e)
    w = np.empty(e)
    h = np.empty(e)
    for j, el in enumerate(screen.elements):
        masks[j] = el.mask
        cx[j], cy[j], w[j], h[j] = el.cx, el.cy, el.w, el.h
    return masks, cx, cy, w, h


def screen_score(
    query: SearchQuery,
    screen: ScreenDocument,
    idf,
    w_pos: float = POSITION_WEIGHT,
    w_shape: float = SHAPE_WEIGHT,
) -> float:
    """Normalized assignment score of one screen in [0, 1].

    Routed through the same batch kernel as `search` (as a batch of one), so
    single-screen and full-corpus scoring agree bit for bit.
    """
    idf_vec = _idf_array(idf)
    q_cat, q_cx, q_cy, q_w, q_h = _query_arrays(query)
    masks, cx, cy, w, h = _screen_arrays(screen)
    offsets = np.array([0, len(masks)], dtype=np.int64)
    raw = kernels.score_screens(
        masks, cx, cy, w, h, offsets,
        q_cat, q_cx, q_cy, q_w, q_h, idf_vec[q_cat], w_pos, w_shape,
    )
    return float(raw[0] / idf_vec[q_cat].sum())


@dataclass(frozen=True)
class RankedResult:
    """One 80-entry page of a ranking, plus the total number of screens."""

    page: int
    total: int
    entries: tuple[tuple[str, float], ...]


class Ranking:
    """A full deterministic ordering of the corpus for one query.

    Kept by the service so page navigation never re-scores.
    """

    def __init__(self, ids: tuple[str, ...], scores: np.ndarray):
        self.ids = ids
        self.scores = scores

    @property
    def total(self) -> int:
        return len(self.ids)

    def page(self, number: int) -> RankedResult:
        if number < 0:
            raise ValueError("page number must be >= 0")
        lo = number * PAGE_SIZE
        hi = lo + PAGE_SIZE
        entries = tuple(
            (self.ids[i], float(self.scores[i])) for i in range(lo, min(hi, self.total))
        )
        return RankedResult(page=number, total=self.total, entries=entries)

    def rank_of(self, screen_id: str) -> int | None:
        """0-based rank of a screen id, or None if absent."""
        try:
            return self.ids.index(screen_id)
        except ValueError:
            return None


def rank_all(
    query: SearchQuery,
    index: CorpusIndex,
    w_pos: float = POSITION_WEIGHT,
    w_shape: float = SHAPE_WEIGHT,
    backend=None,
) -> Ranking:
    """Score every screen and produce the full ordered ranking.

    ``backend`` overrides the kernel module (benchmark harness); the
    process-wide selection is used otherwise.
    """
    q_cat, q_cx, q_cy, q_w, q_h = _query_arrays(query)
    idf_vec = index.idf
    score_screens = kernels.score_screens if backend is None else backend.score_screens
    raw = score_screens(
        index.masks, index.cx, index.cy, index.w, index.h, index.offsets,
        q_cat, q_cx, q_cy, q_w, q_h, idf_vec[q_cat], w_pos, w_shape,
    )
    scores = raw / idf_vec[q_cat].sum()
    ids_arr = np.array(index.screen_ids)
    order = np.lexsort((ids_arr, -scores))
    return Ranking(
        ids=tuple(ids_arr[order].tolist()),
        scores=scores[order],
    )


def search(
    query: SearchQuery,
    index: CorpusIndex,
    page: int = 0,
    w_pos: float = POSITION_WEIGHT,
    w_shape: float = SHAPE_WEIGHT,
) -> RankedResult:
    """Rank the whole corpus and return the requested 80-screen page."""
    return rank_all(query, index, w_pos, w_shape).page(page)
