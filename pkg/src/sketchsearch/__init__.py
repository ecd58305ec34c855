"""Interactive sketch-based mobile-screen search.

Draw one UI element at a time; every stroke is classified live into one of
23 primitive categories, and each completed element refines a ranked search
over a corpus of screen hierarchies.
"""

from .categories import CATEGORIES, QUERY_CATEGORIES, TEXT_BUTTON
from .errors import (
    CorpusError,
    EmptyQueryError,
    IndexFormatError,
    InvalidInputError,
    InvalidStateError,
    ModelFormatError,
    SketchSearchError,
    VersionMismatchError,
)
from .strokes import (
    Sketch,
    delta_decode,
    delta_encode,
    load_sketches,
    normalize,
    resample,
    save_sketches,
)
from .classify import (
    ElementPrediction,
    TemplateLibrary,
    builtin_library,
    classify_template,
    load_library,
    save_library,
)
from .neural import StrokeModel, load_model, new_default_model, save_model
from .corpus import (
    CategoryMapping,
    CorpusIndex,
    ScreenDocument,
    ScreenElement,
    default_mapping,
    ingest,
    load_index,
    map_category,
    save_index,
)
from .canvas import (
    CanvasState,
    PlacedElement,
    QueryElement,
    SearchQuery,
    SessionSnapshot,
    build_query,
    load_sessions,
    replay_snapshot,
    save_sessions,
)
from .search import (
    PAGE_SIZE,
    RankedResult,
    Ranking,
    pair_score,
    rank_all,
    screen_score,
    search,
)

__version__ = "0.1.0"

__all__ = [
    "CATEGORIES",
    "QUERY_CATEGORIES",
    "TEXT_BUTTON",
    "SketchSearchError",
    "InvalidInputError",
    "InvalidStateError",
    "EmptyQueryError",
    "ModelFormatError",
    "CorpusError",
    "IndexFormatError",
    "VersionMismatchError",
    "Sketch",
    "normalize",
    "resample",
    "delta_encode",
    "delta_decode",
    "load_sketches",
    "save_sketches",
    "ElementPrediction",
    "TemplateLibrary",
    "builtin_library",
    "classify_template",
    "save_library",
    "load_library",
    "StrokeModel",
    "load_model",
    "save_model",
    "new_default_model",
    "CategoryMapping",
    "default_mapping",
    "map_category",
    "CorpusIndex",
    "ScreenDocument",
    "ScreenElement",
    "ingest",
    "save_index",
    "load_index",
    "CanvasState",
    "PlacedElement",
    "QueryElement",
    "SearchQuery",
    "SessionSnapshot",
    "build_query",
    "replay_snapshot",
    "save_sessions",
    "load_sessions",
    "PAGE_SIZE",
    "RankedResult",
    "Ranking",
    "pair_score",
    "screen_score",
    "rank_all",
    "search",
    "__version__",
]
