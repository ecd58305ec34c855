"""Hot-kernel backend selection.

The compiled extension (`sketchsearch.kernels._core`, Cython) is preferred
when importable; the numpy fallback (`sketchsearch.kernels.pure`) is selected
otherwise.  Set SKETCHSEARCH_BACKEND=pure|compiled to force one.
"""

from __future__ import annotations

import os

from . import pure

try:
    from . import _core as _compiled
except ImportError:
    _compiled = None

_requested = os.environ.get("SKETCHSEARCH_BACKEND", "auto").strip().lower()

if _requested in ("", "auto"):
    backend = _compiled if _compiled is not None else pure
elif _requested in ("compiled", "ext"):
    if _compiled is None:
        raise ImportError(
            "SKETCHSEARCH_BACKEND=compiled but the extension is not built; "
            "run `pip install -e . --no-build-isolation` or `python setup.py build_ext --inplace`"
        )
    backend = _compiled
elif _requested in ("pure", "python"):
    backend = pure
else:
    raise ValueError(f"unknown SKETCHSEARCH_BACKEND value: {_requested!r}")

chamfer_batch = backend.chamfer_batch
assignment_max_weight = backend.assignment_max_weight
score_screens = backend.score_screens


def backend_name() -> str:
    return backend.name


def available_backends() -> dict:
    """Importable backend modules by name (for the benchmark harness)."""
    out = {"pure": pure}
    if _compiled is not None:
        out["compiled"] = _compiled
    return out
