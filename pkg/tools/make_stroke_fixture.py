"""Regenerate the frozen 30-sketch stroke-report fixture.

Writes tests/fixtures/stroke_eval_30.ndjson (the labeled sketches) and
tests/fixtures/stroke_eval_30.expected.tsv.  The expected table is computed
here with plain dict grouping — deliberately not through
``stroke_count_report`` — so the test has an independent oracle.

The fixture is frozen: rerun this only when the recognizer or the template
geometry intentionally changes, and review the resulting diff.
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

from sketchsearch.classify import classify_template
from sketchsearch.strokes import Sketch, load_sketches, normalize, save_sketches
from sketchsearch.templates import category_sketch

SEED = 20240917

# (category, variant) pairs chosen for stroke-count spread: buckets
# 1,2,3,4,5,7,8 and 9+ all end up populated.
PICKS = [
    ("star", 0), ("star", 1), ("star", 2),
    ("back", 0), ("back", 3),
    ("square", 0), ("square", 4),
    ("plus", 0), ("plus", 1), ("plus", 2),
    ("checkbox", 0), ("checkbox", 1), ("checkbox", 2),
    ("envelope", 0), ("envelope", 5),
    ("camera", 0), ("camera", 1), ("camera", 2),
    ("menu", 0), ("menu", 1), ("menu", 2),
    ("jail_window", 2), ("jail_window", 0), ("jail_window", 3), ("jail_window", 1),
    ("share", 0), ("share", 1),
    ("setting", 2), ("setting", 1), ("setting", 0),
]

BUCKETS = [str(i) for i in range(1, 9)] + ["9+"]


def jittered(category: str, variant: int, rng: np.random.Generator) -> Sketch:
    base = normalize(category_sketch(category, variant))
    offset = rng.uniform(-40.0, 40.0, 2)
    factor = rng.uniform(30.0, 250.0)
    strokes = []
    for s in base.strokes:
        noisy = s + rng.uniform(-0.02, 0.02, s.shape)
        strokes.append(np.round(noisy * factor + offset, 4))
    return Sketch(tuple(strokes))


def expected_table(records) -> str:
    from sketchsearch.categories import CATEGORIES

    groups: dict[tuple[str, str], list[float]] = {}
    for label, sketch in records:
        bucket = str(sketch.n_strokes) if sketch.n_strokes <= 8 else "9+"
        conf = classify_template(sketch).confidence_for(label)
        groups.setdefault((label, bucket), []).append(conf)
    lines = ["category\t" + "\t".join(BUCKETS)]
    for cat in CATEGORIES:
        cells = []
        for bucket in BUCKETS:
            vals = groups.get((cat, bucket))
            if vals is None:
                cells.append("-")
            else:
                cells.append(str(round(100.0 * sum(vals) / len(vals))))
        lines.append(cat + "\t" + "\t".join(cells))
    return "\n".join(lines) + "\n"


def main() -> int:
    out_dir = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(SEED)
    records = [(cat, jittered(cat, variant, rng)) for cat, variant in PICKS]
    assert len(records) == 30
    ndjson = out_dir / "stroke_eval_30.ndjson"
    save_sketches(records, ndjson)
    # round-trip through the file so the frozen table reflects file precision
    loaded = load_sketches(ndjson)
    (out_dir / "stroke_eval_30.expected.tsv").write_text(expected_table(loaded))
    print(f"wrote {ndjson} and its expected table")
    return 0


if __name__ == "__main__":
    sys.exit(main())
