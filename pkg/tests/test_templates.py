import numpy as np
import pytest

from sketchsearch.categories import CATEGORIES, QUERY_CATEGORIES, TEXT_BUTTON
from sketchsearch.errors import InvalidInputError
from sketchsearch.templates import N_VARIANTS, all_template_sketches, category_sketch


def test_category_vocabulary():
    assert len(CATEGORIES) == 23
    assert CATEGORIES == tuple(sorted(CATEGORIES))
    assert TEXT_BUTTON == "text_button"
    assert TEXT_BUTTON not in CATEGORIES
    assert QUERY_CATEGORIES == CATEGORIES + (TEXT_BUTTON,)


def test_every_category_has_templates():
    records = all_template_sketches()
    assert len(records) == 23 * N_VARIANTS
    by_cat = {}
    for cat, sk in records:
        by_cat.setdefault(cat, []).append(sk)
        assert sk.n_points >= 2
    assert sorted(by_cat) == list(CATEGORIES)


def test_templates_are_deterministic():
    a = category_sketch("star", 3)
    b = category_sketch("star", 3)
    assert a.n_strokes == b.n_strokes
    for sa, sb in zip(a.strokes, b.strokes):
        assert np.array_equal(sa, sb)


def test_variants_differ():
    a = category_sketch("avatar", 0).points()
    b = category_sketch("avatar", 1).points()
    assert a.shape != b.shape or not np.allclose(a, b)


def test_unknown_category_and_variant():
    with pytest.raises(InvalidInputError):
        category_sketch("doughnut")
    with pytest.raises(InvalidInputError):
        category_sketch("star", N_VARIANTS)
    with pytest.raises(InvalidInputError):
        all_template_sketches(0)


def test_templates_fit_reasonable_box():
    # raw templates live in a small working box; nothing degenerate
    for cat, sk in all_template_sketches(variants=2):
        x0, y0, x1, y1 = sk.bounds()
        assert x1 - x0 > 0 or y1 - y0 > 0, cat
        assert max(x1 - x0, y1 - y0) < 10.0, cat
