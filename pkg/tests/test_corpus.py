import json
import math

import numpy as np
import pytest

from sketchsearch.categories import CATEGORIES, QUERY_CATEGORIES, TEXT_BUTTON
from sketchsearch.corpus import (
    MAGIC,
    CategoryMapping,
    default_mapping,
    ingest,
    load_index,
    map_category,
    save_index,
)
from sketchsearch.errors import (
    CorpusError,
    IndexFormatError,
    InvalidInputError,
    VersionMismatchError,
)


def node(label=None, bounds=None, children=(), **extra):
    out = dict(extra)
    if label is not None:
        out["label"] = label
    if bounds is not None:
        out["bounds"] = list(bounds)
    if children:
        out["children"] = list(children)
    return out


def write_screen(directory, sid, elements, width=1000, height=2000, app="app"):
    doc = {
        "id": sid,
        "app": app,
        "width": width,
        "height": height,
        "root": node(bounds=(0, 0, width, height), children=[node(l, b) for l, b in elements]),
    }
    (directory / f"{sid}.json").write_text(json.dumps(doc, sort_keys=True))


@pytest.fixture
def tiny_dir(tmp_path):
    write_screen(tmp_path, "s1", [("Slider", (0, 0, 500, 100)), ("Text", (0, 200, 1000, 300))])
    write_screen(tmp_path, "s2", [("Slider", (0, 0, 500, 100)), ("Text", (0, 200, 1000, 300))])
    write_screen(tmp_path, "s3", [("Slider", (100, 100, 600, 200))])
    return tmp_path


# -- mapping ------------------------------------------------------------------


def test_default_mapping_basics():
    m = default_mapping()
    assert m.categories_for("Slider") == {"slider"}
    assert m.categories_for("Text") == {"squiggle"}
    assert m.categories_for("Image") == {"jail_window"}
    assert m.categories_for("Card") == {"square"}
    assert m.categories_for("Text Button") == {TEXT_BUTTON}
    assert m.categories_for("Toolbar") == frozenset()


def test_icon_labels_match_specific_and_wildcard():
    assert set(map_category("icon:share")) == {"share", "cloud"}
    assert set(map_category("icon:star")) == {"star", "cloud"}
    # unknown icon: only the wildcard placeholder matches
    assert set(map_category("icon:bluetooth")) == {"cloud"}
    assert map_category("Nonsense Widget") == frozenset()


def test_mapping_requires_all_categories(tmp_path):
    path = tmp_path / "mapping.json"
    path.write_text(json.dumps({"star": ["Star Label"]}))
    with pytest.raises(InvalidInputError):
        CategoryMapping.from_file(path)


def test_mapping_rejects_unknown_category(tmp_path):
    doc = {cat: ["X"] for cat in CATEGORIES}
    doc["not_a_category"] = ["Y"]
    path = tmp_path / "mapping.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(InvalidInputError):
        CategoryMapping.from_file(path)


def test_label_mask_bits():
    m = default_mapping()
    mask = m.label_mask("icon:star")
    star_bit = 1 << QUERY_CATEGORIES.index("star")
    cloud_bit = 1 << QUERY_CATEGORIES.index("cloud")
    assert mask == star_bit | cloud_bit


# -- ingest -------------------------------------------------------------------


def test_ingest_counts_and_idf(tiny_dir):
    index = ingest(tiny_dir)
    assert index.n_screens == 3
    assert index.n_elements == 5
    assert index.warnings == ()
    # slider on 3/3 screens, squiggle on 2/3, star on none
    assert index.idf_for("slider") == pytest.approx(math.log(3 / 4) + 1)
    assert index.idf_for("squiggle") == pytest.approx(math.log(3 / 3) + 1)
    assert index.idf_for("star") == pytest.approx(math.log(3 / 1) + 1)
    assert index.category_screen_counts["slider"] == 3
    assert index.category_screen_counts["squiggle"] == 2


def test_ingest_normalizes_bounds(tiny_dir):
    index = ingest(tiny_dir)
    doc = index.document(index.position_of("s1"))
    slider = next(e for e in doc.elements if e.label == "Slider")
    # (0,0)-(500,100) on a 1000x2000 screen
    assert slider.cx == pytest.approx(0.25)
    assert slider.cy == pytest.approx(0.025)
    assert slider.w == pytest.approx(0.5)
    assert slider.h == pytest.approx(0.05)


def test_ingest_clips_and_clamps(tmp_path):
    write_screen(
        tmp_path,
        "clip",
        [
            ("Slider", (-100, -100, 500, 100)),  # sticks out top-left
            ("Text", (2000, 3000, 2500, 3100)),  # fully offscreen
        ],
    )
    index = ingest(tmp_path)
    doc = index.document(0)
    slider = next(e for e in doc.elements if e.label == "Slider")
    assert slider.bbox == pytest.approx((0.25, 0.025, 0.5, 0.05))
    sliver = next(e for e in doc.elements if e.label == "Text")
    assert sliver.w == pytest.approx(1e-3)
    assert sliver.h == pytest.approx(1e-3)
    assert sliver.cx == pytest.approx(1.0)
    assert sliver.cy == pytest.approx(1.0)


def test_ingest_skips_invisible_subtrees(tmp_path):
    doc = {
        "id": "viz",
        "app": "a",
        "width": 100,
        "height": 100,
        "root": node(
            bounds=(0, 0, 100, 100),
            children=[
                node("Slider", (0, 0, 50, 10)),
                node(
                    "Card",
                    (0, 0, 100, 100),
                    visible=False,
                    children=[node("Text", (0, 0, 10, 10))],
                ),
            ],
        ),
    }
    (tmp_path / "viz.json").write_text(json.dumps(doc))
    index = ingest(tmp_path)
    labels = [e.label for e in index.document(0).elements]
    assert labels == ["Slider"]  # the invisible card and its child are gone


def test_ingest_warns_and_skips_malformed(tmp_path):
    write_screen(tmp_path, "good", [("Slider", (0, 0, 10, 10))])
    (tmp_path / "a_badjson.json").write_text("{nope")
    (tmp_path / "b_notobj.json").write_text("[1, 2]")
    (tmp_path / "c_noid.json").write_text(json.dumps({"width": 1, "height": 1, "root": {}}))
    (tmp_path / "d_noroot.json").write_text(json.dumps({"id": "x", "width": 1, "height": 1}))
    (tmp_path / "e_baddims.json").write_text(
        json.dumps({"id": "y", "width": 0, "height": 100, "root": {}})
    )
    dup = {"id": "good", "width": 10, "height": 10, "root": node(bounds=(0, 0, 1, 1))}
    (tmp_path / "f_dup.json").write_text(json.dumps(dup))
    (tmp_path / "not_a_screen.txt").write_text("ignored entirely")
    index = ingest(tmp_path)
    assert index.n_screens == 1
    assert index.screen_ids == ("good",)
    assert len(index.warnings) == 6
    assert any("duplicate id" in w for w in index.warnings)


def test_ingest_empty_dir_raises(tmp_path):
    with pytest.raises(CorpusError):
        ingest(tmp_path)
    (tmp_path / "junk.json").write_text("{broken")
    with pytest.raises(CorpusError):
        ingest(tmp_path)


def test_ingest_sorted_order_and_determinism(tiny_dir, tmp_path):
    a = ingest(tiny_dir)
    b = ingest(tiny_dir)
    assert a.screen_ids == b.screen_ids == ("s1", "s2", "s3")
    pa, pb = tmp_path / "a.psdx", tmp_path / "b.psdx"
    save_index(a, pa)
    save_index(b, pb)
    assert pa.read_bytes() == pb.read_bytes()


def test_postings_match_masks(demo_index):
    for i, cat in enumerate(QUERY_CATEGORIES):
        bit = np.uint32(1 << i)
        expected = [
            pos
            for pos in range(demo_index.n_screens)
            if any(e.mask & bit for e in demo_index.document(pos).elements)
        ]
        assert demo_index.postings[cat].tolist() == expected


def test_unmapped_labels_counted(tmp_path):
    write_screen(tmp_path, "u", [("Slider", (0, 0, 10, 10)), ("Mystery Widget", (0, 0, 5, 5))])
    index = ingest(tmp_path)
    assert index.unmapped_count == 1
    assert index.n_elements == 1  # unmapped labels do not become elements


# -- persistence --------------------------------------------------------------


def test_index_round_trip(demo_index, tmp_path):
    path = tmp_path / "demo.psdx"
    save_index(demo_index, path)
    back = load_index(path)
    assert back.screen_ids == demo_index.screen_ids
    assert back.apps == demo_index.apps
    assert back.labels == demo_index.labels
    for name in ("offsets", "label_idx", "masks", "cx", "cy", "w", "h", "widths", "heights"):
        assert np.array_equal(getattr(back, name), getattr(demo_index, name)), name
    assert np.allclose(back.idf, demo_index.idf)
    assert back.unmapped_count == demo_index.unmapped_count
    # rebuild is byte-identical
    path2 = tmp_path / "demo2.psdx"
    save_index(back, path2)
    assert path.read_bytes() == path2.read_bytes()


def test_load_rejects_other_version(tmp_path, demo_index):
    path = tmp_path / "demo.psdx"
    save_index(demo_index, path)
    blob = path.read_bytes()
    old = tmp_path / "old.psdx"
    old.write_bytes(b"PSDX0" + blob[len(MAGIC) :])
    with pytest.raises(VersionMismatchError) as err:
        load_index(old)
    assert "PSDX0" in str(err.value) and "PSDX1" in str(err.value)


def test_load_rejects_foreign_file(tmp_path):
    path = tmp_path / "foreign.bin"
    path.write_bytes(b"GIF89a" + b"\x00" * 64)
    with pytest.raises(IndexFormatError):
        load_index(path)


def test_load_rejects_truncation_and_trailing(tmp_path, demo_index):
    path = tmp_path / "demo.psdx"
    save_index(demo_index, path)
    blob = path.read_bytes()
    clipped = tmp_path / "clipped.psdx"
    clipped.write_bytes(blob[:-9])
    with pytest.raises(IndexFormatError):
        load_index(clipped)
    padded = tmp_path / "padded.psdx"
    padded.write_bytes(blob + b"\x00" * 4)
    with pytest.raises(IndexFormatError):
        load_index(padded)


def test_document_round_trip(demo_index):
    doc = demo_index.document(0)
    assert doc.id == demo_index.screen_ids[0]
    assert len(doc.elements) == int(demo_index.offsets[1] - demo_index.offsets[0])
    for el in doc.elements:
        assert 0.0 <= el.cx <= 1.0 and 0.0 <= el.cy <= 1.0
        assert 1e-3 <= el.w <= 1.0 and 1e-3 <= el.h <= 1.0
        assert el.mask > 0
