import numpy as np
import pytest

from sketchsearch.canvas import SessionSnapshot, build_query, replay_snapshot
from sketchsearch.categories import CATEGORIES
from sketchsearch.classify import prediction_from_confidences
from sketchsearch.errors import InvalidInputError
from sketchsearch.evaluation import (
    classification_accuracy,
    format_accuracy_report,
    format_topk_report,
    topk_eval,
)
from sketchsearch.search import rank_all
from sketchsearch.strokes import Sketch
from sketchsearch.synth import query_to_snapshot, sample_queries, synthetic_index
from sketchsearch.templates import category_sketch


@pytest.fixture(scope="module")
def eval_setup():
    index = synthetic_index(60, seed=17, min_elements=6, max_elements=14)
    queries = sample_queries(index, 50, seed=23, k_range=(4, 8))
    sessions = [query_to_snapshot(t, q) for t, q in queries]
    return index, sessions


def test_exact_copy_sessions_all_rank_first(small_index):
    # zero jitter: each session is an exact sub-screen copy of its target
    queries = sample_queries(
        small_index, 12, seed=41, k_range=(5, 8), center_jitter=0.0, size_jitter=0.0
    )
    sessions = [query_to_snapshot(t, q) for t, q in queries]
    report = topk_eval(sessions, small_index, ks=(1, 3, 10))
    assert report.accuracy[1] == 1.0
    assert report.accuracy[3] == 1.0
    assert report.accuracy[10] == 1.0
    assert report.warnings == ()


def test_missing_target_is_warned_miss(small_index):
    queries = sample_queries(small_index, 3, seed=1)
    sessions = [query_to_snapshot(t, q) for t, q in queries]
    sessions.append(SessionSnapshot(elements=sessions[0].elements, target="nosuchscreen"))
    sessions.append(SessionSnapshot(elements=sessions[0].elements, target=None))
    report = topk_eval(sessions, small_index, ks=(1,))
    assert report.ranks[-1] is None and report.ranks[-2] is None
    assert len(report.warnings) == 2
    assert "nosuchscreen" in report.warnings[0]
    # misses dilute the denominator, never the hit count
    assert report.accuracy[1] <= 3 / 5


def test_session_order_does_not_change_accuracy(eval_setup):
    index, sessions = eval_setup
    fwd = topk_eval(sessions, index)
    rev = topk_eval(list(reversed(sessions)), index)
    assert fwd.accuracy == rev.accuracy
    assert tuple(reversed(rev.ranks)) == fwd.ranks


def test_reported_ranks_match_direct_search(eval_setup):
    # oracle: recompute each session's rank straight from rank_all
    index, sessions = eval_setup
    report = topk_eval(sessions, index, ks=(1, 3, 10))
    assert report.n_sessions == len(sessions)
    for snap, got in zip(sessions, report.ranks):
        query = build_query(replay_snapshot(snap))
        want = rank_all(query, index).rank_of(snap.target)
        assert got == want
    for k in (1, 3, 10):
        want = sum(1 for r in report.ranks if r is not None and r < k) / len(sessions)
        assert report.accuracy[k] == pytest.approx(want)


def test_topk_accuracy_monotone_in_k(eval_setup):
    index, sessions = eval_setup
    report = topk_eval(sessions, index, ks=(1, 3, 10, 50))
    accs = [report.accuracy[k] for k in report.ks]
    assert accs == sorted(accs)
    assert report.accuracy[10] >= 0.9  # light jitter keeps targets near the top


def test_topk_eval_validates_inputs(small_index):
    with pytest.raises(InvalidInputError):
        topk_eval([], small_index)
    snap = SessionSnapshot(elements=(("slider", (100.0, 100.0, 80.0, 20.0)),), target="x")
    with pytest.raises(InvalidInputError):
        topk_eval([snap], small_index, ks=(0,))
    with pytest.raises(InvalidInputError):
        topk_eval([snap], small_index, ks=())


def test_topk_ks_deduplicated_and_sorted(small_index):
    queries = sample_queries(small_index, 2, seed=3)
    sessions = [query_to_snapshot(t, q) for t, q in queries]
    report = topk_eval(sessions, small_index, ks=(10, 1, 3, 3))
    assert report.ks == (1, 3, 10)


def test_format_topk_report_layout(small_index):
    queries = sample_queries(small_index, 4, seed=8)
    sessions = [query_to_snapshot(t, q) for t, q in queries]
    text = format_topk_report(topk_eval(sessions, small_index, ks=(1, 3)))
    lines = text.splitlines()
    assert lines[0] == "k\taccuracy\thits\tsessions"
    assert len(lines) == 3
    for row in lines[1:]:
        k, acc, hits, total = row.split("\t")
        assert int(total) == 4
        assert float(acc) == pytest.approx(int(hits) / 4, abs=1e-4)


def test_classification_accuracy_on_templates():
    records = [(cat, category_sketch(cat, 0)) for cat in CATEGORIES]
    report = classification_accuracy(records)
    assert report.n == len(CATEGORIES)
    assert report.top1 == 1.0
    assert report.top3 == 1.0
    assert set(report.per_category) == set(CATEGORIES)
    for n, h1, h3 in report.per_category.values():
        assert (n, h1, h3) == (1, 1, 1)


def test_classification_accuracy_skips_unlabeled():
    records = [
        ("left_arrow", category_sketch("left_arrow", 0)),
        (None, category_sketch("star", 0)),
    ]
    report = classification_accuracy(records)
    assert report.n == 1


def test_classification_accuracy_counts_top3_separately():
    # a recognizer that always puts the true label second: top1 0, top3 1
    def second_place(sketch):
        conf = np.zeros(len(CATEGORIES))
        conf[0] = 0.6  # avatar wins
        conf[5] = 0.4
        return prediction_from_confidences(conf)

    records = [(CATEGORIES[5], category_sketch(CATEGORIES[5], 0))] * 4
    report = classification_accuracy(records, recognizer=second_place)
    assert report.top1 == 0.0
    assert report.top3 == 1.0


def test_classification_accuracy_requires_labels():
    with pytest.raises(InvalidInputError):
        classification_accuracy([(None, category_sketch("star", 0))])
    with pytest.raises(InvalidInputError):
        classification_accuracy([])


def test_format_accuracy_report_layout():
    records = [(cat, category_sketch(cat, 0)) for cat in CATEGORIES[:3]]
    text = format_accuracy_report(classification_accuracy(records))
    lines = text.splitlines()
    assert lines[0] == "category\tn\ttop1\ttop3"
    assert lines[-1].startswith("overall\t3\t")
    assert len(lines) == 1 + 3 + 1
