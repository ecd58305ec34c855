"""Evaluation harnesses: retrieval top-k accuracy and classifier accuracy.

`topk_eval` replays session snapshots (committed elements, not raw strokes)
so retrieval quality is measured independently of recognizer quality.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .canvas import SessionSnapshot, build_query, replay_snapshot
from .classify import Recognizer, classify_template
from .corpus import CorpusIndex
from .errors import InvalidInputError
from .search import rank_all
from .strokes import Sketch


@dataclass(frozen=True)
class TopkReport:
    ks: tuple[int, ...]
    accuracy: dict[int, float]
    ranks: tuple[int | None, ...]  # 0-based rank per session, None = miss
    warnings: tuple[str, ...]

    @property
    def n_sessions(self) -> int:
        return len(self.ranks)


def topk_eval(
    sessions: Sequence[SessionSnapshot],
    index: CorpusIndex,
    ks: Sequence[int] = (1, 3, 10),
    w_pos: float = 0.7,
    w_shape: float = 0.3,
) -> TopkReport:
    """Fraction of sessions whose target screen ranks within each top-k.

    Sessions without a target, or whose target is absent from the corpus,
    count as misses (with a warning for the absent ones).
    """
    ks = tuple(sorted(set(int(k) for k in ks)))
    if not ks or ks[0] < 1:
        raise InvalidInputError("k values must be positive integers")
    if not sessions:
        raise InvalidInputError("no sessions to evaluate")
    ranks: list[int | None] = []
    warnings: list[str] = []
    for i, snap in enumerate(sessions):
        if snap.target is None:
            warnings.append(f"session {i}: no target id; counted as a miss")
            ranks.append(None)
            continue
        if index.position_of(snap.target) is None:
            warnings.append(f"session {i}: target {snap.target!r} not in corpus; counted as a miss")
            ranks.append(None)
            continue
        query = build_query(replay_snapshot(snap))
        ranking = rank_all(query, index, w_pos=w_pos, w_shape=w_shape)
        ranks.append(ranking.rank_of(snap.target))
    accuracy = {
        k: sum(1 for r in ranks if r is not None and r < k) / len(ranks) for k in ks
    }
    return TopkReport(ks=ks, accuracy=accuracy, ranks=tuple(ranks), warnings=tuple(warnings))


def format_topk_report(report: TopkReport) -> str:
    """Tab-separated: header then one row per k."""
    lines = ["k\taccuracy\thits\tsessions"]
    for k in report.ks:
        hits = sum(1 for r in report.ranks if r is not None and r < k)
        lines.append(f"{k}\t{report.accuracy[k]:.4f}\t{hits}\t{report.n_sessions}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class AccuracyReport:
    n: int
    top1: float
    top3: float
    per_category: dict[str, tuple[int, int, int]]  # n, top1 hits, top3 hits


def classification_accuracy(
    records: Sequence[tuple[str | None, Sketch]],
    recognizer: Recognizer | None = None,
) -> AccuracyReport:
    """Top-1/top-3 accuracy of a recognizer over labeled doodles.

    Records without a label are skipped.
    """
    recognizer = recognizer or classify_template
    per: dict[str, list[int]] = {}
    n = t1 = t3 = 0
    for label, sketch in records:
        if label is None:
            continue
        pred = recognizer(sketch)
        hit1 = pred.top1() == label
        hit3 = label in pred.top_categories()
        n += 1
        t1 += hit1
        t3 += hit3
        row = per.setdefault(label, [0, 0, 0])
        row[0] += 1
        row[1] += hit1
        row[2] += hit3
    if n == 0:
        raise InvalidInputError("no labeled records to evaluate")
    return AccuracyReport(
        n=n,
        top1=t1 / n,
        top3=t3 / n,
        per_category={k: tuple(v) for k, v in sorted(per.items())},
    )


def format_accuracy_report(report: AccuracyReport) -> str:
    lines = ["category\tn\ttop1\ttop3"]
    for cat, (n, h1, h3) in report.per_category.items():
        lines.append(f"{cat}\t{n}\t{h1 / n:.4f}\t{h3 / n:.4f}")
    lines.append(f"overall\t{report.n}\t{report.top1:.4f}\t{report.top3:.4f}")
    return "\n".join(lines) + "\n"
