"""Operator tooling: index building, classification, evaluation harnesses,
the HTTP server, synthetic corpora, and the backend benchmark.

Exit codes: 0 success, 1 usage error, 2 data error.  All commands are
deterministic given identical inputs and flags.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import SketchSearchError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    """argparse, but usage failures exit 1 (2 is reserved for data errors)."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _env(name: str, default=None):
    value = os.environ.get(f"SKETCHSEARCH_{name}")
    return value if value not in (None, "") else default


def _write_or_print(text: str, out_path) -> None:
    if out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text)


# -- commands -----------------------------------------------------------------


def cmd_index_build(args) -> int:
    from .corpus import CategoryMapping, ingest, save_index

    mapping = CategoryMapping.from_file(args.mapping) if args.mapping else None
    index = ingest(args.corpus_dir, mapping=mapping)
    for warning in index.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    save_index(index, args.output)
    print(f"screens\t{index.n_screens}")
    print(f"elements\t{index.n_elements}")
    print(f"unmapped\t{index.unmapped_count}")
    return EXIT_OK


def cmd_classify(args) -> int:
    from .classify import classify_template
    from .strokes import load_sketches

    records = load_sketches(args.sketch_file)
    for i, (label, sketch) in enumerate(records):
        pred = classify_template(sketch)
        cols = [str(i), label or "-"]
        for cat, conf in pred.entries:
            cols.append(f"{cat}:{conf:.4f}")
        print("\t".join(cols))
    return EXIT_OK


def cmd_eval_topk(args) -> int:
    from .canvas import load_sessions
    from .corpus import load_index
    from .evaluation import format_topk_report, topk_eval

    sessions = load_sessions(args.sessions_file)
    index = load_index(args.index_file)
    ks = [int(tok) for tok in args.k.split(",") if tok.strip()]
    report = topk_eval(sessions, index, ks=ks, w_pos=args.w_pos, w_shape=args.w_shape)
    for warning in report.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    text = format_topk_report(report)
    _write_or_print(text, args.out)
    if args.out:
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_eval_strokes(args) -> int:
    from .classify import format_stroke_report, stroke_count_report
    from .strokes import load_sketches

    records = load_sketches(args.labeled_sketches)
    labeled = [(lab, sk) for lab, sk in records if lab is not None]
    if not labeled:
        print(f"{args.labeled_sketches}: no labeled sketch records", file=sys.stderr)
        return EXIT_DATA
    table = stroke_count_report(labeled)
    _write_or_print(format_stroke_report(table), args.out)
    if args.out:
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_eval_accuracy(args) -> int:
    from .evaluation import classification_accuracy, format_accuracy_report
    from .strokes import load_sketches

    records = load_sketches(args.labeled_sketches)
    report = classification_accuracy(records)
    _write_or_print(format_accuracy_report(report), args.out)
    if args.out:
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .corpus import load_index
    from .service import create_app

    index_path = args.index or _env("INDEX")
    if not index_path:
        print("serve: an index is required (--index or SKETCHSEARCH_INDEX)", file=sys.stderr)
        return EXIT_USAGE
    recognizer = None
    if args.model:
        from .neural import as_recognizer, load_model

        recognizer = as_recognizer(load_model(args.model))
    index = load_index(index_path)
    app = create_app(
        index,
        screens_dir=args.screens or _env("SCREENS"),
        recognizer=recognizer,
        ttl_seconds=args.ttl,
        w_pos=args.w_pos,
        w_shape=args.w_shape,
        feedback_path=args.feedback_log or _env("FEEDBACK_LOG"),
        frontend_dir=args.frontend_dist or _env("FRONTEND_DIST"),
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def cmd_bench(args) -> int:
    from .bench import format_benchmark, run_benchmark

    backends = [tok for tok in args.backends.split(",") if tok] if args.backends else None
    report = run_benchmark(
        n_screens=args.screens,
        n_queries=args.queries,
        n_query_elements=args.elements,
        n_classify=args.classify_trials,
        seed=args.seed,
        backends=backends,
        include_neural=not args.no_neural,
    )
    print(format_benchmark(report))
    return EXIT_OK


def cmd_synth_corpus(args) -> int:
    from .synth import write_corpus_dir, write_demo_corpus

    if args.demo:
        ids = write_demo_corpus(args.out_dir, n_screens=args.screens, seed=args.seed)
    else:
        ids = write_corpus_dir(
            args.out_dir, args.screens, seed=args.seed, thumbnails=not args.no_images
        )
    print(f"wrote {len(ids)} screens to {args.out_dir}")
    return EXIT_OK


def cmd_synth_sessions(args) -> int:
    from .canvas import save_sessions
    from .corpus import load_index
    from .synth import query_to_snapshot, sample_queries

    index = load_index(args.index_file)
    queries = sample_queries(index, args.n, seed=args.seed)
    snaps = [query_to_snapshot(target, query) for target, query in queries]
    save_sessions(snaps, args.out)
    print(f"wrote {len(snaps)} sessions to {args.out}")
    return EXIT_OK


def cmd_templates_export(args) -> int:
    from .classify import builtin_library, save_library

    save_library(builtin_library(), args.base)
    print(f"wrote {args.base}.ndjson and {args.base}.manifest.json")
    return EXIT_OK


def cmd_model_init(args) -> int:
    from .neural import _layer_arrays, new_default_model, save_model

    model = new_default_model(seed=args.seed, zero=args.zero)
    save_model(model, args.out)
    n_params = sum(int(a.size) for layer in model.layers for a in _layer_arrays(layer))
    print(f"wrote {args.out} ({len(model.layers)} layers, {n_params} parameters)")
    return EXIT_OK


def cmd_openapi(args) -> int:
    from .service import create_app
    from .synth import synthetic_index

    app = create_app(synthetic_index(2, seed=0))
    text = json.dumps(app.openapi(), indent=2, sort_keys=True) + "\n"
    _write_or_print(text, args.out)
    if args.out:
        print(f"wrote {args.out}")
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="sketchsearch", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("index", help="corpus index operations")
    index_sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    b = index_sub.add_parser("build", help="ingest a screen corpus directory into an index file")
    b.add_argument("corpus_dir")
    b.add_argument("-o", "--output", required=True)
    b.add_argument("--mapping", help="category mapping JSON (default: built-in)")
    b.set_defaults(fn=cmd_index_build)

    c = sub.add_parser("classify", help="print top-3 categories for each sketch record")
    c.add_argument("sketch_file", help="newline-delimited sketch records")
    c.set_defaults(fn=cmd_classify)

    e = sub.add_parser("eval", help="evaluation harnesses")
    eval_sub = e.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    t = eval_sub.add_parser("topk", help="top-k retrieval accuracy over session snapshots")
    t.add_argument("sessions_file")
    t.add_argument("index_file")
    t.add_argument("--k", default="1,3,10", help="comma-separated k values")
    t.add_argument("--w-pos", type=float, default=0.7)
    t.add_argument("--w-shape", type=float, default=0.3)
    t.add_argument("--out", help="also write the table to this file")
    t.set_defaults(fn=cmd_eval_topk)
    s = eval_sub.add_parser("strokes", help="mean confidence by stroke count per category")
    s.add_argument("labeled_sketches")
    s.add_argument("--out", help="also write the table to this file")
    s.set_defaults(fn=cmd_eval_strokes)
    a = eval_sub.add_parser("accuracy", help="top-1/top-3 recognizer accuracy on labeled sketches")
    a.add_argument("labeled_sketches")
    a.add_argument("--out", help="also write the table to this file")
    a.set_defaults(fn=cmd_eval_accuracy)

    v = sub.add_parser("serve", help="run the HTTP service")
    v.add_argument("--index", help="index file (or SKETCHSEARCH_INDEX)")
    v.add_argument("--screens", help="screen images directory (or SKETCHSEARCH_SCREENS)")
    v.add_argument("--host", default=_env("HOST", "127.0.0.1"))
    v.add_argument("--port", type=int, default=int(_env("PORT", "8008")))
    v.add_argument("--ttl", type=float, default=float(_env("TTL", "3600")))
    v.add_argument("--w-pos", type=float, default=0.7)
    v.add_argument("--w-shape", type=float, default=0.3)
    v.add_argument("--model", help="neural weights file; default is the template recognizer")
    v.add_argument("--feedback-log", help="ndjson feedback sink (or SKETCHSEARCH_FEEDBACK_LOG)")
    v.add_argument("--frontend-dist", help="static frontend directory to mount at /")
    v.set_defaults(fn=cmd_serve)

    n = sub.add_parser("bench", help="search/classification latency per kernel backend")
    n.add_argument("--screens", type=int, default=58_000)
    n.add_argument("--queries", type=int, default=5)
    n.add_argument("--elements", type=int, default=8)
    n.add_argument("--classify-trials", type=int, default=50)
    n.add_argument("--seed", type=int, default=20240901)
    n.add_argument("--backends", help="comma-separated subset (default: all importable)")
    n.add_argument("--no-neural", action="store_true")
    n.set_defaults(fn=cmd_bench)

    y = sub.add_parser("synth", help="synthetic corpora and sessions")
    synth_sub = y.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    sc = synth_sub.add_parser("corpus", help="write a synthetic screen corpus directory")
    sc.add_argument("out_dir")
    sc.add_argument("--screens", type=int, default=100)
    sc.add_argument("--seed", type=int, default=20240901)
    sc.add_argument("--no-images", action="store_true", help="skip thumb/full PNGs")
    sc.add_argument("--demo", action="store_true", help="include the planted walkthrough screen")
    sc.set_defaults(fn=cmd_synth_corpus)
    ss = synth_sub.add_parser("sessions", help="sample target-derived session snapshots")
    ss.add_argument("index_file")
    ss.add_argument("out")
    ss.add_argument("--n", type=int, default=50)
    ss.add_argument("--seed", type=int, default=20240901)
    ss.set_defaults(fn=cmd_synth_sessions)

    te = sub.add_parser("templates", help="template library operations")
    te_sub = te.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    tx = te_sub.add_parser("export", help="write the built-in template library to <base>.*")
    tx.add_argument("base")
    tx.set_defaults(fn=cmd_templates_export)

    m = sub.add_parser("model", help="neural weights operations")
    m_sub = m.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    mi = m_sub.add_parser("init", help="write a fresh default-architecture weights file")
    mi.add_argument("out")
    mi.add_argument("--seed", type=int, default=None)
    mi.add_argument("--zero", action="store_true", help="all-zero weights")
    mi.set_defaults(fn=cmd_model_init)

    o = sub.add_parser("openapi", help="dump the HTTP API schema as JSON")
    o.add_argument("--out", help="write to this file instead of stdout")
    o.set_defaults(fn=cmd_openapi)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SketchSearchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    raise SystemExit(main())
