"""Benchmark harness: corpus-scale search latency per kernel backend, plus
per-sketch classification latency.

The contract this guards: an 8-element query over a 58k-screen index must
rank in under 2 s, and classifying a sketch after each stroke must take
under 1 s.  `run_benchmark` builds a synthetic index of the requested size,
derives queries from real target screens, and times the production
`rank_all` path under every importable backend.
"""

from __future__ import annotations

from dataclasses import dataclass
from time import perf_counter

from . import kernels
from .classify import builtin_library, classify_template
from .neural import new_default_model
from .search import rank_all
from .strokes import delta_encode, normalize, resample
from .synth import sample_queries, synthetic_index
from .templates import all_template_sketches

DEFAULT_N_SCREENS = 58_000
DEFAULT_QUERY_ELEMENTS = 8


@dataclass(frozen=True)
class SearchTiming:
    backend: str
    n_screens: int
    n_query_elements: int
    seconds: tuple[float, ...]

    @property
    def best(self) -> float:
        return min(self.seconds)

    @property
    def worst(self) -> float:
        return max(self.seconds)

    @property
    def median(self) -> float:
        s = sorted(self.seconds)
        n = len(s)
        mid = n // 2
        return s[mid] if n % 2 else 0.5 * (s[mid - 1] + s[mid])


@dataclass(frozen=True)
class ClassifyTiming:
    label: str
    seconds: tuple[float, ...]

    @property
    def mean(self) -> float:
        return sum(self.seconds) / len(self.seconds)

    @property
    def worst(self) -> float:
        return max(self.seconds)


@dataclass(frozen=True)
class BenchmarkReport:
    n_screens: int
    n_query_elements: int
    search: tuple[SearchTiming, ...]
    classify: ClassifyTiming
    neural: ClassifyTiming | None

    def timing_for(self, backend: str) -> SearchTiming:
        for t in self.search:
            if t.backend == backend:
                return t
        raise KeyError(backend)


def time_search(index, queries, backend_module, backend_name: str) -> SearchTiming:
    """Wall time of the full `rank_all` path for each query."""
    n_el = max(len(q.elements) for _, q in queries)
    # warm the cache paths (array allocation, lexsort) outside the clock
    rank_all(queries[0][1], index, backend=backend_module)
    seconds = []
    for _, query in queries:
        t0 = perf_counter()
        rank_all(query, index, backend=backend_module)
        seconds.append(perf_counter() - t0)
    return SearchTiming(
        backend=backend_name,
        n_screens=index.n_screens,
        n_query_elements=n_el,
        seconds=tuple(seconds),
    )


def time_classify(n_sketches: int = 50) -> ClassifyTiming:
    """Per-sketch template-recognizer latency over the built-in templates."""
    sketches = [sk for _, sk in all_template_sketches()]
    builtin_library()  # build outside the clock
    classify_template(sketches[0])
    seconds = []
    for i in range(n_sketches):
        sk = sketches[i % len(sketches)]
        t0 = perf_counter()
        classify_template(sk)
        seconds.append(perf_counter() - t0)
    return ClassifyTiming(label="template recognizer", seconds=tuple(seconds))


def time_neural(n_sketches: int = 20, seed: int = 0) -> ClassifyTiming:
    """Per-sketch forward-pass latency of the default stroke model."""
    model = new_default_model(seed=seed)
    sketches = [sk for _, sk in all_template_sketches()]
    encoded = [delta_encode(resample(normalize(sk))) for sk in sketches]
    model.predict(encoded[0])
    seconds = []
    for i in range(n_sketches):
        x = encoded[i % len(encoded)]
        t0 = perf_counter()
        model.predict(x)
        seconds.append(perf_counter() - t0)
    return ClassifyTiming(label="neural forward", seconds=tuple(seconds))


def run_benchmark(
    n_screens: int = DEFAULT_N_SCREENS,
    n_queries: int = 5,
    n_query_elements: int = DEFAULT_QUERY_ELEMENTS,
    n_classify: int = 50,
    seed: int = 20240901,
    backends=None,
    include_neural: bool = True,
) -> BenchmarkReport:
    """Build a synthetic corpus and time every requested backend on it.

    ``backends`` is a name list (default: everything importable).
    """
    modules = kernels.available_backends()
    if backends is None:
        names = sorted(modules)
    else:
        names = list(backends)
        unknown = [n for n in names if n not in modules]
        if unknown:
            raise ValueError(f"unknown backend(s) {unknown}; available: {sorted(modules)}")
    index = synthetic_index(n_screens, seed=seed, min_elements=max(8, n_query_elements))
    queries = sample_queries(
        index, n_queries, seed=seed + 1, k_range=(n_query_elements, n_query_elements)
    )
    search_timings = tuple(time_search(index, queries, modules[n], n) for n in names)
    return BenchmarkReport(
        n_screens=index.n_screens,
        n_query_elements=n_query_elements,
        search=search_timings,
        classify=time_classify(n_classify),
        neural=time_neural() if include_neural else None,
    )


def format_benchmark(report: BenchmarkReport) -> str:
    lines = [
        f"search: {report.n_screens} screens, {report.n_query_elements}-element queries,"
        f" {len(report.search[0].seconds)} runs each",
        f"  {'backend':<10} {'best':>10} {'median':>10} {'worst':>10}",
    ]
    for t in report.search:
        lines.append(
            f"  {t.backend:<10} {t.best:>9.4f}s {t.median:>9.4f}s {t.worst:>9.4f}s"
        )
    c = report.classify
    lines.append(
        f"classify ({c.label}): {len(c.seconds)} sketches,"
        f" mean {c.mean * 1e3:.2f} ms, worst {c.worst * 1e3:.2f} ms"
    )
    if report.neural is not None:
        n = report.neural
        lines.append(
            f"classify ({n.label}): {len(n.seconds)} sketches,"
            f" mean {n.mean * 1e3:.2f} ms, worst {n.worst * 1e3:.2f} ms"
        )
    return "\n".join(lines)
