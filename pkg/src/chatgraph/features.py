"""Feature catalog and per-message featurization.

A catalog enumerates measure x variant x graph entries in a fixed order:
for each graph (before, after, full), first the graph-scale measures,
then every vertex-scale variant at two scales, the targeted author's own
value (`_vertex`) and the average over all vertices (`_avg`).

Variant axes follow the master table below.  A measure that admits more
than one weight/direction combination gets a two-letter suffix (weight
then direction, e.g. `closeness_wi` = weighted, incoming); single-variant
measures keep bare names.  The suffix decision is made on the directed
table, so names are stable between the directed and undirected catalogs.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
import multiprocessing

import numpy as np

from .corpus import LABEL_ABUSE, LABEL_NONABUSE, Corpus, Message
from .engine import MeasureConfig, MeasureEngine
from .extraction import ExtractionParams, extract
from .graph import ConversationalGraph

GRAPHS = ("before", "after", "full")


class FeatureError(ValueError):
    pass


@dataclass(frozen=True)
class _Row:
    """One master-table row: a measure and its admissible variants.

    printed_w / printed_d are the axis marks as documented ("-" = the
    axis does not apply); wghts / dirs are the letters actually passed to
    the engine, so an unmarked axis still computes as unweighted or
    undirected.
    """

    measure: str
    scope: str
    printed_w: str
    printed_d: str
    wghts: tuple[str, ...]
    dirs: tuple[str, ...]


_GRAPH_ROWS = (
    _Row("weak_components", "macro", "-", "U", ("u",), ("u",)),
    _Row("strong_components", "macro", "-", "D", ("u",), ("d",)),
    _Row("adhesion", "macro", "-", "D", ("u",), ("d",)),
    _Row("cohesion", "macro", "-", "D", ("u",), ("d",)),
    _Row("articulation_points", "macro", "-", "U", ("u",), ("u",)),
    _Row("diameter", "macro", "U/W", "U/D", ("u", "w"), ("u", "d")),
    _Row("radius", "macro", "U", "U/I/O", ("u",), ("u", "i", "o")),
    _Row("avg_distance", "macro", "U", "U/D", ("u",), ("u", "d")),
    _Row("clique_count", "meso", "-", "-", ("u",), ("u",)),
    # detection always runs on the unweighted undirected view; see manifest
    _Row("community_count", "meso", "U", "D", ("u",), ("u",)),
    _Row("modularity", "meso", "U/W", "U", ("u", "w"), ("u",)),
    _Row("edge_count", "micro", "-", "-", ("u",), ("u",)),
    _Row("vertex_count", "micro", "-", "-", ("u",), ("u",)),
    _Row("density", "micro", "-", "-", ("u",), ("u",)),
    _Row("global_transitivity", "micro", "U", "U", ("u",), ("u",)),
    _Row("reciprocity", "micro", "-", "D", ("u",), ("d",)),
    _Row("assortativity", "micro", "-", "U/D", ("u",), ("u", "d")),
)

_VERTEX_ROWS = (
    _Row("eigenvector", "macro", "U/W", "U/D", ("u", "w"), ("u", "d")),
    _Row("hub", "macro", "U/W", "D", ("u", "w"), ("d",)),
    _Row("authority", "macro", "U/W", "D", ("u", "w"), ("d",)),
    _Row("alpha", "macro", "U/W", "D", ("u", "w"), ("d",)),
    _Row("power", "macro", "U", "D", ("u",), ("d",)),
    _Row("pagerank", "macro", "U/W", "U/D", ("u", "w"), ("u", "d")),
    _Row("subgraph", "macro", "U", "U", ("u",), ("u",)),
    _Row("betweenness", "macro", "U/W", "U/D", ("u", "w"), ("u", "d")),
    _Row("closeness", "macro", "U/W", "U/I/O", ("u", "w"), ("u", "i", "o")),
    _Row("eccentricity", "macro", "U", "U/I/O", ("u",), ("u", "i", "o")),
    _Row("articulation_point", "macro", "-", "U", ("u",), ("u",)),
    _Row("coreness", "meso", "-", "U/I/O", ("u",), ("u", "i", "o")),
    _Row("participation", "meso", "U", "U/I/O", ("u",), ("u", "i", "o")),
    _Row("internal_intensity", "meso", "U", "U/I/O", ("u",), ("u", "i", "o")),
    _Row("external_intensity", "meso", "U", "U/I/O", ("u",), ("u", "i", "o")),
    _Row("diversity", "meso", "U", "U/I/O", ("u",), ("u", "i", "o")),
    _Row("heterogeneity", "meso", "U", "U/I/O", ("u",), ("u", "i", "o")),
    _Row("degree", "micro", "U", "U/I/O", ("u",), ("u", "i", "o")),
    _Row("strength", "micro", "W", "U/I/O", ("w",), ("u", "i", "o")),
    _Row("local_transitivity", "micro", "U/W", "U", ("u", "w"), ("u",)),
    _Row("burts_constraint", "micro", "U/W", "-", ("u", "w"), ("u",)),
)

# measures whose every variant needs edge directions; absent when the
# extraction is undirected
_DIRECTED_ONLY = frozenset((
    "strong_components", "reciprocity",
    "hub", "authority", "alpha", "power",
))

_SUFFIXED = frozenset(
    row.measure for row in _GRAPH_ROWS + _VERTEX_ROWS
    if len(row.wghts) * len(row.dirs) > 1)


def _variant_name(measure: str, w: str, d: str) -> str:
    if measure in _SUFFIXED:
        return f"{measure}_{w}{d}"
    return measure


def _undirected_row(row: _Row) -> _Row | None:
    if row.measure in _DIRECTED_ONLY:
        return None
    dirs = ("u",)
    printed_d = row.printed_d if row.printed_d == "-" else "U"
    return _Row(row.measure, row.scope, row.printed_w, printed_d,
                row.wghts, dirs)


def _rows(master: tuple[_Row, ...], directed: bool) -> list[_Row]:
    if directed:
        return list(master)
    out = []
    for row in master:
        mapped = _undirected_row(row)
        if mapped is not None:
            out.append(mapped)
    return out


@dataclass(frozen=True)
class FeatureSpec:
    """One catalog entry; weighted/direction are engine letters."""

    name: str
    graph: str
    measure: str
    weighted: str
    direction: str
    scale: str  # graph | vertex | avg


@dataclass(frozen=True)
class FeatureCatalog:
    entries: tuple[FeatureSpec, ...]
    directed: bool

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.entries)

    def per_graph_counts(self) -> dict[str, int]:
        return dict(Counter(e.graph for e in self.entries))

    def restrict(self, names) -> "FeatureCatalog":
        """Subset catalog keeping the original entry order."""
        want = set(names)
        unknown = want - {e.name for e in self.entries}
        if unknown:
            raise FeatureError(
                f"unknown feature names: {', '.join(sorted(unknown)[:5])}")
        kept = tuple(e for e in self.entries if e.name in want)
        return FeatureCatalog(kept, self.directed)

    def manifest(self, config: MeasureConfig | None = None) -> str:
        """Render the full catalog roster with its computation parameters."""
        cfg = config or MeasureConfig()
        rows = {r.measure: r
                for r in _rows(_GRAPH_ROWS, self.directed)
                + _rows(_VERTEX_ROWS, self.directed)}
        kind = "directed" if self.directed else "undirected"
        per = self.per_graph_counts()
        counts = ", ".join(f"{g} {per.get(g, 0)}" for g in GRAPHS)
        alpha = (repr(cfg.alpha_attenuation) if cfg.alpha_attenuation
                 is not None else "0.5 / lambda_max (1.0 on zero radius)")
        power = (repr(cfg.power_exponent) if cfg.power_exponent
                 is not None else "0.25 / lambda_max (0.25 on zero radius)")
        lines = [
            f"feature catalog ({kind} extraction)",
            f"entries: {len(self.entries)} total ({counts})",
            "",
            "computation parameters:",
            f"  pagerank damping {cfg.pagerank_damping!r}, uniform teleport,"
            " dangling mass recycled uniformly",
            f"  alpha centrality attenuation: {alpha}",
            f"  power centrality exponent: {power}",
            f"  iteration tolerance {cfg.iteration_tolerance!r},"
            f" max iterations {cfg.max_iterations}",
            "  weighted distance cost per edge: "
            + ("1 / weight" if cfg.reciprocal_cost else "raw weight"),
            f"  community detection: seeded greedy modularity ascent on the"
            f" unweighted undirected view, seed {cfg.community_seed}",
            f"  maximal-clique vertex bound {cfg.clique_vertex_bound}",
            "",
            "notes:",
            "  - every community-based entry (community_count, modularity,"
            " participation, intensities, diversity, heterogeneity) shares"
            " one partition, detected on the unweighted undirected view"
            " even where a direction mark suggests otherwise.",
            "  - degenerate inputs (no edges, no reachable pairs, isolated"
            " vertices) emit the documented constants, never NaN; vector"
            " values are always finite.",
            "",
            "entries (name | measure | scale | scope | weight | direction):",
        ]
        for e in self.entries:
            row = rows[e.measure]
            wl = "-" if row.printed_w == "-" else e.weighted.upper()
            dl = "-" if row.printed_d == "-" else e.direction.upper()
            lines.append(f"  {e.name} | {e.measure} | {e.scale}"
                         f" | {row.scope} | {wl} | {dl}")
        return "\n".join(lines) + "\n"


def build_catalog(directed: bool = True) -> FeatureCatalog:
    """Enumerate every entry for the three graphs in stable order."""
    entries = []
    for graph in GRAPHS:
        for row in _rows(_GRAPH_ROWS, directed):
            for w in row.wghts:
                for d in row.dirs:
                    name = f"{graph}_{_variant_name(row.measure, w, d)}"
                    entries.append(FeatureSpec(name, graph, row.measure,
                                               w, d, "graph"))
        for row in _rows(_VERTEX_ROWS, directed):
            for w in row.wghts:
                for d in row.dirs:
                    base = f"{graph}_{_variant_name(row.measure, w, d)}"
                    entries.append(FeatureSpec(base + "_vertex", graph,
                                               row.measure, w, d, "vertex"))
                    entries.append(FeatureSpec(base + "_avg", graph,
                                               row.measure, w, d, "avg"))
    return FeatureCatalog(tuple(entries), directed)


@dataclass(frozen=True)
class FeatureVector:
    message_id: str
    label: int
    values: np.ndarray
    past_size: int
    future_size: int


def label_to_int(message: Message) -> int:
    if message.label == LABEL_ABUSE:
        return 1
    if message.label == LABEL_NONABUSE:
        return 0
    raise FeatureError(f"message {message.id!r} is unlabeled")


def featurize(corpus: Corpus, target_id: str, params: ExtractionParams,
              config: MeasureConfig, catalog: FeatureCatalog
              ) -> FeatureVector:
    """Extract the graph triple around one message and evaluate the catalog.

    Any extraction or measure error aborts the whole vector; there are no
    partial results.  Vertex-scale entries read the targeted message's
    author.
    """
    if catalog.directed != params.directed:
        raise FeatureError(
            "catalog direction does not match extraction params "
            f"(catalog directed={catalog.directed}, "
            f"params directed={params.directed})")
    context = corpus.context_period(target_id, params.context_size)
    label = label_to_int(context.target)
    triple = extract(context, corpus, params)
    engines = {}
    author_at = {}
    for gname in GRAPHS:
        g = triple.by_name(gname)
        engines[gname] = MeasureEngine(g, config)
        author_at[gname] = g.index(context.target.author)
    values = np.empty(len(catalog.entries), dtype=np.float64)
    for j, spec in enumerate(catalog.entries):
        eng = engines[spec.graph]
        if spec.scale == "graph":
            v = eng.graph_value(spec.measure, spec.weighted, spec.direction)
        elif spec.scale == "vertex":
            v = eng.vertex_value(spec.measure, spec.weighted,
                                 spec.direction, author_at[spec.graph])
        else:
            v = eng.vertex_average(spec.measure, spec.weighted,
                                   spec.direction)
        values[j] = v
    finite = np.isfinite(values)
    if not finite.all():
        bad = [catalog.entries[j].name for j in np.flatnonzero(~finite)[:5]]
        raise FeatureError(
            f"non-finite feature values for {target_id!r}: {', '.join(bad)}")
    values.flags.writeable = False
    return FeatureVector(target_id, label, values,
                         len(context.past), len(context.future))


@dataclass
class Dataset:
    """Feature matrix with aligned labels, message ids and entry names."""

    matrix: np.ndarray
    labels: np.ndarray
    message_ids: tuple[str, ...]
    feature_names: tuple[str, ...]

    def __post_init__(self) -> None:
        self.matrix = np.asarray(self.matrix, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.matrix.ndim != 2:
            raise FeatureError("feature matrix must be two-dimensional")
        rows, cols = self.matrix.shape
        if cols != len(self.feature_names):
            raise FeatureError(
                f"matrix has {cols} columns for "
                f"{len(self.feature_names)} feature names")
        if len(self.labels) != rows or len(self.message_ids) != rows:
            raise FeatureError("labels and message ids must match row count")
        if rows and not np.isin(self.labels, (0, 1)).all():
            raise FeatureError("labels must be binary")

    @property
    def n_rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_features(self) -> int:
        return self.matrix.shape[1]

    def select(self, names) -> "Dataset":
        """Column subset in the given order."""
        where = {n: i for i, n in enumerate(self.feature_names)}
        try:
            idx = [where[n] for n in names]
        except KeyError as exc:
            raise FeatureError(f"unknown feature name: {exc.args[0]!r}") \
                from None
        return Dataset(self.matrix[:, idx], self.labels, self.message_ids,
                       tuple(self.feature_names[i] for i in idx))


_WORK: tuple | None = None


def _init_worker(corpus, params, config, catalog) -> None:
    global _WORK
    _WORK = (corpus, params, config, catalog)


def _run_target(target_id: str):
    corpus, params, config, catalog = _WORK
    try:
        return target_id, featurize(corpus, target_id, params, config,
                                    catalog), None
    except Exception as exc:  # collected and re-raised with the id
        return target_id, None, str(exc)


def warm_kernels() -> None:
    """Trigger compilation of the numeric kernels in this process.

    Called before forking workers so children load the compiled code from
    the shared cache instead of racing to build it.
    """
    g = ConversationalGraph(directed=True)
    for u, v in (("a", "b"), ("b", "c"), ("c", "a")):
        g.add_weight(u, v, 0.5)
    eng = MeasureEngine(g.freeze(), MeasureConfig())
    eng.vertex_average("betweenness", "u", "u")
    eng.vertex_average("betweenness", "w", "u")
    eng.vertex_average("alpha", "u", "d")
    eng.vertex_average("pagerank", "u", "u")
    eng.graph_value("cohesion", "u", "d")


def featurize_corpus(corpus: Corpus, targets, params: ExtractionParams,
                     config: MeasureConfig, catalog: FeatureCatalog,
                     workers: int = 1) -> Dataset:
    """Featurize many targets; row order follows the input order.

    The computation per target is pure, so any worker count yields
    bit-identical matrices.  Failures are gathered and raised together,
    each with its message id.
    """
    if workers < 1:
        raise FeatureError(f"workers must be >= 1, got {workers}")
    targets = list(targets)
    names = catalog.names()
    if not targets:
        return Dataset(np.empty((0, len(names))),
                       np.empty(0, dtype=np.int64), (), names)
    if workers == 1 or len(targets) == 1:
        _init_worker(corpus, params, config, catalog)
        results = [_run_target(t) for t in targets]
    else:
        warm_kernels()
        ctx = multiprocessing.get_context("fork")
        chunk = max(1, len(targets) // (workers * 4))
        with ctx.Pool(workers, initializer=_init_worker,
                      initargs=(corpus, params, config, catalog)) as pool:
            results = pool.map(_run_target, targets, chunksize=chunk)
    failures = [(tid, msg) for tid, _, msg in results if msg is not None]
    if failures:
        shown = "; ".join(f"{tid}: {msg}" for tid, msg in failures[:8])
        extra = "" if len(failures) <= 8 else f" (+{len(failures) - 8} more)"
        raise FeatureError(
            f"{len(failures)} message(s) failed: {shown}{extra}")
    matrix = np.vstack([vec.values for _, vec, _ in results])
    labels = np.array([vec.label for _, vec, _ in results], dtype=np.int64)
    ids = tuple(tid for tid, _, _ in results)
    return Dataset(matrix, labels, ids, names)


def write_dataset(dataset: Dataset, path) -> None:
    """CSV with message_id, label, then one full-precision column per entry."""
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(("message_id", "label") + tuple(dataset.feature_names))
        for mid, lab, row in zip(dataset.message_ids, dataset.labels,
                                 dataset.matrix):
            wr.writerow((mid, str(int(lab)))
                        + tuple(repr(float(v)) for v in row))


def read_dataset(path) -> Dataset:
    with open(path, newline="") as fh:
        rd = csv.reader(fh)
        try:
            header = next(rd)
        except StopIteration:
            raise FeatureError(f"empty feature file: {path}") from None
        if header[:2] != ["message_id", "label"]:
            raise FeatureError(
                "feature file must start with message_id,label columns")
        names = tuple(header[2:])
        ids, labels, rows = [], [], []
        for lineno, rec in enumerate(rd, start=2):
            if len(rec) != len(header):
                raise FeatureError(
                    f"line {lineno}: expected {len(header)} fields,"
                    f" got {len(rec)}")
            ids.append(rec[0])
            labels.append(int(rec[1]))
            rows.append([float(x) for x in rec[2:]])
    matrix = (np.array(rows, dtype=np.float64) if rows
              else np.empty((0, len(names))))
    return Dataset(matrix, np.array(labels, dtype=np.int64),
                   tuple(ids), names)
