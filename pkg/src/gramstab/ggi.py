"""Graph Gram index: edge-restricted Gram summaries and their dispersion.

For one configuration the summary is the mean inner product over node
pairs joined by an edge; the index is the standard deviation of those
summaries across configurations. The adjacency-masked Gram matrix is
never materialized: only edge-indexed inner products are computed, so
the cost is O(|E| d) time and O(block * d) extra memory per
configuration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

import numpy as np

from .core import (
    ConfigurationEnsemble,
    EmbeddingMatrix,
    GraphTopology,
    center_normalize_inplace,
    matrix_values,
)
from .errors import EmptyGraph, InternalInvariant, ShapeMismatch, TooFewConfigs

# Edge gathers are chunked to roughly this many matrix elements so that
# scratch arrays stay small relative to one embedding matrix.
_BLOCK_ELEMENTS = 2_097_152

_STD_CONVENTIONS = ("population", "sample")


@dataclass(frozen=True)
class GgiOptions:
    """Knobs for the index pipeline.

    ``std`` selects the dispersion convention: "population" divides by
    N (the ensemble is the whole object of study), "sample" by N - 1.
    """

    preprocess: bool = True
    std: str = "population"

    def __post_init__(self):
        if self.std not in _STD_CONVENTIONS:
            raise ValueError(f"std must be one of {_STD_CONVENTIONS}, got {self.std!r}")


@dataclass(frozen=True)
class EdgeSummaryScore:
    """Per-configuration summary: mean inner product over graph edges."""

    config_index: int
    score: float
    degenerate_rows: int = 0


@dataclass(frozen=True)
class StabilityReport:
    """Final index value plus the per-configuration scores behind it."""

    index_name: str
    index_value: float
    index_percent: float
    n_configs: int
    per_config: tuple[EdgeSummaryScore, ...]
    metadata: dict = field(default_factory=dict)

    @property
    def scores(self) -> np.ndarray:
        return np.array([s.score for s in self.per_config])


def _edge_mean_inner(values: np.ndarray, edges: np.ndarray) -> float:
    """Mean of <z_i, z_j> over unordered edges, accumulated blockwise.

    Identical to summing the adjacency-masked Gram matrix over all
    ordered pairs and dividing by 2|E|, since each unordered edge
    contributes the same inner product in both directions.
    """
    n_edges = edges.shape[0]
    dim = values.shape[1]
    block = max(1, _BLOCK_ELEMENTS // max(1, dim))
    total = 0.0
    for start in range(0, n_edges, block):
        chunk = edges[start : start + block]
        total += float(
            np.einsum("ij,ij->i", values[chunk[:, 0]], values[chunk[:, 1]]).sum()
        )
    return total / n_edges


def edge_gram_sum(mat, graph: GraphTopology, config_index: int = 0) -> EdgeSummaryScore:
    """Edge-restricted Gram summary of one configuration.

    Computes s = (1/(2|E|)) * sum over ordered adjacent pairs (i, j) of
    <z_i, z_j>, equivalently the mean inner product over unordered
    edges. The input is used as-is; apply
    :func:`~gramstab.core.preprocess_center_normalize` first if scores
    should be cosine-bounded.

    Raises EmptyGraph when the graph has no edges and ShapeMismatch when
    row count and node count disagree.
    """
    values = matrix_values(mat)
    if graph.edge_count == 0:
        raise EmptyGraph("graph has no edges")
    if values.shape[0] != graph.node_count:
        raise ShapeMismatch(
            f"matrix has {values.shape[0]} rows but the graph has "
            f"{graph.node_count} nodes"
        )
    score = _edge_mean_inner(values, graph.edges)
    return EdgeSummaryScore(config_index=config_index, score=score)


def score_configuration(
    mat,
    graph: GraphTopology,
    config_index: int = 0,
    *,
    preprocess: bool = True,
    copy: bool = True,
) -> EdgeSummaryScore:
    """Preprocess (optionally) and summarize one configuration.

    With ``copy=False`` the input array is centered and normalized in
    place; only pass arrays the caller owns. Preprocessed scores are
    checked against the cosine bound |s| <= 1.
    """
    values = matrix_values(mat)
    if graph.edge_count == 0:
        raise EmptyGraph("graph has no edges")
    if values.shape[0] != graph.node_count:
        raise ShapeMismatch(
            f"config {config_index} has {values.shape[0]} rows but the graph "
            f"has {graph.node_count} nodes",
            config_index=config_index,
        )
    n_degenerate = 0
    if preprocess:
        if copy or not (isinstance(mat, np.ndarray) and values.flags.writeable):
            values = values.copy()
        n_degenerate = center_normalize_inplace(values)
    score = _edge_mean_inner(values, graph.edges)
    if preprocess and abs(score) > 1.0 + 1e-9:
        raise InternalInvariant(
            f"preprocessed edge summary {score!r} escaped the cosine bound"
        )
    return EdgeSummaryScore(
        config_index=config_index, score=score, degenerate_rows=n_degenerate
    )


def dispersion(scores: np.ndarray, std: str = "population") -> float:
    """Standard deviation of per-configuration scores.

    Bit-identical inputs must yield exactly 0.0, which naive mean/std
    arithmetic does not guarantee, so that case is short-circuited.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.max() == scores.min():
        return 0.0
    ddof = 0 if std == "population" else 1
    return float(scores.std(ddof=ddof))


def ggi_index(
    configs: Union[ConfigurationEnsemble, Iterable],
    graph: GraphTopology,
    opts: GgiOptions | None = None,
    *,
    copy: bool = True,
) -> StabilityReport:
    """Graph Gram index of an ensemble over a fixed graph.

    Each configuration is preprocessed (unless disabled) and reduced to
    its edge-restricted Gram summary; the index is the dispersion of
    those summaries. Configurations are consumed one at a time, so
    ``configs`` may be a lazy iterable of matrices when the ensemble is
    too large to hold in memory; pass ``copy=False`` when the iterable
    yields arrays the pipeline may scribble on.

    Returns
    -------
    StabilityReport
        Per-configuration scores, the index (raw and percent), and the
        conventions used. ``index_value`` is always recomputable from
        ``per_config``.
    """
    if opts is None:
        opts = GgiOptions()
    iterable = configs.configs if isinstance(configs, ConfigurationEnsemble) else configs
    scores: list[EdgeSummaryScore] = []
    # Deliberately not enumerate(): its cached result tuple keeps the
    # previous matrix alive while the iterable builds the next one,
    # which doubles peak memory when streaming large ensembles.
    idx = 0
    for mat in iterable:
        scores.append(
            score_configuration(
                mat, graph, idx, preprocess=opts.preprocess, copy=copy
            )
        )
        del mat
        idx += 1
    return report_from_scores(scores, opts)


def report_from_scores(
    scores: Iterable[EdgeSummaryScore], opts: GgiOptions | None = None
) -> StabilityReport:
    """Assemble the index report from already-computed per-config scores.

    Lets callers that schedule :func:`score_configuration` themselves
    (in threads, say) share the exact reduction and report layout of
    :func:`ggi_index`.
    """
    if opts is None:
        opts = GgiOptions()
    scores = sorted(scores, key=lambda s: s.config_index)
    if len(scores) < 2:
        raise TooFewConfigs(f"need at least 2 configurations, got {len(scores)}")
    values = np.array([s.score for s in scores])
    index_value = dispersion(values, opts.std)
    metadata = {
        "preprocess": opts.preprocess,
        "std": opts.std,
        "degenerate_rows": [s.degenerate_rows for s in scores],
        "score_definition": "mean inner product over unordered graph edges",
    }
    return StabilityReport(
        index_name="ggi",
        index_value=index_value,
        index_percent=index_value * 100.0,
        n_configs=len(scores),
        per_config=tuple(scores),
        metadata=metadata,
    )
