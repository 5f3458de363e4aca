"""Seeded generators of isometries, permutations, noise, and synthetic
ensembles.

Everything here is deterministic per seed: randomness comes from
numpy's default_rng (PCG64), with derived streams keyed by
``[seed, tag, ...]`` so independent draws never share state. These are
the building blocks for invariance checks and synthetic instability
studies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .core import EmbeddingMatrix, GraphTopology, matrix_values
from .errors import NotABijection, ShapeMismatch

GENERATOR_NAME = "numpy-default_rng-pcg64"

# Anything numpy's default_rng accepts as entropy; derived streams use
# [root_seed, tag, ...] sequences.
SeedLike = Union[int, Sequence[int]]

_ORTHOGONALITY_TOL = 1e-10

# Derived-stream tags for synthetic ensembles.
_TAG_GRAPH = 0
_TAG_BASE = 1
_TAG_NOISE = 2
_TAG_TRANSFORM = 3

TRANSFORM_KINDS = ("none", "orthogonal", "permutation", "translation")


def _stream(seed: SeedLike, *tags: int) -> np.random.Generator:
    """Derived generator keyed by the root seed plus integer tags."""
    if isinstance(seed, (int, np.integer)):
        entropy = [int(seed), *tags]
    else:
        entropy = [*(int(s) for s in seed), *tags]
    return np.random.default_rng(entropy)


@dataclass(frozen=True)
class Isometry:
    """Orthogonal transform plus translation: Z -> Z @ matrix + translation."""

    matrix: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=np.float64)
        translation = np.asarray(self.translation, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ShapeMismatch(f"isometry matrix must be square, got {matrix.shape}")
        if translation.shape != (matrix.shape[0],):
            raise ShapeMismatch(
                f"translation shape {translation.shape} does not match "
                f"matrix dimension {matrix.shape[0]}"
            )
        gram_error = np.abs(matrix.T @ matrix - np.eye(matrix.shape[0])).max()
        if gram_error > _ORTHOGONALITY_TOL:
            raise ValueError(
                f"matrix is not orthogonal: max |T^T T - I| = {gram_error:.3e}"
            )
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "translation", translation)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def identity(cls, dim: int) -> "Isometry":
        return cls(np.eye(dim), np.zeros(dim))

    def then(self, other: "Isometry") -> "Isometry":
        """Composition: applying self and then other."""
        if other.dim != self.dim:
            raise ShapeMismatch(
                f"cannot compose isometries of dimensions {self.dim} and {other.dim}"
            )
        return Isometry(
            self.matrix @ other.matrix,
            self.translation @ other.matrix + other.translation,
        )


@dataclass(frozen=True)
class NodePermutation:
    """Node relabeling: input row i lands at output row mapping[i]."""

    mapping: np.ndarray

    def __post_init__(self):
        mapping = np.asarray(self.mapping, dtype=np.int64)
        if mapping.ndim != 1:
            raise NotABijection("permutation mapping must be one-dimensional")
        if not np.array_equal(np.sort(mapping), np.arange(mapping.size)):
            raise NotABijection(
                "mapping is not a bijection onto 0..n-1"
            )
        object.__setattr__(self, "mapping", mapping)

    @property
    def node_count(self) -> int:
        return self.mapping.size

    def inverse(self) -> "NodePermutation":
        inv = np.empty_like(self.mapping)
        inv[self.mapping] = np.arange(self.mapping.size)
        return NodePermutation(inv)


def random_orthogonal(dim: int, seed: SeedLike) -> Isometry:
    """Random orthogonal matrix, zero translation, deterministic per seed.

    Built by QR-orthogonalizing a seeded Gaussian matrix with the usual
    sign fix on R's diagonal (uniform over the orthogonal group).
    """
    if dim < 1:
        raise ShapeMismatch(f"dimension must be >= 1, got {dim}")
    rng = np.random.default_rng(seed)
    gaussian = rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(gaussian)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return Isometry(q * signs, np.zeros(dim))


def random_translation(dim: int, seed: SeedLike, scale: float = 1.0) -> Isometry:
    """Identity transform plus a seeded Gaussian translation vector."""
    rng = np.random.default_rng(seed)
    return Isometry(np.eye(dim), rng.normal(0.0, scale, size=dim))


def random_permutation(node_count: int, seed: SeedLike) -> NodePermutation:
    rng = np.random.default_rng(seed)
    return NodePermutation(rng.permutation(node_count))


def apply_isometry(mat, iso: Isometry) -> EmbeddingMatrix:
    """Z @ T + t, an exact isometry of the embedded point cloud."""
    values = matrix_values(mat)
    if values.shape[1] != iso.dim:
        raise ShapeMismatch(
            f"matrix has {values.shape[1]} columns but the isometry is "
            f"{iso.dim}-dimensional"
        )
    return EmbeddingMatrix(values @ iso.matrix + iso.translation)


def apply_permutation(
    mat, graph: GraphTopology, sigma: NodePermutation
) -> tuple[EmbeddingMatrix, GraphTopology]:
    """Relabel nodes in both the embeddings and the edge set.

    Output row sigma(i) holds input row i, and each edge {i, j} becomes
    {sigma(i), sigma(j)}; relabeling both together is what leaves
    edge-restricted sums unchanged.
    """
    values = matrix_values(mat)
    if values.shape[0] != sigma.node_count or graph.node_count != sigma.node_count:
        raise ShapeMismatch(
            f"permutation covers {sigma.node_count} nodes but the matrix has "
            f"{values.shape[0]} rows and the graph {graph.node_count} nodes"
        )
    permuted = np.empty_like(values)
    permuted[sigma.mapping] = values
    relabeled = sigma.mapping[graph.edges]
    new_graph, _, _ = GraphTopology.from_pairs(graph.node_count, relabeled)
    return EmbeddingMatrix(permuted), new_graph


def perturb_gaussian(mat, sigma_noise: float, seed: SeedLike) -> EmbeddingMatrix:
    """Add seeded i.i.d. Gaussian noise of the given standard deviation."""
    if sigma_noise < 0:
        raise ValueError(f"sigma_noise must be >= 0, got {sigma_noise}")
    values = matrix_values(mat)
    if sigma_noise == 0.0:
        return EmbeddingMatrix(values.copy())
    rng = np.random.default_rng(seed)
    return EmbeddingMatrix(values + rng.normal(0.0, sigma_noise, size=values.shape))


def random_graph(node_count: int, avg_degree: float, seed: SeedLike) -> GraphTopology:
    """Seeded undirected simple graph with roughly the given mean degree.

    Samples round(node_count * avg_degree / 2) distinct unordered pairs
    by rejection, which is near-uniform for sparse graphs and cheap even
    at 10^5 nodes / 10^6 edges.
    """
    if node_count < 2:
        raise ShapeMismatch(f"need at least 2 nodes to draw edges, got {node_count}")
    max_edges = node_count * (node_count - 1) // 2
    target = int(round(node_count * avg_degree / 2.0))
    target = max(1, min(target, max_edges))
    rng = _stream(seed, _TAG_GRAPH)
    keys = np.empty(0, dtype=np.int64)
    draw = max(4 * target, 1024)
    while keys.size < target:
        pairs = rng.integers(0, node_count, size=(draw, 2), dtype=np.int64)
        pairs = pairs[pairs[:, 0] != pairs[:, 1]]
        lo = pairs.min(axis=1)
        hi = pairs.max(axis=1)
        keys = np.unique(np.concatenate([keys, lo * node_count + hi]))
        draw *= 2
    chosen = rng.permutation(keys)[:target]
    chosen.sort()
    edges = np.column_stack([chosen // node_count, chosen % node_count])
    return GraphTopology(node_count, edges)


def synthetic_ensemble(
    graph: GraphTopology,
    dim: int,
    n_configs: int,
    noise: float = 0.0,
    transform: str = "none",
    seed: int = 0,
) -> tuple[list[EmbeddingMatrix], GraphTopology]:
    """Noisy copies of one seeded base embedding, optionally transformed.

    Every configuration is base + Gaussian noise (std ``noise``), then:

    - "none": left as is;
    - "orthogonal": rotated by its own random orthogonal matrix;
    - "translation": shifted by its own random translation;
    - "permutation": one shared node permutation relabels every
      configuration's rows and the graph's edges together.

    The per-config transforms exercise invariances of individual
    summaries; the shared permutation exercises the ensemble-level one,
    so with noise 0 all four kinds should score a zero index. Returns
    the configurations and the (possibly relabeled) graph.
    """
    if transform not in TRANSFORM_KINDS:
        raise ValueError(f"transform must be one of {TRANSFORM_KINDS}")
    base = _stream(seed, _TAG_BASE).standard_normal((graph.node_count, dim))
    configs: list[EmbeddingMatrix] = []
    for idx in range(n_configs):
        values = base
        if noise > 0.0:
            noise_rng = _stream(seed, _TAG_NOISE, idx)
            values = base + noise_rng.normal(0.0, noise, size=base.shape)
        cfg = EmbeddingMatrix(np.array(values, copy=True))
        if transform == "orthogonal":
            cfg = apply_isometry(cfg, random_orthogonal(dim, [seed, _TAG_TRANSFORM, idx]))
        elif transform == "translation":
            cfg = apply_isometry(
                cfg, random_translation(dim, [seed, _TAG_TRANSFORM, idx])
            )
        configs.append(cfg)
    out_graph = graph
    if transform == "permutation":
        sigma = random_permutation(graph.node_count, [seed, _TAG_TRANSFORM])
        relabeled = []
        for cfg in configs:
            permuted, out_graph = apply_permutation(cfg, graph, sigma)
            relabeled.append(permuted)
        configs = relabeled
    return configs, out_graph
