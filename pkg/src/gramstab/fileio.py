"""On-disk formats: edge lists, embedding files, manifests, reports.

Embeddings travel either as GGE1 binary (magic ``GGE1``, then row and
column counts as unsigned 64-bit little-endian integers, then row-major
IEEE-754 float64 values, also little-endian) or as plain CSV with one
node per line. The binary format stores 64-bit floats on purpose: the
indices downstream subtract nearly equal quantities, and precision
headroom is cheap. Edge lists are whitespace-separated integer pairs
with ``#`` comments; extra columns are ignored.
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import EmbeddingMatrix, GraphTopology
from .errors import (
    BadMagic,
    EmptyGraph,
    ManifestError,
    NotABijection,
    ParseError,
    TruncatedFile,
)

GGE1_MAGIC = b"GGE1"
_HEADER = struct.Struct("<QQ")

# %.17g round-trips any float64 exactly.
_CSV_FORMAT = "%.17g"


@dataclass(frozen=True)
class EdgeListResult:
    """Parsed edge list plus the id remapping and cleanup tallies."""

    graph: GraphTopology
    id_map: dict
    self_loops_dropped: int
    duplicates_dropped: int


@dataclass(frozen=True)
class Manifest:
    """Paths describing one ensemble: a graph plus N embedding files."""

    graph_path: Path
    embedding_paths: tuple[Path, ...]
    labels: tuple[str, ...]
    node_id_map: Path | None = None
    path: Path | None = None
    extra: dict = field(default_factory=dict)

    @property
    def n_configs(self) -> int:
        return len(self.embedding_paths)


def load_id_map(path) -> dict:
    """Read a JSON object mapping original node ids to row indices.

    The values must form a bijection onto 0..n-1; anything else raises
    NotABijection.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON id map: {exc}", path=str(path)) from exc
    if not isinstance(raw, dict) or not raw:
        raise ParseError("id map must be a non-empty JSON object", path=str(path))
    mapping = {}
    for key, value in raw.items():
        try:
            mapping[int(key)] = int(value)
        except (TypeError, ValueError) as exc:
            raise ParseError(
                f"id map entries must be integers, got {key!r}: {value!r}",
                path=str(path),
            ) from exc
    rows = sorted(mapping.values())
    if rows != list(range(len(mapping))):
        raise NotABijection(
            f"{path}: id map values must be a bijection onto 0..{len(mapping) - 1}"
        )
    return mapping


def load_edge_list(path, id_map: dict | None = None) -> EdgeListResult:
    """Parse a text edge list into a canonical undirected simple graph.

    Node ids need not be contiguous: without an explicit ``id_map`` the
    distinct ids are remapped to 0..n-1 in ascending order and the
    mapping is returned. With one, ids are looked up in it (and the map
    also fixes the node count, so isolated nodes survive). Self-loops
    and duplicate or reversed pairs are dropped and tallied.
    """
    path = Path(path)
    sources: list[int] = []
    targets: list[int] = []
    with path.open("r", encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            tokens = body.split()
            if len(tokens) < 2:
                raise ParseError(
                    f"expected at least two columns, got {len(tokens)}",
                    path=str(path),
                    line=line_number,
                )
            try:
                a, b = int(tokens[0]), int(tokens[1])
            except ValueError as exc:
                raise ParseError(
                    f"node ids must be integers: {exc}",
                    path=str(path),
                    line=line_number,
                ) from exc
            if id_map is not None:
                try:
                    a, b = id_map[a], id_map[b]
                except KeyError as exc:
                    raise ParseError(
                        f"node id {exc.args[0]} is not in the id map",
                        path=str(path),
                        line=line_number,
                    ) from exc
            elif a < 0 or b < 0:
                raise ParseError(
                    "node ids must be non-negative",
                    path=str(path),
                    line=line_number,
                )
            sources.append(a)
            targets.append(b)
    if not sources:
        raise EmptyGraph(f"{path}: no edges found")
    pairs = np.column_stack(
        [np.asarray(sources, dtype=np.int64), np.asarray(targets, dtype=np.int64)]
    )
    if id_map is None:
        original = np.unique(pairs)
        pairs = np.searchsorted(original, pairs)
        id_map = {int(orig): int(row) for row, orig in enumerate(original)}
        node_count = original.size
    else:
        node_count = len(id_map)
    graph, n_self, n_dup = GraphTopology.from_pairs(node_count, pairs)
    if graph.edge_count == 0:
        raise EmptyGraph(f"{path}: no edges left after dropping self-loops")
    return EdgeListResult(
        graph=graph,
        id_map=id_map,
        self_loops_dropped=n_self,
        duplicates_dropped=n_dup,
    )


def save_edge_list(path, graph: GraphTopology, comment: str | None = None) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as handle:
        if comment:
            handle.write(f"# {comment}\n")
        for i, j in graph.edges:
            handle.write(f"{i} {j}\n")


def load_embeddings(path, fmt: str = "auto") -> EmbeddingMatrix:
    """Read one embedding matrix, auto-detecting GGE1 versus CSV.

    ``fmt`` may pin the format to "gge1" or "csv"; pinning "gge1" on a
    file without the magic raises BadMagic instead of falling back.
    """
    return EmbeddingMatrix(load_embedding_values(path, fmt))


def load_embedding_values(path, fmt: str = "auto") -> np.ndarray:
    """Like :func:`load_embeddings` but returns the raw float64 array.

    The array is freshly allocated and safe for callers to mutate; the
    streaming index pipeline relies on that to preprocess in place.
    """
    path = Path(path)
    if fmt not in ("auto", "gge1", "csv"):
        raise ValueError(f"unknown format {fmt!r}")
    with path.open("rb") as handle:
        magic = handle.read(len(GGE1_MAGIC))
    if fmt == "gge1" and magic != GGE1_MAGIC:
        raise BadMagic(f"{path}: expected magic {GGE1_MAGIC!r}, found {magic!r}")
    if magic == GGE1_MAGIC and fmt in ("auto", "gge1"):
        return _read_gge1(path)
    return _read_csv(path)


def _read_gge1(path: Path) -> np.ndarray:
    actual = path.stat().st_size
    header_bytes = len(GGE1_MAGIC) + _HEADER.size
    if actual < header_bytes:
        raise TruncatedFile(str(path), header_bytes, actual)
    with path.open("rb") as handle:
        handle.seek(len(GGE1_MAGIC))
        rows, cols = _HEADER.unpack(handle.read(_HEADER.size))
        expected = header_bytes + rows * cols * 8
        if actual < expected:
            raise TruncatedFile(str(path), expected, actual)
        values = np.fromfile(handle, dtype="<f8", count=rows * cols)
    return values.reshape(rows, cols)


def _read_csv(path: Path) -> np.ndarray:
    rows: list[np.ndarray] = []
    cols: int | None = None
    with path.open("r", encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            body = line.strip()
            if not body:
                continue
            tokens = body.split(",")
            try:
                row = np.array([float(tok) for tok in tokens], dtype=np.float64)
            except ValueError as exc:
                raise ParseError(
                    f"could not parse value: {exc}", path=str(path), line=line_number
                ) from exc
            if cols is None:
                cols = row.size
            elif row.size != cols:
                raise ParseError(
                    f"expected {cols} columns, got {row.size}",
                    path=str(path),
                    line=line_number,
                )
            rows.append(row)
    if not rows:
        raise ParseError("file contains no data rows", path=str(path))
    return np.vstack(rows)


def save_embeddings(path, mat, fmt: str = "gge1") -> None:
    """Write one matrix as GGE1 (bit-exact) or CSV (17 significant digits)."""
    path = Path(path)
    values = mat.values if isinstance(mat, EmbeddingMatrix) else np.asarray(mat)
    values = np.ascontiguousarray(values, dtype=np.float64)
    if fmt == "gge1":
        with path.open("wb") as handle:
            handle.write(GGE1_MAGIC)
            handle.write(_HEADER.pack(values.shape[0], values.shape[1]))
            handle.write(values.astype("<f8", copy=False).tobytes())
    elif fmt == "csv":
        np.savetxt(path, values, fmt=_CSV_FORMAT, delimiter=",")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def load_manifest(path) -> Manifest:
    """Read an ensemble manifest; relative paths resolve against it.

    Required keys: ``graph_path`` and ``embedding_paths`` (at least two,
    all distinct). Optional: ``labels`` (one per embedding, defaults to
    file stems) and ``node_id_map``. Unknown keys are preserved in
    ``extra`` and otherwise ignored.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ManifestError(f"{path}: manifest must be a JSON object")
    try:
        graph_path = raw["graph_path"]
        embedding_paths = raw["embedding_paths"]
    except KeyError as exc:
        raise ManifestError(f"{path}: missing required key {exc.args[0]!r}") from exc
    if not isinstance(embedding_paths, list) or len(embedding_paths) < 2:
        raise ManifestError(f"{path}: embedding_paths must list at least 2 files")
    if len(set(embedding_paths)) != len(embedding_paths):
        raise ManifestError(f"{path}: embedding_paths must be distinct")
    base = path.parent
    embeddings = tuple(base / p for p in embedding_paths)
    labels = raw.get("labels")
    if labels is None:
        labels = tuple(Path(p).stem for p in embedding_paths)
    else:
        if len(labels) != len(embedding_paths):
            raise ManifestError(f"{path}: labels must match embedding_paths in length")
        labels = tuple(str(label) for label in labels)
    node_id_map = raw.get("node_id_map")
    extra = {
        k: v
        for k, v in raw.items()
        if k not in ("graph_path", "embedding_paths", "labels", "node_id_map")
    }
    return Manifest(
        graph_path=base / graph_path,
        embedding_paths=embeddings,
        labels=labels,
        node_id_map=(base / node_id_map) if node_id_map else None,
        path=path,
        extra=extra,
    )


def save_manifest(path, graph_path, embedding_paths, labels=None, node_id_map=None,
                  extra: dict | None = None) -> None:
    """Write a manifest with paths stored relative to the manifest file."""
    path = Path(path)
    base = path.parent

    def rel(p) -> str:
        p = Path(p)
        try:
            return p.relative_to(base).as_posix()
        except ValueError:
            return str(p)

    doc: dict = {
        "graph_path": rel(graph_path),
        "embedding_paths": [rel(p) for p in embedding_paths],
    }
    if labels is not None:
        doc["labels"] = list(labels)
    if node_id_map is not None:
        doc["node_id_map"] = rel(node_id_map)
    if extra:
        doc.update(extra)
    path.write_text(json.dumps(doc, indent=2) + "\n")


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with Path(path).open("rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def report_to_json(report: dict) -> str:
    """Serialize a report document deterministically.

    Key order follows construction order and floats use Python's
    shortest round-trip representation, so equal inputs produce byte
    identical documents.
    """
    return json.dumps(report, indent=2, allow_nan=False) + "\n"
