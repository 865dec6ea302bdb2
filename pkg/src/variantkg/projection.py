"""Project dataset rows into a numeric machine-learning graph.

Nodes are (accession, variant key) pairs with consecutive ids from 0;
undirected edges connect nodes sharing a variant key (one clique per key),
and optionally nodes of the same accession.  Features are one-hot or
integer-coded row attributes, labels are CADD categories, and boolean masks
carry the train/val/test split.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import require_fitted
from .dataset import DatasetRow
from .model import bin_cadd_score

CATEGORICAL_FEATURES = (
    "accession",
    "chrom",
    "ref",
    "alt",
    "ann_allele",
    "ann_effect",
    "ann_impact",
    "gene_name",
    "gene_id",
)
NUMERIC_FEATURES = ("pos", "qual")

_GRAPH_MAGIC = b"VKGR1\n"


class GraphFormatError(ValueError):
    """Raised when a graph container file is unreadable or corrupted."""


@dataclass
class ProjectionGraph:
    """Numeric graph: CSR adjacency (both edge directions), features, labels, masks.

    The adjacency is symmetric and loop-free; self-loops are introduced only
    inside model-side normalization.  ``accessions`` and ``variant_keys``
    carry per-node provenance.
    """

    n_nodes: int
    indptr: np.ndarray
    indices: np.ndarray
    accessions: tuple[str, ...]
    variant_keys: tuple[str, ...]
    features: np.ndarray | None = None
    labels: np.ndarray | None = None
    train_mask: np.ndarray | None = None
    val_mask: np.ndarray | None = None
    test_mask: np.ndarray | None = None

    @property
    def n_edges_directed(self) -> int:
        return int(self.indices.shape[0])

    @property
    def n_edges(self) -> int:
        """Undirected edge count."""
        return self.n_edges_directed // 2

    def neighbors(self, node: int) -> np.ndarray:
        return self.indices[self.indptr[node]: self.indptr[node + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def node_meta(self) -> list[tuple[str, str]]:
        return list(zip(self.accessions, self.variant_keys))


def dedupe_nodes(rows: Iterable[DatasetRow]) -> list[DatasetRow]:
    """One row per (accession, variant_key), keeping the first annotation.

    The result is sorted by (accession, variant_key): the node-id order of
    the projection built from it.
    """
    first: dict[tuple[str, str], DatasetRow] = {}
    for row in rows:
        key = (row.accession, row.variant_key)
        if key not in first:
            first[key] = row
    return [first[key] for key in sorted(first)]


def _grouped_edges(groups: dict, max_group_size: int, kind: str) -> set[tuple[int, int]]:
    edges: set[tuple[int, int]] = set()
    for value, members in groups.items():
        if len(members) < 2:
            continue
        members = sorted(members)
        if len(members) > max_group_size:
            warnings.warn(
                f"{kind} group {value!r} has {len(members)} nodes; "
                f"emitting a hub-star instead of a clique",
                stacklevel=3,
            )
            hub = members[0]
            edges.update((hub, m) for m in members[1:])
        else:
            edges.update(
                (members[i], members[j])
                for i in range(len(members))
                for j in range(i + 1, len(members))
            )
    return edges


def build_projection(
    node_rows: Sequence[DatasetRow],
    mode: str = "variant-id",
    max_group_size: int = 1024,
) -> ProjectionGraph:
    """Build the machine-learning graph from deduplicated node rows.

    Mode "variant-id" connects every pair of nodes sharing a variant key
    (a clique per key).  Mode "variant-id+accession" (alias "both")
    additionally connects every pair of nodes within one accession.
    Groups larger than ``max_group_size`` fall back to a hub-star with a
    warning, guarding against quadratic blowup.
    """
    if mode not in ("variant-id", "variant-id+accession", "both"):
        raise ValueError(f"unknown projection mode {mode!r}")
    node_rows = list(node_rows)
    keys = [(row.accession, row.variant_key) for row in node_rows]
    if len(set(keys)) != len(keys):
        raise ValueError("node rows are not deduplicated to one per (accession, variant_key)")
    order = sorted(range(len(node_rows)), key=lambda i: keys[i])
    node_rows = [node_rows[i] for i in order]

    n = len(node_rows)
    by_key: dict[str, list[int]] = {}
    by_accession: dict[str, list[int]] = {}
    for i, row in enumerate(node_rows):
        by_key.setdefault(row.variant_key, []).append(i)
        by_accession.setdefault(row.accession, []).append(i)

    edges = _grouped_edges(by_key, max_group_size, "variant-key")
    if mode in ("variant-id+accession", "both"):
        edges |= _grouped_edges(by_accession, max_group_size, "accession")

    if edges:
        pairs = np.array(sorted(edges), dtype=np.int64)
        src = np.concatenate([pairs[:, 0], pairs[:, 1]])
        dst = np.concatenate([pairs[:, 1], pairs[:, 0]])
        order_ix = np.lexsort((dst, src))
        src, dst = src[order_ix], dst[order_ix]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        indptr = np.cumsum(indptr, dtype=np.int64)
        indices = dst
    else:
        indptr = np.zeros(n + 1, dtype=np.int64)
        indices = np.zeros(0, dtype=np.int64)

    return ProjectionGraph(
        n_nodes=n,
        indptr=indptr,
        indices=indices,
        accessions=tuple(row.accession for row in node_rows),
        variant_keys=tuple(row.variant_key for row in node_rows),
    )


# -- feature encoding --------------------------------------------------------


@dataclass
class FeatureVocab:
    """Category-to-index maps plus numeric min/max stats for scaling.

    ``scope`` records which rows the vocabulary was built from ("full" or
    "train"); index maps are dense 0..k-1 over sorted distinct values.
    """

    categorical: dict[str, dict[str, int]] = field(default_factory=dict)
    numeric: dict[str, tuple[float, float]] = field(default_factory=dict)
    scope: str = "full"

    @property
    def features(self) -> tuple[str, ...]:
        return tuple(self.categorical)

    def onehot_dim(self) -> int:
        return sum(len(m) for m in self.categorical.values()) + len(self.numeric)

    def save(self, sink) -> None:
        sink.write(f"#scope\t{self.scope}\n")
        for name, (lo, hi) in self.numeric.items():
            sink.write(f"#numeric\t{name}\t{lo!r}\t{hi!r}\n")
        for name, mapping in self.categorical.items():
            for value, index in sorted(mapping.items(), key=lambda kv: kv[1]):
                if "\t" in value or "\n" in value:
                    raise ValueError(f"vocabulary value contains tab/newline: {value!r}")
                sink.write(f"{name}\t{value}\t{index}\n")

    @classmethod
    def load(cls, stream) -> "FeatureVocab":
        vocab = cls(scope="full")
        for line in stream:
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if parts[0] == "#scope":
                vocab.scope = parts[1]
            elif parts[0] == "#numeric":
                vocab.numeric[parts[1]] = (float(parts[2]), float(parts[3]))
            else:
                name, value, index = parts[0], parts[1], int(parts[2])
                vocab.categorical.setdefault(name, {})[value] = index
        return vocab


def build_vocab(
    rows: Sequence[DatasetRow], include_accession: bool = True, scope: str = "full"
) -> FeatureVocab:
    names = [f for f in CATEGORICAL_FEATURES if include_accession or f != "accession"]
    categorical = {}
    for name in names:
        values = sorted({getattr(row, name) for row in rows})
        categorical[name] = {v: i for i, v in enumerate(values)}
    numeric = {}
    for name in NUMERIC_FEATURES:
        values = [getattr(row, name) for row in rows if getattr(row, name) is not None]
        if values:
            numeric[name] = (float(min(values)), float(max(values)))
        else:
            numeric[name] = (0.0, 0.0)
    return FeatureVocab(categorical=categorical, numeric=numeric, scope=scope)


def encode_features(
    rows: Sequence[DatasetRow], vocab: FeatureVocab, scheme: str = "onehot"
) -> np.ndarray:
    """Encode rows into a float64 feature matrix.

    "onehot": one block per categorical feature (unknown values encode as
    an all-zero block) followed by min-max-scaled pos and qual in [0, 1]
    (missing qual encodes as 0).  "index": one integer code per categorical
    feature with 0 reserved for unknown (known values shift to 1..k),
    followed by the same scaled numerics.
    """
    if scheme not in ("onehot", "index"):
        raise ValueError(f"unknown encoding scheme {scheme!r}")
    n = len(rows)
    names = vocab.features
    if scheme == "onehot":
        dim = vocab.onehot_dim()
        out = np.zeros((n, dim), dtype=np.float64)
        offset = 0
        for name in names:
            mapping = vocab.categorical[name]
            for i, row in enumerate(rows):
                index = mapping.get(getattr(row, name))
                if index is not None:
                    out[i, offset + index] = 1.0
            offset += len(mapping)
    else:
        dim = len(names) + len(vocab.numeric)
        out = np.zeros((n, dim), dtype=np.float64)
        for j, name in enumerate(names):
            mapping = vocab.categorical[name]
            for i, row in enumerate(rows):
                index = mapping.get(getattr(row, name))
                out[i, j] = 0.0 if index is None else float(index + 1)
        offset = len(names)
    for k, name in enumerate(vocab.numeric):
        lo, hi = vocab.numeric[name]
        span = hi - lo
        for i, row in enumerate(rows):
            value = getattr(row, name)
            if value is None:
                out[i, offset + k] = 0.0
            elif span == 0.0:
                out[i, offset + k] = 0.0
            else:
                out[i, offset + k] = (float(value) - lo) / span
    return out


class FeatureEncoder(BaseEstimator, TransformerMixin):
    """Vocabulary-backed row encoder with the fit/transform contract.

    Parameters mirror :func:`encode_features`; ``fit`` builds the vocabulary
    from the given rows (set ``scope="train"`` in metadata by fitting on
    training-visible rows only).
    """

    def __init__(self, scheme: str = "onehot", include_accession: bool = True, scope: str = "full"):
        self.scheme = scheme
        self.include_accession = include_accession
        self.scope = scope

    def fit(self, rows: Sequence[DatasetRow], y=None):
        if self.scheme not in ("onehot", "index"):
            raise ValueError(f"unknown encoding scheme {self.scheme!r}")
        self.vocab_ = build_vocab(rows, include_accession=self.include_accession, scope=self.scope)
        self.n_features_out_ = (
            self.vocab_.onehot_dim()
            if self.scheme == "onehot"
            else len(self.vocab_.features) + len(self.vocab_.numeric)
        )
        return self

    def transform(self, rows: Sequence[DatasetRow]) -> np.ndarray:
        require_fitted(self, "vocab_")
        return encode_features(rows, self.vocab_, scheme=self.scheme)


def assign_labels(rows: Sequence[DatasetRow]) -> np.ndarray:
    """CADD category per row; -1 marks rows without a raw score (unlabeled)."""
    labels = np.full(len(rows), -1, dtype=np.int64)
    for i, row in enumerate(rows):
        if row.raw_score is not None:
            labels[i] = bin_cadd_score(row.raw_score)
    return labels


def split_masks(
    labels: np.ndarray,
    ratios: tuple[float, float, float] = (0.6, 0.2, 0.2),
    seed: int = 0,
    stratified: bool = False,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Partition labeled nodes into train/val/test boolean masks.

    Deterministic for a fixed seed.  Stratified mode preserves per-class
    proportions to within one node; classes with fewer than 3 labeled nodes
    fall back to the global shuffle pool with a warning.  Unlabeled nodes
    (label -1) belong to no mask.
    """
    labels = np.asarray(labels)
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios must sum to 1, got {ratios}")
    rng = np.random.default_rng(seed)
    n = labels.shape[0]
    train = np.zeros(n, dtype=bool)
    val = np.zeros(n, dtype=bool)
    test = np.zeros(n, dtype=bool)

    def allocate(indices: np.ndarray) -> None:
        m = len(indices)
        n_train = int(round(ratios[0] * m))
        n_val = int(round(ratios[1] * m))
        n_train = min(n_train, m)
        n_val = min(n_val, m - n_train)
        train[indices[:n_train]] = True
        val[indices[n_train: n_train + n_val]] = True
        test[indices[n_train + n_val:]] = True

    labeled = np.flatnonzero(labels >= 0)
    if not stratified:
        allocate(rng.permutation(labeled))
        return train, val, test

    pool: list[np.ndarray] = []
    for cls in np.unique(labels[labeled]):
        members = labeled[labels[labeled] == cls]
        if len(members) < 3:
            warnings.warn(
                f"class {cls} has only {len(members)} labeled nodes; "
                "assigning them via the global shuffle",
                stacklevel=2,
            )
            pool.append(members)
        else:
            allocate(rng.permutation(members))
    if pool:
        allocate(rng.permutation(np.concatenate(pool)))
    return train, val, test


# -- container round-trip ------------------------------------------------------


def export_graph(graph: ProjectionGraph, path: str | Path) -> None:
    """Write the graph container: magic, JSON header line, then raw blocks.

    Blocks are little-endian and appear in fixed order: indptr and indices
    (int64), labels (int64, optional), the three masks (uint8, optional),
    features (float64 row-major, optional), and the UTF-8 node-meta TSV.
    Output bytes are a pure function of the graph.
    """
    meta_blob = "".join(
        f"{acc}\t{key}\n" for acc, key in zip(graph.accessions, graph.variant_keys)
    ).encode("utf-8")
    header = {
        "version": 1,
        "n_nodes": graph.n_nodes,
        "nnz": int(graph.indices.shape[0]),
        "feature_dim": None if graph.features is None else int(graph.features.shape[1]),
        "has_labels": graph.labels is not None,
        "has_masks": graph.train_mask is not None,
        "meta_bytes": len(meta_blob),
    }
    with open(path, "wb") as sink:
        sink.write(_GRAPH_MAGIC)
        sink.write(json.dumps(header, sort_keys=True).encode("ascii") + b"\n")
        sink.write(np.ascontiguousarray(graph.indptr, dtype="<i8").tobytes())
        sink.write(np.ascontiguousarray(graph.indices, dtype="<i8").tobytes())
        if graph.labels is not None:
            sink.write(np.ascontiguousarray(graph.labels, dtype="<i8").tobytes())
        if graph.train_mask is not None:
            for mask in (graph.train_mask, graph.val_mask, graph.test_mask):
                sink.write(np.ascontiguousarray(mask, dtype=np.uint8).tobytes())
        if graph.features is not None:
            sink.write(np.ascontiguousarray(graph.features, dtype="<f8").tobytes())
        sink.write(meta_blob)


def import_graph(path: str | Path) -> ProjectionGraph:
    """Read a graph container written by :func:`export_graph`."""
    with open(path, "rb") as source:
        magic = source.read(len(_GRAPH_MAGIC))
        if magic != _GRAPH_MAGIC:
            raise GraphFormatError(f"bad magic {magic!r}; not a graph container")
        header_line = source.readline()
        try:
            header = json.loads(header_line.decode("ascii"))
            version = header["version"]
            n = int(header["n_nodes"])
            nnz = int(header["nnz"])
            feature_dim = header["feature_dim"]
            has_labels = bool(header["has_labels"])
            has_masks = bool(header["has_masks"])
            meta_bytes = int(header["meta_bytes"])
        except (KeyError, ValueError, UnicodeDecodeError) as exc:
            raise GraphFormatError(f"corrupted graph header: {exc}") from exc
        if version != 1:
            raise GraphFormatError(f"unsupported container version {version}")

        def block(count: int, dtype: str) -> np.ndarray:
            nbytes = count * np.dtype(dtype).itemsize
            data = source.read(nbytes)
            if len(data) != nbytes:
                raise GraphFormatError("truncated graph container")
            return np.frombuffer(data, dtype=dtype).copy()

        indptr = block(n + 1, "<i8")
        indices = block(nnz, "<i8")
        labels = block(n, "<i8") if has_labels else None
        masks = [block(n, "u1").astype(bool) for _ in range(3)] if has_masks else [None] * 3
        features = None
        if feature_dim is not None:
            features = block(n * int(feature_dim), "<f8").reshape(n, int(feature_dim))
        meta_blob = source.read(meta_bytes)
        if len(meta_blob) != meta_bytes or source.read(1):
            raise GraphFormatError("graph container has wrong length")
    accessions: list[str] = []
    variant_keys: list[str] = []
    for line in meta_blob.decode("utf-8").splitlines():
        acc, _, key = line.partition("\t")
        accessions.append(acc)
        variant_keys.append(key)
    if len(accessions) != n:
        raise GraphFormatError(f"node meta has {len(accessions)} rows for {n} nodes")
    return ProjectionGraph(
        n_nodes=n,
        indptr=indptr,
        indices=indices,
        accessions=tuple(accessions),
        variant_keys=tuple(variant_keys),
        features=features,
        labels=labels,
        train_mask=masks[0],
        val_mask=masks[1],
        test_mask=masks[2],
    )
