"""CSR operators used by the graph layers.

The engine keeps its own minimal sparse kernel: a CSR matrix applied to a
dense float64 matrix (and its transpose apply), enough for symmetric
normalized adjacency and row-normalized neighbor means at full-batch scale.
"""

from __future__ import annotations

import numpy as np


class SparseOperator:
    """Row-major CSR matrix with dense matmul and transpose matmul."""

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray, values: np.ndarray):
        self.n = int(n)
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.values = np.asarray(values, dtype=np.float64)
        self.rows = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))

    def matmul(self, dense: np.ndarray) -> np.ndarray:
        dense = np.asarray(dense, dtype=np.float64)
        out = np.zeros((self.n, dense.shape[1]), dtype=np.float64)
        if self.indices.size:
            np.add.at(out, self.rows, self.values[:, None] * dense[self.indices])
        return out

    def rmatmul(self, dense: np.ndarray) -> np.ndarray:
        """Transpose apply: out = op.T @ dense."""
        dense = np.asarray(dense, dtype=np.float64)
        out = np.zeros((self.n, dense.shape[1]), dtype=np.float64)
        if self.indices.size:
            np.add.at(out, self.indices, self.values[:, None] * dense[self.rows])
        return out

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=np.float64)
        out[self.rows, self.indices] = self.values
        return out


def _check_adjacency(graph) -> None:
    rows = np.repeat(np.arange(graph.n_nodes, dtype=np.int64), np.diff(graph.indptr))
    if np.any(rows == graph.indices):
        raise ValueError("adjacency contains self-loops")
    forward = set(zip(rows.tolist(), graph.indices.tolist()))
    if any((v, u) not in forward for u, v in forward):
        raise ValueError("adjacency is not symmetric")


def normalized_adjacency(graph) -> SparseOperator:
    """Symmetric normalization with self-loops: D~^(-1/2) (A + I) D~^(-1/2).

    D~ is the degree matrix of A + I, so an isolated node keeps a self-loop
    weight of exactly 1.  The result is symmetric; on a k-regular graph every
    edge entry equals 1/(k+1).
    """
    _check_adjacency(graph)
    n = graph.n_nodes
    degrees = np.diff(graph.indptr).astype(np.float64) + 1.0
    rows = np.concatenate(
        [np.repeat(np.arange(n, dtype=np.int64), np.diff(graph.indptr)), np.arange(n, dtype=np.int64)]
    )
    cols = np.concatenate([graph.indices, np.arange(n, dtype=np.int64)])
    order = np.lexsort((cols, rows))
    rows, cols = rows[order], cols[order]
    values = 1.0 / np.sqrt(degrees[rows] * degrees[cols])
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, rows + 1, 1)
    indptr = np.cumsum(indptr)
    return SparseOperator(n, indptr, cols, values)


def mean_neighbors(graph) -> SparseOperator:
    """Row-normalized adjacency: row v averages v's neighbors.

    Isolated nodes get an all-zero row, so their neighbor mean is the zero
    vector.
    """
    _check_adjacency(graph)
    degrees = np.diff(graph.indptr).astype(np.float64)
    rows = np.repeat(np.arange(graph.n_nodes, dtype=np.int64), np.diff(graph.indptr))
    values = np.zeros(graph.indices.shape[0], dtype=np.float64)
    nonzero = degrees[rows] > 0
    values[nonzero] = 1.0 / degrees[rows][nonzero]
    return SparseOperator(graph.n_nodes, graph.indptr.copy(), graph.indices.copy(), values)
