"""Input validation helpers shared by the estimator-facing modules."""

from __future__ import annotations

import numpy as np
from sklearn.exceptions import NotFittedError


def require_fitted(estimator, attribute: str) -> None:
    if not hasattr(estimator, attribute):
        raise NotFittedError(
            f"{type(estimator).__name__} is not fitted yet; call fit() first"
        )


def check_finite(array: np.ndarray, name: str) -> np.ndarray:
    array = np.asarray(array, dtype=np.float64)
    if not np.all(np.isfinite(array)):
        raise ValueError(f"{name} contains non-finite values")
    return array


def check_graph_for_training(graph, require_features: bool = True, require_masks: bool = True):
    """Validate a projection graph before it enters a model."""
    if require_features:
        if graph.features is None:
            raise ValueError("graph has no feature matrix; encode features first")
        if graph.features.shape[0] != graph.n_nodes:
            raise ValueError(
                f"feature matrix has {graph.features.shape[0]} rows for {graph.n_nodes} nodes"
            )
        check_finite(graph.features, "features")
    if graph.labels is None:
        raise ValueError("graph has no labels; assign labels first")
    if require_masks:
        for name in ("train_mask", "val_mask", "test_mask"):
            if getattr(graph, name) is None:
                raise ValueError(f"graph is missing {name}; split masks first")
        if not graph.train_mask.any():
            raise ValueError("train mask is empty")
    return graph
