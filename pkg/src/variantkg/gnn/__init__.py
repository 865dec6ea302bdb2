"""Dense full-batch GNN engine: models, loss, optimizer, and grid search."""

from .adam import Adam
from .grid import (
    DEFAULT_EPOCHS_BY_LR,
    GridCell,
    GridOutcome,
    format_grid_tables,
    grid_search,
    grid_to_csv,
)
from .models import (
    BaseGNNClassifier,
    GCNClassifier,
    GraphSAGEClassifier,
    Metrics,
    MODEL_KINDS,
    TrainingDiverged,
    gcn_backward,
    gcn_forward,
    init_gcn_params,
    init_sage_params,
    load_model,
    make_classifier,
    sage_backward,
    sage_forward,
    save_model,
)
from .ops import accuracy, confusion_matrix, relu, softmax, softmax_cross_entropy
from .sparse import SparseOperator, mean_neighbors, normalized_adjacency

__all__ = [
    "Adam",
    "BaseGNNClassifier",
    "DEFAULT_EPOCHS_BY_LR",
    "GCNClassifier",
    "GraphSAGEClassifier",
    "GridCell",
    "GridOutcome",
    "MODEL_KINDS",
    "Metrics",
    "SparseOperator",
    "TrainingDiverged",
    "accuracy",
    "confusion_matrix",
    "format_grid_tables",
    "gcn_backward",
    "gcn_forward",
    "grid_search",
    "grid_to_csv",
    "init_gcn_params",
    "init_sage_params",
    "load_model",
    "make_classifier",
    "mean_neighbors",
    "normalized_adjacency",
    "relu",
    "sage_backward",
    "sage_forward",
    "save_model",
    "softmax",
    "softmax_cross_entropy",
]
