"""GCN and GraphSAGE-mean node classifiers as fit/predict estimators.

Everything runs full-batch in float64 on CSR operators.  Forward and
backward passes are written out explicitly so gradients can be checked
against finite differences; training is deterministic for a fixed seed.

Parameter layout (flat lists, layer-major):
  GCN:  [W0, b0, W1, b1, ...]           layer l: H' = relu(A^ H Wl + bl)
  SAGE: [Ws0, Wn0, b0, Ws1, Wn1, b1, ...]  H' = relu(H Ws + mean(N) Wn + b)
The final layer of either model is linear (no ReLU).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .._validation import check_graph_for_training, require_fitted
from ..model import NUM_CADD_CATEGORIES
from .adam import Adam
from .ops import accuracy, confusion_matrix, relu, softmax, softmax_cross_entropy
from .sparse import SparseOperator, mean_neighbors, normalized_adjacency

_MODEL_MAGIC = b"VKGM1\n"


class TrainingDiverged(RuntimeError):
    """Raised when the training loss becomes non-finite."""


@dataclass
class Metrics:
    """Evaluation result on one mask: accuracy, confusion counts, mean loss.

    Confusion rows index the true class, columns the predicted class; the
    entries sum to the mask size.
    """

    accuracy: float
    confusion: np.ndarray
    loss: float


def _glorot(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


def _layer_dims(in_dim: int, hidden_dim: int, out_dim: int, depth: int) -> list[tuple[int, int]]:
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    dims = []
    current = in_dim
    for layer in range(depth):
        width = out_dim if layer == depth - 1 else hidden_dim
        dims.append((current, width))
        current = width
    return dims


def init_gcn_params(in_dim, hidden_dim, out_dim, depth, rng, init="glorot"):
    params: list[np.ndarray] = []
    for fan_in, fan_out in _layer_dims(in_dim, hidden_dim, out_dim, depth):
        if init == "ones":
            params.append(np.ones((fan_in, fan_out)))
            params.append(np.ones(fan_out))
        else:
            params.append(_glorot(rng, fan_in, fan_out))
            params.append(np.zeros(fan_out))
    return params


def gcn_forward(params, operator: SparseOperator, features: np.ndarray):
    """Stacked graph convolutions: H_{l+1} = relu(A^ H_l W_l + b_l).

    The final layer omits the ReLU.  Returns (logits, caches); each cache
    holds (P, Z) with P = A^ @ H_in and Z the pre-activation.
    """
    depth = len(params) // 2
    hidden = np.asarray(features, dtype=np.float64)
    caches = []
    for layer in range(depth):
        weight, bias = params[2 * layer], params[2 * layer + 1]
        propagated = operator.matmul(hidden)
        pre = propagated @ weight + bias
        caches.append((propagated, pre))
        hidden = pre if layer == depth - 1 else relu(pre)
    return hidden, caches


def gcn_backward(params, operator: SparseOperator, caches, grad_logits):
    """Gradients of every weight and bias for :func:`gcn_forward`."""
    depth = len(params) // 2
    grads: list[np.ndarray | None] = [None] * len(params)
    grad_pre = grad_logits
    for layer in range(depth - 1, -1, -1):
        propagated, pre = caches[layer]
        if layer != depth - 1:
            grad_pre = grad_pre * (pre > 0)
        weight = params[2 * layer]
        grads[2 * layer] = propagated.T @ grad_pre
        grads[2 * layer + 1] = grad_pre.sum(axis=0)
        if layer > 0:
            # d loss / d H_in = A^.T @ (grad_pre W.T); A^ is symmetric
            grad_pre = operator.matmul(grad_pre @ weight.T)
    return grads


def init_sage_params(in_dim, hidden_dim, out_dim, depth, rng, init="glorot"):
    params: list[np.ndarray] = []
    for fan_in, fan_out in _layer_dims(in_dim, hidden_dim, out_dim, depth):
        if init == "ones":
            params.append(np.ones((fan_in, fan_out)))
            params.append(np.ones((fan_in, fan_out)))
            params.append(np.ones(fan_out))
        else:
            params.append(_glorot(rng, fan_in, fan_out))
            params.append(_glorot(rng, fan_in, fan_out))
            params.append(np.zeros(fan_out))
    return params


def sage_forward(params, mean_op: SparseOperator, features: np.ndarray):
    """Mean-aggregation layers: H' = relu(H Ws + mean_neighbors(H) Wn + b).

    Isolated nodes contribute a zero neighbor mean, so only the self path
    feeds them.  The final layer omits the ReLU.
    """
    depth = len(params) // 3
    hidden = np.asarray(features, dtype=np.float64)
    caches = []
    for layer in range(depth):
        w_self, w_neigh, bias = params[3 * layer: 3 * layer + 3]
        mean = mean_op.matmul(hidden)
        pre = hidden @ w_self + mean @ w_neigh + bias
        caches.append((hidden, mean, pre))
        hidden = pre if layer == depth - 1 else relu(pre)
    return hidden, caches


def sage_backward(params, mean_op: SparseOperator, caches, grad_logits):
    depth = len(params) // 3
    grads: list[np.ndarray | None] = [None] * len(params)
    grad_pre = grad_logits
    for layer in range(depth - 1, -1, -1):
        hidden_in, mean, pre = caches[layer]
        if layer != depth - 1:
            grad_pre = grad_pre * (pre > 0)
        w_self, w_neigh = params[3 * layer], params[3 * layer + 1]
        grads[3 * layer] = hidden_in.T @ grad_pre
        grads[3 * layer + 1] = mean.T @ grad_pre
        grads[3 * layer + 2] = grad_pre.sum(axis=0)
        if layer > 0:
            grad_pre = grad_pre @ w_self.T + mean_op.rmatmul(grad_pre @ w_neigh.T)
    return grads


def _resolve_mask(graph, mask) -> np.ndarray:
    if isinstance(mask, str):
        resolved = {
            "train": graph.train_mask,
            "val": graph.val_mask,
            "test": graph.test_mask,
        }.get(mask)
        if resolved is None:
            raise ValueError(f"graph has no {mask!r} mask")
        return resolved
    return np.asarray(mask, dtype=bool)


class BaseGNNClassifier(BaseEstimator, ClassifierMixin):
    """Shared training loop: forward, masked loss, backprop, Adam step.

    Per-epoch history records (epoch, train loss, train accuracy, val
    accuracy); the parameters with the best validation accuracy are the
    ones kept after fit.  ``hidden_dim`` is the width of each hidden graph
    layer and ``depth`` the number of graph layers, so the width/depth
    reading of a "hidden layers" grid is a configuration choice.
    """

    _kind = ""

    def __init__(
        self,
        hidden_dim: int = 16,
        depth: int = 2,
        learning_rate: float = 0.01,
        epochs: int = 1000,
        seed: int = 0,
        init: str = "glorot",
        n_classes: int = NUM_CADD_CATEGORIES,
        log_every: int = 0,
    ):
        self.hidden_dim = hidden_dim
        self.depth = depth
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.seed = seed
        self.init = init
        self.n_classes = n_classes
        self.log_every = log_every

    # subclasses bind these to the concrete architecture
    def _init_params(self, in_dim, rng):
        raise NotImplementedError

    def _operator(self, graph) -> SparseOperator:
        raise NotImplementedError

    def _forward(self, params, operator, features):
        raise NotImplementedError

    def _backward(self, params, operator, caches, grad_logits):
        raise NotImplementedError

    def fit(self, graph, y=None):
        check_graph_for_training(graph)
        labels = np.asarray(graph.labels if y is None else y, dtype=np.int64)
        features = graph.features
        train_mask = graph.train_mask
        val_mask = graph.val_mask
        track_val = val_mask is not None and bool(val_mask.any())

        rng = np.random.default_rng(self.seed)
        params = self._init_params(features.shape[1], rng)
        operator = self._operator(graph)
        optimizer = Adam(params, lr=self.learning_rate)

        history: list[tuple[int, float, float, float]] = []
        best_val = -1.0
        best_params = None
        best_epoch = -1
        for epoch in range(1, self.epochs + 1):
            logits, caches = self._forward(params, operator, features)
            loss, grad_logits = softmax_cross_entropy(logits, labels, train_mask)
            if not np.isfinite(loss):
                raise TrainingDiverged(f"non-finite training loss at epoch {epoch}")
            train_acc = accuracy(logits, labels, train_mask)
            val_acc = accuracy(logits, labels, val_mask) if track_val else float("nan")
            history.append((epoch, loss, train_acc, val_acc))
            if self.log_every and epoch % self.log_every == 0:
                print(
                    f"[{self._kind}] epoch {epoch}: loss={loss:.6f} "
                    f"train_acc={train_acc:.4f} val_acc={val_acc:.4f}"
                )
            if track_val and val_acc > best_val:
                best_val = val_acc
                best_params = [p.copy() for p in params]
                best_epoch = epoch
            grads = self._backward(params, operator, caches, grad_logits)
            optimizer.step(params, grads)

        self.params_ = best_params if best_params is not None else params
        self.history_ = history
        self.best_epoch_ = best_epoch
        self.best_val_accuracy_ = best_val if track_val else float("nan")
        self.n_features_in_ = features.shape[1]
        return self

    def decision_function(self, graph) -> np.ndarray:
        require_fitted(self, "params_")
        operator = self._operator(graph)
        logits, _ = self._forward(self.params_, operator, graph.features)
        return logits

    def predict_proba(self, graph) -> np.ndarray:
        return softmax(self.decision_function(graph))

    def predict(self, graph) -> np.ndarray:
        return self.decision_function(graph).argmax(axis=1)

    def score(self, graph, y=None, mask="test") -> float:
        labels = np.asarray(graph.labels if y is None else y, dtype=np.int64)
        return accuracy(self.decision_function(graph), labels, _resolve_mask(graph, mask))

    def evaluate(self, graph, mask) -> Metrics:
        """Accuracy, confusion matrix, and loss on one mask."""
        labels = np.asarray(graph.labels, dtype=np.int64)
        mask = _resolve_mask(graph, mask)
        logits = self.decision_function(graph)
        loss, _ = softmax_cross_entropy(logits, labels, mask)
        return Metrics(
            accuracy=accuracy(logits, labels, mask),
            confusion=confusion_matrix(logits, labels, mask, self.n_classes),
            loss=loss,
        )


class GCNClassifier(BaseGNNClassifier):
    """Graph convolutional network over the normalized adjacency."""

    _kind = "gcn"

    def _init_params(self, in_dim, rng):
        return init_gcn_params(in_dim, self.hidden_dim, self.n_classes, self.depth, rng, self.init)

    def _operator(self, graph):
        return normalized_adjacency(graph)

    def _forward(self, params, operator, features):
        return gcn_forward(params, operator, features)

    def _backward(self, params, operator, caches, grad_logits):
        return gcn_backward(params, operator, caches, grad_logits)


class GraphSAGEClassifier(BaseGNNClassifier):
    """GraphSAGE with mean aggregation and a self/neighbor weight split."""

    _kind = "sage"

    def _init_params(self, in_dim, rng):
        return init_sage_params(in_dim, self.hidden_dim, self.n_classes, self.depth, rng, self.init)

    def _operator(self, graph):
        return mean_neighbors(graph)

    def _forward(self, params, operator, features):
        return sage_forward(params, operator, features)

    def _backward(self, params, operator, caches, grad_logits):
        return sage_backward(params, operator, caches, grad_logits)


MODEL_KINDS = {"gcn": GCNClassifier, "sage": GraphSAGEClassifier}


def make_classifier(kind: str, **params) -> BaseGNNClassifier:
    if kind not in MODEL_KINDS:
        raise ValueError(f"unknown model kind {kind!r}; expected one of {sorted(MODEL_KINDS)}")
    return MODEL_KINDS[kind](**params)


def save_model(estimator: BaseGNNClassifier, path: str | Path) -> None:
    """Write a fitted model: magic, JSON header, float64-LE parameter blocks."""
    require_fitted(estimator, "params_")
    header = {
        "version": 1,
        "kind": estimator._kind,
        "params": estimator.get_params(),
        "shapes": [list(p.shape) for p in estimator.params_],
        "n_features_in": int(estimator.n_features_in_),
    }
    with open(path, "wb") as sink:
        sink.write(_MODEL_MAGIC)
        sink.write(json.dumps(header, sort_keys=True).encode("ascii") + b"\n")
        for block in estimator.params_:
            sink.write(np.ascontiguousarray(block, dtype="<f8").tobytes())


def load_model(path: str | Path) -> BaseGNNClassifier:
    with open(path, "rb") as source:
        magic = source.read(len(_MODEL_MAGIC))
        if magic != _MODEL_MAGIC:
            raise ValueError(f"bad magic {magic!r}; not a model checkpoint")
        header = json.loads(source.readline().decode("ascii"))
        if header.get("version") != 1:
            raise ValueError(f"unsupported checkpoint version {header.get('version')}")
        estimator = make_classifier(header["kind"], **header["params"])
        params = []
        for shape in header["shapes"]:
            count = int(np.prod(shape)) if shape else 1
            data = source.read(count * 8)
            if len(data) != count * 8:
                raise ValueError("truncated model checkpoint")
            params.append(np.frombuffer(data, dtype="<f8").reshape(shape).copy())
    estimator.params_ = params
    estimator.history_ = []
    estimator.best_epoch_ = -1
    estimator.best_val_accuracy_ = float("nan")
    estimator.n_features_in_ = header["n_features_in"]
    return estimator
