"""Numerical primitives: activations, loss, and evaluation counts."""

from __future__ import annotations

import numpy as np


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise softmax with max subtraction for stability."""
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def softmax_cross_entropy(
    logits: np.ndarray, labels: np.ndarray, mask: np.ndarray
) -> tuple[float, np.ndarray]:
    """Mean negative log-likelihood over masked rows, and its logits gradient.

    The gradient is (softmax - onehot) / |mask| on masked rows and zero
    elsewhere.  Labels outside the mask are ignored and may be -1.
    """
    mask = np.asarray(mask, dtype=bool)
    count = int(mask.sum())
    if count == 0:
        raise ValueError("mask is empty")
    labels = np.asarray(labels)
    masked_labels = labels[mask]
    if masked_labels.min() < 0 or masked_labels.max() >= logits.shape[1]:
        raise ValueError("masked labels out of class range")
    probs = softmax(logits)
    rows = np.flatnonzero(mask)
    with np.errstate(divide="ignore"):  # saturated softmax -> inf loss, caught by callers
        loss = float(-np.log(probs[rows, masked_labels]).sum() / count)
    grad = np.zeros_like(logits)
    grad[rows] = probs[rows]
    grad[rows, masked_labels] -= 1.0
    grad[rows] /= count
    return loss, grad


def accuracy(logits: np.ndarray, labels: np.ndarray, mask: np.ndarray) -> float:
    mask = np.asarray(mask, dtype=bool)
    count = int(mask.sum())
    if count == 0:
        raise ValueError("mask is empty")
    predictions = logits.argmax(axis=1)
    return float((predictions[mask] == labels[mask]).sum() / count)


def confusion_matrix(
    logits: np.ndarray, labels: np.ndarray, mask: np.ndarray, n_classes: int
) -> np.ndarray:
    """Counts indexed [true class, predicted class] over masked rows."""
    mask = np.asarray(mask, dtype=bool)
    predictions = logits.argmax(axis=1)
    out = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(out, (labels[mask], predictions[mask]), 1)
    return out
