"""Hyperparameter grid over model kind, hidden width, and learning rate.

Every cell trains to completion and reports its validation accuracy; test
accuracy is computed only for the cell with the best validation accuracy of
each model kind within one learning-rate table.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Sequence

from .models import BaseGNNClassifier, Metrics, make_classifier

DEFAULT_EPOCHS_BY_LR = {0.001: 1500, 0.01: 1000}

_DISPLAY = {"sage": "GraphSAGE", "gcn": "GCN"}


@dataclass
class GridCell:
    kind: str
    learning_rate: float
    hidden_dim: int
    epochs: int
    val_accuracy: float
    test_accuracy: float | None = None
    best: bool = False


@dataclass
class GridOutcome:
    cells: list[GridCell]
    best_models: dict[tuple[float, str], BaseGNNClassifier]
    best_test_metrics: dict[tuple[float, str], Metrics]


def grid_search(
    graph,
    hidden_grid: Sequence[int] = (2, 8, 16, 32),
    learning_rates: Sequence[float] = (0.001, 0.01),
    kinds: Sequence[str] = ("sage", "gcn"),
    depth: int = 2,
    seed: int = 0,
    epochs: int | None = None,
    epochs_by_lr: dict[float, int] | None = None,
    init: str = "glorot",
) -> GridOutcome:
    """Train every (kind, hidden, lr) cell and mark per-kind best cells.

    Epochs pair with the learning rate (1500 at 0.001, 1000 at 0.01 by
    default) unless ``epochs`` overrides them globally.  Deterministic for a
    fixed seed: reruns reproduce the table bit for bit.
    """
    pairing = dict(DEFAULT_EPOCHS_BY_LR)
    if epochs_by_lr:
        pairing.update(epochs_by_lr)
    cells: list[GridCell] = []
    best_models: dict[tuple[float, str], BaseGNNClassifier] = {}
    best_test_metrics: dict[tuple[float, str], Metrics] = {}
    for lr in learning_rates:
        cell_epochs = epochs if epochs is not None else pairing.get(lr, 1000)
        for kind in kinds:
            kind_cells: list[tuple[GridCell, BaseGNNClassifier]] = []
            for hidden in hidden_grid:
                model = make_classifier(
                    kind,
                    hidden_dim=hidden,
                    depth=depth,
                    learning_rate=lr,
                    epochs=cell_epochs,
                    seed=seed,
                    init=init,
                )
                model.fit(graph)
                cell = GridCell(
                    kind=kind,
                    learning_rate=lr,
                    hidden_dim=hidden,
                    epochs=cell_epochs,
                    val_accuracy=model.best_val_accuracy_,
                )
                kind_cells.append((cell, model))
            best_cell, best_model = max(kind_cells, key=lambda cm: cm[0].val_accuracy)
            best_cell.best = True
            metrics = best_model.evaluate(graph, "test")
            best_cell.test_accuracy = metrics.accuracy
            best_models[(lr, kind)] = best_model
            best_test_metrics[(lr, kind)] = metrics
            cells.extend(cell for cell, _ in kind_cells)
    return GridOutcome(cells=cells, best_models=best_models, best_test_metrics=best_test_metrics)


def _pct(value: float | None) -> str:
    if value is None or value != value:  # None or NaN
        return "-"
    return f"{100.0 * value:.2f}"


def format_grid_tables(cells: Sequence[GridCell]) -> str:
    """Render one table per learning rate: VAL per cell, TEST on best cells."""
    out: list[str] = []
    for lr in sorted({c.learning_rate for c in cells}):
        group = [c for c in cells if c.learning_rate == lr]
        kinds = list(dict.fromkeys(c.kind for c in group))
        epochs = group[0].epochs
        out.append(f"LR = {lr} ({epochs} epochs)")
        header = ["HL"]
        for kind in kinds:
            name = _DISPLAY.get(kind, kind)
            header += [f"{name} VAL", f"{name} TEST"]
        widths = [max(6, len(h)) for h in header]
        rows = []
        for hidden in sorted({c.hidden_dim for c in group}):
            row = [str(hidden)]
            for kind in kinds:
                cell = next(c for c in group if c.kind == kind and c.hidden_dim == hidden)
                row.append(_pct(cell.val_accuracy))
                row.append(_pct(cell.test_accuracy) if cell.best else "-")
            rows.append(row)
        for row in [header] + rows:
            out.append("  ".join(col.ljust(w) for col, w in zip(row, widths)).rstrip())
        out.append("")
    return "\n".join(out)


def grid_to_csv(cells: Sequence[GridCell], sink: IO[str]) -> None:
    sink.write("kind,learning_rate,hidden_dim,epochs,val_accuracy,test_accuracy,best\n")
    for cell in cells:
        test = "" if cell.test_accuracy is None else repr(cell.test_accuracy)
        sink.write(
            f"{cell.kind},{cell.learning_rate},{cell.hidden_dim},{cell.epochs},"
            f"{cell.val_accuracy!r},{test},{int(cell.best)}\n"
        )
