"""Mini-batch training and evaluation of the CNN classifier."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import EmptyDataset, UnmappedLabel
from ..rng import as_generator, derive_seed
from ..timeseries import Dataset, canonicalize_length
from .model import CnnModel, build_reference
from .optim import AdamState, adam_step


@dataclass(frozen=True)
class TrainConfig:
    batch_size: int = 20
    epochs: int = 20
    learning_rate: float = 0.001
    decay: float = 1e-6
    train_fraction: float = 0.8
    input_len: int = 91
    n_classes: int = 3
    dropout: float = 0.3
    pooling: str = "max"
    label_map: Optional[dict] = None
    seed: int = 0

    def __post_init__(self):
        for name in ("batch_size", "epochs", "input_len", "n_classes"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if not self.learning_rate > 0 or self.decay < 0:
            raise ValueError("learning_rate must be positive and decay non-negative")
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must lie in (0, 1)")


@dataclass
class EpochStats:
    epoch: int
    loss: float
    train_acc: float
    val_acc: Optional[float]
    val_loss: Optional[float]
    lr: float


@dataclass
class TrainResult:
    model: CnnModel
    history: list
    train_index: np.ndarray
    val_index: np.ndarray


@dataclass
class Evaluation:
    accuracy: float
    confusion: np.ndarray  # rows: true class, columns: predicted class
    predictions: np.ndarray
    probabilities: np.ndarray


def prepare(dataset: Dataset, input_len: int, n_classes: int, label_map=None):
    """Stack series (zero-padded or truncated to ``input_len``) and mapped labels."""
    if len(dataset) == 0:
        raise EmptyDataset("dataset is empty")
    x = np.stack([canonicalize_length(it.series, input_len) for it in dataset.items])
    labels = []
    for it in dataset.items:
        y = it.label if label_map is None else label_map.get(it.label)
        if y is None or not 0 <= y < n_classes:
            raise UnmappedLabel(f"label {it.label} of item {it.id!r} does not map into 0..{n_classes - 1}")
        labels.append(y)
    return x, np.array(labels, dtype=np.int64)


def stratified_split(labels, train_fraction, rng):
    """Per-class shuffled split; each class keeps ``round(train_fraction * count)`` (>= 1) for training."""
    gen = as_generator(rng)
    train, val = [], []
    for label in np.unique(labels):
        idx = np.flatnonzero(labels == label)
        idx = gen.permutation(idx)
        n_train = max(1, int(round(train_fraction * idx.size)))
        train.append(idx[:n_train])
        val.append(idx[n_train:])
    return np.sort(np.concatenate(train)), np.sort(np.concatenate(val))


def _accuracy_loss(model, x, y):
    if len(y) == 0:
        return None, None
    p = model.predict(x)
    acc = float(np.mean(np.argmax(p, axis=1) == y))
    loss = float(-np.mean(np.log(np.clip(p[np.arange(len(y)), y], 1e-300, None))))
    return acc, loss


def train(dataset: Dataset, cfg: TrainConfig = TrainConfig(), model: Optional[CnnModel] = None, log=None) -> TrainResult:
    """Fit the reference CNN on a stratified ``train_fraction`` split of ``dataset``.

    All randomness (split, initialization, shuffling, dropout) is drawn from
    independent streams derived from ``cfg.seed``, so a given dataset and
    config always yield the same weights.
    """
    x, y = prepare(dataset, cfg.input_len, cfg.n_classes, cfg.label_map)
    train_idx, val_idx = stratified_split(y, cfg.train_fraction, derive_seed(cfg.seed, "split"))
    if model is None:
        model = build_reference(
            cfg.input_len, cfg.n_classes, as_generator(derive_seed(cfg.seed, "init")), cfg.dropout, cfg.pooling
        )
    shuffle_rng = as_generator(derive_seed(cfg.seed, "shuffle"))
    dropout_rng = as_generator(derive_seed(cfg.seed, "dropout"))
    params = [p for _, _, p in model.parameters()]
    state = AdamState.for_params(params)

    history = []
    for epoch in range(1, cfg.epochs + 1):
        order = train_idx[shuffle_rng.permutation(train_idx.size)]
        losses = []
        lr = cfg.learning_rate
        for start in range(0, order.size, cfg.batch_size):
            batch = order[start : start + cfg.batch_size]
            loss, grads = model.loss_and_grads(x[batch], y[batch], train=True, rng=dropout_rng)
            lr = adam_step(state, params, grads, cfg.learning_rate, cfg.decay)
            losses.append(loss)
        train_acc, _ = _accuracy_loss(model, x[train_idx], y[train_idx])
        val_acc, val_loss = _accuracy_loss(model, x[val_idx], y[val_idx])
        stats = EpochStats(epoch, float(np.mean(losses)), train_acc, val_acc, val_loss, lr)
        history.append(stats)
        if log is not None:
            log(stats)
    return TrainResult(model, history, train_idx, val_idx)


def evaluate(model: CnnModel, dataset: Dataset, label_map=None) -> Evaluation:
    """Accuracy and confusion matrix (true class by row) of ``model`` on ``dataset``."""
    x, y = prepare(dataset, model.input_len, model.n_classes, label_map)
    p = model.predict(x)
    pred = np.argmax(p, axis=1)
    confusion = np.zeros((model.n_classes, model.n_classes), dtype=np.int64)
    np.add.at(confusion, (y, pred), 1)
    return Evaluation(float(np.mean(pred == y)), confusion, pred, p)
