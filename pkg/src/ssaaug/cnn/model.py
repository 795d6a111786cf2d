"""Sequential 1-D CNN classifier with softmax cross-entropy output."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import ShapeMismatch
from .layers import LAYER_TYPES, AvgPool1D, Conv1D, Dense, Dropout, Flatten, MaxPool1D, ReLU, softmax

FORMAT_NAME = "ssaaug-cnn1d"
FORMAT_VERSION = 1


class CnnModel:
    """A stack of layers ending in a dense layer whose outputs go through softmax.

    ``forward`` accepts a single series of length ``input_len`` or a batch of
    shape ``(B, input_len)`` and returns class probabilities.
    """

    def __init__(self, layers, input_len, n_classes):
        self.layers = list(layers)
        self.input_len = int(input_len)
        self.n_classes = int(n_classes)
        self.metadata = {}
        shape = (1, self.input_len)
        for layer in self.layers:
            shape = layer.output_shape(shape)
        if shape != (self.n_classes,) or not isinstance(self.layers[-1], Dense):
            raise ShapeMismatch(f"network must end in a dense layer with {self.n_classes} outputs, got {shape}")

    @property
    def param_count(self) -> int:
        return sum(layer.n_params for layer in self.layers)

    def parameters(self):
        """``(layer_index, name, array)`` for every trainable tensor, in a fixed order."""
        return [(i, name, arr) for i, layer in enumerate(self.layers) for name, arr in sorted(layer.params.items())]

    def _as_batch(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim == 1:
            x = x[None, :]
        if x.ndim != 2 or x.shape[1] != self.input_len:
            raise ShapeMismatch(f"expected input length {self.input_len}, got shape {x.shape}")
        return x[:, None, :]

    def logits(self, x, train=False, rng=None):
        h = self._as_batch(x)
        for layer in self.layers:
            h = layer.forward(h, train=train, rng=rng)
        return h

    def forward(self, x, train=False, rng=None):
        x = np.asarray(x, dtype=np.float64)
        probs = softmax(self.logits(x, train=train, rng=rng))
        return probs[0] if x.ndim == 1 else probs

    def predict(self, x, batch_size=256):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim == 1:
            return self.forward(x)
        parts = [self.forward(x[i : i + batch_size]) for i in range(0, len(x), batch_size)]
        return np.concatenate(parts) if parts else np.zeros((0, self.n_classes))

    def loss_and_grads(self, x, labels, train=False, rng=None):
        """Mean softmax cross-entropy over the batch and its exact gradients.

        Gradients are left in each layer's ``grads`` and also returned in the
        order of :meth:`parameters`.
        """
        labels = np.atleast_1d(np.asarray(labels, dtype=np.int64))
        z = self.logits(x, train=train, rng=rng)
        if labels.shape[0] != z.shape[0]:
            raise ShapeMismatch("one label per input is required")
        if labels.min() < 0 or labels.max() >= self.n_classes:
            raise ShapeMismatch(f"labels must lie in [0, {self.n_classes - 1}]")
        b = z.shape[0]
        shifted = z - z.max(axis=1, keepdims=True)
        log_p = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
        loss = -log_p[np.arange(b), labels].mean()
        dz = np.exp(log_p)
        dz[np.arange(b), labels] -= 1.0
        dz /= b
        for layer in reversed(self.layers):
            dz = layer.backward(dz)
        return float(loss), [self.layers[i].grads[name] for i, name, _ in self.parameters()]

    # --- persistence ------------------------------------------------------------------

    def to_dict(self) -> dict:
        doc = {
            "format": FORMAT_NAME,
            "version": FORMAT_VERSION,
            "input_len": self.input_len,
            "n_classes": self.n_classes,
            "param_count": self.param_count,
            "layers": [
                {
                    "type": layer.kind,
                    "config": layer.config(),
                    "weights": {
                        name: {"shape": list(arr.shape), "data": arr.ravel().tolist()}
                        for name, arr in sorted(layer.params.items())
                    },
                }
                for layer in self.layers
            ],
        }
        if self.metadata:
            doc["metadata"] = self.metadata
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "CnnModel":
        if doc.get("format") != FORMAT_NAME or doc.get("version") != FORMAT_VERSION:
            raise ValueError(f"not a {FORMAT_NAME} v{FORMAT_VERSION} model document")
        layers = []
        for spec in doc["layers"]:
            layer = LAYER_TYPES[spec["type"]](**spec["config"])
            for name, w in spec["weights"].items():
                layer.params[name] = np.array(w["data"], dtype=np.float64).reshape(w["shape"])
            layers.append(layer)
        model = cls(layers, doc["input_len"], doc["n_classes"])
        model.metadata = dict(doc.get("metadata", {}))
        return model

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()) + "\n")

    @classmethod
    def load(cls, path) -> "CnnModel":
        return cls.from_dict(json.loads(Path(path).read_text()))


def build_reference(input_len=91, n_classes=3, rng=None, dropout=0.3, pooling="max") -> CnnModel:
    """Three conv/pool stages, two dense/dropout stages and a softmax output.

    conv16k5 - pool2 - conv32k5 - pool2 - conv32k3 - pool2 - dense64 - dense32 - dense3,
    about 24.3k parameters at ``input_len=91``.
    """
    pool = {"max": MaxPool1D, "avg": AvgPool1D}[pooling]
    layers = []
    channels, length = 1, input_len
    for filters, kernel in ((16, 5), (32, 5), (32, 3)):
        layers += [Conv1D(channels, filters, kernel, rng), ReLU(), pool(2)]
        channels, length = filters, (length - kernel + 1) // 2
    n_flat = channels * length
    layers += [
        Flatten(),
        Dense(n_flat, 64, rng), ReLU(), Dropout(dropout),
        Dense(64, 32, rng), ReLU(), Dropout(dropout),
        Dense(32, n_classes, rng),
    ]
    return CnnModel(layers, input_len, n_classes)
