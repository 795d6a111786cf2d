"""Layers for a small 1-D CNN with hand-written backpropagation.

Activations flow as ``(batch, channels, length)`` through the convolutional
stack and ``(batch, features)`` after :class:`Flatten`.  Each layer caches
what its backward pass needs during ``forward`` and stores parameter
gradients in ``self.grads`` during ``backward``.
"""
from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


class Layer:
    kind = "layer"

    def __init__(self):
        self.params = {}
        self.grads = {}

    def forward(self, x, train=False, rng=None):
        raise NotImplementedError

    def backward(self, dout):
        raise NotImplementedError

    def config(self) -> dict:
        return {}

    def output_shape(self, shape):
        return shape

    @property
    def n_params(self) -> int:
        return sum(p.size for p in self.params.values())


def _he_uniform(rng, shape, fan_in):
    limit = np.sqrt(6.0 / fan_in)
    return rng.uniform(-limit, limit, size=shape)


class Conv1D(Layer):
    """Valid (unpadded) stride-1 convolution without bias; W has shape (filters, in_channels, kernel)."""

    kind = "conv1d"

    def __init__(self, in_channels, filters, kernel, rng=None):
        super().__init__()
        self.in_channels, self.filters, self.kernel = in_channels, filters, kernel
        shape = (filters, in_channels, kernel)
        self.params["W"] = np.zeros(shape) if rng is None else _he_uniform(rng, shape, in_channels * kernel)

    def forward(self, x, train=False, rng=None):
        cols = sliding_window_view(x, self.kernel, axis=2)  # (B, C, Lout, K)
        b, c, lout, k = cols.shape
        cols = cols.transpose(0, 2, 1, 3).reshape(b, lout, c * k)
        self._cols = cols
        self._in_shape = x.shape
        w = self.params["W"].reshape(self.filters, c * k)
        return (cols @ w.T).transpose(0, 2, 1)

    def backward(self, dout):
        b, c, length = self._in_shape
        k = self.kernel
        lout = length - k + 1
        d = dout.transpose(0, 2, 1)  # (B, Lout, F)
        w = self.params["W"].reshape(self.filters, c * k)
        self.grads["W"] = np.einsum("blf,blp->fp", d, self._cols).reshape(self.params["W"].shape)
        dcols = (d @ w).reshape(b, lout, c, k)
        dx = np.zeros(self._in_shape)
        for j in range(k):
            dx[:, :, j : j + lout] += dcols[:, :, :, j].transpose(0, 2, 1)
        return dx

    def config(self):
        return {"in_channels": self.in_channels, "filters": self.filters, "kernel": self.kernel}

    def output_shape(self, shape):
        c, length = shape
        return (self.filters, length - self.kernel + 1)


class MaxPool1D(Layer):
    """Non-overlapping max pooling; a trailing partial window is dropped."""

    kind = "maxpool1d"

    def __init__(self, size=2):
        super().__init__()
        self.size = size

    def forward(self, x, train=False, rng=None):
        b, c, length = x.shape
        lp = length // self.size
        win = x[:, :, : lp * self.size].reshape(b, c, lp, self.size)
        idx = np.argmax(win, axis=3)
        self._idx, self._in_shape = idx, x.shape
        return np.take_along_axis(win, idx[..., None], axis=3)[..., 0]

    def backward(self, dout):
        b, c, length = self._in_shape
        lp = dout.shape[2]
        dwin = np.zeros((b, c, lp, self.size))
        np.put_along_axis(dwin, self._idx[..., None], dout[..., None], axis=3)
        dx = np.zeros(self._in_shape)
        dx[:, :, : lp * self.size] = dwin.reshape(b, c, lp * self.size)
        return dx

    def config(self):
        return {"size": self.size}

    def output_shape(self, shape):
        c, length = shape
        return (c, length // self.size)


class AvgPool1D(MaxPool1D):
    kind = "avgpool1d"

    def forward(self, x, train=False, rng=None):
        b, c, length = x.shape
        lp = length // self.size
        self._in_shape = x.shape
        return x[:, :, : lp * self.size].reshape(b, c, lp, self.size).mean(axis=3)

    def backward(self, dout):
        b, c, length = self._in_shape
        lp = dout.shape[2]
        dx = np.zeros(self._in_shape)
        dx[:, :, : lp * self.size] = np.repeat(dout / self.size, self.size, axis=2)
        return dx


class Flatten(Layer):
    kind = "flatten"

    def forward(self, x, train=False, rng=None):
        self._in_shape = x.shape
        return x.reshape(x.shape[0], -1)

    def backward(self, dout):
        return dout.reshape(self._in_shape)

    def output_shape(self, shape):
        return (int(np.prod(shape)),)


class Dense(Layer):
    kind = "dense"

    def __init__(self, n_in, n_out, rng=None):
        super().__init__()
        self.n_in, self.n_out = n_in, n_out
        self.params["W"] = np.zeros((n_in, n_out)) if rng is None else _he_uniform(rng, (n_in, n_out), n_in)
        self.params["b"] = np.zeros(n_out)

    def forward(self, x, train=False, rng=None):
        self._x = x
        return x @ self.params["W"] + self.params["b"]

    def backward(self, dout):
        self.grads["W"] = self._x.T @ dout
        self.grads["b"] = dout.sum(axis=0)
        return dout @ self.params["W"].T

    def config(self):
        return {"n_in": self.n_in, "n_out": self.n_out}

    def output_shape(self, shape):
        return (self.n_out,)


class ReLU(Layer):
    kind = "relu"

    def forward(self, x, train=False, rng=None):
        self._mask = x > 0
        return np.where(self._mask, x, 0.0)

    def backward(self, dout):
        return dout * self._mask


class Dropout(Layer):
    """Inverted dropout: survivors are scaled by ``1 / (1 - rate)`` in training only."""

    kind = "dropout"

    def __init__(self, rate=0.3):
        super().__init__()
        if not 0.0 <= rate < 1.0:
            raise ValueError("dropout rate must lie in [0, 1)")
        self.rate = rate

    def forward(self, x, train=False, rng=None):
        if not train or self.rate == 0.0:
            self._mask = None
            return x
        if rng is None:
            raise ValueError("training-mode dropout needs an explicit random generator")
        self._mask = (rng.random(x.shape) >= self.rate) / (1.0 - self.rate)
        return x * self._mask

    def backward(self, dout):
        return dout if self._mask is None else dout * self._mask

    def config(self):
        return {"rate": self.rate}


LAYER_TYPES = {cls.kind: cls for cls in (Conv1D, MaxPool1D, AvgPool1D, Flatten, Dense, ReLU, Dropout)}


def softmax(logits):
    z = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)
