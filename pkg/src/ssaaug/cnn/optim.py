"""ADAM with inverse-time learning-rate decay."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ShapeMismatch


@dataclass
class AdamState:
    """Moment accumulators (one pair per weight tensor) and the update counter."""

    m: list = field(default_factory=list)
    v: list = field(default_factory=list)
    t: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-7

    @classmethod
    def for_params(cls, params, **hyper) -> "AdamState":
        return cls([np.zeros_like(p) for p in params], [np.zeros_like(p) for p in params], **hyper)


def learning_rate(base_lr: float, decay: float, t: int) -> float:
    """``base_lr / (1 + decay * t)`` where ``t`` counts updates already applied."""
    return base_lr / (1.0 + decay * t)


def adam_step(state: AdamState, params, grads, base_lr=0.001, decay=0.0) -> float:
    """Apply one bias-corrected ADAM update to ``params`` in place.

    Returns the learning rate used for this step.
    """
    if len(params) != len(grads) or len(params) != len(state.m):
        raise ShapeMismatch("params, grads and optimizer state must have the same length")
    lr = learning_rate(base_lr, decay, state.t)
    step = state.t + 1
    c1 = 1.0 - state.beta1**step
    c2 = 1.0 - state.beta2**step
    for p, g, m, v in zip(params, grads, state.m, state.v):
        if p.shape != g.shape or p.shape != m.shape:
            raise ShapeMismatch(f"shape mismatch {p.shape} vs {g.shape}")
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * g * g
        p -= lr * (m / c1) / (np.sqrt(v / c2) + state.eps)
    state.t = step
    return lr
