"""Synthetic lift-hold-lower signals in three classes.

A stand-in for clinical accelerometer recordings: a smooth raised-cosine
pulse on a gravity baseline, a class-specific distortion and AR(1) noise.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import RngLike, as_generator, derive_seed
from .timeseries import Dataset, LabeledSeries, TimeSeries


@dataclass(frozen=True)
class ClassSpec:
    label: int
    amplitude: tuple  # (low, high)
    distortion: str  # "tremor", "dip" or "none"
    level: float = 0.0


DEFAULT_CLASSES = (
    ClassSpec(0, (0.5, 0.8), "tremor", 0.25),
    ClassSpec(1, (0.9, 1.2), "dip", 0.45),
    ClassSpec(2, (1.3, 1.6), "none", 0.0),
)


@dataclass(frozen=True)
class SynthSpec:
    classes: tuple = DEFAULT_CLASSES
    per_class_count: int = 200
    length: int = 91
    ar_coef: float = 0.8
    noise_amp: float = 0.05  # marginal std of the AR(1) noise
    baseline: float = 1.0
    sample_rate_hz: float = 30.0
    seed: int = 0

    def __post_init__(self):
        if self.per_class_count < 1:
            raise ValueError("per_class_count must be >= 1")
        if self.length < 8:
            raise ValueError("length must be >= 8")
        if not -1.0 < self.ar_coef < 1.0:
            raise ValueError("ar_coef must lie in (-1, 1)")
        if self.noise_amp < 0:
            raise ValueError("noise_amp must be >= 0")


def ar1(n: int, coef: float, amp: float, rng: RngLike) -> np.ndarray:
    """Stationary AR(1) noise with marginal standard deviation ``amp``."""
    gen = as_generator(rng)
    e = gen.standard_normal(n)
    out = np.empty(n)
    out[0] = e[0]
    k = np.sqrt(1.0 - coef * coef)
    for t in range(1, n):
        out[t] = coef * out[t - 1] + k * e[t]
    return amp * out


def _ramp(t, start, width):
    u = np.clip((t - start) / width, 0.0, 1.0)
    return 0.5 - 0.5 * np.cos(np.pi * u)


def pulse(n: int, onset: float, rise: float, hold: float, fall: float) -> np.ndarray:
    """Unit raised-cosine pulse: rise, flat hold, fall."""
    t = np.arange(n, dtype=np.float64)
    return _ramp(t, onset, rise) - _ramp(t, onset + rise + hold, fall)


def _signal(cls: ClassSpec, spec: SynthSpec, gen: np.random.Generator) -> np.ndarray:
    n = spec.length
    scale = n / 91.0
    onset = gen.uniform(8, 16) * scale
    rise = gen.uniform(12, 18) * scale
    hold = gen.uniform(20, 28) * scale
    fall = gen.uniform(12, 18) * scale
    amp = gen.uniform(*cls.amplitude)
    base = pulse(n, onset, rise, hold, fall)
    t = np.arange(n, dtype=np.float64)
    hold_start = onset + rise
    if cls.distortion == "tremor":
        cycles = gen.uniform(4.0, 6.0)
        phase = gen.uniform(0, 2 * np.pi)
        in_hold = _ramp(t, hold_start - 2, 4) - _ramp(t, hold_start + hold - 2, 4)
        base = base + cls.level * in_hold * np.sin(2 * np.pi * cycles * (t - hold_start) / hold + phase)
    elif cls.distortion == "dip":
        centre = hold_start + hold / 2
        base = base - cls.level * np.exp(-0.5 * ((t - centre) / (hold / 6)) ** 2)
    noise = ar1(n, spec.ar_coef, spec.noise_amp, gen)
    return spec.baseline + amp * base + noise


def generate(spec: SynthSpec = SynthSpec()) -> Dataset:
    """Deterministic dataset: ``per_class_count`` series per class, grouped by class."""
    items = []
    for cls in spec.classes:
        for i in range(spec.per_class_count):
            gen = as_generator(derive_seed(spec.seed, "synth", cls.label, i))
            items.append(
                LabeledSeries(
                    TimeSeries(_signal(cls, spec, gen), spec.sample_rate_hz),
                    cls.label,
                    subject_id=f"syn{i:04d}",
                    trial_id="1",
                    id=f"c{cls.label}_{i:04d}",
                )
            )
    return Dataset(items)


def class_means(dataset: Dataset) -> dict:
    return {
        label: np.mean([it.series.values for it in dataset.items if it.label == label], axis=0)
        for label in dataset.class_counts
    }
