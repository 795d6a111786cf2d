"""On-disk formats.

Single series: plain text, one decimal value per line; blank lines and
lines starting with ``#`` are ignored.

Datasets: JSON Lines, one object per series with keys ``id``, ``label``,
``values`` and optionally ``subject_id``, ``trial_id`` and
``sample_rate_hz``.  Floats are written with Python's shortest round-trip
repr, so write -> read -> write is byte-identical.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

from .errors import DataFormatError, InvalidSeries
from .timeseries import Dataset, LabeledSeries, TimeSeries


def _num(v) -> str:
    return repr(float(v))


def read_series(path) -> TimeSeries:
    values = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        try:
            v = float(text)
        except ValueError:
            raise DataFormatError(f"not a number: {text!r}", path, lineno) from None
        if not math.isfinite(v):
            raise DataFormatError(f"non-finite value {text!r}", path, lineno)
        values.append(v)
    if not values:
        raise DataFormatError("file holds no samples", path)
    return TimeSeries(values)


def write_series(path, values, header=None) -> None:
    lines = [f"# {header}"] if header else []
    lines += [_num(v) for v in values]
    Path(path).write_text("\n".join(lines) + "\n")


def record(item: LabeledSeries) -> dict:
    rec = {"id": item.id, "label": item.label}
    if item.subject_id:
        rec["subject_id"] = item.subject_id
    if item.trial_id:
        rec["trial_id"] = item.trial_id
    if item.series.sample_rate_hz is not None:
        rec["sample_rate_hz"] = float(item.series.sample_rate_hz)
    rec["values"] = [float(v) for v in item.series.values]
    return rec


def dumps_dataset(dataset: Dataset) -> str:
    return "".join(json.dumps(record(it), separators=(", ", ": ")) + "\n" for it in dataset.items)


def write_dataset(path, dataset: Dataset) -> None:
    Path(path).write_text(dumps_dataset(dataset))


def read_dataset(path) -> Dataset:
    items = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            if not isinstance(rec, dict):
                raise ValueError("record is not an object")
            values = rec["values"]
            label = rec["label"]
            if isinstance(label, bool) or not isinstance(label, int):
                raise ValueError(f"label must be an integer, got {label!r}")
            if not isinstance(values, list) or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in values
            ):
                raise ValueError("values must be an array of numbers")
            series = TimeSeries(values, rec.get("sample_rate_hz"))
            items.append(
                LabeledSeries(
                    series, label, str(rec.get("subject_id", "")), str(rec.get("trial_id", "")),
                    id=str(rec.get("id", f"line{lineno:06d}")),
                )
            )
        except (ValueError, KeyError, TypeError, InvalidSeries) as exc:
            msg = f"missing field {exc}" if isinstance(exc, KeyError) else str(exc)
            raise DataFormatError(msg, path, lineno) from None
    return Dataset(items)
