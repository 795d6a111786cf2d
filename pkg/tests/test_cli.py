import io as _io
import json

import numpy as np
import pytest

from ssaaug import cli
from ssaaug.io import read_dataset, read_series, write_dataset, write_series
from ssaaug.synth import SynthSpec, generate


def run(*argv):
    buf = _io.StringIO()
    code = cli.main([str(a) for a in argv], out=buf)
    return code, buf.getvalue()


@pytest.fixture
def series_file(tmp_path):
    x = generate(SynthSpec(per_class_count=1, seed=2)).items[0].series.values
    p = tmp_path / "x.txt"
    write_series(p, x)
    return p, x


def test_usage_errors_exit_1(tmp_path):
    assert run()[0] == 1
    assert run("augment", "--dataset", tmp_path / "d", "--method", "ssa-surrogate", "--fold-majority", 1, "--out", tmp_path / "o")[0] == 1
    assert run("decompose", "--input", "x", "--out", "y", "--select", "bogus")[0] == 1
    assert run("--help")[0] == 0


def test_data_errors_exit_2(tmp_path):
    assert run("decompose", "--input", tmp_path / "missing.txt", "--out", tmp_path / "o")[0] == 2
    assert run("predict", "--model", tmp_path / "none.json", "--input", tmp_path / "x")[0] == 2
    p = tmp_path / "short.txt"
    write_series(p, [1.0, 2.0, 3.0])
    assert run("decompose", "--input", p, "--out", tmp_path / "o")[0] == 2


def test_numeric_failure_exit_3(series_file, tmp_path, monkeypatch):
    from ssaaug.errors import EigenFailure

    def boom(*a, **k):
        raise EigenFailure("did not converge")

    monkeypatch.setattr(cli.ssa, "decompose", boom)
    assert run("decompose", "--input", series_file[0], "--out", tmp_path / "o")[0] == 3


def test_degenerate_metric_is_flagged_not_fatal(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    write_series(a, [1.0, -1.0])
    write_series(b, [1.0, 2.0])
    code, text = run("fidelity", "--original", a, "--synthetic", b)
    # Δmean% divides by a zero mean: recorded as a flag, not a crash
    assert code == 0 and json.loads(text)["delta_mean_pct"] is None


def test_decompose_outputs(series_file, tmp_path):
    p, x = series_file
    code, text = run("decompose", "--input", p, "--out", tmp_path / "dec", "--plot-data")
    assert code == 0
    shape = read_series(tmp_path / "dec" / "shape.txt").values
    irr = read_series(tmp_path / "dec" / "irregular.txt").values
    np.testing.assert_allclose(shape + irr, x, atol=1e-12)
    rows = (tmp_path / "dec" / "eigenvalues.tsv").read_text().splitlines()
    assert len(rows) == 18
    rcs = sum(read_series(tmp_path / "dec" / f"rc_{k:02d}.txt").values for k in range(17))
    np.testing.assert_allclose(rcs, x, atol=1e-9)
    assert (tmp_path / "dec" / "overlay.tsv").exists()


def test_augment_table_and_repeatability(tmp_path):
    items = []
    ds = generate(SynthSpec(per_class_count=38, seed=1))
    counts = {3: 31, 2: 38, 1: 6, 0: 3}
    from ssaaug import Dataset, LabeledSeries

    for label, n in counts.items():
        src = [it for it in ds.items if it.label == min(label, 2)][:n]
        items += [LabeledSeries(it.series, label, id=f"s{label}_{i:03d}") for i, it in enumerate(src)]
    write_dataset(tmp_path / "d.jsonl", Dataset(items))
    args = ("augment", "--dataset", tmp_path / "d.jsonl", "--method", "slice", "--fold-majority", 10, "--seed", 3)
    code, text = run(*args, "--out", tmp_path / "a.jsonl")
    assert code == 0
    assert "total\t78\t\t1410" in text
    assert "0\t3\t120\t360" in text
    run(*args, "--out", tmp_path / "b.jsonl")
    assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()
    assert len(read_dataset(tmp_path / "a.jsonl")) == 1410


def test_fidelity_record(series_file, tmp_path):
    p, x = series_file
    q = tmp_path / "y.txt"
    write_series(q, x[::-1])
    code, text = run("fidelity", "--original", p, "--synthetic", q, "--plot-out", tmp_path / "acf.tsv")
    rec = json.loads(text)
    assert code == 0 and rec["delta_mean_pct"] == 0.0 and rec["delta_std_pct"] == 0.0
    assert {"acf_rmsd", "dtw_norm", "dtw_pct"} <= set(rec)
    assert len((tmp_path / "acf.tsv").read_text().splitlines()) == 42


def test_synth_train_predict(tmp_path):
    assert run("synth-demo", "--out", tmp_path / "s.jsonl", "--per-class", 15, "--seed", 1)[0] == 0
    code, text = run("train", "--dataset", tmp_path / "s.jsonl", "--epochs", 2, "--seed", 4,
                     "--model-out", tmp_path / "m.json", "--test", tmp_path / "s.jsonl")
    assert code == 0 and "param_count 24339" in text and "Predict accuracy" in text
    code, text = run("predict", "--model", tmp_path / "m.json", "--dataset", tmp_path / "s.jsonl")
    assert code == 0 and "confusion" in text
    x = read_dataset(tmp_path / "s.jsonl").items[0].series.values
    write_series(tmp_path / "one.txt", x[:80])
    code, text = run("predict", "--model", tmp_path / "m.json", "--input", tmp_path / "one.txt")
    assert code == 0 and text.startswith("class ")
