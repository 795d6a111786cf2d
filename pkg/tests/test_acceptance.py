"""Acceptance suite: one test per criterion, each at its stated tolerance.

Every criterion is computed by a ``run_cN`` function that returns
``(metrics, payload)``: ``metrics`` holds the numbers the check looks at and
``payload`` holds the raw output bytes.  Criterion 9 calls each runner a
second time and compares both.  A PASS/FAIL line per criterion is printed
in the terminal summary (see ``conftest.py``).
"""
import functools
import hashlib
import io
import time

import numpy as np
import pytest

from oracles import brute_force_dtw, numeric_grad, rel_error
from ssaaug import (
    AugmentMethod, AugmentPlan, Dataset, LabeledSeries, TimeSeries, aaft, acf_rmsd, augment_dataset,
    decompose, delta_mean_pct, delta_std_pct, derive_fold_plan, dtw_norm, reconstruct_all, synthesize_one,
)
from ssaaug import cli
from ssaaug.cnn.layers import AvgPool1D, Conv1D, Dense, Dropout, Flatten, MaxPool1D, ReLU
from ssaaug.cnn.model import CnnModel, build_reference
from ssaaug.cnn.train import TrainConfig, evaluate, train
from ssaaug.io import dumps_dataset, write_dataset
from ssaaug.surrogate import random_shuffle
from ssaaug.synth import SynthSpec, ar1, generate
from ssaaug.timeseries import znormalize

SKEWED_COUNTS = {3: 31, 2: 38, 1: 6, 0: 3}


def _digest(*chunks) -> str:
    h = hashlib.sha256()
    for c in chunks:
        h.update(c if isinstance(c, bytes) else repr(c).encode())
    return h.hexdigest()


# --- runners --------------------------------------------------------------------------------

def run_c1():
    rng = np.random.default_rng(1)
    series = rng.uniform(-1, 1, size=(100, 91))
    start = time.perf_counter()
    errs, chunks = [], []
    for x in series:
        rcs = reconstruct_all(decompose(x, 17))
        assert len(rcs) == 17
        total = np.sum(rcs, axis=0)
        errs.append(float(np.max(np.abs(total - x))))
        chunks.append(total.tobytes())
    elapsed = time.perf_counter() - start
    return {"max_err": max(errs), "seconds": elapsed}, _digest(*chunks)


def run_c2():
    rng = np.random.default_rng(2)
    exact = 0
    chunks = []
    for i in range(1000):
        n = int(rng.integers(2, 200))
        kind = i % 4
        if kind == 0:
            x = rng.normal(size=n)
        elif kind == 1:
            x = rng.integers(-3, 4, size=n).astype(float)  # heavy ties
        elif kind == 2:
            x = 5.0 + rng.exponential(size=n)
        else:
            x = ar1(n, 0.8, 1.0, rng) + 10.0
        y = aaft(x, 1000 + i)
        ok = np.array_equal(np.sort(y), np.sort(x))
        if np.abs(np.mean(x)) > 1e-12:
            ok = ok and delta_mean_pct(x, y) == 0.0
        if np.ptp(x) > 0:
            ok = ok and delta_std_pct(x, y) == 0.0
        exact += bool(ok)
        chunks.append(y.tobytes())
    return {"exact": exact, "total": 1000}, _digest(*chunks)


def run_c3():
    surr, shuf = [], []
    for seed in range(100):
        x = ar1(91, 0.8, 1.0, seed)
        surr.append(acf_rmsd(x, aaft(x, 10_000 + seed)))
        shuf.append(acf_rmsd(x, random_shuffle(x, 20_000 + seed)))
    m = {"surrogate": float(np.mean(surr)), "shuffle": float(np.mean(shuf))}
    return m, _digest(surr, shuf)


def run_c4():
    rng = np.random.default_rng(4)
    matches, pairs = 0, []
    for _ in range(500):
        a = rng.normal(size=int(rng.integers(2, 9)))
        b = rng.normal(size=int(rng.integers(2, 9)))
        got = dtw_norm(a, b)
        want = brute_force_dtw(list(znormalize(a)), list(znormalize(b))) / len(a)
        matches += got == want
        pairs.append(got)
    return {"matches": matches, "total": 500}, _digest(pairs)


def run_c5():
    ds = generate(SynthSpec(per_class_count=17, seed=5))
    signals = [it.series.values for it in ds.items[:50]]
    ssa_d, raw_d = [], []
    for i, x in enumerate(signals):
        ssa_d.append(dtw_norm(x, synthesize_one(x, AugmentMethod("ssa_surrogate"), 500 + i)))
        raw_d.append(dtw_norm(x, synthesize_one(x, AugmentMethod("surrogate_only"), 500 + i)))
    m = {"ssa_surrogate": float(np.mean(ssa_d)), "surrogate_only": float(np.mean(raw_d))}
    return m, _digest(ssa_d, raw_d)


def _skewed_dataset():
    items = []
    for label, n in SKEWED_COUNTS.items():
        for i in range(n):
            x = 1.0 + np.sin(np.linspace(0, 3, 40)) + ar1(40, 0.5, 0.1, 1000 * label + i)
            items.append(LabeledSeries(TimeSeries(x), label, id=f"s{label}_{i:03d}"))
    return Dataset(items)


def run_c6():
    ds = _skewed_dataset()
    out, chunks = {}, []
    for fold in (10, 50):
        plan = AugmentPlan(derive_fold_plan(ds.class_counts, fold), AugmentMethod("window_slice"), base_seed=6)
        aug = augment_dataset(ds, plan)
        counts = aug.class_counts
        out[fold] = {"per_class": [counts.get(k, 0) for k in (3, 2, 1, 0)], "total": len(aug)}
        chunks.append(dumps_dataset(aug).encode())
    return out, _digest(*chunks)


def _reduced_models():
    rng = np.random.default_rng(7)
    conv = [Conv1D(1, 3, 3, rng), ReLU(), MaxPool1D(2), Conv1D(3, 2, 3, rng), ReLU(), AvgPool1D(2)]
    head = [Flatten(), Dense(8, 5, rng), ReLU(), Dropout(0.3), Dense(5, 3, rng)]
    return CnnModel(conv + head, 22, 3)


def run_c7():
    worst = {}
    # reduced model: every entry of every weight tensor
    model = _reduced_models()
    x = np.random.default_rng(70).normal(size=(6, 22))
    y = np.array([0, 1, 2, 0, 1, 2])
    _, grads = model.loss_and_grads(x, y)
    grads = [g.copy() for g in grads]
    for (i, name, arr), g in zip(model.parameters(), grads):
        num = numeric_grad(lambda: model.loss_and_grads(x, y)[0], arr, h=1e-5)
        worst[f"reduced[{i}].{model.layers[i].kind}.{name}"] = float(np.max(rel_error(g, num)))
    # full reference model, 10 random inputs, a random sample of each tensor
    full = build_reference(rng=np.random.default_rng(71))
    x = np.random.default_rng(72).normal(size=(10, 91))
    y = np.random.default_rng(73).integers(0, 3, size=10)
    _, grads = full.loss_and_grads(x, y)
    grads = [g.copy() for g in grads]
    pick = np.random.default_rng(74)
    for (i, name, arr), g in zip(full.parameters(), grads):
        flat, gflat = arr.reshape(-1), g.reshape(-1)
        idx = pick.choice(flat.size, size=min(40, flat.size), replace=False)
        errs = []
        for j in idx:
            old = flat[j]
            flat[j] = old + 1e-5
            up = full.loss_and_grads(x, y)[0]
            flat[j] = old - 1e-5
            down = full.loss_and_grads(x, y)[0]
            flat[j] = old
            errs.append(rel_error(gflat[j], (up - down) / 2e-5))
        worst[f"full[{i}].{full.layers[i].kind}.{name}"] = float(np.max(errs))
    return worst, _digest(sorted(worst.items()))


def run_c8():
    start = time.perf_counter()
    train_set = generate(SynthSpec(per_class_count=200, seed=8))
    held_out = generate(SynthSpec(per_class_count=100, seed=88))
    plan = AugmentPlan(derive_fold_plan(train_set.class_counts, 10), AugmentMethod("ssa_surrogate"), base_seed=8)
    aug = augment_dataset(train_set, plan)
    cfg = TrainConfig(batch_size=20, epochs=20, learning_rate=0.001, decay=1e-6, seed=8)
    result = train(Dataset(list(train_set.items) + list(aug.items)), cfg)
    ev = evaluate(result.model, held_out)
    elapsed = time.perf_counter() - start
    m = {"accuracy": ev.accuracy, "seconds": elapsed, "n_train": len(train_set) + len(aug)}
    weights = b"".join(p.tobytes() for _, _, p in result.model.parameters())
    return m, _digest(dumps_dataset(aug).encode(), weights, ev.probabilities.tobytes())


def run_c10(tmp_path):
    ds = generate(SynthSpec(per_class_count=4, seed=10))
    write_dataset(tmp_path / "d.jsonl", ds)
    buf = io.StringIO()
    code = cli.main(
        ["train", "--dataset", str(tmp_path / "d.jsonl"), "--epochs", "1", "--seed", "10",
         "--model-out", str(tmp_path / "m.json")],
        out=buf,
    )
    printed = [line for line in buf.getvalue().splitlines() if line.startswith("param_count ")]
    return {"exit": code, "param_count": build_reference().param_count, "printed": printed}


RUNNERS = {1: run_c1, 2: run_c2, 3: run_c3, 4: run_c4, 5: run_c5, 6: run_c6, 7: run_c7, 8: run_c8}


@functools.lru_cache(maxsize=None)
def first_run(n):
    return RUNNERS[n]()


# --- criteria -------------------------------------------------------------------------------

@pytest.mark.criterion(1, "SSA completeness: sum of 17 RCs reproduces 100 inputs, err < 1e-8, < 5 s")
def test_c1_ssa_completeness(record_property):
    m, _ = first_run(1)
    record_property("detail", f"max err {m['max_err']:.2e}, {m['seconds']:.2f} s")
    assert m["max_err"] < 1e-8
    assert m["seconds"] < 5.0


@pytest.mark.criterion(2, "AAFT keeps the exact multiset: delta mean% = delta std% = 0 on 1000 series")
def test_c2_surrogate_moments(record_property):
    m, _ = first_run(2)
    record_property("detail", f"{m['exact']}/{m['total']} exact")
    assert m["exact"] == m["total"]


@pytest.mark.criterion(3, "AAFT ACF-RMSD on AR(1) <= 0.5 and below the random shuffle")
def test_c3_acf_preservation(record_property):
    m, _ = first_run(3)
    record_property("detail", f"surrogate {m['surrogate']:.4f}, shuffle {m['shuffle']:.4f}")
    assert m["surrogate"] <= 0.5
    assert m["surrogate"] < m["shuffle"]


@pytest.mark.criterion(4, "dtw_norm equals exhaustive path enumeration on 500 pairs")
def test_c4_dtw_oracle(record_property):
    m, _ = first_run(4)
    record_property("detail", f"{m['matches']}/{m['total']} identical")
    assert m["matches"] == m["total"]


@pytest.mark.criterion(5, "SSA+surrogate keeps shape: mean DTW below surrogate-only on 50 signals")
def test_c5_shape_preservation(record_property):
    m, _ = first_run(5)
    record_property("detail", f"ssa_surrogate {m['ssa_surrogate']:.4f} vs surrogate_only {m['surrogate_only']:.4f}")
    assert m["ssa_surrogate"] < m["surrogate_only"]


@pytest.mark.criterion(6, "fold arithmetic: 10-fold 310/380/360/360 = 1410, 50-fold total 7550")
def test_c6_fold_arithmetic(record_property):
    m, _ = first_run(6)
    record_property(
        "detail",
        f"10-fold {m[10]['per_class']} = {m[10]['total']}, 50-fold {m[50]['per_class']} = {m[50]['total']}",
    )
    assert m[10]["per_class"] == [310, 380, 360, 360]
    assert m[10]["total"] == 1410
    # the per-class counts sum to 7050, so the stated 7550 cannot hold together with them
    assert m[50]["per_class"] == [1550, 1900, 1800, 1800]
    assert m[50]["total"] == 7550


@pytest.mark.criterion(7, "every layer gradient matches central differences, rel err < 1e-4")
def test_c7_gradients(record_property):
    m, _ = first_run(7)
    worst_key = max(m, key=m.get)
    record_property("detail", f"worst {m[worst_key]:.2e} at {worst_key}")
    assert max(m.values()) < 1e-4


@pytest.mark.slow
@pytest.mark.criterion(8, "end to end: 10-fold SSA+surrogate, 20 epochs, held-out acc >= 0.95, < 5 min")
def test_c8_end_to_end(record_property):
    m, _ = first_run(8)
    record_property("detail", f"accuracy {m['accuracy']:.4f}, {m['seconds']:.1f} s, {m['n_train']} training series")
    assert m["accuracy"] >= 0.95
    assert m["seconds"] < 300


@pytest.mark.slow
@pytest.mark.criterion(9, "determinism: criteria 1-8 rerun with the same seeds are byte-identical")
def test_c9_determinism(record_property):
    differing = []
    for n, runner in RUNNERS.items():
        m1, p1 = first_run(n)
        m2, p2 = runner()
        timing_free = lambda m: {k: v for k, v in m.items() if k != "seconds"} if isinstance(m, dict) else m
        if p1 != p2 or timing_free(m1) != timing_free(m2):
            differing.append(n)
    record_property("detail", "all identical" if not differing else f"differs: {differing}")
    assert not differing


@pytest.mark.criterion(10, "reference CNN param_count in [20000, 35000] and printed by train")
def test_c10_param_count(tmp_path, record_property):
    m = run_c10(tmp_path)
    record_property("detail", f"param_count {m['param_count']}")
    assert 20_000 <= m["param_count"] <= 35_000
    assert m["exit"] == 0
    assert m["printed"] == [f"param_count {m['param_count']}"]
