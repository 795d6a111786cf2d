"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import io, ssa
from .cnn import CnnModel, TrainConfig, build_reference, evaluate, train
from .errors import DataFormatError, EigenFailure, SsaaugError
from .metrics import acf, default_max_lag, fidelity_report
from .rng import as_generator, derive_seed
from .pipeline import AugmentMethod, AugmentPlan, augment_dataset, derive_fold_plan, fold_table
from .synth import SynthSpec, generate
from .timeseries import IDENTITY_3, MERGE_LOW_SCORES, canonicalize_length
from .windows import SliceConfig, WarpConfig

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3

METHODS = {
    "ssa-surrogate": "ssa_surrogate",
    "surrogate": "surrogate_only",
    "slice": "window_slice",
    "warp": "window_warp",
}
LABEL_MAPS = {"identity": IDENTITY_3, "merge01": MERGE_LOW_SCORES}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _fmt(v):
    return "nan" if v is None else repr(float(v))


# --- subcommands -------------------------------------------------------------------------

def cmd_decompose(args, out):
    x = io.read_series(args.input).values
    d = ssa.decompose(x, args.window)
    grouping = ssa.select_significant(d, args.select)
    shape = ssa.reconstruct(d, grouping.signal)
    irregular = x - shape
    rcs = ssa.reconstruct_all(d)

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    io.write_series(outdir / "shape.txt", shape, f"shape: components {list(grouping.signal)}")
    io.write_series(outdir / "irregular.txt", irregular, "irregular: input minus shape")
    width = len(str(d.window))
    for k, rc in enumerate(rcs):
        io.write_series(outdir / f"rc_{k:0{width}d}.txt", rc, f"reconstructed component {k}")

    total = float(np.sum(d.eigenvalues))
    lines = ["index\teigenvalue\tfraction\tcumulative\tselected"]
    cum = 0.0
    for k, lam in enumerate(d.eigenvalues):
        frac = lam / total if total > 0 else 0.0
        cum += frac
        lines.append(f"{k}\t{_fmt(lam)}\t{frac:.6f}\t{cum:.6f}\t{int(k in grouping.signal)}")
    table = "\n".join(lines) + "\n"
    (outdir / "eigenvalues.tsv").write_text(table)
    if args.plot_data:
        rows = ["t\toriginal\tshape\tirregular"]
        rows += [f"{t}\t{_fmt(a)}\t{_fmt(b)}\t{_fmt(c)}" for t, (a, b, c) in enumerate(zip(x, shape, irregular))]
        (outdir / "overlay.tsv").write_text("\n".join(rows) + "\n")
    out.write(table)
    out.write(f"selected {len(grouping.signal)} of {d.window} components ({args.select})\n")
    return EXIT_OK


def _method_from_args(args) -> AugmentMethod:
    return AugmentMethod(
        METHODS[args.method],
        window=args.window,
        selector=args.select,
        slice_cfg=SliceConfig(args.keep_fraction),
        warp_cfg=WarpConfig(args.warp_window, tuple(args.warp_ratios)),
    )


def cmd_augment(args, out):
    dataset = io.read_dataset(args.dataset)
    counts = dataset.class_counts
    folds = derive_fold_plan(counts, args.fold_majority)
    if args.fold_majority == 0:
        print("warning: --fold-majority 0 produces an empty dataset", file=sys.stderr)
    plan = AugmentPlan(folds, _method_from_args(args), args.seed)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        result = augment_dataset(dataset, plan)
    n_degenerate = sum(1 for w in caught if "irregular" in str(w.message))
    io.write_dataset(args.out, result)

    out.write(f"method {args.method}  seed {args.seed}\n")
    out.write("score\toriginal\tfold\tsynthetic\n")
    for label, orig, fold, synth in fold_table(counts, folds):
        out.write(f"{label}\t{orig}\t{'' if fold is None else fold}\t{synth}\n")
    if n_degenerate:
        out.write(f"note: {n_degenerate} series had a constant irregular component and were copied unrandomized\n")
    return EXIT_OK


def cmd_fidelity(args, out):
    x = io.read_series(args.original).values
    y = io.read_series(args.synthetic).values
    report = fidelity_report(x, y, args.max_lag)
    out.write(json.dumps(report.as_dict()) + "\n")
    if args.plot_out:
        lag = args.max_lag if args.max_lag is not None else default_max_lag(min(x.size, y.size))
        try:
            a, b = acf(x, lag), acf(y, lag)
        except SsaaugError:
            a = b = None
        if a is not None:
            rows = ["lag\tacf_original\tacf_synthetic"]
            rows += [f"{k}\t{_fmt(u)}\t{_fmt(v)}" for k, (u, v) in enumerate(zip(a, b))]
            Path(args.plot_out).write_text("\n".join(rows) + "\n")
    return EXIT_OK


def _accuracy_rows(predict_acc, meta):
    hist = meta.get("history") or []
    last = hist[-1] if hist else {}
    return [
        ("Predict accuracy", predict_acc),
        ("Validate accuracy", last.get("val_acc")),
        ("Train accuracy", last.get("train_acc")),
    ]


def cmd_train(args, out):
    dataset = io.read_dataset(args.dataset)
    cfg = TrainConfig(
        batch_size=args.batch, epochs=args.epochs, learning_rate=args.lr, decay=args.decay,
        input_len=args.input_len, dropout=args.dropout, pooling=args.pooling,
        label_map=LABEL_MAPS[args.label_map], seed=args.seed,
    )

    model = build_reference(
        cfg.input_len, cfg.n_classes, as_generator(derive_seed(cfg.seed, "init")), cfg.dropout, cfg.pooling
    )
    out.write(f"train series {len(dataset)}  classes {dataset.class_counts}\n")
    out.write(f"param_count {model.param_count}\n")
    out.write("epoch\tloss\ttrain_acc\tval_acc\tlr\n")

    def log(s):
        val = "" if s.val_acc is None else f"{s.val_acc:.4f}"
        out.write(f"{s.epoch}\t{s.loss:.6f}\t{s.train_acc:.4f}\t{val}\t{s.lr:.6g}\n")

    result = train(dataset, cfg, model=model, log=log)
    model.metadata = {
        "seed": args.seed,
        "label_map": args.label_map,
        "history": [
            {"epoch": h.epoch, "loss": h.loss, "train_acc": h.train_acc, "val_acc": h.val_acc}
            for h in result.history
        ],
    }
    model.save(args.model_out)
    if args.test:
        ev = evaluate(model, io.read_dataset(args.test), cfg.label_map)
        for name, value in _accuracy_rows(ev.accuracy, model.metadata):
            out.write(f"{name}\t{'' if value is None else f'{value:.4f}'}\n")
    return EXIT_OK


def cmd_predict(args, out):
    if not Path(args.model).is_file():
        raise DataFormatError("model file not found", args.model)
    model = CnnModel.load(args.model)
    label_map = LABEL_MAPS[args.label_map or model.metadata.get("label_map", "identity")]
    if args.input:
        x = canonicalize_length(io.read_series(args.input), model.input_len)
        p = model.forward(x)
        k = int(np.argmax(p))
        out.write(f"class {k}\tprobability {p[k]:.6f}\t{' '.join(f'{v:.6f}' for v in p)}\n")
        return EXIT_OK
    dataset = io.read_dataset(args.dataset)
    ev = evaluate(model, dataset, label_map)
    out.write("id\tlabel\tpredicted\tprobability\n")
    for item, pred, probs in zip(dataset.items, ev.predictions, ev.probabilities):
        out.write(f"{item.id}\t{item.label}\t{pred}\t{probs[pred]:.6f}\n")
    for name, value in _accuracy_rows(ev.accuracy, model.metadata):
        out.write(f"{name}\t{'' if value is None else f'{value:.4f}'}\n")
    out.write("confusion (rows true, columns predicted)\n")
    for row in ev.confusion:
        out.write("\t".join(str(int(v)) for v in row) + "\n")
    return EXIT_OK


def cmd_synth_demo(args, out):
    spec = SynthSpec(per_class_count=args.per_class, length=args.length, noise_amp=args.noise, seed=args.seed)
    dataset = generate(spec)
    io.write_dataset(args.out, dataset)
    out.write(f"wrote {len(dataset)} series {dataset.class_counts} to {args.out}\n")
    return EXIT_OK


# --- parser ------------------------------------------------------------------------------

def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return v


def _seed(text):
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _selector(text):
    try:
        ssa.parse_selector(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ssaaug", description="Shape-preserving SSA/surrogate time-series augmentation.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("decompose", help="SSA decomposition of one series")
    p.add_argument("--input", required=True)
    p.add_argument("--window", type=_positive_int, default=ssa.DEFAULT_WINDOW)
    p.add_argument("--select", type=_selector, default=ssa.DEFAULT_SELECTOR, help="fixed:K | var:FRAC | knee")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--plot-data", action="store_true", help="also write overlay.tsv")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("augment", help="class-balanced augmentation of a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--method", choices=sorted(METHODS), required=True)
    p.add_argument("--fold-majority", type=_nonneg_int, required=True)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--window", type=_positive_int, default=ssa.DEFAULT_WINDOW)
    p.add_argument("--select", type=_selector, default=ssa.DEFAULT_SELECTOR)
    p.add_argument("--keep-fraction", type=float, default=0.9)
    p.add_argument("--warp-window", type=float, default=0.1)
    p.add_argument("--warp-ratios", type=float, nargs="+", default=[0.5, 2.0])
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("fidelity", help="fidelity metrics between two series")
    p.add_argument("--original", required=True)
    p.add_argument("--synthetic", required=True)
    p.add_argument("--max-lag", type=_nonneg_int, default=None)
    p.add_argument("--plot-out", default=None, help="write ACF overlay data here")
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("train", help="train the 1-D CNN")
    p.add_argument("--dataset", required=True)
    p.add_argument("--epochs", type=_positive_int, default=20)
    p.add_argument("--batch", type=_positive_int, default=20)
    p.add_argument("--lr", type=float, default=0.001)
    p.add_argument("--decay", type=float, default=1e-6)
    p.add_argument("--input-len", type=_positive_int, default=91)
    p.add_argument("--dropout", type=float, default=0.3)
    p.add_argument("--pooling", choices=["max", "avg"], default="max")
    p.add_argument("--label-map", choices=sorted(LABEL_MAPS), default="identity")
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--model-out", required=True)
    p.add_argument("--test", default=None, help="held-out dataset to report predict accuracy on")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="classify series with a trained model")
    p.add_argument("--model", required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--input")
    g.add_argument("--dataset")
    p.add_argument("--label-map", choices=sorted(LABEL_MAPS), default=None)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("synth-demo", help="write a synthetic 3-class dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--per-class", type=_positive_int, default=200)
    p.add_argument("--length", type=_positive_int, default=91)
    p.add_argument("--noise", type=float, default=0.05)
    p.add_argument("--seed", type=_seed, required=True)
    p.set_defaults(func=cmd_synth_demo)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args, out)
    except (EigenFailure, ArithmeticError) as exc:
        print(f"error: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (SsaaugError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
