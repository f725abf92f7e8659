"""Command-line entry point.

Subcommands: synth, evaluate, select, explain, report. Exit codes: 0 on
success, 1 for configuration errors, 2 for data errors, 3 when some
evaluation cells failed but the run completed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .explainers import LimeConfig, ShapConfig, lime_local, lime_rank, shap_rank, shapley_local, stratified_background, surrogate_fit, surrogate_rank
from .harness import ConfigError, DataError, ExperimentConfig, emit_report, load_report, run_evaluation
from .metrics import ExpertFeatureSet
from .models import load_model
from .spectra import SynthConfig, generate_synthetic, load_dataset, save_dataset
from .spectra.dataset import standardize_fit

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_PARTIAL = 3


def _cmd_synth(args) -> int:
    if args.config:
        cfg = SynthConfig.from_dict(json.loads(Path(args.config).read_text()))
    else:
        cfg = SynthConfig()
    seed = args.seed if args.seed is not None else 0
    result = generate_synthetic(cfg, seed=seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_dataset(result.old, out / "old.csv")
    save_dataset(result.new, out / "new.csv")
    ExpertFeatureSet(result.expert_wavenumbers, source="synthetic ground truth").to_file(
        out / "expert_features.txt"
    )
    print(f"wrote old.csv ({result.old.n_samples} rows), new.csv ({result.new.n_samples} rows), "
          f"expert_features.txt ({result.expert_wavenumbers.size} wavenumbers) to {out}")
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    cfg = ExperimentConfig.from_json(args.config)
    if args.seed is not None:
        cfg = ExperimentConfig.from_dict({**cfg.to_dict(), "base_seed": args.seed})
    report = run_evaluation(cfg, n_workers=args.workers)
    written = emit_report(report, args.out)
    print(f"wrote {len(written)} files to {args.out}")
    failed = [c for c in report.cells if c.status != "ok"]
    if failed:
        print(f"{len(failed)} of {len(report.cells)} cells had failures", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def _cmd_select(args) -> int:
    ds = load_dataset(args.data)
    method = args.method.lower()
    if method not in ("pca", "pls", "rf", "ridge"):
        raise ConfigError(
            f"select supports the model-based methods pca, pls, rf, ridge; "
            f"got {args.method!r} (use `explain` for shap/lime/surrogate)"
        )
    from .harness import compute_ranking

    cfg = ExperimentConfig(synth=SynthConfig(), base_seed=args.seed or 0)
    name = {"pca": "PCA", "pls": "PLS", "rf": "RF", "ridge": "Ridge"}[method]
    ranking = compute_ranking(name, ds, None, cfg, seed=args.seed or 0)
    subset = select_top(ranking, ds.axis, k=min(args.k, ds.n_features))
    write_subset(subset, args.out, note=f"{name} top-{len(subset)}")
    print(f"wrote {len(subset)} wavenumbers to {args.out}")
    return EXIT_OK


def _cmd_explain(args) -> int:
    model = load_model(args.model)
    ds = load_dataset(args.data)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    X = ds.intensities
    f = model.predict
    seed = args.seed or 0
    rng = np.random.default_rng(seed)
    n_instances = min(args.instances, ds.n_samples)
    rows = np.sort(rng.choice(ds.n_samples, size=n_instances, replace=False))

    if args.method == "surrogate":
        surrogate = surrogate_fit(f, X)
        ranking = surrogate_rank(surrogate)
        print(f"surrogate fidelity (r2): {surrogate.fidelity:.6f}")
        attributions = []
    elif args.method == "shap":
        bg = stratified_background(X, f, min(args.background, ds.n_samples), seed=seed)
        cfg = ShapConfig(background=X[bg], mode="sampled", n_permutations=args.permutations, seed=seed)
        ranking = shap_rank(f, X[rows], cfg)
        attributions = [
            shapley_local(f, X[i], cfg, instance_id=str(ds.sample_id[i])) for i in rows
        ]
    else:
        cfg = LimeConfig(train_stats=standardize_fit(X), n_perturbations=args.perturbations, seed=seed)
        ranking = lime_rank(f, X[rows], cfg, per_instance_k=args.k)
        attributions = [lime_local(f, X[i], cfg, instance_id=str(ds.sample_id[i])) for i in rows]

    write_ranking(ranking, ds.axis, out / f"{args.method}_ranking.txt")
    for pos, att in enumerate(attributions):
        lines = [f"# instance {att.instance_id}: base={att.base_value!r} output={att.model_output!r}"]
        lines += [f"{float(w)!r},{float(v)!r}" for w, v in zip(ds.axis.values, att.values)]
        (out / f"{args.method}_instance_{pos:03d}.txt").write_text("\n".join(lines) + "\n")
    print(f"wrote {args.method} ranking and {len(attributions)} attributions to {out}")
    return EXIT_OK


def _cmd_report(args) -> int:
    report = load_report(Path(args.input) / "report.json")
    if args.format == "json":
        print(json.dumps(report.to_dict(), sort_keys=True, indent=1))
        return EXIT_OK
    written = emit_report(report, args.input, formats=("csv",))
    print(f"wrote {len(written)} csv files to {args.input}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spexplain",
        description="Explainable prediction and wavenumber selection for spectral regression",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate seeded synthetic spectra with ground truth")
    p.add_argument("--config", help="synthetic-config JSON (defaults apply when omitted)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("evaluate", help="run the repeated-split scenario evaluation")
    p.add_argument("--config", required=True, help="experiment-config JSON")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=None, help="override the config base seed")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("select", help="rank features with a model-based method")
    p.add_argument("--data", required=True)
    p.add_argument("--method", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("explain", help="attribute a saved model's predictions")
    p.add_argument("--model", required=True, help="serialized model JSON")
    p.add_argument("--data", required=True)
    p.add_argument("--method", required=True, choices=("shap", "lime", "surrogate"))
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--instances", type=int, default=10)
    p.add_argument("--background", type=int, default=12, help="shap background rows")
    p.add_argument("--permutations", type=int, default=16, help="shap permutations per instance")
    p.add_argument("--perturbations", type=int, default=1000, help="lime perturbations per instance")
    p.add_argument("--k", type=int, default=50, help="lime per-instance top-k")

    p = sub.add_parser("report", help="reload a report and emit tables")
    p.add_argument("--in", dest="input", required=True, help="directory holding report.json")
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "synth": _cmd_synth,
        "evaluate": _cmd_evaluate,
        "select": _cmd_select,
        "explain": _cmd_explain,
        "report": _cmd_report,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, FileNotFoundError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
