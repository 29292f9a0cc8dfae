"""Command-line entry points.

    ipl gen     --out DIR                      synthetic source/target dumps
    ipl source  --out DIR [--data DIR]         train source model, export predictions
    ipl adapt   --out DIR [--data DIR] [--predictions PATH]
    ipl sweep   --out DIR --param alpha --values 0.0,0.1,...
    ipl ablate  --out DIR

All commands take ``--config PATH --profile NAME --seed N``. Exit codes:
0 success, 2 configuration error, 3 numerical divergence, 4 selection stall.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import datagen, pipeline
from .config import ConfigError, RunConfig, format_config, load_config

log = logging.getLogger("incremental_pl")

EXIT_OK, EXIT_CONFIG, EXIT_DIVERGED, EXIT_STALL = 0, 2, 3, 4

SOURCE_CHECKPOINT = "source_model.ckpt"
TARGET_CHECKPOINT = "target_model.ckpt"
PREDICTIONS = "predictions.txt"
METRICS = "metrics.txt"
SWEEP_PARAMS = {"alpha": "alpha", "beta": "beta", "lambda": "lambda_stop"}


def _data_dir(args, cfg: RunConfig) -> Path:
    return Path(args.data) if getattr(args, "data", None) else cfg.out


def _write_kv(path: Path, items: dict) -> None:
    lines = []
    for k, v in items.items():
        if isinstance(v, float):
            v = f"{v:.9g}"
        lines.append(f"{k}={v}")
    path.write_text("\n".join(lines) + "\n")


def cmd_gen(cfg: RunConfig, args) -> int:
    d = cfg.data
    pair = datagen.make_domain_pair(d.K, d.dim, d.n_s, d.n_t, d.shift, cfg.hp.seed,
                                    d.separation, d.priors, d.target_priors)
    src, tgt = datagen.save_domain_pair(pair, cfg.out)
    print(f"wrote {src} and {tgt}")
    return EXIT_OK


def cmd_source(cfg: RunConfig, args) -> int:
    data_dir = _data_dir(args, cfg)
    source, K = datagen.load_source(data_dir / "source.txt")
    target, K_t = datagen.load_target(data_dir / "target.txt")
    if K_t != K:
        raise ConfigError("source and target dumps disagree on K")
    train, held = datagen.split(source, 0.8, cfg.hp.seed)
    model = pipeline.train_source(train, K, cfg.hp)
    cfg.out.mkdir(parents=True, exist_ok=True)
    pipeline.save_checkpoint(model, cfg.out / SOURCE_CHECKPOINT, role="source")
    pipeline.export_predictions(model, target.features, cfg.out / PREDICTIONS)
    report = {
        "train_acc": pipeline.evaluate(model, train.features, train.labels).accuracy,
        "heldout_acc": pipeline.evaluate(model, held.features, held.labels).accuracy,
    }
    if target.has_labels:
        report["target_acc"] = pipeline.evaluate(model, target.features,
                                                 target.evaluation_labels()).accuracy
    _write_kv(cfg.out / "source_report.txt", report)
    print(" ".join(f"{k}={v:.4f}" for k, v in report.items()))
    return EXIT_OK


def _refuse_source_artifacts(*paths: Path) -> None:
    for p in paths:
        if pipeline.checkpoint_role(p) == "source":
            raise ConfigError(f"{p} is a source model checkpoint; adaptation only reads predictions")


def _adapt_inputs(cfg: RunConfig, args):
    data_dir = _data_dir(args, cfg)
    pred_path = Path(args.predictions) if getattr(args, "predictions", None) else cfg.out / PREDICTIONS
    tgt_path = data_dir / "target.txt"
    for p in (pred_path, tgt_path):
        if not p.exists():
            raise ConfigError(f"missing input {p}")
    _refuse_source_artifacts(pred_path, tgt_path)
    target, K = datagen.load_target(tgt_path)
    preds = pipeline.load_predictions(pred_path)
    if preds.K != K:
        raise ConfigError(f"predictions have K={preds.K}, target dump K={K}")
    return target, preds


def cmd_adapt(cfg: RunConfig, args) -> int:
    target, preds = _adapt_inputs(cfg, args)
    res = pipeline.run_full(target, preds, cfg.hp)
    cfg.out.mkdir(parents=True, exist_ok=True)
    pipeline.save_checkpoint(res.model, cfg.out / TARGET_CHECKPOINT, role="target")
    pipeline.write_metrics(res.history, cfg.out / METRICS)
    _write_kv(cfg.out / "summary.txt", {
        "status": res.status, "rounds": res.rounds, "incremental_rounds": res.rounds - 1,
        "H_size": int(res.pools.in_high.sum()), "src_acc": res.src_acc,
        "crude_acc": res.crude_acc, "final_acc": res.final_acc,
    })
    (cfg.out / "config.resolved").write_text(format_config(cfg))
    print(f"status={res.status} rounds={res.rounds} crude_acc={res.crude_acc:.4f} "
          f"final_acc={res.final_acc:.4f}")
    return EXIT_OK


SWEEP_FIELDS = ("param", "value", "seed", "incremental_rounds", "H_size", "status",
                "src_acc", "crude_acc", "final_acc")


def _row(values) -> str:
    return ",".join(f"{v:.9g}" if isinstance(v, float) else str(v) for v in values)


def sweep_table(cfg: RunConfig, target, preds, param: str, values) -> list[tuple]:
    if param not in SWEEP_PARAMS:
        raise ConfigError(f"--param must be one of {', '.join(SWEEP_PARAMS)}")
    rows = []
    for v in values:
        for seed in cfg.seeds:
            hp = cfg.hp.with_(**{SWEEP_PARAMS[param]: float(v), "seed": seed})
            try:
                res = pipeline.run_full(target, preds, hp)
            except pipeline.SelectionError:
                rows.append((param, float(v), seed, 0, 0, "empty", np.nan, np.nan, np.nan))
                continue
            rows.append((param, float(v), seed, res.rounds - 1, int(res.pools.in_high.sum()),
                         res.status, res.src_acc, res.crude_acc, res.final_acc))
    return rows


def cmd_sweep(cfg: RunConfig, args) -> int:
    if not args.param or not args.values:
        raise ConfigError("sweep needs --param and --values")
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --values: {exc}") from exc
    target, preds = _adapt_inputs(cfg, args)
    rows = sweep_table(cfg, target, preds, args.param, values)
    cfg.out.mkdir(parents=True, exist_ok=True)
    path = cfg.out / f"sweep_{args.param}.txt"
    path.write_text(",".join(SWEEP_FIELDS) + "\n" + "".join(_row(r) + "\n" for r in rows))
    for r in rows:
        print(_row(r))
    return EXIT_OK


ABLATE_FIELDS = ("losses", "seed", "incremental_rounds", "status", "crude_acc", "final_acc")


def ablation_table(cfg: RunConfig, target, preds) -> list[tuple]:
    rows = []
    for name, w in pipeline.ABLATIONS.items():
        for seed in cfg.seeds:
            hp = cfg.hp.with_(w_kd=w.kd, w_im=w.im, w_mix=w.mix, seed=seed)
            res = pipeline.run_full(target, preds, hp)
            rows.append((name, seed, res.rounds - 1, res.status, res.crude_acc, res.final_acc))
    return rows


def cmd_ablate(cfg: RunConfig, args) -> int:
    target, preds = _adapt_inputs(cfg, args)
    rows = ablation_table(cfg, target, preds)
    cfg.out.mkdir(parents=True, exist_ok=True)
    body = ",".join(ABLATE_FIELDS) + "\n" + "".join(_row(r) + "\n" for r in rows)
    (cfg.out / "ablation.txt").write_text(body)
    for name in pipeline.ABLATIONS:
        accs = [r[5] for r in rows if r[0] == name]
        print(f"{name:18s} mean final_acc {np.mean(accs):.4f}")
    return EXIT_OK


COMMANDS = {"gen": cmd_gen, "source": cmd_source, "adapt": cmd_adapt,
            "sweep": cmd_sweep, "ablate": cmd_ablate}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ipl", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="key=value config file")
        p.add_argument("--profile", help="office | office-home | visda | custom")
        p.add_argument("--seed", type=int)
        p.add_argument("--out", help="output directory")
        p.add_argument("-v", "--verbose", action="store_true")
        if name != "gen":
            p.add_argument("--data", help="directory holding source.txt / target.txt (default: --out)")
        if name in ("adapt", "sweep", "ablate"):
            p.add_argument("--predictions", help="predictions file (default: OUT/predictions.txt)")
        if name == "sweep":
            p.add_argument("--param", choices=sorted(SWEEP_PARAMS))
            p.add_argument("--values", help="comma-separated grid")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config, args.profile, args.seed, args.out)
        return COMMANDS[args.command](cfg, args)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except pipeline.DivergenceError as exc:
        print(f"diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except pipeline.SelectionError as exc:
        print(f"selection stalled: {exc}", file=sys.stderr)
        return EXIT_STALL
    except ValueError as exc:
        # malformed data files
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
