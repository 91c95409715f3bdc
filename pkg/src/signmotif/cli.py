"""Command-line entry point: ``signmotif <subcommand> ...``.

Exit codes: 0 success, 1 data error, 2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from collections import Counter
from dataclasses import asdict
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .classifier import TrainConfig
from .evaluation import METHODS, MetricsReport, RunOptions, SplitSpec, expand_methods, method_table_csv, run_experiment
from .evaluation.experiment import default_threads
from .graph import SignedGraph, mask, stats
from .io import FORMATS, ParseError, load_tsv, read_records, save_tsv, to_undirected
from .motifs.catalog import CATALOG, DEFAULT_S_INDEX, s_name
from .motifs.index import MotifIndex
from .scoring import VARIANTS, DegeneratePrior, compute_prior, score_matrix, write_scores_csv

OUTPUT_ENV = "SIGNMOTIF_OUTPUT_DIR"

EXIT_OK, EXIT_DATA, EXIT_CONFIG = 0, 1, 2


class ConfigError(Exception):
    pass


class DataError(Exception):
    pass


def load_graph(path: str | Path, fmt: str | None = None, diagnostics: Counter | None = None,
               keep_isolated: bool = False) -> SignedGraph:
    """Canonical TSV (``fmt`` None or ``tsv``) or a raw directed format converted on the fly."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"no such file: {path}")
    try:
        if fmt in (None, "tsv"):
            return load_tsv(path)
        return to_undirected(read_records(path, fmt, diagnostics), diagnostics, keep_isolated)
    except ParseError as exc:
        raise DataError(f"{path}: {exc}") from None
    except (ValueError, UnicodeDecodeError) as exc:
        raise DataError(f"{path}: {exc}") from None


def _dump_json(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


# ---- ingest / stats / coverage / score

def cmd_ingest(args) -> int:
    diag: Counter = Counter()
    g = load_graph(args.input, args.format, diag, args.keep_isolated)
    out = Path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_tsv(g, out)
    summary = stats(g).as_dict()
    summary["diagnostics"] = dict(sorted(diag.items()))
    summary["source"] = str(args.input)
    summary["format"] = args.format
    stats_path = Path(args.stats) if args.stats else out.with_suffix(".stats.json")
    _dump_json(summary, stats_path)
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


def cmd_stats(args) -> int:
    g = load_graph(args.graph, args.format)
    print(json.dumps(stats(g).as_dict(), sort_keys=True))
    return EXIT_OK


def cmd_coverage(args) -> int:
    g = load_graph(args.graph, args.format)
    if g.n_links == 0:
        raise DataError("motif coverage is undefined on a graph without links")
    cov = MotifIndex(g, induced=args.induced).coverage()
    out = open(args.output, "w", newline="", encoding="utf-8") if args.output else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["predictor", "s_index", "coverage"])
        for p in CATALOG:
            w.writerow([p.label, s_name(p), repr(float(cov[p.index]))])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _read_pairs(path: str, g: SignedGraph) -> np.ndarray:
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if len(parts) < 2:
                raise DataError(f"{path}: line {lineno}: expected two node ids")
            try:
                pairs.append((g.index(parts[0]), g.index(parts[1])))
            except KeyError as exc:
                raise DataError(f"{path}: line {lineno}: unknown node {exc}") from None
    return np.array(pairs, dtype=np.int64).reshape(-1, 2)


def cmd_score(args) -> int:
    g = load_graph(args.graph, args.format)
    variants = args.variants or list(VARIANTS)
    for v in variants:
        if v not in VARIANTS:
            raise ConfigError(f"unknown variant {v!r}; valid: {', '.join(VARIANTS)}")
    if args.targets:
        pairs = _read_pairs(args.targets, g)
    else:
        pairs = np.stack([g.src, g.dst], axis=1)
    hidden = [] if args.no_mask else [k for k in (g.link_id(int(a), int(b)) for a, b in pairs) if k >= 0]
    view = mask(g, hidden)
    prior = compute_prior(view)
    ev = MotifIndex(view, induced=args.induced).evidence(pairs)
    rows = []
    for v in variants:
        sm = score_matrix(ev, prior, v)
        for t, (a, b) in enumerate(pairs.tolist()):
            u, w = g.labels[a], g.labels[b]
            for p in CATALOG:
                rows.append((u, w, p.label, v, sm[t, p.index]))
            rows.append((u, w, "GMMNB", v, sm[t].sum()))
    out = open(args.output, "w", newline="", encoding="utf-8") if args.output else sys.stdout
    try:
        write_scores_csv(out, rows)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


# ---- evaluate / report

_DEFAULTS = {
    "data": None,
    "format": None,
    "dataset": "",
    "methods": ["FGMNB"],
    "predictors": "all",
    "s_index": dict(DEFAULT_S_INDEX),
    "split": asdict(SplitSpec()),
    "train": asdict(TrainConfig()),
    "induced": False,
    "classifier": "internal",
    "shuffle_train_labels": False,
    "auc_samples": None,
    "threads": None,
    "output_dir": None,
}

# flag name -> (section, key) in the resolved config
_FLAG_MAP = {
    "data": (None, "data"), "format": (None, "format"), "dataset": (None, "dataset"),
    "methods": (None, "methods"), "predictors": (None, "predictors"),
    "induced": (None, "induced"), "shuffle_train_labels": (None, "shuffle_train_labels"),
    "auc_samples": (None, "auc_samples"), "threads": (None, "threads"), "output_dir": (None, "output_dir"),
    "realizations": ("split", "realizations"), "train_fraction": ("split", "train_fraction"),
    "seed": ("split", "master_seed"),
    "rounds": ("train", "rounds"), "max_depth": ("train", "max_depth"),
    "learning_rate": ("train", "learning_rate"), "min_child_weight": ("train", "min_child_weight"),
    "l2_reg": ("train", "l2_reg"),
}


def _load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"config file {path} is not valid YAML: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a mapping")
    # a manifest carries the resolved config under "config"
    if "config" in data and isinstance(data["config"], dict) and "manifest_version" in data:
        data = data["config"]
    return data


def resolve_config(args) -> dict:
    cfg = json.loads(json.dumps(_DEFAULTS))
    if args.config:
        data = _load_config_file(args.config)
        unknown = set(data) - set(cfg)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        for k, v in data.items():
            if k in ("split", "train"):
                if not isinstance(v, dict):
                    raise ConfigError(f"config section {k!r} must be a mapping")
                bad = set(v) - set(cfg[k])
                if bad:
                    raise ConfigError(f"unknown {k} keys: {', '.join(sorted(bad))}")
                cfg[k].update(v)
            else:
                cfg[k] = v
    for flag, (section, key) in _FLAG_MAP.items():
        val = getattr(args, flag, None)
        if val is None or val is False:
            continue
        (cfg[section] if section else cfg)[key] = val
    if isinstance(cfg["methods"], str):
        cfg["methods"] = [m.strip() for m in cfg["methods"].split(",") if m.strip()]
    if isinstance(cfg["predictors"], str) and cfg["predictors"] != "all":
        cfg["predictors"] = [p.strip() for p in cfg["predictors"].split(",") if p.strip()]
    if not cfg["data"]:
        raise ConfigError("no dataset given (config key 'data' or --data)")
    if cfg["format"] not in (None, "tsv") + FORMATS:
        raise ConfigError(f"unknown format {cfg['format']!r}; valid: tsv, {', '.join(FORMATS)}")
    return cfg


def config_hash(cfg: dict) -> str:
    """Hash of everything that can change results (not threads or output location)."""
    relevant = {k: v for k, v in cfg.items() if k not in ("threads", "output_dir")}
    blob = json.dumps(relevant, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def _output_dir(cfg: dict, args) -> Path:
    if getattr(args, "output_dir", None):
        return Path(args.output_dir)
    if os.environ.get(OUTPUT_ENV):
        return Path(os.environ[OUTPUT_ENV])
    return Path(cfg["output_dir"] or "signmotif-out")


def _stamped_csv(text: str, chash: str, seed: int) -> str:
    return f"# config_hash={chash}\n# master_seed={seed}\n" + text


def cmd_evaluate(args) -> int:
    cfg = resolve_config(args)
    try:
        spec = SplitSpec(**cfg["split"])
        train_cfg = TrainConfig(**cfg["train"])
        methods = expand_methods(cfg["methods"], cfg["predictors"], cfg["s_index"])
    except (TypeError, ValueError, KeyError) as exc:
        valid = f"methods: {', '.join(METHODS)}; predictors: {', '.join(p.label for p in CATALOG)}, S1-S9, all"
        raise ConfigError(f"{exc}\nvalid {valid}") from None
    options = RunOptions(induced=bool(cfg["induced"]), classifier=cfg["classifier"],
                         shuffle_train_labels=bool(cfg["shuffle_train_labels"]), auc_samples=cfg["auc_samples"])
    g = load_graph(cfg["data"], cfg["format"])
    threads = cfg["threads"] or default_threads()
    chash = config_hash(cfg)
    try:
        report = run_experiment(g, methods, spec, train_cfg, options, threads=threads,
                                dataset=cfg["dataset"] or Path(cfg["data"]).name, s_index=cfg["s_index"])
    except DegeneratePrior as exc:
        raise DataError(str(exc)) from None
    except ValueError as exc:
        raise DataError(str(exc)) from None
    report.metadata["config_hash"] = chash
    report.metadata["master_seed"] = spec.master_seed
    out = _output_dir(cfg, args)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(report.to_json(), encoding="utf-8")
    (out / "summary.csv").write_text(_stamped_csv(report.summary_csv(), chash, spec.master_seed), encoding="utf-8")
    if any(r.predictor != "ALL" for r in report.results):
        for metric in ("auc", "acc"):
            (out / f"predictors_{metric}.csv").write_text(
                _stamped_csv(report.predictor_table_csv(metric), chash, spec.master_seed), encoding="utf-8")
    manifest = {"manifest_version": 1, "config": cfg, "config_hash": chash,
                "master_seed": spec.master_seed, "version": __version__}
    _dump_json(manifest, out / "manifest.json")
    sys.stdout.write(report.summary_csv())
    return EXIT_OK


def cmd_report(args) -> int:
    reports = {}
    for path in args.reports:
        try:
            rep = MetricsReport.from_json(Path(path).read_text(encoding="utf-8"))
        except (OSError, ValueError, KeyError) as exc:
            raise DataError(f"{path}: {exc}") from None
        name = rep.metadata.get("dataset") or Path(path).stem
        reports[name] = rep
    if args.layout == "predictors":
        if len(reports) != 1:
            raise ConfigError("the predictors layout takes exactly one report")
        text = next(iter(reports.values())).predictor_table_csv(args.metric)
    else:
        text = method_table_csv(reports, args.metric)
    sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="signmotif", description="Motif-based sign prediction on signed networks.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    graph_formats = ["tsv", *FORMATS]

    p = sub.add_parser("ingest", help="convert a raw directed dataset to the canonical undirected TSV")
    p.add_argument("input")
    p.add_argument("--format", required=True, choices=FORMATS)
    p.add_argument("--output", "-o", required=True)
    p.add_argument("--stats", help="stats JSON path (default: next to the output)")
    p.add_argument("--keep-isolated", action="store_true",
                   help="keep nodes whose every link was removed (they are dropped by default)")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("stats", help="node/link counts and sign fractions")
    p.add_argument("graph")
    p.add_argument("--format", choices=graph_formats, default="tsv")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("coverage", help="per-predictor motif coverage as CSV")
    p.add_argument("graph")
    p.add_argument("--format", choices=graph_formats, default="tsv")
    p.add_argument("--induced", action="store_true")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("score", help="per-predictor likelihood scores for target pairs")
    p.add_argument("graph")
    p.add_argument("--format", choices=graph_formats, default="tsv")
    p.add_argument("--targets", help="file of node pairs, one per line (default: every link)")
    p.add_argument("--no-mask", action="store_true", help="keep the signs of target links visible")
    p.add_argument("--variants", nargs="+", metavar="VARIANT")
    p.add_argument("--induced", action="store_true")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("evaluate", help="run the repeated-realization protocol")
    p.add_argument("--config", "-c", help="YAML config or a previous run's manifest.json")
    p.add_argument("--data")
    p.add_argument("--format", choices=graph_formats)
    p.add_argument("--dataset")
    p.add_argument("--methods", help=f"comma list from {', '.join(METHODS)}, or VARIANT:PREDICTOR")
    p.add_argument("--predictors", help="comma list of labels / S-names, or 'all'")
    p.add_argument("--realizations", type=int)
    p.add_argument("--train-fraction", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--rounds", type=int)
    p.add_argument("--max-depth", type=int)
    p.add_argument("--learning-rate", type=float)
    p.add_argument("--min-child-weight", type=float)
    p.add_argument("--l2-reg", type=float)
    p.add_argument("--threads", type=int)
    p.add_argument("--induced", action="store_true")
    p.add_argument("--shuffle-train-labels", action="store_true")
    p.add_argument("--auc-samples", type=int)
    p.add_argument("--output-dir")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report", help="render tables from report.json files")
    p.add_argument("reports", nargs="+")
    p.add_argument("--layout", choices=["predictors", "methods"], default="methods")
    p.add_argument("--metric", choices=["auc", "acc"], default="auc")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, DegeneratePrior) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
