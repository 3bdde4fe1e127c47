"""Command-line front end: sample, predict, sweep, check, bound.

Machine-readable data (JSON, CSV, JSONL) goes to stdout; every human-facing
message goes to stderr. Exit codes: 0 success, 1 validation failure, 2 usage
error (argparse's native convention).
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys

import numpy as np

from . import experiment as xp
from .graphs import (GraphParseError, builtin_dataset, is_connected,
                     laplacian_matrix, load_edge_list, load_labels,
                     normalized_laplacian_matrix)
from .linalg import check_stieltjes
from .sampling import (MeasurementMatrix, exhaustive_optimal, extend_state,
                       greedy_bound, greedy_sample, initial_state,
                       posterior_mean, random_sample)

BUILTINS = ("karate", "dolphin", "dolphins")


def _load_graph(spec: str, one_indexed: bool):
    if spec.strip().lower() in BUILTINS:
        return builtin_dataset(spec)
    with open(spec, "r", encoding="utf-8") as fh:
        return load_edge_list(fh.read(), one_indexed=one_indexed)


def _build_matrix(g, reg_kind: str) -> np.ndarray:
    if reg_kind == "L":
        return laplacian_matrix(g)
    return normalized_laplacian_matrix(g)


def _resolve_sigma2(value: str, omega0: np.ndarray) -> float:
    if value == "trace":
        return 1.0 / float(np.trace(omega0))
    sigma2 = float(value)
    if not sigma2 > 0:
        raise ValueError(f"--sigma2 must be positive, got {sigma2}")
    return sigma2


def _finite_or_null(x: float):
    # strict JSON has no Infinity token
    return x if math.isfinite(x) else None


def cmd_sample(args) -> int:
    g = _load_graph(args.graph, args.one_indexed)
    reg = xp.build_regularizer(g, args.reg)
    sigma2 = _resolve_sigma2(args.sigma2, reg.matrix)
    c = MeasurementMatrix.identity(g.n)
    if args.method == "greedy":
        result = greedy_sample(reg, c, sigma2, args.budget)
        selected = list(result.state.selected)
        loss = result.state.objective
        per_step = [{"node": s.node, "objective": _finite_or_null(s.objective),
                     "decrease": _finite_or_null(s.decrease)}
                    for s in result.per_step]
    elif args.method == "random":
        selected = list(random_sample(g.n, args.budget, args.seed))
        state = initial_state(reg, c, sigma2)
        for v in selected:
            state = extend_state(state, reg, c, v)
        loss = state.objective
        per_step = None
    else:
        sel, loss = exhaustive_optimal(reg, c, sigma2, args.budget)
        selected = list(sel)
        per_step = None
    print(json.dumps({"selected": selected, "loss": _finite_or_null(loss),
                      "per_step": per_step}))
    return 0


def cmd_predict(args) -> int:
    g = _load_graph(args.graph, args.one_indexed)
    reg = xp.build_regularizer(g, args.reg)
    sigma2 = _resolve_sigma2(args.sigma2, reg.matrix)
    try:
        selected = tuple(int(tok) for tok in args.samples.split(",") if tok)
    except ValueError:
        raise ValueError(f"--samples must be comma-separated integers, "
                         f"got {args.samples!r}")
    if not selected:
        raise ValueError("--samples must name at least one node")
    if any(not 0 <= v < g.n for v in selected):
        raise ValueError(f"--samples indices must be in [0, {g.n})")
    labels = g.node_labels
    if args.labels is not None:
        with open(args.labels, "r", encoding="utf-8") as fh:
            labels = load_labels(fh.read(), g.n)
    if labels is None:
        raise ValueError("no labels: pass --labels or use a builtin dataset")
    c = MeasurementMatrix.identity(g.n)
    state = initial_state(reg, c, sigma2)
    for v in selected:
        state = extend_state(state, reg, c, v)
    y = labels[list(selected)].astype(float)
    if args.noise_seed is not None:
        y = xp.add_label_noise(y, sigma2, args.noise_seed)
    x_hat = posterior_mean(state, c, y)
    pred = xp.classify(x_hat)
    print(json.dumps({"x_hat": [float(v) for v in x_hat],
                      "predicted_labels": [int(v) for v in pred],
                      "accuracy": xp.accuracy(pred, labels)}))
    return 0


def cmd_sweep(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        config = xp.ExperimentConfig.from_json(fh.read())
    records = xp.sweep(config)
    if args.format == "csv":
        sys.stdout.write(xp.records_to_csv(records))
    else:
        sys.stdout.write(xp.records_to_jsonl(records))
    if args.plot_dir is not None:
        from .report import render_sweep_figures
        paths = render_sweep_figures(records, args.plot_dir)
        for p in paths:
            print(f"wrote figure {p}", file=sys.stderr)
    return 0


def cmd_check(args) -> int:
    g = _load_graph(args.graph, args.one_indexed)
    m = _build_matrix(g, args.reg)
    report = check_stieltjes(m)
    connected = is_connected(g)
    payload = dataclasses.asdict(report)
    payload["min_eigenvalue"] = float(payload["min_eigenvalue"])
    payload["max_offdiag"] = float(payload["max_offdiag"])
    payload["connected"] = connected
    payload["n"] = g.n
    payload["num_edges"] = g.num_edges
    print(json.dumps(payload, sort_keys=True))
    ok = report.verdict and connected
    if not ok:
        print("check failed: " +
              ("not a Stieltjes matrix; " if not report.verdict else "") +
              ("graph is disconnected" if not connected else ""),
              file=sys.stderr)
    return 0 if ok else 1


def cmd_bound(args) -> int:
    print(greedy_bound(args.budget))
    return 0


def _add_graph_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", required=True,
                   help="edge-list path, or builtin name (karate, dolphin)")
    p.add_argument("--reg", choices=("L", "Ln"), default="L",
                   help="regularizer: combinatorial or normalized Laplacian")
    p.add_argument("--one-indexed", action="store_true",
                   help="treat file node indices as starting at 1")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="agssl",
        description="Active sampling for graph-based semi-supervised "
                    "learning")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("sample", help="select nodes to label")
    _add_graph_options(p)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--sigma2", default="trace",
                   help="noise variance, or 'trace' for 1/tr(regularizer)")
    p.add_argument("--method", choices=("greedy", "random", "exhaustive"),
                   default="greedy")
    p.add_argument("--seed", type=int, default=0,
                   help="selection seed (random method only)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("predict", help="posterior-mean label prediction")
    _add_graph_options(p)
    p.add_argument("--samples", required=True,
                   help="comma-separated node indices to observe "
                        "(always zero-based, like all output indices)")
    p.add_argument("--labels", default=None,
                   help="label file (defaults to the builtin dataset's)")
    p.add_argument("--sigma2", default="trace")
    p.add_argument("--noise-seed", type=int, default=None,
                   help="if set, observe labels with Gaussian noise")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("sweep", help="budget sweep from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--plot-dir", default=None,
                   help="also render loss/accuracy figures into this "
                        "directory")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("check",
                       help="Stieltjes and connectivity report (exit 0 iff "
                            "all checks pass)")
    _add_graph_options(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bound", help="greedy near-optimality bound")
    p.add_argument("--budget", type=int, required=True)
    p.set_defaults(func=cmd_bound)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, GraphParseError, OSError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
