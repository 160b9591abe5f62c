"""Command-line interface: simulate | fit | benchmark | eval.

Exit codes: 0 on success, 2 on usage errors (argparse), 1 on runtime
failures.
"""

import argparse
import csv
import json
import os
import sys
import time

import numpy as np

from .bench import BenchConfig, run_benchmark
from .estimators import METHODS, estimate
from .graph import load_edge_list, save_edge_list
from .graphons import LatentSample, get_graphon, graphon_names, sample_graph, sample_latents
from .metrics import link_prediction_auc, mise_aligned, mse
from .rng import derive_seed


def _add_fit_flags(p):
    p.add_argument("--method", default="ssm", choices=METHODS, help="estimator to fit")
    p.add_argument("--k", type=int, default=None, help="override the histogram group count")
    p.add_argument("--bandwidth-c", type=float, default=2.0,
                   help="group-count rule constant: k = max(2, round(sqrt(n)/c))")
    p.add_argument("--restarts", type=int, default=10, help="k-means restarts per shape count")
    p.add_argument("--max-sweeps", type=int, default=50, help="local search sweep cap")
    p.add_argument("--usvt-eta", type=float, default=0.01, help="USVT threshold slack")
    p.add_argument("--sas-h", type=int, default=None, help="SAS block width (default ~sqrt(n))")
    p.add_argument("--sas-window", type=int, default=3, help="SAS smoothing window (1 = none)")


def _fit_opts(args):
    return dict(
        k=args.k, bandwidth_c=args.bandwidth_c, restarts=args.restarts,
        max_sweeps=args.max_sweeps, usvt_eta=args.usvt_eta,
        sas_h=args.sas_h, sas_window=args.sas_window,
    )


def cmd_simulate(args) -> int:
    try:
        f = get_graphon(args.graphon)
    except KeyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"known graphons: {', '.join(graphon_names())}", file=sys.stderr)
        return 2
    os.makedirs(args.out, exist_ok=True)
    xi = sample_latents(args.n, derive_seed(args.seed, "xi"))
    g, truth = sample_graph(f, xi, derive_seed(args.seed, "adj"))
    edge_path = os.path.join(args.out, "edges.txt")
    truth_path = os.path.join(args.out, "truth.json")
    save_edge_list(g, edge_path)
    payload = {
        "graphon": args.graphon,
        "n": args.n,
        "seed": args.seed,
        "xi": [float(x) for x in xi.xi],
        "theta": [[float(v) for v in row] for row in truth.theta],
    }
    with open(truth_path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True)
    print(f"wrote {edge_path} ({g.n} nodes, {g.edge_count} edges) and {truth_path}")
    return 0


def cmd_fit(args) -> int:
    g = load_edge_list(args.input, drop_isolated=args.drop_isolated)
    os.makedirs(args.out, exist_ok=True)
    start = time.perf_counter()
    out = estimate(g, args.method, seed=args.seed, **_fit_opts(args))
    runtime_ms = int(round((time.perf_counter() - start) * 1000))

    if out.model is not None:
        model_path = os.path.join(args.out, "model.json")
        with open(model_path, "w", encoding="utf-8") as fh:
            fh.write(out.model.to_json())
        curve_path = os.path.join(args.out, "bic_curve.csv")
        with open(curve_path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["s", "loglik", "bic"])
            for s, bic, ll in out.curve:
                w.writerow([s, repr(ll), repr(bic)])
        print(
            f"method=ssm k={out.model.k} s={out.model.s} "
            f"loglik={out.model.loglik:.4f} bic={out.model.bic:.4f} runtime_ms={runtime_ms}"
        )
    else:
        meta_path = os.path.join(args.out, "estimate.json")
        meta = {
            "method": out.estimate.method,
            "n": g.n,
            "n_params": out.estimate.n_params,
            "k": out.k,
            "runtime_ms": runtime_ms,
        }
        with open(meta_path, "w", encoding="utf-8") as fh:
            json.dump(meta, fh, sort_keys=True)
        extra = f" k={out.k}" if out.k is not None else ""
        print(f"method={out.estimate.method}{extra} n_params={out.estimate.n_params} "
              f"runtime_ms={runtime_ms}")
    if args.save_theta:
        np.save(os.path.join(args.out, "theta_hat.npy"), out.estimate.theta_hat)
    return 0


def cmd_benchmark(args) -> int:
    config = BenchConfig.from_json(args.config)
    if args.seed is not None:
        config.master_seed = args.seed
    if args.out is not None:
        config.output_dir = args.out
    if args.method is not None:
        config.methods = [args.method]
    if args.holdout is not None:
        config.holdout_fraction = args.holdout
    if args.restarts is not None:
        config.kmeans_restarts = args.restarts
    if args.bandwidth_c is not None:
        config.bandwidth_c = args.bandwidth_c
    if args.k is not None:
        config.k = args.k
    run_benchmark(config, threads=args.threads)
    return 0


def cmd_eval(args) -> int:
    g = load_edge_list(args.input, drop_isolated=args.drop_isolated)
    out = estimate(g, args.method, seed=args.seed, **_fit_opts(args))
    result = {
        "method": args.method,
        "n": g.n,
        "edges": g.edge_count,
        "n_params": out.estimate.n_params,
        "k": out.k,
        "s": out.s,
    }
    if args.truth is not None:
        with open(args.truth, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        theta = np.asarray(payload["theta"], dtype=float)
        result["mse"] = mse(out.estimate.theta_hat, theta)
        f = get_graphon(payload["graphon"])
        xi = LatentSample(xi=np.asarray(payload["xi"], dtype=float), seed=int(payload["seed"]))
        result["mise_aligned"] = mise_aligned(out.estimate.theta_hat, f, xi)
    if args.holdout is not None and args.holdout > 0:
        result["auc"] = link_prediction_auc(
            g, args.method, fraction=args.holdout,
            seed=derive_seed(args.seed, "holdout"), **_fit_opts(args),
        )
    print(json.dumps(result, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netshape",
        description="Estimate network generative mechanisms with shape-smoothed block histograms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="sample a graph from a named graphon")
    p.add_argument("--graphon", required=True, help="zoo name, e.g. f0 or ssm:<spec.json>")
    p.add_argument("--n", type=int, required=True, help="number of nodes")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fit", help="fit an estimator to an edge list")
    p.add_argument("--input", required=True, help="edge-list file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--drop-isolated", action="store_true")
    p.add_argument("--save-theta", action="store_true", help="also dump theta_hat.npy")
    _add_fit_flags(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("benchmark", help="run a Monte Carlo benchmark grid")
    p.add_argument("--config", required=True, help="BenchConfig JSON file")
    p.add_argument("--seed", type=int, default=None, help="override master_seed")
    p.add_argument("--out", default=None, help="override output_dir")
    p.add_argument("--method", default=None, choices=METHODS)
    p.add_argument("--holdout", type=float, default=None)
    p.add_argument("--restarts", type=int, default=None)
    p.add_argument("--bandwidth-c", type=float, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("eval", help="fit and report metrics for one graph")
    p.add_argument("--input", required=True, help="edge-list file")
    p.add_argument("--truth", default=None, help="truth JSON from `simulate`")
    p.add_argument("--holdout", type=float, default=0.1,
                   help="holdout fraction for AUC (0 disables)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--drop-isolated", action="store_true")
    _add_fit_flags(p)
    p.set_defaults(func=cmd_eval)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
