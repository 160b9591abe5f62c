"""Fit and prediction metrics: MSE, latent-aligned MISE, AUC, and the
parameter/AUC reduction ratios of the smoothed estimator versus the raw
histogram."""

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .estimators import estimate, fit_shape_model
from .graph import Graph, holdout_split
from .graphons import Graphon, GroundTruth, LatentSample, get_graphon, sample_graph, sample_latents
from .partitions import tile_count
from .rng import derive_seed
from .smoothing import predict_theta


def mse(theta_hat: np.ndarray, truth) -> float:
    """Mean squared error (1/n^2) sum_{i != j} (that - theta)^2.

    ``truth`` may be a GroundTruth or a plain matrix. The diagonal is
    excluded (both sides are zero by convention) while the normalizer
    stays n^2.
    """
    t = truth.theta if isinstance(truth, GroundTruth) else np.asarray(truth, dtype=float)
    th = np.asarray(theta_hat, dtype=float)
    if th.shape != t.shape:
        raise ValueError(f"shape mismatch: {th.shape} vs {t.shape}")
    n = t.shape[0]
    diff = (th - t) ** 2
    np.fill_diagonal(diff, 0.0)
    return float(diff.sum() / (n * n))


def mise_aligned(
    theta_hat: np.ndarray, f: Graphon, xi: LatentSample, grid: int = 200
) -> float:
    """Squared graphon error under the known latent alignment.

    Nodes are sorted by their latent positions, the sorted estimate is
    viewed as an empirical graphon, and |f - fhat|^2 is integrated on a
    grid x grid midpoint rule. This upper-bounds the alignment-optimal
    error and is only available for synthetic data.
    """
    if xi is None:
        raise ValueError("aligned MISE needs the latent positions (synthetic data only)")
    th = np.asarray(theta_hat, dtype=float)
    n = xi.n
    if th.shape != (n, n):
        raise ValueError("estimate size must match the latent sample")
    order = np.argsort(xi.xi, kind="stable")
    sorted_theta = th[np.ix_(order, order)]
    pts = (np.arange(grid) + 0.5) / grid
    cells = np.minimum((pts * n).astype(np.int64), n - 1)
    fhat = sorted_theta[np.ix_(cells, cells)]
    ftrue = np.asarray(f.eval(pts[:, None], pts[None, :]), dtype=float)
    return float(((ftrue - fhat) ** 2).mean())


def auc(scored: list) -> float:
    """Area under the ROC curve from (score, label) pairs, computed by the
    rank (Mann-Whitney) statistic; ties count one half."""
    arr = list(scored)
    if not arr:
        raise ValueError("no scores")
    scores = np.array([s for s, _ in arr], dtype=float)
    labels = np.array([l for _, l in arr], dtype=int)
    pos = labels == 1
    n_pos = int(pos.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC is undefined without both classes")
    ranks = rankdata(scores)
    return float((ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def link_prediction_auc(
    g: Graph,
    method: str,
    fraction: float = 0.1,
    seed: int = 0,
    **fit_opts,
) -> float:
    """Holdout link prediction: fit on the train mask only, score the held
    out pairs by the estimated probabilities."""
    train, test = holdout_split(g, fraction, seed)
    out = estimate(g, method, seed=derive_seed(seed, "fit"), mask=train, **fit_opts)
    iu = np.triu_indices(g.n, k=1)
    sel = test.observed[iu]
    scores = out.estimate.theta_hat[iu][sel]
    labels = g.adj[iu][sel]
    return auc(list(zip(scores, labels)))


def param_and_auc_ratios(
    graphon: str | Graphon,
    n: int,
    seeds: list,
    fraction: float = 0.1,
    k: int | None = None,
    bandwidth_c: float = 2.0,
    restarts: int = 10,
    max_sweeps: int = 50,
) -> tuple[float, float]:
    """(RP, RAUC) averaged over seeds.

    RP is the selected shape count over the tile count; RAUC is the
    holdout AUC of the smoothed model over that of the unsmoothed
    histogram, both scored from the same masked fit.
    """
    f = get_graphon(graphon) if isinstance(graphon, str) else graphon
    rps, raucs = [], []
    for seed in seeds:
        xi = sample_latents(n, derive_seed(seed, "xi"))
        g, _ = sample_graph(f, xi, derive_seed(seed, "adj"))
        full = fit_shape_model(
            g, k=k, seed=seed, bandwidth_c=bandwidth_c, restarts=restarts, max_sweeps=max_sweeps
        )
        rps.append(full.model.s / tile_count(full.model.k))

        train, test = holdout_split(g, fraction, derive_seed(seed, "holdout"))
        held = fit_shape_model(
            g, k=k, seed=seed, mask=train, bandwidth_c=bandwidth_c,
            restarts=restarts, max_sweeps=max_sweeps,
        )
        iu = np.triu_indices(g.n, k=1)
        sel = test.observed[iu]
        labels = g.adj[iu][sel]
        zz = held.partition.z
        hist_theta = held.averages.means[zz[:, None], zz[None, :]]
        smooth_theta = predict_theta(held.model)
        auc_smooth = auc(list(zip(smooth_theta[iu][sel], labels)))
        auc_hist = auc(list(zip(hist_theta[iu][sel], labels)))
        raucs.append(auc_smooth / auc_hist)
    return float(np.mean(rps)), float(np.mean(raucs))


@dataclass
class EvalReport:
    """One benchmark cell's metrics; optional fields stay None when their
    inputs are unavailable (no latents -> no MISE, no holdout -> no AUC)."""

    method: str
    graphon: str
    n: int
    seed: int
    mse: float | None = None
    mise_aligned: float | None = None
    auc: float | None = None
    n_params: int | None = None
    s: int | None = None
    k: int | None = None
    runtime_ms: int | None = None
    error: str = ""

    def __post_init__(self):
        if self.mse is not None and self.mse < 0:
            raise ValueError("mse must be nonnegative")
        if self.auc is not None and not 0.0 <= self.auc <= 1.0:
            raise ValueError("auc must lie in [0, 1]")

    def csv_row(self) -> list:
        def fmt(x):
            return "" if x is None else (repr(x) if isinstance(x, float) else str(x))

        return [
            self.method,
            self.graphon,
            str(self.n),
            str(self.seed),
            fmt(self.mse),
            fmt(self.mise_aligned),
            fmt(self.auc),
            fmt(self.n_params),
            fmt(self.s),
            fmt(self.k),
            fmt(self.runtime_ms),
            self.error,
        ]


CSV_COLUMNS = [
    "method", "graphon", "n", "seed", "mse", "mise_aligned", "auc",
    "n_params", "s", "k", "runtime_ms", "error",
]
