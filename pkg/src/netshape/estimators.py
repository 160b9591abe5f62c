"""Method dispatch: the two-step shape-model pipeline and the baselines
behind one interface, with optional holdout masks."""

from dataclasses import dataclass

import numpy as np

from .baselines import DenseEstimate, sas, usvt
from .graph import Graph, PairMask
from .histogram import BlockAverages, default_bandwidth, fit_histogram
from .partitions import NodePartition, tile_count
from .smoothing import FittedModel, predict_theta, smooth_and_select

METHODS = ("ssm", "hist", "usvt", "sas")


@dataclass(frozen=True)
class ShapeFit:
    """Output of the full two-step pipeline."""

    model: FittedModel
    curve: list
    partition: NodePartition
    averages: BlockAverages


def fit_shape_model(
    g: Graph,
    k: int | None = None,
    seed: int = 0,
    mask: PairMask | None = None,
    bandwidth_c: float = 2.0,
    restarts: int = 10,
    max_sweeps: int = 50,
    weighted_kmeans: bool = True,
) -> ShapeFit:
    """Histogram fit followed by shape smoothing with BIC selection."""
    if k is None:
        k = default_bandwidth(g.n, bandwidth_c)
    part, ba = fit_histogram(g, k, seed=seed, max_sweeps=max_sweeps, mask=mask)
    model, curve = smooth_and_select(
        g, ba, part, seed=seed, mask=mask, restarts=restarts, weighted_kmeans=weighted_kmeans
    )
    return ShapeFit(model=model, curve=curve, partition=part, averages=ba)


@dataclass(frozen=True)
class EstimateOutcome:
    estimate: DenseEstimate
    k: int | None = None
    s: int | None = None
    model: FittedModel | None = None
    curve: list | None = None


def estimate(
    g: Graph,
    method: str,
    seed: int = 0,
    mask: PairMask | None = None,
    k: int | None = None,
    bandwidth_c: float = 2.0,
    restarts: int = 10,
    max_sweeps: int = 50,
    usvt_eta: float = 0.01,
    sas_h: int | None = None,
    sas_window: int = 3,
) -> EstimateOutcome:
    """Fit ``method`` ("ssm", "hist", "usvt" or "sas") and return a dense
    probability estimate plus method-specific fit details."""
    if method == "ssm":
        fit = fit_shape_model(
            g, k=k, seed=seed, mask=mask, bandwidth_c=bandwidth_c,
            restarts=restarts, max_sweeps=max_sweeps,
        )
        est = DenseEstimate(
            theta_hat=predict_theta(fit.model), method="ssm", n_params=fit.model.s
        )
        return EstimateOutcome(
            estimate=est, k=fit.model.k, s=fit.model.s, model=fit.model, curve=fit.curve
        )
    if method == "hist":
        kk = default_bandwidth(g.n, bandwidth_c) if k is None else k
        part, ba = fit_histogram(g, kk, seed=seed, max_sweeps=max_sweeps, mask=mask)
        theta = ba.means[part.z[:, None], part.z[None, :]].copy()
        np.fill_diagonal(theta, 0.0)
        est = DenseEstimate(
            theta_hat=np.clip(theta, 0.0, 1.0), method="hist", n_params=tile_count(kk)
        )
        return EstimateOutcome(estimate=est, k=kk, s=None)
    if method == "usvt":
        return EstimateOutcome(estimate=usvt(g, eta=usvt_eta, mask=mask))
    if method == "sas":
        return EstimateOutcome(estimate=sas(g, h=sas_h, smoothing_window=sas_window, mask=mask))
    raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
