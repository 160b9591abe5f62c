"""Benchmark estimators: spectral thresholding and a sorted histogram.

``usvt`` keeps the eigencomponents of the adjacency above a universal
threshold; ``sas`` sorts nodes by degree, forms a block histogram and
smooths the tile matrix with a moving average ("SAS-lite": the original
total-variation smoothing step is replaced by a box filter; window 1
recovers the pure sorted histogram). Both accept a pair mask for holdout
fitting.
"""

from dataclasses import dataclass

import numpy as np

from .graph import Graph, PairMask
from .histogram import block_averages
from .partitions import NodePartition


@dataclass(frozen=True)
class DenseEstimate:
    """Uniform estimator output: a symmetric [0,1] matrix with zero
    diagonal plus the effective parameter count."""

    theta_hat: np.ndarray
    method: str
    n_params: int

    def __post_init__(self):
        t = np.asarray(self.theta_hat, dtype=float)
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise ValueError("estimate must be square")
        if not np.allclose(t, t.T, atol=1e-12):
            raise ValueError("estimate must be symmetric")
        if t.size and (np.diagonal(t) != 0).any():
            raise ValueError("estimate diagonal must be zero")
        if (t < 0).any() or (t > 1).any():
            raise ValueError("estimate entries must lie in [0, 1]")
        t = t.copy()
        t.flags.writeable = False
        object.__setattr__(self, "theta_hat", t)


def _finalize(theta: np.ndarray) -> np.ndarray:
    theta = np.clip(theta, 0.0, 1.0)
    theta = 0.5 * (theta + theta.T)  # guard against floating-point drift
    np.fill_diagonal(theta, 0.0)
    return theta


def _masked_adjacency(g: Graph, mask: PairMask | None) -> tuple[np.ndarray, np.ndarray]:
    """(matrix to fit on, observed degrees). Held-out entries are filled
    with the observed edge density so they carry no signal."""
    a = g.adj.astype(float)
    if mask is None:
        return a, g.adj.sum(axis=1).astype(np.int64)
    obs = mask.observed
    w = a * obs
    n_obs = np.triu(obs, 1).sum()
    density = np.triu(w, 1).sum() / n_obs if n_obs > 0 else 0.0
    filled = np.where(obs, a, density)
    np.fill_diagonal(filled, 0.0)
    return filled, w.sum(axis=1).astype(np.int64)


def usvt(g: Graph, eta: float = 0.01, mask: PairMask | None = None) -> DenseEstimate:
    """Universal singular value thresholding on the (symmetric) adjacency.

    Eigencomponents with |eigenvalue| > (2 + eta) * sqrt(n) are kept and
    the reconstruction is clipped into [0, 1]. With a mask, held-out
    entries are filled by the train density before the decomposition.
    """
    if eta <= 0:
        raise ValueError("eta must be positive")
    a, _ = _masked_adjacency(g, mask)
    n = a.shape[0]
    evals, evecs = np.linalg.eigh(a)
    keep = np.abs(evals) > (2.0 + eta) * np.sqrt(n)
    if keep.any():
        theta = (evecs[:, keep] * evals[keep]) @ evecs[:, keep].T
    else:
        theta = np.zeros_like(a)
    return DenseEstimate(theta_hat=_finalize(theta), method="usvt", n_params=int(keep.sum()))


def _box_filter(m: np.ndarray, window: int) -> np.ndarray:
    """2-d moving average with the window truncated at the borders."""
    if window <= 1:
        return m
    r = (window - 1) // 2
    k = m.shape[0]
    padded = np.zeros((k + 1, k + 1))
    padded[1:, 1:] = np.cumsum(np.cumsum(m, axis=0), axis=1)
    out = np.empty_like(m)
    for a in range(k):
        lo_a, hi_a = max(0, a - r), min(k, a + r + 1)
        for b in range(k):
            lo_b, hi_b = max(0, b - r), min(k, b + r + 1)
            total = (
                padded[hi_a, hi_b]
                - padded[lo_a, hi_b]
                - padded[hi_a, lo_b]
                + padded[lo_a, lo_b]
            )
            out[a, b] = total / ((hi_a - lo_a) * (hi_b - lo_b))
    return out


def sas(
    g: Graph,
    h: int | None = None,
    smoothing_window: int = 3,
    mask: PairMask | None = None,
) -> DenseEstimate:
    """Sorting-and-smoothing histogram ("SAS-lite").

    Nodes are stably sorted by ascending degree, grouped into contiguous
    blocks of width ``h`` (default about sqrt(n)), tile means are computed
    and box-filtered, and the result is mapped back to the original node
    order. With a mask, degrees and tile averages use observed pairs only.
    """
    n = g.n
    if h is None:
        h = max(1, int(np.ceil(np.sqrt(n))))
    if not 1 <= h <= n:
        raise ValueError(f"need 1 <= h <= n, got h={h}")
    _, deg = _masked_adjacency(g, mask)
    order = np.argsort(deg, kind="stable")
    k = int(np.ceil(n / h))
    labels_sorted = np.minimum(np.arange(n) // h, k - 1)
    z = np.empty(n, dtype=np.int64)
    z[order] = labels_sorted

    ba = block_averages(g, NodePartition(z=z, k=k), mask)
    smoothed = _box_filter(ba.means, smoothing_window)
    theta = smoothed[z[:, None], z[None, :]]
    return DenseEstimate(
        theta_hat=_finalize(theta), method="sas", n_params=k * (k + 1) // 2
    )
