"""Smoothing a block histogram into a shape model with BIC selection.

The second estimation step: the k(k+1)/2 tile densities are clustered by
weighted one-dimensional k-means++ into s shapes for every candidate s,
each candidate is scored by BIC, and the minimizer is returned. Weighting
the k-means by tile pair counts makes its centroids equal the shape
averages, so the clustering objective coincides with the model's least
squares at fixed node partition.
"""

import json
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .graph import Graph, PairMask
from .histogram import BlockAverages, _observed, block_averages
from .partitions import NodePartition, TilePartition, tile_count, tile_pairs
from .rng import derive_seed, rng_from_seed

_KMEANS_SHIFT_TOL = 1e-10
_KMEANS_MAX_ITER = 100


@dataclass(frozen=True)
class FittedModel:
    """A complete shape-model estimate: (k, s, z, u, Q, loglik, BIC)."""

    k: int
    s: int
    z: NodePartition
    u: TilePartition
    q: np.ndarray
    loglik: float
    bic: float

    def __post_init__(self):
        if self.u.k != self.k or self.u.s != self.s or self.z.k != self.k:
            raise ValueError("inconsistent partition dimensions")
        q = np.asarray(self.q, dtype=float)
        if q.shape != (self.s,):
            raise ValueError("q must hold one probability per shape")
        if (q < 0).any() or (q > 1).any():
            raise ValueError("shape probabilities must lie in [0, 1]")
        q = q.copy()
        q.flags.writeable = False
        object.__setattr__(self, "q", q)

    @property
    def n_params(self) -> int:
        return self.s

    def shape_matrix(self) -> np.ndarray:
        """Shape id of every node pair (n x n, symmetric)."""
        um = self.u.as_matrix()
        return um[self.z.z[:, None], self.z.z[None, :]]

    def to_json(self) -> str:
        a, b = tile_pairs(self.k)
        payload = {
            "k": self.k,
            "s": self.s,
            "z": [int(x) for x in self.z.z],
            "u": [[int(x), int(y), int(c)] for x, y, c in zip(a, b, self.u.assign)],
            "Q": [float(x) for x in self.q],
            "loglik": self.loglik,
            "bic": self.bic,
        }
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "FittedModel":
        from .partitions import tile_index

        payload = json.loads(text)
        k, s = int(payload["k"]), int(payload["s"])
        assign = np.full(tile_count(k), -1, dtype=np.int64)
        for a, b, c in payload["u"]:
            assign[tile_index(k, a, b)] = c
        u = TilePartition(k=k, s=s, assign=assign)
        z = NodePartition(z=np.asarray(payload["z"], dtype=np.int64), k=k)
        return cls(
            k=k,
            s=s,
            z=z,
            u=u,
            q=np.asarray(payload["Q"], dtype=float),
            loglik=float(payload["loglik"]),
            bic=float(payload["bic"]),
        )


def predict_theta(model: FittedModel) -> np.ndarray:
    """Estimated probability matrix: Q at each pair's shape, zero diagonal."""
    theta = model.q[model.shape_matrix()].astype(float)
    np.fill_diagonal(theta, 0.0)
    return theta


def shape_average(ba: BlockAverages, u: TilePartition, c: int) -> float:
    """Edge-variable mean over shape c: pair-count-weighted mean of its tile means.

    A shape whose tiles all have zero pair count falls back to the plain
    mean of its tile means (those carry the fill value under a mask).
    """
    if not 0 <= c < u.s:
        raise ValueError(f"shape id {c} out of range")
    means, counts = ba.tile_arrays()
    members = u.assign == c
    if not members.any():
        raise ValueError(f"shape {c} has no tiles")
    w = counts[members]
    m = means[members]
    total = w.sum()
    if total == 0:
        return float(m.mean())
    return float((w * m).sum() / total)


def shape_averages(ba: BlockAverages, u: TilePartition) -> np.ndarray:
    return np.array([shape_average(ba, u, c) for c in range(u.s)])


def _weighted_pp_init(x: np.ndarray, w: np.ndarray, s: int, rng) -> np.ndarray:
    """k-means++ seeding on the weighted squared-distance distribution."""
    t = x.size
    centers = np.empty(s)
    total = w.sum()
    probs = w / total if total > 0 else np.full(t, 1.0 / t)
    idx = rng.choice(t, p=probs)
    centers[0] = x[idx]
    d2 = (x - centers[0]) ** 2
    for c in range(1, s):
        weights = w * d2
        tw = weights.sum()
        if tw > 0:
            idx = rng.choice(t, p=weights / tw)
        else:
            idx = rng.integers(t)
        centers[c] = x[idx]
        d2 = np.minimum(d2, (x - centers[c]) ** 2)
    return centers


def _repair_empty_clusters(x, w, centers, assign, s):
    """Move one point into each empty cluster, picking the point farthest
    (weighted) from its centroid among clusters that keep >= 2 members."""
    for c in range(s):
        if (assign == c).any():
            continue
        counts = np.bincount(assign, minlength=s)
        movable = counts[assign] >= 2
        cand = np.where(movable, w * (x - centers[assign]) ** 2, -1.0)
        far = int(np.argmax(cand))
        if cand[far] <= 0.0:
            big = int(np.argmax(counts))
            far = int(np.flatnonzero(assign == big)[0])
        assign[far] = c
        centers[c] = x[far]
    return assign, centers


def _lloyd(x: np.ndarray, w: np.ndarray, centers: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    s = centers.size
    centers = centers.copy()
    for _ in range(_KMEANS_MAX_ITER):
        assign = np.argmin(np.abs(x[:, None] - centers[None, :]), axis=1)
        assign, centers = _repair_empty_clusters(x, w, centers, assign, s)
        new_centers = centers.copy()
        for c in range(s):
            members = assign == c
            wc = w[members].sum()
            if wc > 0:
                new_centers[c] = (w[members] * x[members]).sum() / wc
            else:
                new_centers[c] = x[members].mean()
        shift = np.abs(new_centers - centers).max()
        centers = new_centers
        if shift < _KMEANS_SHIFT_TOL:
            break
    assign = np.argmin(np.abs(x[:, None] - centers[None, :]), axis=1)
    assign, centers = _repair_empty_clusters(x, w, centers, assign, s)
    wss = float((w * (x - centers[assign]) ** 2).sum())
    return assign, centers, wss


def _canonical_assign(assign: np.ndarray, centers: np.ndarray, s: int) -> np.ndarray:
    # relabel shapes by ascending centroid so output labels are stable
    order = np.argsort(centers, kind="stable")
    rank = np.empty(s, dtype=np.int64)
    rank[order] = np.arange(s)
    return rank[assign]


def kmeans_tiles(
    ba: BlockAverages,
    s: int,
    seed: int = 0,
    restarts: int = 10,
    weighted: bool = True,
) -> TilePartition:
    """Cluster tile densities into s shapes by weighted 1-d k-means++.

    Best of ``restarts`` runs by weighted within-cluster sum of squares;
    shape ids are ordered by ascending centroid. s=1 and s=tile-count are
    deterministic degenerate cases.
    """
    means, counts = ba.tile_arrays()
    t = means.size
    if not 1 <= s <= t:
        raise ValueError(f"need 1 <= s <= {t}, got s={s}")
    if s == 1:
        return TilePartition(k=ba.k, s=1, assign=np.zeros(t, dtype=np.int64))
    if s == t:
        order = np.argsort(means, kind="stable")
        assign = np.empty(t, dtype=np.int64)
        assign[order] = np.arange(t)
        return TilePartition(k=ba.k, s=t, assign=assign)

    w = counts.astype(float) if weighted else np.ones(t)
    rng = rng_from_seed(seed)
    best = None
    for _ in range(max(1, restarts)):
        centers0 = _weighted_pp_init(means, w, s, rng)
        assign, centers, wss = _lloyd(means, w, centers0)
        if best is None or wss < best[0] - 1e-15:
            best = (wss, assign, centers)
    _, assign, centers = best
    return TilePartition(k=ba.k, s=s, assign=_canonical_assign(assign, centers, s))


def _clamped_loglik_from_tiles(
    ba: BlockAverages, u: TilePartition, q: np.ndarray
) -> tuple[float, float]:
    """(loglik, m): Bernoulli log-likelihood over observed pairs, with the
    per-pair probability clamped into [eps, 1-eps], eps = 1/(2m)."""
    means, counts = ba.tile_arrays()
    m = counts.sum()
    eps = 1.0 / (2.0 * m) if m > 0 else 0.5
    p = np.clip(q[u.assign], eps, 1.0 - eps)
    edges = counts * means
    ll = float((edges * np.log(p) + (counts - edges) * np.log1p(-p)).sum())
    return ll, float(m)


def model_bic(g: Graph, model: FittedModel, mask: PairMask | None = None) -> float:
    """BIC = -2*loglik + s*log(m) over the observed pairs, evaluated
    directly from the adjacency matrix."""
    obs = _observed(g, mask)
    iu = np.triu_indices(g.n, k=1)
    sel = obs[iu]
    a = g.adj[iu][sel].astype(float)
    m = a.size
    eps = 1.0 / (2.0 * m) if m > 0 else 0.5
    p = np.clip(predict_theta(model)[iu][sel], eps, 1.0 - eps)
    ll = float((a * np.log(p) + (1.0 - a) * np.log1p(-p)).sum())
    return -2.0 * ll + model.s * np.log(m)


def smooth_and_select(
    g: Graph,
    ba: BlockAverages,
    part: NodePartition,
    seed: int = 0,
    mask: PairMask | None = None,
    restarts: int = 10,
    weighted_kmeans: bool = True,
) -> tuple[FittedModel, list[tuple[int, float, float]]]:
    """Sweep s = 1..k(k+1)/2, fit a shape model per s, return the BIC
    minimizer (ties toward smaller s) plus the full (s, bic, loglik) curve."""
    t = tile_count(ba.k)
    curve = []
    best = None
    for s in range(1, t + 1):
        u = kmeans_tiles(ba, s, seed=derive_seed(seed, "tiles", s), restarts=restarts,
                         weighted=weighted_kmeans)
        q = shape_averages(ba, u)
        ll, m = _clamped_loglik_from_tiles(ba, u, np.clip(q, 0.0, 1.0))
        bic = -2.0 * ll + s * np.log(m)
        curve.append((s, bic, ll))
        if best is None or bic < best.bic:
            best = FittedModel(k=ba.k, s=s, z=part, u=u, q=np.clip(q, 0.0, 1.0),
                               loglik=ll, bic=bic)
    return best, curve


# ---------------------------------------------------------------------------
# Least-squares objective and exhaustive oracle
# ---------------------------------------------------------------------------

def lsq_objective(g: Graph, model: FittedModel, mask: PairMask | None = None) -> float:
    """Direct evaluation of the least-squares objective over pairs i < j."""
    obs = _observed(g, mask)
    iu = np.triu_indices(g.n, k=1)
    sel = obs[iu]
    a = g.adj[iu][sel].astype(float)
    p = predict_theta(model)[iu][sel]
    return float(((a - p) ** 2).sum())


def lsq_objective_tiles(ba: BlockAverages, u: TilePartition, q: np.ndarray) -> float:
    """Tile-decomposed evaluation of the same objective:
    sum_t cnt_t * [m_t (1 - m_t) + (m_t - Q_{u(t)})^2]."""
    means, counts = ba.tile_arrays()
    return float((counts * (means * (1.0 - means) + (means - q[u.assign]) ** 2)).sum())


def _regular_label_maps(n: int, k: int):
    lo, r = divmod(n, k)
    allowed = {lo, lo + 1} if r else {lo}
    stack = [((), np.zeros(k, dtype=int))]
    for _ in range(n):
        new = []
        for prefix, sizes in stack:
            for lab in range(k):
                s2 = sizes.copy()
                s2[lab] += 1
                new.append((prefix + (lab,), s2))
        stack = new
    for prefix, sizes in stack:
        if set(sizes) <= allowed and (sizes > 0).all():
            yield np.array(prefix, dtype=np.int64)


def _surjective_tile_maps(t: int, s: int):
    for code in range(s**t):
        assign = np.empty(t, dtype=np.int64)
        c = code
        for i in range(t):
            assign[i] = c % s
            c //= s
        if np.unique(assign).size == s:
            yield assign


def brute_force_lsq(g: Graph, k: int, s: int) -> tuple[float, FittedModel]:
    """Global least-squares optimum by exhausting all regular node
    partitions and all surjective tile partitions. Guarded to tiny sizes."""
    n = g.n
    if n > 8 or k > 3 or s > 3:
        raise ValueError("brute force is limited to n <= 8, k <= 3, s <= 3")
    if s > tile_count(k):
        raise ValueError("more shapes than tiles")

    best = None
    u_maps = list(_surjective_tile_maps(tile_count(k), s))
    for z in _regular_label_maps(n, k):
        part = NodePartition(z=z, k=k)
        ba = block_averages(g, part)
        means, counts = ba.tile_arrays()
        base = float((counts * means * (1.0 - means)).sum())
        for assign in u_maps:
            q = np.zeros(s)
            for c in range(s):
                members = assign == c
                wsum = counts[members].sum()
                q[c] = (counts[members] * means[members]).sum() / wsum if wsum > 0 else means[members].mean()
            obj = base + float((counts * (means - q[assign]) ** 2).sum())
            if best is None or obj < best[0] - 1e-15:
                best = (obj, z.copy(), assign.copy(), q.copy())

    obj, z, assign, q = best
    part = NodePartition(z=z, k=k)
    ba = block_averages(g, part)
    u = TilePartition(k=k, s=s, assign=assign)
    ll, m = _clamped_loglik_from_tiles(ba, u, np.clip(q, 0.0, 1.0))
    model = FittedModel(k=k, s=s, z=part, u=u, q=np.clip(q, 0.0, 1.0),
                        loglik=ll, bic=-2.0 * ll + s * np.log(m))
    return obj, model
