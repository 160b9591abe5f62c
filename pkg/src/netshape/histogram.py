"""Regular block-histogram fitting by greedy profile-likelihood ascent.

The first estimation step: nodes are assigned to k near-equal groups
(sizes differ by at most one) and the assignment is improved by local
search. Each sweep visits the nodes in a seeded random order and, per
node, evaluates every regularity-preserving relabel plus every pairwise
label swap, accepting the best strictly-improving proposal. The
objective is the Bernoulli log-likelihood profiled over tile
probabilities, which the tile averages maximize, so accepted moves can
be scored from tile counts alone.

All tile statistics support an optional observation mask so the same
machinery drives holdout (link-prediction) fits; with a mask the
denominators are observed-pair counts.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .graph import Graph, PairMask, degree_sequence
from .partitions import NodePartition, tile_pairs

ACCEPT_TOL = 1e-7  # guards against float-noise acceptance loops


@dataclass(frozen=True)
class BlockAverages:
    """Per-tile edge densities and edge-variable counts for a partition.

    ``pair_counts[a, b]`` is |a|*|b| off the diagonal and C(|a|, 2) on it
    (observed-pair counts when a mask was supplied); ``means`` are the
    corresponding edge densities.
    """

    k: int
    means: np.ndarray
    pair_counts: np.ndarray

    def tile_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(means, counts) over the canonical unordered tile order."""
        a, b = tile_pairs(self.k)
        return self.means[a, b], self.pair_counts[a, b]


def _observed(g: Graph, mask: PairMask | None) -> np.ndarray:
    if mask is None:
        obs = ~np.eye(g.n, dtype=bool)
    else:
        if mask.n != g.n:
            raise ValueError("mask size must match graph size")
        obs = mask.observed
    return obs


def block_averages(g: Graph, part: NodePartition, mask: PairMask | None = None) -> BlockAverages:
    """Edge density and pair count per tile of the partition.

    Unmasked zero-count tiles (single-node diagonal tiles) get mean 0.
    Under a mask, tiles with no observed pair inherit the global observed
    density so that held-out pairs still receive a score.
    """
    if part.n != g.n:
        raise ValueError("partition size must match graph size")
    obs = _observed(g, mask)
    k = part.k
    Z = np.zeros((g.n, k))
    Z[np.arange(g.n), part.z] = 1.0

    W = (g.adj * obs).astype(float)
    O = obs.astype(float)
    edges = Z.T @ W @ Z  # ordered sums; diagonal double-counts
    pairs = Z.T @ O @ Z
    np.fill_diagonal(edges, np.diagonal(edges) / 2.0)
    np.fill_diagonal(pairs, np.diagonal(pairs) / 2.0)

    if mask is None:
        fill = 0.0
    else:
        total_pairs = pairs.sum() + np.triu(pairs, 1).sum()  # unordered total
        total_edges = edges.sum() + np.triu(edges, 1).sum()
        fill = total_edges / total_pairs if total_pairs > 0 else 0.0

    with np.errstate(invalid="ignore", divide="ignore"):
        means = np.where(pairs > 0, edges / np.maximum(pairs, 1.0), fill)
    return BlockAverages(k=k, means=means, pair_counts=pairs)


def _phi_float(counts: np.ndarray, edges: np.ndarray) -> np.ndarray:
    # count * (m log m + (1-m) log(1-m)) at m = edges/counts, 0 log 0 = 0
    return xlogy(edges, edges) + xlogy(counts - edges, counts - edges) - xlogy(counts, counts)


def profile_log_likelihood(g: Graph, part: NodePartition, mask: PairMask | None = None) -> float:
    """Bernoulli log-likelihood maximized over tile probabilities."""
    ba = block_averages(g, part, mask)
    means, counts = ba.tile_arrays()
    return float(_phi_float(counts, counts * means).sum())


def default_bandwidth(n: int, c: float = 2.0) -> int:
    """Group-count rule k = max(2, round(sqrt(n)/c)); group width about c*sqrt(n)."""
    if n < 4:
        raise ValueError("need at least 4 nodes")
    return max(2, int(round(np.sqrt(n) / c)))


def _degree_sort_partition(g: Graph, k: int) -> np.ndarray:
    """Near-equal contiguous groups in ascending stable degree order."""
    order = np.argsort(degree_sequence(g), kind="stable")
    h, r = divmod(g.n, k)
    sizes = [h + 1] * r + [h] * (k - r)
    z = np.empty(g.n, dtype=np.int64)
    start = 0
    for label, size in enumerate(sizes):
        z[order[start : start + size]] = label
        start += size
    return z


class _SweepState:
    """Incremental tile counts and likelihood for the local search.

    E and N are ordered k x k sums (diagonals double-counted): E holds
    observed edges per tile, N observed pairs. DW/DO are per-node counts
    of observed neighbors / observed pairs into each group. phi values
    come from a lookup table indexed by integer counts.
    """

    def __init__(self, W: np.ndarray, OBS: np.ndarray, z: np.ndarray, k: int):
        self.W = W
        self.OBS = OBS
        self.z = z.copy()
        self.k = k
        n = W.shape[0]
        Z = np.zeros((n, k), dtype=np.int64)
        Z[np.arange(n), z] = 1
        self.E = Z.T @ W.astype(np.int64) @ Z
        self.N = Z.T @ OBS.astype(np.int64) @ Z
        self.DW = W.astype(np.int64) @ Z
        self.DO = OBS.astype(np.int64) @ Z
        self.sizes = np.bincount(z, minlength=k)
        top = int(self.sizes.max()) + 1
        v = np.arange(top * top + 2, dtype=float)
        self.vlogv = xlogy(v, v)
        self.ll = self._loglik_scratch()

    def _phi(self, N, E):
        t = self.vlogv
        return t[E] + t[N - E] - t[N]

    def _row_unordered(self, x: int) -> tuple[np.ndarray, np.ndarray]:
        e = self.E[x].copy()
        e[x] //= 2
        nn = self.N[x].copy()
        nn[x] //= 2
        return e, nn

    def _loglik_scratch(self) -> float:
        a, b = np.triu_indices(self.k)
        e = self.E[a, b].copy()
        nn = self.N[a, b].copy()
        diag = a == b
        e[diag] //= 2
        nn[diag] //= 2
        return float(self._phi(nn, e).sum())

    def relabel_delta(self, i: int, a: int, b: int) -> float:
        di, oi = self.DW[i], self.DO[i]
        Ea, Na = self._row_unordered(a)
        Eb, Nb = self._row_unordered(b)
        Ea2 = Ea - di
        Na2 = Na - oi
        Eb2 = Eb + di
        Nb2 = Nb + oi
        # cross tile (a, b) gains i's former within-a pairs
        Ea2[b] += di[a]
        Na2[b] += oi[a]
        Eb2[a] = Ea2[b]
        Nb2[a] = Na2[b]
        old = self._phi(Na, Ea).sum() + self._phi(Nb, Eb).sum() - self._phi(Na[b], Ea[b])
        new = self._phi(Na2, Ea2).sum() + self._phi(Nb2, Eb2).sum() - self._phi(Na2[b], Ea2[b])
        return float(new - old)

    def swap_deltas(self, i: int, a: int, b: int, members: np.ndarray) -> np.ndarray:
        di, oi = self.DW[i], self.DO[i]
        dj = self.DW[members]
        oj = self.DO[members]
        wij = self.W[i, members].astype(np.int64)
        oij = self.OBS[i, members].astype(np.int64)

        Ea, Na = self._row_unordered(a)
        Eb, Nb = self._row_unordered(b)
        dd = dj - di[None, :]
        od = oj - oi[None, :]
        Ea2 = Ea[None, :] + dd
        Na2 = Na[None, :] + od
        Eb2 = Eb[None, :] - dd
        Nb2 = Nb[None, :] - od
        Ea2[:, a] -= wij
        Na2[:, a] -= oij
        Eb2[:, b] -= wij
        Nb2[:, b] -= oij
        cross_e = Ea[b] + di[a] - di[b] + dj[:, b] - dj[:, a] + 2 * wij
        cross_n = Na[b] + oi[a] - oi[b] + oj[:, b] - oj[:, a] + 2 * oij
        Ea2[:, b] = cross_e
        Na2[:, b] = cross_n
        Eb2[:, a] = cross_e
        Nb2[:, a] = cross_n

        old = self._phi(Na, Ea).sum() + self._phi(Nb, Eb).sum() - self._phi(Na[b], Ea[b])
        new = (
            self._phi(Na2, Ea2).sum(axis=1)
            + self._phi(Nb2, Eb2).sum(axis=1)
            - self._phi(cross_n, cross_e)
        )
        return new - old

    def apply_relabel(self, i: int, b: int, delta: float):
        a = self.z[i]
        di = self.DW[i].copy()
        oi = self.DO[i].copy()
        self.E[a, :] -= di
        self.E[:, a] -= di
        self.E[b, :] += di
        self.E[:, b] += di
        self.N[a, :] -= oi
        self.N[:, a] -= oi
        self.N[b, :] += oi
        self.N[:, b] += oi
        nbrs = np.flatnonzero(self.W[i])
        obs = np.flatnonzero(self.OBS[i])
        self.DW[nbrs, a] -= 1
        self.DW[nbrs, b] += 1
        self.DO[obs, a] -= 1
        self.DO[obs, b] += 1
        self.z[i] = b
        self.sizes[a] -= 1
        self.sizes[b] += 1
        self.ll += delta

    def apply_swap(self, i: int, j: int, delta: float):
        a, b = self.z[i], self.z[j]
        self.apply_relabel(i, b, 0.0)
        self.apply_relabel(j, a, 0.0)
        self.ll += delta


def fit_histogram(
    g: Graph,
    k: int,
    seed: int = 0,
    max_sweeps: int = 50,
    mask: PairMask | None = None,
    init_z: np.ndarray | None = None,
) -> tuple[NodePartition, BlockAverages]:
    """Fit a regular k-group histogram by greedy likelihood ascent.

    Starts from near-equal contiguous groups in sorted-degree order
    (``init_z`` overrides), then sweeps until no proposal improves the
    profile likelihood or ``max_sweeps`` is reached. The seed only
    shuffles the node visiting order, so runs are deterministic; per node
    the best improving proposal wins, with ties resolved toward the
    earliest candidate (lower target group, then lower partner index).
    """
    n = g.n
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if k == 1:
        part = NodePartition(z=np.zeros(n, dtype=np.int64), k=1)
        return part, block_averages(g, part, mask)

    z0 = _degree_sort_partition(g, k) if init_z is None else np.asarray(init_z, dtype=np.int64)
    obs = _observed(g, mask)
    W = (g.adj.astype(np.uint8) * obs).astype(np.uint8)
    state = _SweepState(W, obs.astype(np.uint8), z0, k)

    rng = np.random.Generator(np.random.PCG64(seed))
    for _ in range(max_sweeps):
        accepted = 0
        for i in rng.permutation(n):
            a = state.z[i]
            best_delta = ACCEPT_TOL
            best_move = None
            for b in range(k):
                if b == a or state.sizes[a] != state.sizes[b] + 1:
                    continue
                d = state.relabel_delta(i, a, b)
                if d > best_delta:
                    best_delta, best_move = d, ("relabel", b)
            for b in range(k):
                if b == a:
                    continue
                members = np.flatnonzero(state.z == b)
                deltas = state.swap_deltas(i, a, b, members)
                j = int(np.argmax(deltas))
                if deltas[j] > best_delta:
                    best_delta, best_move = float(deltas[j]), ("swap", int(members[j]))
            if best_move is None:
                continue
            kind, target = best_move
            if kind == "relabel":
                state.apply_relabel(i, target, best_delta)
            else:
                state.apply_swap(i, target, best_delta)
            accepted += 1
        if accepted == 0:
            break

    part = NodePartition(z=state.z, k=k)
    return part, block_averages(g, part, mask)
