"""Adjacency-matrix graphs, edge-list ingestion and pair holdout masks.

Graphs are undirected, unweighted and loop-free, stored as dense binary
matrices (the regime of interest is dense networks with at most a few
thousand nodes). Instances are immutable after construction and safe to
share between concurrent workers.
"""

import json
from dataclasses import dataclass

import numpy as np

from .rng import rng_from_seed


class EdgeListParseError(ValueError):
    """Malformed edge-list line (message carries the line number)."""


class EmptyGraphError(ValueError):
    """Raised when ingestion or filtering leaves no nodes."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with optional external node identifiers.

    ``adj`` must be a square 0/1 matrix, symmetric with a zero diagonal;
    construction fails otherwise.
    """

    adj: np.ndarray
    node_labels: tuple | None = None

    def __post_init__(self):
        a = np.asarray(self.adj)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"adjacency must be square, got shape {a.shape}")
        if a.size and not np.isin(a, (0, 1)).all():
            raise ValueError("adjacency entries must be 0 or 1")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency must be symmetric")
        if a.size and np.diagonal(a).any():
            raise ValueError("adjacency diagonal must be zero (no self-loops)")
        if self.node_labels is not None and len(self.node_labels) != a.shape[0]:
            raise ValueError("node_labels length must match node count")
        object.__setattr__(self, "adj", _frozen(a.astype(np.uint8)))
        if self.node_labels is not None:
            object.__setattr__(self, "node_labels", tuple(self.node_labels))

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    @property
    def edge_count(self) -> int:
        return int(np.triu(self.adj, 1).sum())


@dataclass(frozen=True)
class PairMask:
    """Symmetric boolean mask over node pairs; the diagonal is never observed."""

    observed: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.observed, dtype=bool)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"mask must be square, got shape {m.shape}")
        if not np.array_equal(m, m.T):
            raise ValueError("mask must be symmetric")
        if m.size and np.diagonal(m).any():
            raise ValueError("mask diagonal must be unobserved")
        object.__setattr__(self, "observed", _frozen(m))

    @property
    def n(self) -> int:
        return self.observed.shape[0]

    @property
    def pair_count(self) -> int:
        return int(np.triu(self.observed, 1).sum())


def load_edge_list(path, drop_isolated: bool = False) -> Graph:
    """Read an undirected simple graph from a whitespace-separated edge list.

    Each non-comment line holds two node identifiers; lines starting with
    '#' and blank lines are skipped. Parallel, reversed and self-loop
    entries are collapsed or dropped, so directed source data is
    symmetrized (an edge exists if a link appears in either direction).
    Node indices are assigned in sorted identifier order (numeric when
    every identifier parses as an integer, lexicographic otherwise),
    which makes write-then-reload reproduce the adjacency matrix exactly.

    With ``drop_isolated`` the degree-zero nodes are removed and the
    matrix is compacted.
    """
    labels = set()
    edges = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            toks = line.split()
            if len(toks) != 2:
                raise EdgeListParseError(
                    f"{path}: line {lineno}: expected two node identifiers, "
                    f"got {len(toks)}: {line!r}"
                )
            u, v = toks
            labels.add(u)
            labels.add(v)
            if u != v:
                edges.add((u, v) if u < v else (v, u))

    if not labels:
        raise EmptyGraphError(f"{path}: no nodes found")

    try:
        ordered = sorted(labels, key=int)
    except ValueError:
        ordered = sorted(labels)
    index = {lab: i for i, lab in enumerate(ordered)}

    n = len(ordered)
    adj = np.zeros((n, n), dtype=np.uint8)
    for u, v in edges:
        i, j = index[u], index[v]
        adj[i, j] = adj[j, i] = 1

    if drop_isolated:
        keep = adj.sum(axis=1) > 0
        if not keep.any():
            raise EmptyGraphError(f"{path}: graph is empty after dropping isolated nodes")
        adj = adj[np.ix_(keep, keep)]
        ordered = [lab for lab, k in zip(ordered, keep) if k]

    return Graph(adj=adj, node_labels=tuple(ordered))


def save_edge_list(g: Graph, path) -> None:
    """Write the graph as a whitespace-separated edge list (one pair per line)."""
    labels = g.node_labels if g.node_labels is not None else tuple(str(i) for i in range(g.n))
    ii, jj = np.triu_indices(g.n, k=1)
    sel = g.adj[ii, jj] == 1
    with open(path, "w", encoding="utf-8") as fh:
        for i, j in zip(ii[sel], jj[sel]):
            fh.write(f"{labels[i]} {labels[j]}\n")


def graph_to_json(g: Graph) -> str:
    ii, jj = np.triu_indices(g.n, k=1)
    sel = g.adj[ii, jj] == 1
    payload = {
        "n": g.n,
        "edges": [[int(i), int(j)] for i, j in zip(ii[sel], jj[sel])],
        "labels": list(g.node_labels) if g.node_labels is not None else None,
    }
    return json.dumps(payload, sort_keys=True)


def graph_from_json(text: str) -> Graph:
    payload = json.loads(text)
    n = int(payload["n"])
    adj = np.zeros((n, n), dtype=np.uint8)
    for i, j in payload["edges"]:
        adj[i, j] = adj[j, i] = 1
    labels = payload.get("labels")
    return Graph(adj=adj, node_labels=tuple(labels) if labels is not None else None)


def degree_sequence(g: Graph) -> np.ndarray:
    """Row sums of the adjacency matrix."""
    return g.adj.sum(axis=1).astype(np.int64)


def holdout_split(g: Graph, fraction: float, seed: int) -> tuple[PairMask, PairMask]:
    """Partition the node pairs i<j into (train, test) masks at random.

    ``round(fraction * C(n, 2))`` pairs land in the test mask; the split is
    deterministic in the seed and the masks are complementary.
    """
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"holdout fraction must lie in (0, 1), got {fraction}")
    n = g.n
    ii, jj = np.triu_indices(n, k=1)
    total = ii.size
    n_test = int(round(fraction * total))
    order = rng_from_seed(seed).permutation(total)
    test_sel = order[:n_test]

    test = np.zeros((n, n), dtype=bool)
    test[ii[test_sel], jj[test_sel]] = True
    test |= test.T

    train = np.zeros((n, n), dtype=bool)
    train[ii, jj] = True
    train |= train.T
    train &= ~test

    return PairMask(observed=train), PairMask(observed=test)
