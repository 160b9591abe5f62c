"""Ground-truth graphons and adjacency sampling.

A graphon is a symmetric function on [0,1]^2 with values in [0,1]. Three
representations are supported: named analytic formulas, k x k block
tables with equal-width blocks, and shape models (block tables whose
tiles are merged into s constant regions). Adjacency matrices are drawn
by sampling i.i.d. uniform latent positions and independent Bernoulli
edges.
"""

import json
from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .partitions import TilePartition, tile_pairs
from .rng import rng_from_seed


def _cell_index(x, k: int) -> np.ndarray:
    # ceil(k*x) cell convention; x = 0 maps to the first cell.
    idx = np.ceil(np.asarray(x, dtype=float) * k).astype(np.int64) - 1
    return np.clip(idx, 0, k - 1)


@dataclass(frozen=True)
class SsmSpec:
    """Shape-model specification: block resolution k, tile partition u and
    one probability per shape, strictly inside (0, 1)."""

    k: int
    u: TilePartition
    q: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        if self.u.k != self.k:
            raise ValueError("tile partition resolution must match k")
        if q.shape != (self.u.s,):
            raise ValueError(f"q must hold one probability per shape ({self.u.s})")
        if (q <= 0.0).any() or (q >= 1.0).any():
            raise ValueError("shape probabilities must lie strictly in (0, 1)")
        q = q.copy()
        q.flags.writeable = False
        object.__setattr__(self, "q", q)

    @property
    def s(self) -> int:
        return self.u.s

    def cell_value(self, a, b) -> np.ndarray:
        return self.q[self.u.as_matrix()[a, b]]

    def to_json(self) -> str:
        aa, bb = tile_pairs(self.k)
        payload = {
            "k": self.k,
            "s": self.s,
            "u": [[int(a), int(b), int(c)] for a, b, c in zip(aa, bb, self.u.assign)],
            "Q": [float(x) for x in self.q],
        }
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "SsmSpec":
        payload = json.loads(text)
        k, s = int(payload["k"]), int(payload["s"])
        assign = np.full(k * (k + 1) // 2, -1, dtype=np.int64)
        from .partitions import tile_index

        for a, b, c in payload["u"]:
            assign[tile_index(k, a, b)] = c
        if (assign < 0).any():
            raise ValueError("u must cover every tile (a, b) with a <= b")
        u = TilePartition(k=k, s=s, assign=assign)
        return cls(k=k, u=u, q=np.asarray(payload["Q"], dtype=float))


@dataclass(frozen=True)
class Graphon:
    """A symmetric [0,1]^2 -> [0,1] function under one of three encodings."""

    name: str
    kind: str  # "formula" | "block_table" | "shape_model"
    func: object = None
    table: np.ndarray | None = None
    ssm: SsmSpec | None = None

    def eval(self, x, y):
        """Evaluate pointwise; accepts scalars or broadcastable arrays."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if (x < 0).any() or (x > 1).any() or (y < 0).any() or (y > 1).any():
            raise ValueError("graphon arguments must lie in [0, 1]")
        if self.kind == "formula":
            out = np.asarray(self.func(x, y), dtype=float)
        elif self.kind == "block_table":
            k = self.table.shape[0]
            out = self.table[_cell_index(x, k), _cell_index(y, k)]
        elif self.kind == "shape_model":
            k = self.ssm.k
            out = self.ssm.cell_value(_cell_index(x, k), _cell_index(y, k))
        else:
            raise ValueError(f"unknown graphon kind {self.kind!r}")
        if out.ndim == 0:
            return float(out)
        return out


@dataclass(frozen=True)
class LatentSample:
    """Latent node positions, i.i.d. uniform on [0, 1]."""

    xi: np.ndarray
    seed: int

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=float)
        if (xi < 0).any() or (xi > 1).any():
            raise ValueError("latent positions must lie in [0, 1]")
        xi = xi.copy()
        xi.flags.writeable = False
        object.__setattr__(self, "xi", xi)

    @property
    def n(self) -> int:
        return self.xi.size


@dataclass(frozen=True)
class GroundTruth:
    """Edge-probability matrix theta with its latents and source graphon."""

    theta: np.ndarray
    xi: LatentSample
    source: Graphon

    def __post_init__(self):
        t = np.asarray(self.theta, dtype=float)
        t = t.copy()
        t.flags.writeable = False
        object.__setattr__(self, "theta", t)

    @property
    def n(self) -> int:
        return self.theta.shape[0]


def sample_latents(n: int, seed: int) -> LatentSample:
    if n < 1:
        raise ValueError("need at least one node")
    return LatentSample(xi=rng_from_seed(seed).random(n), seed=seed)


def theta_matrix(f: Graphon, xi: LatentSample) -> np.ndarray:
    """theta[i, j] = f(xi_i, xi_j) for i != j, zero on the diagonal."""
    theta = np.asarray(f.eval(xi.xi[:, None], xi.xi[None, :]), dtype=float)
    theta = np.array(theta, copy=True)
    np.fill_diagonal(theta, 0.0)
    return theta


def sample_graph(f: Graphon, xi: LatentSample, seed: int) -> tuple[Graph, GroundTruth]:
    """Draw independent Bernoulli(theta_ij) edges for i < j, mirrored."""
    theta = theta_matrix(f, xi)
    n = xi.n
    u = rng_from_seed(seed).random((n, n))
    upper = np.triu(u < theta, k=1)
    adj = (upper | upper.T).astype(np.uint8)
    g = Graph(adj=adj)
    return g, GroundTruth(theta=theta, xi=xi, source=f)


# ---------------------------------------------------------------------------
# Built-in graphon zoo
# ---------------------------------------------------------------------------

def make_table_graphon(name: str, table: np.ndarray) -> Graphon:
    t = np.asarray(table, dtype=float)
    if t.ndim != 2 or t.shape[0] != t.shape[1]:
        raise ValueError("block table must be square")
    if not np.array_equal(t, t.T):
        raise ValueError("block table must be symmetric")
    if (t < 0).any() or (t > 1).any():
        raise ValueError("block table entries must lie in [0, 1]")
    t = t.copy()
    t.flags.writeable = False
    return Graphon(name=name, kind="block_table", table=t)


def make_assortative_sbm(k: int, p_in: float, p_out: float) -> Graphon:
    """Equal-width block model: p_in on the diagonal, p_out elsewhere.

    Call with p_in < p_out for the disassortative variant.
    """
    if not (0.0 <= p_in <= 1.0 and 0.0 <= p_out <= 1.0):
        raise ValueError("block probabilities must lie in [0, 1]")
    table = np.full((k, k), p_out, dtype=float)
    np.fill_diagonal(table, p_in)
    return make_table_graphon(f"sbm{k}({p_in},{p_out})", table)


# Two macro-groups of two sub-blocks each. Sub-block (diagonal)
# probabilities 0.70/0.50 and 0.45/0.25, within-macro coupling 0.30 and
# 0.20, and a single cross-macro probability 0.10. Seven distinct levels.
HIERARCHICAL_TABLE = np.array(
    [
        [0.70, 0.30, 0.10, 0.10],
        [0.30, 0.50, 0.10, 0.10],
        [0.10, 0.10, 0.45, 0.20],
        [0.10, 0.10, 0.20, 0.25],
    ]
)


def make_hierarchical_sbm() -> Graphon:
    """Nested two-level block model with a constant cross-macro probability."""
    return make_table_graphon("f3", HIERARCHICAL_TABLE)


def ssm_from_table(table: np.ndarray) -> SsmSpec:
    """Shape model induced by a block table: tiles sharing a value share a shape."""
    t = np.asarray(table, dtype=float)
    k = t.shape[0]
    a, b = tile_pairs(k)
    vals = t[a, b]
    levels, assign = np.unique(vals, return_inverse=True)
    u = TilePartition(k=k, s=levels.size, assign=assign)
    return SsmSpec(k=k, u=u, q=levels)


def make_banded_ssm(k: int, s: int, q: np.ndarray | None = None) -> SsmSpec:
    """Planted shape model with anti-diagonal bands:
    tile (a, b) -> (a + b) * s // (2k - 1).

    Default probabilities are evenly spread over [0.1, 0.9], so shapes are
    well separated and block degrees increase monotonically (the planted
    structure is identifiable from degrees).
    """
    a, b = tile_pairs(k)
    assign = (a + b) * s // (2 * k - 1)
    u = TilePartition(k=k, s=s, assign=assign)
    if q is None:
        q = np.linspace(0.1, 0.9, s)
    return SsmSpec(k=k, u=u, q=np.asarray(q, dtype=float))


def ssm_graphon(name: str, spec: SsmSpec) -> Graphon:
    return Graphon(name=name, kind="shape_model", ssm=spec)


def regular_labels(n: int, k: int) -> np.ndarray:
    """Contiguous group labels with near-equal sizes (first n % k groups
    get the extra node)."""
    h, r = divmod(n, k)
    sizes = [h + 1] * r + [h] * (k - r)
    return np.repeat(np.arange(k), sizes)


def ssm_theta(spec: SsmSpec, z: np.ndarray) -> np.ndarray:
    """Probability matrix of a planted shape model at node assignment z."""
    theta = spec.q[spec.u.as_matrix()[z[:, None], z[None, :]]].astype(float)
    np.fill_diagonal(theta, 0.0)
    return theta


def sample_planted_ssm(spec: SsmSpec, n: int, seed: int) -> tuple[Graph, np.ndarray, np.ndarray]:
    """Draw a graph from a planted shape model with an exactly regular
    node assignment; returns (graph, theta, planted labels)."""
    z = regular_labels(n, spec.k)
    theta = ssm_theta(spec, z)
    u = rng_from_seed(seed).random((n, n))
    upper = np.triu(u < theta, k=1)
    adj = (upper | upper.T).astype(np.uint8)
    return Graph(adj=adj), theta, z


_FORMULAS = {
    "f0": lambda x, y: np.abs(x - y),
    "f1": lambda x, y: 1.0 / (1.0 + np.exp(-10.0 * (x**2 + y**2))),
    "f2": lambda x, y: np.log(1.0 + 0.5 * np.maximum(x, y)),
}


def graphon_names() -> list[str]:
    return ["f0", "f1", "f2", "f3", "sbm_assort", "sbm_disassort", "ssm:<file>"]


def get_graphon(name: str) -> Graphon:
    """Resolve a zoo name ("f0".."f3", "sbm_assort", "sbm_disassort",
    "const:<p>" or "ssm:<json file>") to a Graphon."""
    if name in _FORMULAS:
        return Graphon(name=name, kind="formula", func=_FORMULAS[name])
    if name == "f3":
        return make_hierarchical_sbm()
    if name == "sbm_assort":
        return make_assortative_sbm(5, 0.6, 0.1)
    if name == "sbm_disassort":
        return make_assortative_sbm(5, 0.1, 0.6)
    if name.startswith("const:"):
        p = float(name.split(":", 1)[1])
        return make_table_graphon(name, np.array([[p]]))
    if name.startswith("ssm:"):
        path = name.split(":", 1)[1]
        with open(path, "r", encoding="utf-8") as fh:
            spec = SsmSpec.from_json(fh.read())
        return ssm_graphon(name, spec)
    raise KeyError(
        f"unknown graphon {name!r}; available: {', '.join(graphon_names())}, const:<p>"
    )
