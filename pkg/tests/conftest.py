import os

import numpy as np
import pytest

from netshape import Graph
from netshape.rng import rng_from_seed


def random_graph(n: int, p: float, seed: int) -> Graph:
    rng = rng_from_seed(seed)
    u = rng.random((n, n))
    upper = np.triu(u < p, k=1)
    return Graph(adj=(upper | upper.T).astype(np.uint8))


@pytest.fixture
def make_graph():
    return random_graph


def polblogs_path():
    """Locate a user-supplied political-weblogs edge list, if any."""
    candidates = [os.environ.get("NETSHAPE_POLBLOGS", "")]
    here = os.path.dirname(__file__)
    for name in ("polblogs.txt", "polblogs.edges", "polblogs.csv"):
        candidates.append(os.path.join(here, "data", name))
        candidates.append(os.path.join(here, "..", name))
    for c in candidates:
        if c and os.path.exists(c):
            return c
    return None
