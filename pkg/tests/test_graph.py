import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netshape import (
    EdgeListParseError,
    EmptyGraphError,
    Graph,
    PairMask,
    degree_sequence,
    graph_from_json,
    graph_to_json,
    holdout_split,
    load_edge_list,
    save_edge_list,
)
from tests.conftest import random_graph


def write(tmp_path, text, name="g.txt"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestGraphInvariants:
    def test_rejects_asymmetric(self):
        adj = np.zeros((3, 3), dtype=int)
        adj[0, 1] = 1
        with pytest.raises(ValueError, match="symmetric"):
            Graph(adj=adj)

    def test_rejects_self_loops(self):
        adj = np.eye(3, dtype=int)
        with pytest.raises(ValueError, match="diagonal"):
            Graph(adj=adj)

    def test_rejects_nonbinary(self):
        adj = np.zeros((2, 2))
        adj[0, 1] = adj[1, 0] = 0.5
        with pytest.raises(ValueError, match="0 or 1"):
            Graph(adj=adj)

    def test_adjacency_is_immutable(self):
        g = random_graph(5, 0.5, 0)
        with pytest.raises(ValueError):
            g.adj[0, 1] = 1

    @settings(max_examples=200, deadline=None)
    @given(st.integers(2, 25), st.floats(0.0, 1.0), st.integers(0, 10**6))
    def test_random_graphs_satisfy_invariants(self, n, p, seed):
        g = random_graph(n, p, seed)
        assert np.array_equal(g.adj, g.adj.T)
        assert not np.diagonal(g.adj).any()
        assert np.isin(g.adj, (0, 1)).all()


class TestLoadEdgeList:
    def test_duplicate_edges_collapse(self, tmp_path):
        g = load_edge_list(write(tmp_path, "a b\nb c\na b\n"))
        assert g.n == 3
        assert g.edge_count == 2

    def test_self_loop_dropped(self, tmp_path):
        g = load_edge_list(write(tmp_path, "a a\na b\n"))
        assert g.n == 2
        assert g.edge_count == 1
        assert not np.diagonal(g.adj).any()

    def test_reversed_edges_collapse(self, tmp_path):
        g = load_edge_list(write(tmp_path, "a b\nb a\n"))
        assert g.edge_count == 1

    def test_comments_and_blanks_skipped(self, tmp_path):
        g = load_edge_list(write(tmp_path, "# header\n\na b\n"))
        assert g.n == 2

    def test_malformed_line_reports_number(self, tmp_path):
        with pytest.raises(EdgeListParseError, match="line 2"):
            load_edge_list(write(tmp_path, "a b\na b c\n"))

    def test_empty_file_raises(self, tmp_path):
        with pytest.raises(EmptyGraphError):
            load_edge_list(write(tmp_path, "# nothing\n"))

    def test_drop_isolated(self, tmp_path):
        # c appears only in a self-loop, so it is isolated
        g = load_edge_list(write(tmp_path, "a b\nc c\n"), drop_isolated=True)
        assert g.n == 2
        assert set(g.node_labels) == {"a", "b"}

    def test_drop_isolated_empty_raises(self, tmp_path):
        with pytest.raises(EmptyGraphError):
            load_edge_list(write(tmp_path, "a a\n"), drop_isolated=True)

    def test_numeric_labels_sorted_numerically(self, tmp_path):
        g = load_edge_list(write(tmp_path, "10 2\n2 1\n"))
        assert g.node_labels == ("1", "2", "10")

    def test_roundtrip_reproduces_adjacency(self, tmp_path):
        for seed in range(50):
            g = random_graph(8, 0.4, seed)
            if g.edge_count == 0:
                continue
            p = tmp_path / f"rt{seed}.txt"
            save_edge_list(g, p)
            g2 = load_edge_list(p)
            keep = degree_sequence(g) > 0  # isolated nodes are not serializable
            assert np.array_equal(g2.adj, g.adj[np.ix_(keep, keep)])
            p2 = tmp_path / f"rt{seed}b.txt"
            save_edge_list(g2, p2)
            g3 = load_edge_list(p2)
            assert np.array_equal(g3.adj, g2.adj)

    def test_json_roundtrip(self):
        g = random_graph(7, 0.5, 3)
        g2 = graph_from_json(graph_to_json(g))
        assert np.array_equal(g.adj, g2.adj)


class TestDegreeSequence:
    def test_empty_graph(self):
        g = Graph(adj=np.zeros((3, 3), dtype=int))
        assert degree_sequence(g).tolist() == [0, 0, 0]

    def test_complete_graph(self):
        adj = 1 - np.eye(4, dtype=int)
        g = Graph(adj=adj)
        assert degree_sequence(g).tolist() == [3, 3, 3, 3]

    def test_path_graph(self):
        adj = np.zeros((3, 3), dtype=int)
        for i, j in [(0, 1), (1, 2)]:
            adj[i, j] = adj[j, i] = 1
        assert degree_sequence(Graph(adj=adj)).tolist() == [1, 2, 1]


class TestHoldoutSplit:
    def test_exact_split_arithmetic(self):
        g = random_graph(4, 0.5, 0)
        train, test = holdout_split(g, 0.5, seed=1)
        assert test.pair_count == 3
        assert train.pair_count == 3

    def test_count_at_n100(self):
        g = random_graph(100, 0.1, 0)
        train, test = holdout_split(g, 0.1, seed=2)
        assert test.pair_count == round(0.1 * 4950) == 495
        assert train.pair_count == 4950 - 495

    def test_same_seed_identical(self):
        g = random_graph(30, 0.3, 5)
        t1 = holdout_split(g, 0.2, seed=9)
        t2 = holdout_split(g, 0.2, seed=9)
        assert np.array_equal(t1[0].observed, t2[0].observed)
        assert np.array_equal(t1[1].observed, t2[1].observed)

    def test_invalid_fraction(self):
        g = random_graph(5, 0.5, 0)
        for frac in (0.0, 1.0, -0.2, 1.5):
            with pytest.raises(ValueError):
                holdout_split(g, frac, seed=0)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(3, 30), st.floats(0.05, 0.95), st.integers(0, 10**6))
    def test_union_disjoint_symmetric(self, n, fraction, seed):
        g = random_graph(n, 0.3, seed)
        train, test = holdout_split(g, fraction, seed)
        off_diag = ~np.eye(n, dtype=bool)
        assert np.array_equal(train.observed | test.observed, off_diag)
        assert not (train.observed & test.observed).any()
        assert np.array_equal(train.observed, train.observed.T)
        assert np.array_equal(test.observed, test.observed.T)


class TestPairMask:
    def test_rejects_observed_diagonal(self):
        m = np.ones((3, 3), dtype=bool)
        with pytest.raises(ValueError, match="diagonal"):
            PairMask(observed=m)

    def test_rejects_asymmetric(self):
        m = np.zeros((3, 3), dtype=bool)
        m[0, 1] = True
        with pytest.raises(ValueError, match="symmetric"):
            PairMask(observed=m)
