import numpy as np
import pytest

from netshape import (
    Graph,
    SsmSpec,
    get_graphon,
    make_assortative_sbm,
    make_banded_ssm,
    make_hierarchical_sbm,
    make_table_graphon,
    sample_graph,
    sample_latents,
    ssm_from_table,
    ssm_graphon,
)
from netshape.graphons import HIERARCHICAL_TABLE, regular_labels, sample_planted_ssm, ssm_theta
from netshape.rng import rng_from_seed


ZOO = ["f0", "f1", "f2", "f3", "sbm_assort", "sbm_disassort"]


class TestEval:
    def test_f0_point(self):
        assert get_graphon("f0").eval(0.2, 0.7) == pytest.approx(0.5)

    def test_f1_origin(self):
        assert get_graphon("f1").eval(0.0, 0.0) == pytest.approx(0.5)

    def test_f2_point(self):
        assert get_graphon("f2").eval(1.0, 0.3) == pytest.approx(np.log(1.5))

    def test_out_of_domain(self):
        with pytest.raises(ValueError):
            get_graphon("f0").eval(1.2, 0.5)

    def test_zero_maps_to_first_cell(self):
        f = make_assortative_sbm(5, 0.6, 0.1)
        assert f.eval(0.0, 0.0) == 0.6
        assert f.eval(0.0, 0.1) == 0.6  # both in cell 1

    def test_symmetry_and_range_on_grid(self):
        pts = np.linspace(0.0, 1.0, 50)
        for name in ZOO:
            f = get_graphon(name)
            vals = np.asarray(f.eval(pts[:, None], pts[None, :]))
            assert np.allclose(vals, vals.T), name
            assert (vals >= 0).all() and (vals <= 1).all(), name


class TestSbmFactories:
    def test_assortative_lookup(self):
        f = make_assortative_sbm(5, 0.6, 0.1)
        assert f.eval(0.1, 0.15) == 0.6
        assert f.eval(0.1, 0.9) == 0.1

    def test_k1_constant(self):
        f = make_assortative_sbm(1, 0.3, 0.9)
        assert f.eval(0.2, 0.8) == 0.3

    def test_equal_probabilities_degenerate(self):
        f = make_assortative_sbm(2, 0.4, 0.4)
        pts = np.linspace(0, 1, 11)
        assert np.allclose(f.eval(pts[:, None], pts[None, :]), 0.4)

    def test_hierarchical_cross_macro_constant(self):
        f = make_hierarchical_sbm()
        # any pair straddling the two macro-groups hits the single level
        for x in (0.05, 0.3):
            for y in (0.55, 0.8):
                assert f.eval(x, y) == 0.1

    def test_hierarchical_symmetric_grid(self):
        f = make_hierarchical_sbm()
        pts = np.linspace(0, 1, 50)
        vals = np.asarray(f.eval(pts[:, None], pts[None, :]))
        assert np.allclose(vals, vals.T)

    def test_hierarchical_induced_shape_count(self):
        spec = ssm_from_table(HIERARCHICAL_TABLE)
        assert spec.s == len(np.unique(HIERARCHICAL_TABLE))


class TestSampleLatents:
    def test_determinism(self):
        a = sample_latents(1000, 42)
        b = sample_latents(1000, 42)
        assert np.array_equal(a.xi, b.xi)

    def test_mean_close_to_half(self):
        xi = sample_latents(10**5, 7)
        assert abs(xi.xi.mean() - 0.5) < 0.01

    def test_ks_distance_small(self):
        xi = np.sort(sample_latents(10**5, 11).xi)
        n = xi.size
        grid = np.arange(1, n + 1) / n
        ks = max(np.abs(grid - xi).max(), np.abs(xi - (np.arange(n) / n)).max())
        assert ks < 0.01


class TestSampleGraph:
    def test_constant_one_gives_complete_graph(self):
        f = make_table_graphon("one", np.array([[1.0]]))
        xi = sample_latents(20, 0)
        g, truth = sample_graph(f, xi, 1)
        assert g.edge_count == 20 * 19 // 2

    def test_constant_zero_gives_empty_graph(self):
        f = make_table_graphon("zero", np.array([[0.0]]))
        xi = sample_latents(20, 0)
        g, _ = sample_graph(f, xi, 1)
        assert g.edge_count == 0

    def test_density_concentration(self):
        f = get_graphon("const:0.3")
        xi = sample_latents(500, 3)
        g, _ = sample_graph(f, xi, 4)
        pairs = 500 * 499 / 2
        density = g.edge_count / pairs
        sd = np.sqrt(0.3 * 0.7 / pairs)
        assert abs(density - 0.3) < 3 * sd

    def test_truth_matches_graphon_at_latents(self):
        f = get_graphon("f2")
        xi = sample_latents(30, 5)
        _, truth = sample_graph(f, xi, 6)
        i, j = 3, 17
        assert truth.theta[i, j] == pytest.approx(f.eval(xi.xi[i], xi.xi[j]))
        assert truth.theta[i, i] == 0.0

    def test_bit_reproducible(self):
        f = get_graphon("f1")
        xi = sample_latents(50, 9)
        g1, t1 = sample_graph(f, xi, 10)
        g2, t2 = sample_graph(f, xi, 10)
        assert np.array_equal(g1.adj, g2.adj)
        assert np.array_equal(t1.theta, t2.theta)

    def test_invariants_over_random_graphons(self):
        rng = rng_from_seed(0)
        for case in range(200):
            k = int(rng.integers(1, 5))
            table = rng.random((k, k))
            table = 0.5 * (table + table.T)
            f = make_table_graphon(f"t{case}", table)
            xi = sample_latents(12, case)
            g, truth = sample_graph(f, xi, case + 1)
            assert np.array_equal(g.adj, g.adj.T)
            assert not np.diagonal(g.adj).any()
            assert (truth.theta >= 0).all() and (truth.theta <= 1).all()


class TestSsmSpec:
    def test_eval_constant_on_tiles(self):
        spec = make_banded_ssm(4, 3)
        f = ssm_graphon("s", spec)
        # all points inside tile (a, b) return the same probability
        for a in range(4):
            for b in range(4):
                xs = np.linspace(a / 4 + 1e-9, (a + 1) / 4 - 1e-9, 5)
                ys = np.linspace(b / 4 + 1e-9, (b + 1) / 4 - 1e-9, 5)
                vals = np.asarray(f.eval(xs[:, None], ys[None, :]))
                assert np.unique(vals).size == 1

    def test_q_range_enforced(self):
        spec = make_banded_ssm(3, 2)
        with pytest.raises(ValueError, match="strictly"):
            SsmSpec(k=3, u=spec.u, q=np.array([0.0, 0.5]))

    def test_json_roundtrip(self):
        spec = make_banded_ssm(5, 4)
        spec2 = SsmSpec.from_json(spec.to_json())
        assert spec2.k == spec.k and spec2.s == spec.s
        assert np.array_equal(spec2.u.assign, spec.u.assign)
        assert np.allclose(spec2.q, spec.q)

    def test_planted_sampler_tile_structure(self):
        spec = make_banded_ssm(6, 4)
        g, theta, z = sample_planted_ssm(spec, 120, 3)
        assert np.array_equal(np.sort(np.bincount(z)), np.sort(np.bincount(regular_labels(120, 6))))
        um = spec.u.as_matrix()
        for a in range(6):
            for b in range(6):
                block = theta[np.ix_(z == a, z == b)]
                vals = np.unique(block[~np.isin(block, 0.0)]) if a == b else np.unique(block)
                assert all(v in spec.q for v in vals)

    def test_unknown_name_lists_zoo(self):
        with pytest.raises(KeyError, match="f0"):
            get_graphon("nope")


def test_ssm_theta_zero_diagonal():
    spec = make_banded_ssm(4, 2)
    z = regular_labels(20, 4)
    theta = ssm_theta(spec, z)
    assert not np.diagonal(theta).any()
    assert np.array_equal(theta, theta.T)
