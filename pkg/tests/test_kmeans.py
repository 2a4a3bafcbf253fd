from itertools import product

import numpy as np
import pytest

from multilca import KMeansConfig, kmeans, stream


def brute_force_best_inertia(points, k):
    """Minimum within-cluster scatter over every assignment with k nonempty
    clusters; centers are the cluster means. Exponential, for tiny N only."""
    n = points.shape[0]
    best = np.inf
    for assign in product(range(k), repeat=n):
        labels = np.array(assign)
        if np.unique(labels).size < k:
            continue
        inertia = 0.0
        for c in range(k):
            cluster = points[labels == c]
            inertia += ((cluster - cluster.mean(axis=0)) ** 2).sum()
        best = min(best, inertia)
    return best


class TestKMeans:
    def test_two_separated_clouds(self):
        rng = np.random.default_rng(0)
        a = rng.normal(0.0, 0.5, (10, 2))
        b = rng.normal(20.0, 0.5, (10, 2))
        points = np.vstack([a, b])
        res = kmeans(points, 2, stream(1, "km"))
        labels = res.labels.labels
        assert np.unique(labels[:10]).size == 1
        assert np.unique(labels[10:]).size == 1
        assert labels[0] != labels[10]
        scatter = ((a - a.mean(0)) ** 2).sum() + ((b - b.mean(0)) ** 2).sum()
        assert res.inertia == pytest.approx(scatter, rel=1e-12)

    def test_k1_center_is_mean(self):
        rng = np.random.default_rng(1)
        points = rng.normal(size=(15, 3))
        res = kmeans(points, 1, stream(2, "km"))
        assert np.allclose(res.centers[0], points.mean(axis=0))
        assert res.inertia == pytest.approx(((points - points.mean(0)) ** 2).sum())

    def test_matches_brute_force_oracle(self):
        for seed in range(5):
            rng = np.random.default_rng(seed)
            points = rng.uniform(-1, 1, (6, 2))
            oracle = brute_force_best_inertia(points, 2)
            res = kmeans(points, 2, stream(seed, "km"), restarts=20)
            assert res.inertia == pytest.approx(oracle, rel=1e-12, abs=1e-12)

    def test_deterministic_given_seed(self):
        rng = np.random.default_rng(2)
        points = rng.normal(size=(40, 3))
        a = kmeans(points, 4, stream(7, "km"))
        b = kmeans(points, 4, stream(7, "km"))
        assert np.array_equal(a.labels.labels, b.labels.labels)
        assert np.array_equal(a.centers, b.centers)
        assert a.inertia == b.inertia

    def test_output_is_nearest_assignment_without_empty_clusters(self):
        rng = np.random.default_rng(3)
        points = rng.normal(size=(30, 2))
        res = kmeans(points, 5, stream(3, "km"))
        assert res.labels.class_sizes.min() >= 1
        d = ((points[:, None, :] - res.centers[None]) ** 2).sum(axis=2)
        chosen = d[np.arange(30), res.labels.labels]
        assert np.all(chosen <= d.min(axis=1) + 1e-12)

    def test_duplicate_points_still_fill_k_clusters(self):
        points = np.array([[0.0], [0.0], [0.0], [0.0], [10.0]])
        res = kmeans(points, 3, stream(4, "km"))
        assert res.labels.n_classes == 3
        assert res.labels.class_sizes.min() >= 1

    def test_all_identical_points(self):
        # refill must not re-empty the cluster it just filled
        points = np.zeros((6, 2))
        res = kmeans(points, 3, stream(6, "km"))
        assert res.labels.class_sizes.min() >= 1
        assert np.isfinite(res.centers).all()
        assert res.inertia == 0.0

    def test_exact_recovery_on_k_distinct_rows(self):
        # population-style embedding: rows take exactly K distinct values
        rng = np.random.default_rng(5)
        values = rng.normal(size=(3, 4))
        labels = rng.integers(0, 3, size=60)
        labels[:3] = [0, 1, 2]
        points = values[labels]
        res = kmeans(points, 3, stream(5, "km"))
        # recovered partition matches up to relabeling
        mapping = {}
        for true_c, est_c in zip(labels, res.labels.labels):
            mapping.setdefault(true_c, est_c)
            assert mapping[true_c] == est_c
        assert len(set(mapping.values())) == 3

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            kmeans(np.zeros((3, 2)), 4, stream(0, "km"))
        bad = np.zeros((3, 2))
        bad[0, 0] = np.inf
        with pytest.raises(ValueError):
            kmeans(bad, 2, stream(0, "km"))

    def test_config_defaults(self):
        cfg = KMeansConfig()
        assert (cfg.restarts, cfg.max_iters, cfg.tol) == (10, 300, 1e-9)
