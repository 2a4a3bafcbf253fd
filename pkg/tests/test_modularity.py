import numpy as np
import networkx as nx
import pytest

from multilca import (
    ModularityIngredients,
    Partition,
    averaged_modularity,
    build_modularity_ingredients,
    population_response,
    sample_item_params,
    sample_partition,
    sample_responses,
    select_k,
    stream,
)
from multilca.estimators import EstimationError

from conftest import separated_item_params


def ingredients_from_adjacency(mats):
    """ModularityIngredients for explicit symmetric weight matrices."""
    mats = np.asarray(mats, dtype=float)
    degrees = mats.sum(axis=2)
    omegas = 0.5 * degrees.sum(axis=1)
    return ModularityIngredients(
        adjacency=mats, degrees=degrees, omegas=omegas, zero_layers=omegas == 0.0
    )


def newman_girvan_double_loop(a, labels):
    """Literal ordered-pair sum including i = ib; independent of the library path."""
    n = a.shape[0]
    d = a.sum(axis=1)
    two_m = d.sum()
    q = 0.0
    for i in range(n):
        for ib in range(n):
            if labels[i] == labels[ib]:
                q += (a[i, ib] - d[i] * d[ib] / two_m) / two_m
    return q


def sampled_tensor(tag, n=30, j=8, k=2, l=3, rho=1.0, m=5):
    truth = sample_partition(n, k, stream(*tag, "partition"))
    thetas = sample_item_params(j, k, l, rho, m, stream(*tag, "items"))
    return truth, sample_responses(population_response(truth, thetas), m, stream(*tag, "responses"))


class TestAveragedModularity:
    def test_hand_computed_two_node(self):
        ing = ingredients_from_adjacency([[[1.0, 0.0], [0.0, 4.0]]])
        z = Partition(labels=np.array([0, 1]), n_classes=2)
        assert averaged_modularity(ing, z) == pytest.approx(0.32, abs=1e-15)

    def test_single_class_is_exactly_zero(self):
        for seed in range(20):
            truth, tensor = sampled_tensor(("q0", seed))
            ing = build_modularity_ingredients(tensor)
            z = Partition(labels=np.zeros(tensor.n_subjects, dtype=int), n_classes=1)
            assert averaged_modularity(ing, z) == 0.0

    def test_label_permutation_invariance(self):
        truth, tensor = sampled_tensor(("perm",), k=3, n=24)
        ing = build_modularity_ingredients(tensor)
        q1 = averaged_modularity(ing, truth)
        z2 = Partition(labels=np.array([2, 0, 1])[truth.labels], n_classes=3)
        assert averaged_modularity(ing, z2) == pytest.approx(q1, abs=1e-15)

    def test_matches_double_loop_on_six_nodes(self):
        rng = np.random.default_rng(0)
        base = rng.integers(0, 5, (6, 4)).astype(float)
        a = base @ base.T
        ing = ingredients_from_adjacency([a])
        labels = np.array([0, 0, 1, 1, 2, 2])
        z = Partition(labels=labels, n_classes=3)
        assert averaged_modularity(ing, z) == pytest.approx(
            newman_girvan_double_loop(a, labels), abs=1e-12
        )

    def test_matches_networkx_without_self_loops(self):
        # on a zero-diagonal graph our convention coincides with the
        # standard Newman-Girvan score networkx implements
        rng = np.random.default_rng(1)
        a = rng.uniform(0, 2, (6, 6))
        a = (a + a.T) / 2
        np.fill_diagonal(a, 0.0)
        labels = np.array([0, 1, 0, 1, 0, 1])
        graph = nx.from_numpy_array(a)
        comms = [{0, 2, 4}, {1, 3, 5}]
        expected = nx.community.modularity(graph, comms, weight="weight")
        ing = ingredients_from_adjacency([a])
        z = Partition(labels=labels, n_classes=2)
        assert averaged_modularity(ing, z) == pytest.approx(expected, abs=1e-12)

    def test_multi_layer_average(self):
        rng = np.random.default_rng(2)
        mats = []
        for _ in range(3):
            base = rng.integers(0, 4, (5, 3)).astype(float)
            mats.append(base @ base.T)
        ing = ingredients_from_adjacency(mats)
        labels = np.array([0, 0, 1, 1, 1])
        z = Partition(labels=labels, n_classes=2)
        expected = np.mean([newman_girvan_double_loop(a, labels) for a in mats])
        assert averaged_modularity(ing, z) == pytest.approx(expected, abs=1e-12)

    def test_zero_layer_excluded_from_average(self):
        rng = np.random.default_rng(3)
        base = rng.integers(1, 4, (4, 3)).astype(float)
        a = base @ base.T
        labels = np.array([0, 0, 1, 1])
        z = Partition(labels=labels, n_classes=2)
        with_zero = ingredients_from_adjacency([a, np.zeros((4, 4))])
        only = ingredients_from_adjacency([a])
        assert averaged_modularity(with_zero, z) == averaged_modularity(only, z)

    def test_all_layers_zero_errors(self):
        ing = ingredients_from_adjacency([np.zeros((3, 3))])
        z = Partition(labels=np.array([0, 1, 1]), n_classes=2)
        with pytest.raises(ValueError, match="zero weight"):
            averaged_modularity(ing, z)


class TestSelectK:
    def test_trivial_range(self):
        truth, tensor = sampled_tensor(("triv",))
        curve = select_k(tensor, "LCA-DSoG", 1, 1, rng=stream(4, "sel"))
        assert curve.k_star == 1
        assert curve.q_values[0] == 0.0

    def test_true_k_beats_single_class_on_clean_instance(self):
        rng = np.random.default_rng(5)
        truth = sample_partition(60, 3, rng)
        thetas = separated_item_params(rng, 12, 3, 5)
        tensor = sample_responses(population_response(truth, thetas), 5, rng)
        curve = select_k(tensor, "LCA-DSoG", 1, 4, rng=stream(5, "sel"))
        qs = dict(zip(curve.k_values.tolist(), curve.q_values.tolist()))
        assert qs[3] > qs[1] == 0.0

    def test_recovers_k_on_easy_instances(self):
        hits = 0
        for seed in range(5):
            truth, tensor = sampled_tensor(("easy", seed), n=150, j=30, k=3, l=8, rho=0.5)
            curve = select_k(tensor, "LCA-DSoG", 1, 5, rng=stream(6, seed))
            hits += curve.k_star == 3
        assert hits >= 4

    def test_deterministic(self):
        truth, tensor = sampled_tensor(("det",))
        a = select_k(tensor, "LCA-SoG", 1, 4, rng=stream(7, "sel"))
        b = select_k(tensor, "LCA-SoG", 1, 4, rng=stream(7, "sel"))
        assert np.array_equal(a.q_values, b.q_values)
        assert a.k_star == b.k_star

    def test_invalid_range(self):
        truth, tensor = sampled_tensor(("rng",))
        with pytest.raises(ValueError):
            select_k(tensor, "LCA-DSoG", 0, 3, rng=stream(8, "sel"))
        with pytest.raises(ValueError):
            select_k(tensor, "LCA-DSoG", 3, 2, rng=stream(8, "sel"))

    def test_ties_break_to_smallest_k(self):
        # an all-equal tensor gives Q = 0 for every k; smallest k wins
        layers = np.ones((1, 6, 4), dtype=int)
        curve = select_k(layers, "LCA-SoRK", 1, 3, rng=stream(9, "sel"))
        assert curve.k_star == 1
