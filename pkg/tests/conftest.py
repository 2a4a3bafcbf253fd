import numpy as np
import pytest

from multilca import ItemParameterSet, Partition, population_response, sample_partition


def separated_item_params(rng, j, k, l, m=5, lo=0.35, spread=0.65, off=0.25):
    """Item parameters with one dominant item block per class.

    Each item j leans toward class j mod k, which keeps the column Gram
    matrix well conditioned; uniform i.i.d. columns can leave the smallest
    informative eigenvalue of the debiased Gram sum below the complement
    eigenvalues, and then noiseless exact recovery is impossible for the
    debiased methods.
    """
    u = rng.random((l, j, k))
    b = off * u
    for jj in range(j):
        b[:, jj, jj % k] = lo + spread * u[:, jj, jj % k]
    return ItemParameterSet(thetas=b, m=m)


def noiseless_instance(rng, n=None, k=None, l=None):
    """Random well-separated instance plus its population response."""
    n = int(rng.integers(30, 101)) if n is None else n
    k = int(rng.choice([2, 3])) if k is None else k
    l = int(rng.choice([1, 3, 10])) if l is None else l
    j = max(10, round(n / 5))
    truth = sample_partition(n, k, np.random.default_rng(int(rng.integers(2**32))))
    thetas = separated_item_params(rng, j, k, l)
    scale = float(rng.uniform(0.5, 1.5))
    thetas = ItemParameterSet(thetas=scale * thetas.thetas, m=thetas.m)
    return truth, thetas, population_response(truth, thetas)


def verify_rank_conditions(truth: Partition, thetas: ItemParameterSet) -> dict:
    """Lemma-style rank checks plus the magnitude-ordering margin for the
    debiased Gram sum (min |class-subspace eigenvalue| vs max_k G(k,k))."""
    k = thetas.n_classes
    theta_sum = thetas.thetas.sum(axis=0)
    gram = np.einsum("ljk,ljm->km", thetas.thetas, thetas.thetas)
    sv = np.linalg.svd(theta_sum, compute_uv=False)
    gram_eigs = np.linalg.eigvalsh(gram)
    sizes = truth.class_sizes.astype(float)
    root = np.sqrt(sizes)
    span = root[:, None] * gram * root[None, :] - np.diag(np.diag(gram))
    margin = float(np.abs(np.linalg.eigvalsh(span)).min() / np.diag(gram).max())
    return {
        "sigma_k_theta_sum": float(sv[k - 1]),
        "lambda_k_gram": float(gram_eigs[0]),
        "ordering_margin": margin,
    }


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
