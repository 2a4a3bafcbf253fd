"""Averaged modularity and selection of the number of latent classes.

Each layer's Gram matrix A_l = R_l R_l' is an assortative weighted network
on the subjects. A candidate partition is scored by the layer-averaged
modularity

    Q = (1/L') sum_l sum_{i,ib co-clustered} (A_l(i,ib) - d_l(i) d_l(ib) / (2 w_l)) / (2 w_l)

with d_l the weighted degrees and w_l half the total weight. The double
sum runs over ALL ordered pairs including i = ib; with that convention Q
collapses to exactly 0 for a single class (full-sum cancellation), and for
L' = 1 the score is Newman-Girvan modularity of the weighted graph.
Layers with zero weight carry no information and are dropped from the
average (L' counts the rest).

The number of classes is chosen by running one estimator for every k in a
range and keeping the k with the highest Q (smallest k on ties).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .aggregate import ModularityIngredients, build_modularity_ingredients
from .estimators import _METHOD_PLAN, EstimationError, aggregation_matrix, spectral_embedding
from .kmeans import KMeansConfig, kmeans
from .model import Partition, response_layers
from .seeding import substreams


@dataclass
class ModularityCurve:
    method: str
    k_values: np.ndarray
    q_values: np.ndarray  # NaN marks a failed candidate
    k_star: int


def averaged_modularity(ing: ModularityIngredients, z_hat: Partition) -> float:
    """Averaged modularity of a partition over the valid (nonzero) layers.

    Per layer the per-class form sum_c (E_c - a_c^2) is used, where E_c is
    the within-class weight fraction and a_c the class degree fraction.
    It is algebraically identical to the pairwise double sum but keeps the
    single-class score at exactly 0.0 in floating point.
    """
    n = ing.degrees.shape[1]
    if z_hat.n != n:
        raise ValueError("partition does not cover the subjects of the ingredients")
    valid = np.flatnonzero(~ing.zero_layers)
    if valid.size == 0:
        raise ValueError("all layers have zero weight; modularity is undefined")
    members = [np.flatnonzero(z_hat.labels == c) for c in range(z_hat.n_classes)]
    total_q = 0.0
    for lam in valid:
        a_l = ing.adjacency[lam]
        d_l = ing.degrees[lam]
        total_weight = 2.0 * ing.omegas[lam]
        q_l = 0.0
        for idx in members:
            within = a_l[np.ix_(idx, idx)].sum(axis=1).sum() / total_weight
            frac = d_l[idx].sum() / total_weight
            q_l += within - frac * frac
        total_q += q_l
    return total_q / valid.size


def select_k(
    r,
    method: str,
    k_min: int = 1,
    k_max: int = 8,
    kmeans_cfg: KMeansConfig | None = None,
    rng: np.random.Generator | None = None,
) -> ModularityCurve:
    """Sweep k over [k_min, k_max] with one estimator, score each partition by Q.

    The aggregation matrix is decomposed once at k_max; the embedding each
    candidate k uses is the leading-k prefix of that decomposition, which
    is exactly what a fresh top-k call would return. Candidates whose
    estimation fails are recorded as NaN and skipped by the argmax.
    """
    if method not in _METHOD_PLAN:
        raise ValueError(f"unknown method {method!r}")
    if rng is None:
        raise ValueError("an explicit rng is required for reproducibility")
    layers = response_layers(r)
    _, n, j = layers.shape
    if not 1 <= k_min <= k_max <= min(n, j):
        raise ValueError(
            f"need 1 <= k_min <= k_max <= {min(n, j)}; got [{k_min}, {k_max}]"
        )
    cfg = kmeans_cfg or KMeansConfig()

    ing = build_modularity_ingredients(layers)
    kind, step = _METHOD_PLAN[method]
    matrix = aggregation_matrix(layers, kind)
    if step is not None:
        basis, _ = spectral_embedding(matrix, k_max, step)

    k_values = np.arange(k_min, k_max + 1)
    q_values = np.full(k_values.size, np.nan)
    for pos, (k, sub_rng) in enumerate(zip(k_values, substreams(rng, k_values.size))):
        points = matrix if step is None else basis[:, :k]
        try:
            km = kmeans(
                points,
                int(k),
                sub_rng,
                restarts=cfg.restarts,
                max_iters=cfg.max_iters,
                tol=cfg.tol,
            )
            if np.unique(km.labels.labels).size < k:
                raise EstimationError(f"{method}: fewer than {k} classes at k={k}")
            q_values[pos] = averaged_modularity(ing, km.labels)
        except EstimationError as exc:
            warnings.warn(
                f"candidate k={k} failed ({exc}); excluded from selection",
                RuntimeWarning,
                stacklevel=2,
            )
    if np.isnan(q_values).all():
        raise EstimationError(f"{method}: estimation failed for every k in the range")
    k_star = int(k_values[int(np.nanargmax(q_values))])
    return ModularityCurve(
        method=method, k_values=k_values, q_values=q_values, k_star=k_star
    )
