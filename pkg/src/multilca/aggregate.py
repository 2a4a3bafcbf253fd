"""Aggregation matrices built from a response tensor.

Three aggregates feed the estimators:

    r_sum          = sum_l R_l                      (N x J)
    s_sum          = sum_l R_l R_l'                 (N x N Gram sum)
    s_sum_debiased = sum_l (R_l R_l' - D_l)         (N x N, diagonal bias removed)

where D_l is diagonal with D_l(i, i) = sum_j R_l(i, j)^2. Squaring the
entries (rather than summing them) is what makes the correction valid for
polytomous responses: the diagonal of E[R_l R_l'] exceeds its population
counterpart by exactly sum_j Var(R_l(i, j)) + bias of squared means, and
subtracting the squared-entry diagonal cancels it in expectation.

The same Gram matrices double as weighted networks A_l = R_l R_l' for the
modularity score, together with degrees d_l(i) = sum_ib A_l(i, ib) and
total half-weights omega_l = 0.5 * sum_i d_l(i).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .model import response_layers


@dataclass
class AggregationBundle:
    r_sum: np.ndarray
    s_sum: np.ndarray
    s_sum_debiased: np.ndarray


@dataclass
class ModularityIngredients:
    """Per-layer weighted networks A_l = R_l R_l' with degrees and half-weights.

    zero_layers flags layers whose responses are all zero (omega_l = 0);
    the modularity average skips them.
    """

    adjacency: np.ndarray  # (L, N, N)
    degrees: np.ndarray  # (L, N)
    omegas: np.ndarray  # (L,)
    zero_layers: np.ndarray  # (L,) bool


def build_aggregates(r) -> AggregationBundle:
    """Compute r_sum, s_sum and the debiased Gram sum in one pass.

    Products run in float64 and layers are accumulated in layer order so
    repeated runs are bit-identical. For integer responses every value
    stays exactly representable, so the debiased diagonal is exactly zero.
    """
    layers = response_layers(r)
    n = layers.shape[1]
    r_sum = np.zeros((n, layers.shape[2]))
    s_sum = np.zeros((n, n))
    diag = np.zeros(n)
    for mat in layers:
        r_sum += mat
        s_sum += mat @ mat.T
        diag += (mat * mat).sum(axis=1)
    s_deb = s_sum.copy()
    s_deb[np.diag_indices(n)] -= diag
    return AggregationBundle(r_sum=r_sum, s_sum=s_sum, s_sum_debiased=s_deb)


def build_modularity_ingredients(r) -> ModularityIngredients:
    layers = response_layers(r)
    n_layers, n, _ = layers.shape
    adjacency = np.empty((n_layers, n, n))
    degrees = np.empty((n_layers, n))
    for lam, mat in enumerate(layers):
        adjacency[lam] = mat @ mat.T
        degrees[lam] = adjacency[lam].sum(axis=1)
    omegas = 0.5 * degrees.sum(axis=1)
    zero = omegas == 0.0
    if zero.any():
        warnings.warn(
            f"{int(zero.sum())} all-zero layer(s) carry no modularity weight "
            "and will be excluded from the modularity average",
            RuntimeWarning,
            stacklevel=2,
        )
    return ModularityIngredients(
        adjacency=adjacency, degrees=degrees, omegas=omegas, zero_layers=zero
    )
