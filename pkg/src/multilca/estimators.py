"""Spectral latent class estimators and K-means baselines.

All six methods share the same skeleton: build an aggregation matrix,
produce an N-row embedding, run K-means on its rows, then recover the
item parameters from the estimated classes. They differ only in the
embedding:

    LCA-SoR    rows of the top-K left singular vectors of r_sum
    LCA-DSoG   rows of the top-K (by magnitude) eigenvectors of the
               debiased Gram sum
    LCA-SoG    same as LCA-DSoG but without the diagonal debias
    LCA-SoRK   raw rows of r_sum (no spectral step)
    LCA-SoGK   raw rows of the Gram sum
    LCA-DSoGK  raw rows of the debiased Gram sum

Item parameters are recovered as within-class column means of each layer,
the closed form of R_l' Zhat (Zhat' Zhat)^{-1}.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .aggregate import build_aggregates
from .kmeans import KMeansConfig, KMeansResult, kmeans
from .model import ModelParams, Partition, response_layers
from .spectral import (
    DEGENERACY_TOL,
    DegenerateSpectrumWarning,
    top_k_eigen_by_magnitude,
    top_k_svd,
)

METHODS = (
    "LCA-SoR",
    "LCA-DSoG",
    "LCA-SoG",
    "LCA-SoRK",
    "LCA-SoGK",
    "LCA-DSoGK",
)

#: method -> (aggregation matrix, spectral step or None)
_METHOD_PLAN = {
    "LCA-SoR": ("r_sum", "svd"),
    "LCA-DSoG": ("s_deb", "eig"),
    "LCA-SoG": ("s_sum", "eig"),
    "LCA-SoRK": ("r_sum", None),
    "LCA-SoGK": ("s_sum", None),
    "LCA-DSoGK": ("s_deb", None),
}

BASELINE_ALIASES = {"SoRK": "LCA-SoRK", "SoGK": "LCA-SoGK", "DSoGK": "LCA-DSoGK"}


class EstimationError(RuntimeError):
    """Estimation produced fewer classes than requested."""


@dataclass
class FitDiagnostics:
    spectral_gap: float | None  # sigma_K / sigma_{K+1} (magnitude ratio for eigen)
    kmeans_inertia: float
    kmeans_iterations: int


@dataclass
class FitResult:
    z_hat: Partition
    theta_hats: np.ndarray  # (L, J, K)
    method: str
    diagnostics: FitDiagnostics


def aggregation_matrix(layers: np.ndarray, kind: str) -> np.ndarray:
    """The matrix a method decomposes or clusters directly."""
    if kind == "r_sum":
        total = np.zeros(layers.shape[1:])
        for mat in layers:
            total += mat
        return total
    agg = build_aggregates(layers)
    return agg.s_sum_debiased if kind == "s_deb" else agg.s_sum


def spectral_embedding(
    matrix: np.ndarray, k: int, step: str
) -> tuple[np.ndarray, float | None]:
    """Top-k embedding plus the gap diagnostic sigma_k / sigma_{k+1}.

    One decomposition serves both, so the extra column used for the gap is
    requested up front; the degeneracy warning is re-issued at the k
    boundary (the one that matters for clustering) instead of k+1.
    """
    bound = min(matrix.shape)
    kk = min(k + 1, bound)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateSpectrumWarning)
        if step == "svd":
            dec = top_k_svd(matrix, kk)
            points, values = dec.u[:, :k], dec.sigma
        else:
            dec = top_k_eigen_by_magnitude(matrix, kk)
            points, values = dec.v[:, :k], np.abs(dec.lam)
    gap = None
    if kk > k:
        if values[k - 1] - values[k] <= DEGENERACY_TOL:
            warnings.warn(
                f"leading {k} and {k + 1} spectral values coincide within "
                f"{DEGENERACY_TOL:g}; clustering may be unstable",
                DegenerateSpectrumWarning,
                stacklevel=3,
            )
        gap = math.inf if values[k] == 0.0 else float(values[k - 1] / values[k])
    return points, gap


def estimate_theta(r, z_hat: Partition) -> np.ndarray:
    """Item parameter estimates as within-class column means, one J x K per layer.

    Equivalent to R_l' Zhat (Zhat' Zhat)^{-1}; the Gram matrix there is
    diagonal with the class sizes, so the mean form is exact and avoids the
    inversion.
    """
    layers = response_layers(r)
    if z_hat.n != layers.shape[1]:
        raise ValueError("partition and responses cover different subject counts")
    counts = z_hat.class_sizes
    if np.any(counts == 0):
        raise ValueError("estimated partition has an empty class")
    sums = np.einsum("lnj,nk->ljk", layers, z_hat.onehot())
    return sums / counts[None, None, :]


def fit(
    r,
    k: int,
    method: str,
    kmeans_cfg: KMeansConfig | None = None,
    rng: np.random.Generator | None = None,
) -> FitResult:
    """Run one named method on a response tensor (or injected population matrices)."""
    if method not in _METHOD_PLAN:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    layers = response_layers(r)
    _, n, j = layers.shape
    if not 1 <= k <= min(n, j):
        raise ValueError(f"k must lie in [1, {min(n, j)}]; got {k}")
    if rng is None:
        raise ValueError("an explicit rng is required for reproducibility")
    cfg = kmeans_cfg or KMeansConfig()

    kind, step = _METHOD_PLAN[method]
    matrix = aggregation_matrix(layers, kind)
    if step is None:
        points, gap = matrix, None
    else:
        points, gap = spectral_embedding(matrix, k, step)

    km = kmeans(
        points, k, rng, restarts=cfg.restarts, max_iters=cfg.max_iters, tol=cfg.tol
    )
    _require_k_classes(km, k, method)
    thetas = estimate_theta(layers, km.labels)
    return FitResult(
        z_hat=km.labels,
        theta_hats=thetas,
        method=method,
        diagnostics=FitDiagnostics(
            spectral_gap=gap,
            kmeans_inertia=km.inertia,
            kmeans_iterations=km.iterations,
        ),
    )


def _require_k_classes(km: KMeansResult, k: int, method: str) -> None:
    if np.unique(km.labels.labels).size < k:
        raise EstimationError(
            f"{method}: K-means returned fewer than {k} classes after refill"
        )


def fit_lca_sor(r, k, kmeans_cfg=None, rng=None) -> FitResult:
    return fit(r, k, "LCA-SoR", kmeans_cfg, rng)


def fit_lca_dsog(r, k, kmeans_cfg=None, rng=None) -> FitResult:
    return fit(r, k, "LCA-DSoG", kmeans_cfg, rng)


def fit_lca_sog(r, k, kmeans_cfg=None, rng=None) -> FitResult:
    return fit(r, k, "LCA-SoG", kmeans_cfg, rng)


def fit_baseline(r, k, which: str, kmeans_cfg=None, rng=None) -> FitResult:
    """K-means directly on the aggregation matrix rows; which is SoRK/SoGK/DSoGK."""
    if which not in BASELINE_ALIASES:
        raise ValueError(f"unknown baseline {which!r}; choose from {sorted(BASELINE_ALIASES)}")
    return fit(r, k, BASELINE_ALIASES[which], kmeans_cfg, rng)


@dataclass
class SparsityReport:
    """Advisory check of the sparsity regimes behind the consistency guarantees.

    ratio_response scales rho L max(N, J) against M^2 log(N + J + L)
    (the response-sum method); ratio_gram scales rho^2 N J L against
    M^4 log(N + J + L) (the Gram-based methods). A ratio below 1 flags
    data too sparse for the corresponding guarantee.
    """

    ratio_response: float
    ratio_gram: float
    response_in_regime: bool
    gram_in_regime: bool


def check_sparsity_regime(params: ModelParams) -> SparsityReport:
    log_term = math.log(params.n + params.j + params.l)
    ratio_response = (
        params.rho * params.l * max(params.n, params.j) / (params.m**2 * log_term)
    )
    ratio_gram = (
        params.rho**2 * params.n * params.j * params.l / (params.m**4 * log_term)
    )
    return SparsityReport(
        ratio_response=ratio_response,
        ratio_gram=ratio_gram,
        response_in_regime=ratio_response >= 1.0,
        gram_in_regime=ratio_gram >= 1.0,
    )
