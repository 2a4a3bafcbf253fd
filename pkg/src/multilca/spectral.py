"""Truncated SVD / symmetric eigendecomposition for the spectral estimators.

Problem sizes stay in the low thousands, so both routines run a full dense
decomposition and truncate: slower than iterative solvers but deterministic
and robust, which matters more here (results must be bit-reproducible under
a fixed seed).

Sign convention: every returned singular/eigen vector is normalized so that
its entry of largest absolute value is positive (ties broken by lowest
index). K-means downstream is rotation-invariant in exact arithmetic, but
pinning signs makes runs byte-for-byte repeatable.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

#: adjacent singular/eigen values closer than this trigger a degeneracy warning
DEGENERACY_TOL = 1e-10


class DegenerateSpectrumWarning(RuntimeWarning):
    """Truncation boundary falls inside a (near-)repeated singular/eigen value."""


@dataclass
class TruncatedSVD:
    u: np.ndarray  # (N, k), orthonormal columns
    sigma: np.ndarray  # (k,), nonincreasing
    b: np.ndarray  # (J, k), orthonormal columns


@dataclass
class TruncatedEigen:
    v: np.ndarray  # (N, k), orthonormal columns
    lam: np.ndarray  # (k,), nonincreasing in magnitude


def _fix_signs(vectors: np.ndarray, paired: np.ndarray | None = None) -> None:
    """Flip column signs in place so the largest-|entry| of each column is positive.

    `paired` columns (right singular vectors) flip together to preserve the
    reconstruction u diag(sigma) b'.
    """
    for col in range(vectors.shape[1]):
        idx = int(np.argmax(np.abs(vectors[:, col])))
        if vectors[idx, col] < 0:
            vectors[:, col] *= -1.0
            if paired is not None:
                paired[:, col] *= -1.0


def top_k_svd(m: np.ndarray, k: int) -> TruncatedSVD:
    """Leading k singular triplets of a real matrix.

    The truncation of the full decomposition is the best rank-k
    approximation in spectral norm.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2:
        raise ValueError("input must be a 2-D matrix")
    if not np.isfinite(m).all():
        raise ValueError("input contains non-finite entries")
    bound = min(m.shape)
    if not 1 <= k <= bound:
        raise ValueError(f"k must lie in [1, {bound}]; got {k}")
    u, s, vt = np.linalg.svd(m, full_matrices=False)
    if k < bound and s[k - 1] - s[k] <= DEGENERACY_TOL:
        warnings.warn(
            f"singular values {k} and {k + 1} coincide within {DEGENERACY_TOL:g}; "
            "the truncated basis is an arbitrary (but deterministic) choice",
            DegenerateSpectrumWarning,
            stacklevel=2,
        )
    u = u[:, :k].copy()
    b = vt[:k].T.copy()
    _fix_signs(u, paired=b)
    return TruncatedSVD(u=u, sigma=s[:k].copy(), b=b)


def top_k_eigen_by_magnitude(m: np.ndarray, k: int) -> TruncatedEigen:
    """k eigenpairs of a symmetric matrix with largest |eigenvalue|.

    Magnitude ordering matters because the debiased Gram sum is indefinite:
    its informative eigenvalues can be negative. Ties between +x and -x are
    resolved deterministically (stable sort over the ascending eigh output).
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("input must be a square matrix")
    if not np.isfinite(m).all():
        raise ValueError("input contains non-finite entries")
    scale = max(1.0, float(np.abs(m).max()))
    asym = float(np.abs(m - m.T).max())
    if asym > 1e-8 * scale:
        raise ValueError(f"matrix is not symmetric (max asymmetry {asym:g})")
    if not 1 <= k <= m.shape[0]:
        raise ValueError(f"k must lie in [1, {m.shape[0]}]; got {k}")
    w, v = np.linalg.eigh((m + m.T) / 2.0)
    order = np.argsort(-np.abs(w), kind="stable")
    if k < m.shape[0]:
        gap = abs(w[order[k - 1]]) - abs(w[order[k]])
        if gap <= DEGENERACY_TOL:
            warnings.warn(
                f"eigenvalue magnitudes {k} and {k + 1} coincide within "
                f"{DEGENERACY_TOL:g}; the truncated basis is an arbitrary "
                "(but deterministic) choice",
                DegenerateSpectrumWarning,
                stacklevel=2,
            )
    take = order[:k]
    vectors = v[:, take].copy()
    _fix_signs(vectors)
    return TruncatedEigen(v=vectors, lam=w[take].copy())
