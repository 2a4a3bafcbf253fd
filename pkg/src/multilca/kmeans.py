"""Lloyd's K-means with k-means++ seeding, written for determinism.

Ties in nearest-center assignment break toward the lowest center index,
empty clusters are refilled with the point currently farthest from its
assigned center, and the best of `restarts` independent runs is chosen by
(inertia, restart index). Given the same points and generator seed the
result is bit-for-bit identical, which the replication harness relies on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import Partition
from .seeding import substreams


@dataclass
class KMeansConfig:
    restarts: int = 10
    max_iters: int = 300
    tol: float = 1e-9


@dataclass
class KMeansResult:
    labels: Partition
    centers: np.ndarray
    inertia: float
    iterations: int
    restarts_used: int


def _sq_dists(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Pairwise squared distances (n_points x n_centers), clipped at zero."""
    d = (
        (points * points).sum(axis=1)[:, None]
        - 2.0 * points @ centers.T
        + (centers * centers).sum(axis=1)[None, :]
    )
    np.maximum(d, 0.0, out=d)
    return d


def _kmeanspp(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    closest = _sq_dists(points, centers[:1])[:, 0]
    for c in range(1, k):
        total = closest.sum()
        if total > 0:
            idx = rng.choice(n, p=closest / total)
        else:
            # all points coincide with chosen centers; any choice works
            idx = rng.integers(n)
        centers[c] = points[idx]
        np.minimum(closest, _sq_dists(points, centers[c : c + 1])[:, 0], out=closest)
    return centers


def _refill_empty(
    labels: np.ndarray, centers: np.ndarray, points: np.ndarray, k: int
) -> bool:
    """Move the farthest-from-its-center point into each empty cluster.

    Singleton clusters are never robbed (that would just relocate the
    hole); with an empty cluster present, pigeonhole guarantees a donor.
    """
    refilled = False
    counts = np.bincount(labels, minlength=k)
    for c in range(k):
        if counts[c] > 0:
            continue
        dist = ((points - centers[labels]) ** 2).sum(axis=1)
        dist[counts[labels] <= 1] = -1.0
        donor = int(np.argmax(dist))
        counts[labels[donor]] -= 1
        labels[donor] = c
        counts[c] += 1
        centers[c] = points[donor]
        refilled = True
    return refilled


def _lloyd(points, k, rng, max_iters, tol):
    centers = _kmeanspp(points, k, rng)
    labels = np.full(points.shape[0], -1, dtype=np.int64)
    iterations = 0
    for _ in range(max_iters):
        iterations += 1
        new_labels = np.argmin(_sq_dists(points, centers), axis=1)
        refilled = _refill_empty(new_labels, centers, points, k)
        new_centers = np.empty_like(centers)
        for c in range(k):
            new_centers[c] = points[new_labels == c].mean(axis=0)
        shift = float(np.sqrt(((new_centers - centers) ** 2).sum(axis=1)).max())
        unchanged = np.array_equal(new_labels, labels)
        labels = new_labels
        centers = new_centers
        if unchanged or (shift < tol and not refilled):
            break
    inertia = float(((points - centers[labels]) ** 2).sum())
    return labels, centers, inertia, iterations


def kmeans(
    points: np.ndarray,
    k: int,
    rng: np.random.Generator,
    restarts: int = 10,
    max_iters: int = 300,
    tol: float = 1e-9,
) -> KMeansResult:
    """Best-of-`restarts` Lloyd runs on the rows of `points`.

    Each restart draws its own k-means++ initialization from a child
    stream of `rng`; runs could therefore execute in parallel without
    changing the reported result.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    if not np.isfinite(points).all():
        raise ValueError("points contain non-finite entries")
    n = points.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= {n} points; got k={k}")
    if restarts < 1 or max_iters < 1:
        raise ValueError("restarts and max_iters must be >= 1")

    best = None
    for restart_rng in substreams(rng, restarts):
        labels, centers, inertia, iters = _lloyd(points, k, restart_rng, max_iters, tol)
        if best is None or inertia < best[0]:
            best = (inertia, labels, centers, iters)
    inertia, labels, centers, iters = best
    return KMeansResult(
        labels=Partition(labels=labels, n_classes=k),
        centers=centers,
        inertia=inertia,
        iterations=iters,
        restarts_used=restarts,
    )
