"""Evaluation metrics comparing estimated to true class structure.

Permutation-sensitive metrics (worst-class clustering error, Hamming error)
search all K! label permutations exhaustively; K is capped at 8 (8! = 40320
candidates) and larger K raises rather than silently approximating.

Definitions pinned here:

* clustering_error: min over permutations p of
      max_k (#missed from true class k + #intruders in matched class) / N_k,
  with N_k the size of true class k.
* hamming_error: min over permutations of the misassignment fraction.
* nmi: 2 I(truth; est) / (H(truth) + H(est)), natural logarithms; defined
  as 1 when both partitions are single-class (both entropies zero).
* ari: Hubert-Arabie adjusted Rand index; 1 for identical partitions,
  including degenerate single-class pairs.
* relative_l2_error: ||sum_l (theta_hat - theta_true)||_F /
  ||sum_l theta_true||_F after aligning estimated columns with the
  clustering-error-minimizing permutation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .model import Partition

#: exhaustive permutation search is refused beyond this many classes
MAX_PERMUTATION_CLASSES = 8


@dataclass
class MetricReport:
    clustering_error: float
    hamming_error: float
    nmi: float
    ari: float
    relative_l2_error: float | None = None


def contingency(truth: Partition, est: Partition) -> np.ndarray:
    """Joint label count matrix, truth classes on rows."""
    if truth.n != est.n:
        raise ValueError("partitions cover different numbers of subjects")
    table = np.zeros((truth.n_classes, est.n_classes), dtype=np.int64)
    np.add.at(table, (truth.labels, est.labels), 1)
    return table


def _check_same_k(truth: Partition, est: Partition) -> int:
    if truth.n != est.n:
        raise ValueError("partitions cover different numbers of subjects")
    if truth.n_classes != est.n_classes:
        raise ValueError(
            f"class counts differ: {truth.n_classes} vs {est.n_classes}"
        )
    k = truth.n_classes
    if k > MAX_PERMUTATION_CLASSES:
        raise ValueError(
            f"exhaustive permutation search supports at most "
            f"{MAX_PERMUTATION_CLASSES} classes; got {k}"
        )
    return k


def best_label_permutation(truth: Partition, est: Partition) -> tuple[tuple[int, ...], float]:
    """Permutation matching true class k to estimated class p(k), plus its error.

    Minimizes the worst-class misassignment rate: for each true class the
    count of members missing from the matched estimated class plus the
    count of outsiders present in it, normalized by the true class size.
    """
    k = _check_same_k(truth, est)
    table = contingency(truth, est)
    row = table.sum(axis=1)  # true class sizes N_k
    col = table.sum(axis=0)
    # missed(k, c) + intruders(k, c), normalized by N_k
    cost = ((row[:, None] - table) + (col[None, :] - table)) / row[:, None]
    best_perm, best_val = None, math.inf
    for perm in permutations(range(k)):
        val = max(cost[i, perm[i]] for i in range(k))
        if val < best_val:
            best_perm, best_val = perm, val
    return best_perm, float(best_val)


def clustering_error(truth: Partition, est: Partition) -> float:
    return best_label_permutation(truth, est)[1]


def hamming_error(truth: Partition, est: Partition) -> float:
    """Permutation-minimized fraction of misassigned subjects."""
    k = _check_same_k(truth, est)
    table = contingency(truth, est)
    best_matches = -1
    for perm in permutations(range(k)):
        # perm maps estimated class j onto true class perm[j]
        matches = sum(table[perm[j], j] for j in range(k))
        if matches > best_matches:
            best_matches = matches
    return float(truth.n - best_matches) / truth.n


def nmi(truth: Partition, est: Partition) -> float:
    table = contingency(truth, est)
    n = truth.n
    row = table.sum(axis=1)
    col = table.sum(axis=0)

    def entropy(counts):
        p = counts[counts > 0] / n
        return float(-(p * np.log(p)).sum())

    h_truth = entropy(row)
    h_est = entropy(col)
    if h_truth == 0.0 and h_est == 0.0:
        return 1.0
    # I = H(truth) + H(est) - H(joint); shared terms keep identical
    # partitions at exactly 1.0
    h_joint = entropy(table.ravel())
    info = h_truth + h_est - h_joint
    return 2.0 * info / (h_truth + h_est)


def ari(truth: Partition, est: Partition) -> float:
    table = contingency(truth, est)
    row = table.sum(axis=1)
    col = table.sum(axis=0)
    n = truth.n

    def comb2(x) -> int:
        x = int(x)
        return x * (x - 1) // 2

    index = sum(comb2(v) for v in table.ravel())
    sum_rows = sum(comb2(v) for v in row)
    sum_cols = sum(comb2(v) for v in col)
    expected = sum_rows * sum_cols / comb2(n)
    max_index = (sum_rows + sum_cols) / 2
    if max_index == expected:
        # degenerate (e.g. both single-class): 1 iff co-membership agrees
        same = np.count_nonzero(table) == max(truth.n_classes, est.n_classes) and (
            (table > 0).sum(axis=0).max() == 1 and (table > 0).sum(axis=1).max() == 1
        )
        return 1.0 if same else 0.0
    return (index - expected) / (max_index - expected)


def relative_l2_error(
    theta_true: np.ndarray, theta_hat: np.ndarray, perm: tuple[int, ...]
) -> float:
    """Frobenius error of the layer-summed item parameters after realignment.

    `perm` is the clustering-error-minimizing match (true class k -> estimated
    class perm[k]); estimated columns are reordered accordingly before
    differencing.
    """
    theta_true = np.asarray(theta_true, dtype=float)
    theta_hat = np.asarray(theta_hat, dtype=float)
    if theta_true.shape != theta_hat.shape:
        raise ValueError("item parameter shapes differ")
    if len(perm) != theta_true.shape[2]:
        raise ValueError("permutation length must equal the class count")
    aligned = theta_hat[:, :, list(perm)]
    denom = float(np.linalg.norm(theta_true.sum(axis=0)))
    if denom == 0.0:
        raise ValueError("true item parameters are all zero")
    num = float(np.linalg.norm((aligned - theta_true).sum(axis=0)))
    return num / denom


def accuracy_rate(k_hats, k_true: int) -> float:
    """Fraction of selected class counts equal to the true one."""
    k_hats = list(k_hats)
    if not k_hats:
        raise ValueError("no selections to score")
    return sum(1 for k in k_hats if k == k_true) / len(k_hats)


def score(
    truth: Partition,
    est: Partition,
    theta_true: np.ndarray | None = None,
    theta_hat: np.ndarray | None = None,
) -> MetricReport:
    """All partition metrics at once; item parameter error when truth is known."""
    perm, clust = best_label_permutation(truth, est)
    rel = None
    if theta_true is not None and theta_hat is not None:
        rel = relative_l2_error(theta_true, theta_hat, perm)
    return MetricReport(
        clustering_error=clust,
        hamming_error=hamming_error(truth, est),
        nmi=nmi(truth, est),
        ari=ari(truth, est),
        relative_l2_error=rel,
    )
