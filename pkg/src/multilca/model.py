"""Multi-layer latent class model: domain types and the generative sampler.

N subjects fall into K disjoint latent classes. Each of L layers is an
N x J response matrix with integer entries in {0, ..., M}. Given the
subject's class ell(i) and the layer's J x K item parameter matrix
Theta_l (entries in [0, M]), responses are drawn independently as

    R_l(i, j) ~ Binomial(M, Theta_l(j, ell(i)) / M).

The noiseless expectation Z Theta_l' is the population response matrix;
feeding it back through the estimators in place of sampled responses is
the standard exact-recovery check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: give up if uniform class assignment keeps producing an empty class
#: (practically unreachable for any N, K used in experiments)
MAX_PARTITION_RETRIES = 100_000


@dataclass
class ModelParams:
    """Size and sparsity parameters of one model instance.

    rho is the maximum item-parameter value; shrinking it raises the
    probability of a zero response, so it controls data sparsity.
    """

    n: int
    j: int
    k: int
    l: int
    m: int
    rho: float

    def __post_init__(self):
        for name in ("n", "j", "k", "l", "m"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be a positive integer")
        if self.k > min(self.n, self.j):
            raise ValueError(f"k={self.k} exceeds min(n, j)={min(self.n, self.j)}")
        if not (0.0 < self.rho <= self.m):
            raise ValueError(f"rho must lie in (0, m]; got {self.rho}")


@dataclass
class Partition:
    """Assignment of N subjects to classes 0..n_classes-1 (0-based internally).

    Every class must be nonempty. External formats use 1-based labels;
    conversion happens at the I/O boundary only.
    """

    labels: np.ndarray
    n_classes: int

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.labels.ndim != 1 or self.labels.size == 0:
            raise ValueError("labels must be a nonempty 1-D array")
        if self.n_classes < 1:
            raise ValueError("n_classes must be >= 1")
        if self.labels.min() < 0 or self.labels.max() >= self.n_classes:
            raise ValueError("labels out of range [0, n_classes)")
        if np.any(self.class_sizes == 0):
            raise ValueError("every class must contain at least one subject")

    @property
    def n(self) -> int:
        return self.labels.size

    @property
    def class_sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_classes)

    def onehot(self) -> np.ndarray:
        """N x K 0/1 classification matrix (one 1 per row)."""
        z = np.zeros((self.n, self.n_classes))
        z[np.arange(self.n), self.labels] = 1.0
        return z


@dataclass
class ItemParameterSet:
    """L item parameter matrices stacked as (L, J, K); entries in [0, m]."""

    thetas: np.ndarray
    m: int

    def __post_init__(self):
        self.thetas = np.asarray(self.thetas, dtype=float)
        if self.thetas.ndim != 3:
            raise ValueError("thetas must have shape (L, J, K)")
        if self.thetas.min() < 0 or self.thetas.max() > self.m:
            raise ValueError(f"item parameters must lie in [0, {self.m}]")

    @property
    def n_layers(self) -> int:
        return self.thetas.shape[0]

    @property
    def n_items(self) -> int:
        return self.thetas.shape[1]

    @property
    def n_classes(self) -> int:
        return self.thetas.shape[2]


@dataclass
class ResponseTensor:
    """L observed response matrices stacked as (L, N, J), integers in [0, m]."""

    layers: np.ndarray
    m: int

    def __post_init__(self):
        arr = np.asarray(self.layers)
        if arr.ndim != 3:
            raise ValueError("layers must have shape (L, N, J)")
        if not np.issubdtype(arr.dtype, np.integer):
            rounded = np.rint(arr)
            if not np.array_equal(rounded, arr):
                raise ValueError("responses must be integers")
            arr = rounded.astype(np.int64)
        else:
            arr = arr.astype(np.int64)
        if arr.min() < 0 or arr.max() > self.m:
            raise ValueError(f"responses must lie in [0, {self.m}]")
        self.layers = arr

    @property
    def n_layers(self) -> int:
        return self.layers.shape[0]

    @property
    def n_subjects(self) -> int:
        return self.layers.shape[1]

    @property
    def n_items(self) -> int:
        return self.layers.shape[2]


@dataclass
class PopulationResponse:
    """Noiseless response expectations Z Theta_l', stacked as (L, N, J)."""

    layers: np.ndarray

    def __post_init__(self):
        self.layers = np.asarray(self.layers, dtype=float)
        if self.layers.ndim != 3:
            raise ValueError("layers must have shape (L, N, J)")


def response_layers(r) -> np.ndarray:
    """Coerce a response input to a float (L, N, J) array.

    Accepts ResponseTensor, PopulationResponse, or a raw 3-D array-like.
    Real-valued layers are allowed on purpose: the estimators accept
    population matrices directly for noiseless exact-recovery tests.
    """
    if isinstance(r, (ResponseTensor, PopulationResponse)):
        arr = np.asarray(r.layers, dtype=float)
    else:
        arr = np.asarray(r, dtype=float)
    if arr.ndim != 3:
        raise ValueError("response input must have shape (L, N, J)")
    if arr.size == 0:
        raise ValueError("response input is empty")
    if not np.isfinite(arr).all():
        raise ValueError("response input contains non-finite entries")
    return arr


def sample_partition(n: int, k: int, rng: np.random.Generator) -> Partition:
    """Assign each subject to one of k classes uniformly at random.

    A draw containing an empty class is rejected and the whole partition
    is resampled, which keeps the assignment exchangeable.
    """
    if k < 1 or n < k:
        raise ValueError(f"need n >= k >= 1, got n={n}, k={k}")
    for _ in range(MAX_PARTITION_RETRIES):
        labels = rng.integers(0, k, size=n)
        if np.bincount(labels, minlength=k).min() > 0:
            return Partition(labels=labels, n_classes=k)
    raise RuntimeError("could not draw a partition without empty classes")


def sample_item_params(
    j: int, k: int, l: int, rho: float, m: int, rng: np.random.Generator
) -> ItemParameterSet:
    """Draw Theta_l(j, k) = rho * u with u ~ Uniform(0, 1), i.i.d. over (j,k,l)."""
    if not (0.0 < rho <= m):
        raise ValueError(f"rho must lie in (0, m]; got {rho}")
    u = rng.random((l, j, k))
    # keep entries strictly inside (0, rho); u == 0.0 has probability 2^-53
    while np.any(u == 0.0):
        zeros = u == 0.0
        u[zeros] = rng.random(int(zeros.sum()))
    return ItemParameterSet(thetas=rho * u, m=m)


def population_response(z: Partition, thetas: ItemParameterSet) -> PopulationResponse:
    """Population response matrices: layer l has row i equal to Theta_l(:, ell(i))."""
    if thetas.n_classes != z.n_classes:
        raise ValueError(
            f"class count mismatch: partition has {z.n_classes}, "
            f"item parameters have {thetas.n_classes}"
        )
    # (L, J, K) indexed by labels -> (L, J, N) -> (L, N, J); equals Z Theta_l'
    layers = thetas.thetas[:, :, z.labels].transpose(0, 2, 1)
    return PopulationResponse(layers=np.ascontiguousarray(layers))


def sample_responses(
    pop: PopulationResponse, m: int, rng: np.random.Generator
) -> ResponseTensor:
    """Draw R_l(i, j) ~ Binomial(m, pop_l(i, j) / m) independently.

    Sampling sums m Bernoulli draws per entry, which is exact and keeps
    the draw sequence stable under a fixed seed (m is small in practice).
    """
    layers = pop.layers
    if layers.min() < 0 or layers.max() > m:
        raise ValueError(f"population entries must lie in [0, {m}]")
    p = layers / m
    counts = np.zeros(layers.shape, dtype=np.int64)
    for lam in range(layers.shape[0]):
        u = rng.random((m,) + layers.shape[1:])
        counts[lam] = (u < p[lam]).sum(axis=0)
    return ResponseTensor(layers=counts, m=m)
