"""Dataset and result serialization.

A dataset is a directory holding `meta.json` (fields N, J, L, M, K when
known, seed) plus `layer_001.csv` ... `layer_LLL.csv`, each an N x J
integer matrix, comma-separated, no header. Partitions are `labels.csv`
with one 1-based class index per line; item parameters are
`theta_001.csv` ... with J x K real entries at 12 significant digits.

Class labels are 0-based everywhere inside the library; the 1-based shift
happens here and only here.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .model import ItemParameterSet, Partition, ResponseTensor

FLOAT_FMT = "%.12g"


def _layer_name(index: int) -> str:
    return f"layer_{index + 1:03d}.csv"


def _theta_name(index: int) -> str:
    return f"theta_{index + 1:03d}.csv"


def save_dataset(
    path,
    tensor: ResponseTensor,
    seed: int | None = None,
    k: int | None = None,
    labels: Partition | None = None,
    thetas: ItemParameterSet | None = None,
) -> Path:
    """Write a dataset directory; truth files are included when given."""
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    meta = {
        "N": tensor.n_subjects,
        "J": tensor.n_items,
        "L": tensor.n_layers,
        "M": tensor.m,
        "K": k,
        "seed": seed,
    }
    (path / "meta.json").write_text(json.dumps(meta, indent=2) + "\n")
    for i, layer in enumerate(tensor.layers):
        np.savetxt(path / _layer_name(i), layer, fmt="%d", delimiter=",")
    if labels is not None:
        save_labels(path / "labels.csv", labels)
    if thetas is not None:
        save_theta_dir(path, thetas.thetas)
    return path


def load_dataset(path) -> tuple[ResponseTensor, dict]:
    path = Path(path)
    meta = json.loads((path / "meta.json").read_text())
    for key in ("N", "J", "L", "M"):
        if key not in meta:
            raise ValueError(f"meta.json is missing field {key!r}")
    layers = np.empty((meta["L"], meta["N"], meta["J"]), dtype=np.int64)
    for i in range(meta["L"]):
        mat = np.loadtxt(path / _layer_name(i), delimiter=",", ndmin=2)
        if mat.shape != (meta["N"], meta["J"]):
            raise ValueError(f"{_layer_name(i)} has shape {mat.shape}")
        layers[i] = mat
    return ResponseTensor(layers=layers, m=meta["M"]), meta


def save_labels(path, partition: Partition) -> Path:
    path = Path(path)
    np.savetxt(path, partition.labels + 1, fmt="%d")
    return path


def load_labels(path, n_classes: int | None = None) -> Partition:
    raw = np.loadtxt(Path(path), dtype=np.int64, ndmin=1)
    if raw.min() < 1:
        raise ValueError("label files are 1-based; found a label < 1")
    k = n_classes if n_classes is not None else int(raw.max())
    return Partition(labels=raw - 1, n_classes=k)


def save_theta_dir(path, thetas: np.ndarray) -> Path:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    for i, theta in enumerate(np.asarray(thetas, dtype=float)):
        np.savetxt(path / _theta_name(i), theta, fmt=FLOAT_FMT, delimiter=",")
    return path


def load_theta_dir(path) -> np.ndarray:
    path = Path(path)
    files = sorted(path.glob("theta_*.csv"))
    if not files:
        raise ValueError(f"no theta_*.csv files under {path}")
    mats = [np.loadtxt(f, delimiter=",", ndmin=2) for f in files]
    shapes = {m.shape for m in mats}
    if len(shapes) != 1:
        raise ValueError(f"theta files disagree on shape: {shapes}")
    return np.stack(mats)


def save_matrix(path, matrix: np.ndarray, fmt: str = FLOAT_FMT) -> Path:
    path = Path(path)
    np.savetxt(path, np.asarray(matrix), fmt=fmt, delimiter=",")
    return path
