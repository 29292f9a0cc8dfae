"""Synthetic source/target domain pairs with a controllable shift.

Each class is a Gaussian blob around a seeded mean. The target domain draws
from the same blobs and then applies a rotation inside a random 2-D plane,
a translation and extra isotropic noise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class ShiftSpec:
    angle: float = 0.0             # radians, inside a random 2-D plane
    translation: object = 0.0      # vector of length dim, or a magnitude in a random direction
    noise: float = 0.0             # extra target noise std

    @classmethod
    def none(cls) -> "ShiftSpec":
        return cls()


# the default desk task: moderate shift
DEFAULT_SHIFT = ShiftSpec(angle=np.pi / 2, translation=2.0, noise=0.8)


@dataclass(frozen=True)
class LabeledSet:
    features: np.ndarray
    labels: np.ndarray

    def __len__(self):
        return self.features.shape[0]


class TargetSet:
    """Target inputs; the true labels are kept for evaluation only."""

    def __init__(self, features: np.ndarray, hidden_labels: np.ndarray | None = None):
        self.features = features
        self._hidden_labels = hidden_labels

    def __len__(self):
        return self.features.shape[0]

    def __repr__(self):
        return f"TargetSet(n={len(self)}, dim={self.features.shape[1]})"

    @property
    def has_labels(self) -> bool:
        return self._hidden_labels is not None

    def evaluation_labels(self) -> np.ndarray:
        if self._hidden_labels is None:
            raise LookupError("target set carries no evaluation labels")
        return self._hidden_labels


@dataclass
class DomainPair:
    source: LabeledSet
    target: TargetSet
    K: int
    dim: int
    shift: ShiftSpec = field(default_factory=ShiftSpec)


def _plane_rotation(dim: int, angle: float, rng: np.random.Generator) -> np.ndarray:
    q, _ = np.linalg.qr(rng.normal(size=(dim, 2)))
    u, v = q[:, 0], q[:, 1]
    c, s = np.cos(angle), np.sin(angle)
    return (np.eye(dim) + (c - 1.0) * (np.outer(u, u) + np.outer(v, v))
            + s * (np.outer(v, u) - np.outer(u, v)))


def _draw_labels(n: int, priors: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    counts = np.floor(priors * n).astype(int)
    counts[: n - counts.sum()] += 1
    labels = np.repeat(np.arange(priors.size), counts)
    return rng.permutation(labels)


def make_domain_pair(K: int = 5, dim: int = 16, n_s: int = 2000, n_t: int = 2000,
                     shift: ShiftSpec = DEFAULT_SHIFT, seed: int = 0,
                     separation: float = 1.0, class_priors=None, target_priors=None) -> DomainPair:
    """Generate a seeded source/target pair.

    ``separation`` scales the spread of class means relative to the unit
    within-class noise. ``class_priors`` (source) and ``target_priors``
    default to balanced classes.
    """
    if K < 2 or dim < 2:
        raise ValueError("need K >= 2 and dim >= 2")
    if not separation > 0:
        raise ValueError("classes must be separated (separation > 0)")
    rng = np.random.default_rng([seed, 7919])
    means = rng.normal(scale=separation, size=(K, dim))

    def priors(p):
        p = np.full(K, 1.0 / K) if p is None else np.asarray(p, dtype=np.float64)
        if p.shape != (K,) or np.any(p < 0) or p.sum() <= 0:
            raise ValueError("class priors must be K non-negative weights")
        return p / p.sum()

    ys = _draw_labels(n_s, priors(class_priors), rng)
    xs = means[ys] + rng.normal(size=(n_s, dim))

    yt = _draw_labels(n_t, priors(target_priors), rng)
    xt = means[yt] + rng.normal(size=(n_t, dim))
    rot = _plane_rotation(dim, shift.angle, rng)
    trans = np.asarray(shift.translation, dtype=np.float64)
    if trans.ndim == 0:
        direction = rng.normal(size=dim)
        trans = float(trans) * direction / np.linalg.norm(direction)
    elif trans.shape != (dim,):
        raise ValueError(f"translation must be a scalar or length-{dim} vector")
    xt = xt @ rot.T + trans + shift.noise * rng.normal(size=(n_t, dim))
    return DomainPair(LabeledSet(xs, ys), TargetSet(xt, yt), K, dim, shift)


def split(data: LabeledSet, frac: float, seed: int) -> tuple[LabeledSet, LabeledSet]:
    """Seeded split into ``(first, rest)`` where ``first`` holds ``frac`` of the rows."""
    perm = np.random.default_rng([seed, 104729]).permutation(len(data))
    cut = int(round(frac * len(data)))
    a, b = perm[:cut], perm[cut:]
    return (LabeledSet(data.features[a], data.labels[a]),
            LabeledSet(data.features[b], data.labels[b]))


def iterate_batches(n_or_data, batch_size: int, seed: int, epoch: int) -> list[np.ndarray]:
    """Index batches for one epoch; shuffled per ``(seed, epoch)``, last partial batch kept."""
    n = n_or_data if isinstance(n_or_data, (int, np.integer)) else len(n_or_data)
    if batch_size < 1:
        raise ValueError("batch_size must be positive")
    order = np.random.default_rng([seed, epoch]).permutation(int(n))
    return [order[i:i + batch_size] for i in range(0, int(n), batch_size)]


# -- line-delimited dumps ---------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def save_labeled(path, features: np.ndarray, labels, K: int) -> None:
    """``K=<K> dim=<d> n=<n>`` header, then ``label,f_0,...,f_{d-1}`` per row.

    A label of ``-1`` marks a row without a label.
    """
    n, dim = features.shape
    labels = np.full(n, -1) if labels is None else np.asarray(labels)
    lines = [f"K={K} dim={dim} n={n}"]
    for y, row in zip(labels, features):
        lines.append(",".join([str(int(y))] + [_fmt(v) for v in row]))
    Path(path).write_text("\n".join(lines) + "\n")


def load_labeled(path) -> tuple[np.ndarray, np.ndarray, int]:
    text = Path(path).read_text().splitlines()
    try:
        head = dict(tok.split("=") for tok in text[0].split())
        K, dim, n = int(head["K"]), int(head["dim"]), int(head["n"])
    except (IndexError, KeyError, ValueError) as exc:
        raise ValueError(f"{path}: bad dataset header") from exc
    rows = [line.split(",") for line in text[1:] if line.strip()]
    if len(rows) != n or any(len(r) != dim + 1 for r in rows):
        raise ValueError(f"{path}: expected {n} rows of {dim + 1} fields")
    labels = np.array([int(r[0]) for r in rows], dtype=np.int64)
    features = np.array([[float(v) for v in r[1:]] for r in rows], dtype=np.float64)
    return features.reshape(n, dim), labels, K


def save_domain_pair(pair: DomainPair, directory) -> tuple[Path, Path]:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    src, tgt = d / "source.txt", d / "target.txt"
    save_labeled(src, pair.source.features, pair.source.labels, pair.K)
    hidden = pair.target.evaluation_labels() if pair.target.has_labels else None
    save_labeled(tgt, pair.target.features, hidden, pair.K)
    return src, tgt


def load_source(path) -> tuple[LabeledSet, int]:
    x, y, K = load_labeled(path)
    if np.any(y < 0) or np.any(y >= K):
        raise ValueError(f"{path}: source labels must lie in [0, {K})")
    return LabeledSet(x, y), K


def load_target(path) -> tuple[TargetSet, int]:
    x, y, K = load_labeled(path)
    hidden = None if np.all(y < 0) else y
    return TargetSet(x, hidden), K
