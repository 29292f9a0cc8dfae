"""High-confidence sample selection.

Three signals decide whether a pseudo-label is trusted:

* the maximum softmax probability of the source prediction,
* agreement between the model's hard label and a prototype label obtained
  from nearest class centroids in feature space (cosine distance), guarded by
  a relative distance margin,
* the intra-class similarity score: the fraction of a sample's pseudo-class
  whose features have cosine similarity above ``delta`` with it.

Ties are always resolved in favour of the lowest class index.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass

import numpy as np

from .nn import ShapeError, as_matrix

log = logging.getLogger(__name__)

EMPTY_WEIGHT = 1e-9
MARGIN_SENTINEL = 1e12


class Reason(enum.IntEnum):
    PROMOTED = 0
    NOT_CONFIDENT = 1       # neither prototype agreement nor softmax threshold
    LABEL_MISMATCH = 2      # prototype label differs from hard label
    LOW_MARGIN = 3          # prototype label agrees but margin <= beta
    LOW_SIMILARITY = 4      # ts <= theta
    ALREADY_HIGH = 5        # sample is not in the low-confidence pool


@dataclass
class PrototypeSet:
    centroids_c0: np.ndarray
    centroids_c1: np.ndarray
    labels_initial: np.ndarray
    labels_refined: np.ndarray
    distances: np.ndarray   # (n, K) cosine distances to c1
    margins: np.ndarray
    empty_c0: np.ndarray    # classes whose weighted centroid had no mass


@dataclass
class SimilarityStats:
    ts: np.ndarray
    class_sizes: np.ndarray


@dataclass
class SelectionDecision:
    promote: np.ndarray     # bool per sample
    reason: np.ndarray      # Reason code per sample

    @property
    def count(self) -> int:
        return int(self.promote.sum())


def weighted_centroids(features, probs) -> tuple[np.ndarray, np.ndarray]:
    """Soft-assignment centroids ``sum_i p_ik g_i / sum_i p_ik``.

    Returns ``(centroids, empty)``; rows of empty classes are zero.
    """
    g, p = as_matrix(features, "features"), as_matrix(probs, "probs")
    if g.shape[0] != p.shape[0]:
        raise ShapeError("features and probs must have the same number of rows")
    mass = p.sum(axis=0)
    empty = mass < EMPTY_WEIGHT
    centroids = np.zeros((p.shape[1], g.shape[1]))
    ok = ~empty
    centroids[ok] = (p[:, ok].T @ g) / mass[ok, None]
    return centroids, empty


def _unit_rows(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    norms = np.linalg.norm(x, axis=1)
    zero = norms == 0
    unit = np.zeros_like(x)
    unit[~zero] = x[~zero] / norms[~zero, None]
    return unit, zero


def cosine_distances(features, centroids) -> np.ndarray:
    """``1 - cos`` for every (sample, centroid) pair; zero vectors give 1."""
    g, c = as_matrix(features, "features"), as_matrix(centroids, "centroids")
    if g.shape[1] != c.shape[1]:
        raise ShapeError("features and centroids differ in dimension")
    gu, gz = _unit_rows(g)
    cu, cz = _unit_rows(c)
    if gz.any() or cz.any():
        log.debug("zero-norm vectors: %d features, %d centroids", gz.sum(), cz.sum())
    d = 1.0 - gu @ cu.T
    return np.clip(d, 0.0, 2.0)


def assign_nearest(features, centroids, candidates=None) -> tuple[np.ndarray, np.ndarray]:
    """Nearest centroid by cosine distance.

    ``candidates`` is an optional boolean mask over centroids; excluded
    centroids get infinite distance. Returns ``(labels, distances)``.
    """
    d = cosine_distances(features, centroids)
    if candidates is not None:
        d[:, ~np.asarray(candidates, dtype=bool)] = np.inf
    # argmin returns the first minimum, i.e. the lowest class index
    return np.argmin(d, axis=1), d


def refine_prototypes(features, labels_initial, centroids_c0,
                      candidates=None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """One hard k-means step: class means of the initial labels, then reassign.

    A class with no members keeps its previous centroid. Returns
    ``(centroids_c1, labels_refined, distances)``.
    """
    g = as_matrix(features, "features")
    labels = np.asarray(labels_initial)
    c1 = np.array(as_matrix(centroids_c0, "centroids_c0"), copy=True)
    K = c1.shape[0]
    counts = np.bincount(labels, minlength=K)
    sums = np.zeros_like(c1)
    np.add.at(sums, labels, g)
    has = counts > 0
    c1[has] = sums[has] / counts[has, None]
    refined, d = assign_nearest(g, c1, candidates)
    return c1, refined, d


def distance_margin(distances) -> np.ndarray:
    """Relative gap ``(second - first) / first`` of each row's two smallest distances.

    A zero nearest distance with a positive runner-up is maximally confident
    and maps to ``MARGIN_SENTINEL``; two zero distances give 0. Margins are
    capped at the sentinel so nothing outranks an exact centroid hit.
    """
    d = as_matrix(distances, "distances")
    if d.shape[1] < 2:
        raise ShapeError("need at least two centroids for a margin")
    two = np.partition(d, 1, axis=1)[:, :2]
    first, second = two[:, 0], two[:, 1]
    gap = second - first
    out = np.zeros(d.shape[0])
    pos = first > 0
    with np.errstate(invalid="ignore", over="ignore"):
        out[pos] = gap[pos] / first[pos]
    out[~pos & (gap > 0)] = MARGIN_SENTINEL
    if (~pos).any():
        log.debug("%d samples coincide with a centroid", int((~pos).sum()))
    return np.minimum(out, MARGIN_SENTINEL)


def prototype_labels(features, probs) -> PrototypeSet:
    """Weighted centroids, nearest assignment, one refinement round, margins."""
    c0, empty = weighted_centroids(features, probs)
    labels0, _ = assign_nearest(features, c0, candidates=~empty)
    c1, labels1, d = refine_prototypes(features, labels0, c0, candidates=~empty)
    return PrototypeSet(c0, c1, labels0, labels1, d, distance_margin(d), empty)


def intra_class_similarity(features, pseudo_labels, delta: float, K: int | None = None) -> SimilarityStats:
    """Fraction of each sample's pseudo-class with cosine similarity above ``delta``.

    The sample itself counts (its self-similarity is 1), so singletons score 1.
    Zero-norm features have similarity 0 with everything, themselves included.
    """
    if not -1.0 <= delta <= 1.0:
        raise ValueError(f"delta must be in [-1, 1], got {delta}")
    g = as_matrix(features, "features")
    labels = np.asarray(pseudo_labels)
    if labels.shape != (g.shape[0],):
        raise ShapeError("one pseudo-label per feature row")
    K = int(labels.max()) + 1 if K is None else K
    unit, zero = _unit_rows(g)
    if zero.any():
        log.debug("%d zero-norm features in similarity", int(zero.sum()))
    ts = np.zeros(g.shape[0])
    sizes = np.bincount(labels, minlength=K)
    for k in range(K):
        idx = np.flatnonzero(labels == k)
        if idx.size == 0:
            continue
        u = unit[idx]
        s = u @ u.T
        self_sim = np.where(zero[idx], 0.0, 1.0)
        s[np.diag_indices_from(s)] = self_sim
        ts[idx] = (s > delta).sum(axis=1) / idx.size
    return SimilarityStats(ts, sizes)


def theta_for_round(theta: float, round_: int, step: float = 0.05, cap: float = 0.9) -> float:
    """Similarity threshold tightened linearly with the round number (round 1 = base)."""
    return min(theta + step * max(round_ - 1, 0), max(cap, theta))


def warmup_gate(probs_src, hard_src, proto_label, d_t, ts, alpha: float, beta: float,
                theta: float) -> SelectionDecision:
    """``((proto == hard and d_t > beta) or max p > alpha) and ts > theta``, per sample."""
    p = as_matrix(probs_src, "probs_src")
    hard = np.asarray(hard_src)
    proto = np.asarray(proto_label)
    d_t = np.asarray(d_t, dtype=np.float64)
    ts = np.asarray(ts, dtype=np.float64)
    agree = proto == hard
    proto_ok = agree & (d_t > beta)
    confident = proto_ok | (p.max(axis=1) > alpha)
    similar = ts > theta
    reason = np.full(hard.shape, Reason.PROMOTED, dtype=np.int8)
    reason[~similar] = Reason.LOW_SIMILARITY
    reason[~confident & agree] = Reason.LOW_MARGIN
    reason[~confident & ~agree] = Reason.NOT_CONFIDENT
    return SelectionDecision(confident & similar, reason)


def incremental_gate(hard_target, proto_label, d_t, ts, beta: float, theta: float,
                     round_: int = 1, theta_step: float = 0.05, theta_cap: float = 0.9) -> SelectionDecision:
    """``proto == hard and d_t > beta and ts > theta_r`` with a per-round tightened ``theta_r``."""
    hard = np.asarray(hard_target)
    proto = np.asarray(proto_label)
    d_t = np.asarray(d_t, dtype=np.float64)
    ts = np.asarray(ts, dtype=np.float64)
    theta_r = theta_for_round(theta, round_, theta_step, theta_cap)
    agree = proto == hard
    wide = d_t > beta
    similar = ts > theta_r
    reason = np.full(hard.shape, Reason.PROMOTED, dtype=np.int8)
    reason[~similar] = Reason.LOW_SIMILARITY
    reason[~wide] = Reason.LOW_MARGIN
    reason[~agree] = Reason.LABEL_MISMATCH
    return SelectionDecision(agree & wide & similar, reason)
