"""Training objectives and their gradients.

Row-level losses take probability matrices and return the gradient with
respect to the logits that produced them (softmax is folded in). The
model-level losses (mixup consistency, the total objective) run the network
themselves and return parameter gradients in ``MlpModel.params()`` order.
All values are means over the batch.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .nn import MlpModel, ShapeError, as_matrix, backward, forward_cache

LOG_FLOOR = 1e-12


@dataclass
class LossValue:
    value: float
    grad: object  # ndarray on logits, or list of parameter arrays
    parts: dict = field(default_factory=dict)


def _log(p: np.ndarray) -> np.ndarray:
    return np.log(np.maximum(p, LOG_FLOOR))


def _xlogx(p: np.ndarray) -> np.ndarray:
    return np.where(p > 0, p * _log(p), 0.0)


def _same_shape(a, b, what="inputs"):
    if a.shape != b.shape:
        raise ShapeError(f"{what} differ in shape: {a.shape} vs {b.shape}")


def smooth_labels(y_onehot, gamma: float, K: int | None = None) -> np.ndarray:
    y = as_matrix(y_onehot, "y_onehot")
    K = y.shape[1] if K is None else K
    if y.shape[1] != K:
        raise ShapeError(f"labels have {y.shape[1]} columns, K={K}")
    if not 0.0 <= gamma < 1.0:
        raise ValueError(f"gamma must be in [0, 1), got {gamma}")
    is_one = y == 1.0
    if not (np.all(is_one | (y == 0.0)) and np.all(is_one.sum(axis=1) == 1)):
        raise ValueError("every label row must be one-hot")
    return gamma / K + (1.0 - gamma) * y


def one_hot(labels, K: int) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    out = np.zeros((labels.size, K))
    out[np.arange(labels.size), labels] = 1.0
    return out


def cross_entropy_smoothed(probs, q) -> LossValue:
    p, q = as_matrix(probs), as_matrix(q)
    _same_shape(p, q)
    n = p.shape[0]
    value = float(-(q * _log(p)).sum() / n)
    return LossValue(value, (p - q) / n)


def kl_divergence(teacher, student) -> LossValue:
    """Mean over rows of KL(teacher || student); gradient on student logits."""
    t, s = as_matrix(teacher), as_matrix(student)
    _same_shape(t, s)
    n = t.shape[0]
    value = float((_xlogx(t) - t * _log(s)).sum() / n)
    # assumes teacher rows sum to one, which holds for every caller
    return LossValue(value, (s - t) / n)


def entropy_loss(probs) -> LossValue:
    p = as_matrix(probs)
    n = p.shape[0]
    h = -_xlogx(p).sum(axis=1, keepdims=True)
    grad = -p * (_log(p) + h) / n
    return LossValue(float(h.sum() / n), grad)


def diversity_loss(probs) -> LossValue:
    """Negative entropy of the batch-mean prediction; minimised by balanced use of classes."""
    p = as_matrix(probs)
    n = p.shape[0]
    p_mean = p.mean(axis=0)
    log_mean = _log(p_mean)
    value = float(_xlogx(p_mean).sum())
    grad = p * (log_mean[None, :] - (p * log_mean[None, :]).sum(axis=1, keepdims=True)) / n
    return LossValue(value, grad)


def im_loss(probs) -> LossValue:
    ent, div = entropy_loss(probs), diversity_loss(probs)
    return LossValue(ent.value + div.value, ent.grad + div.grad,
                     {"ent": ent.value, "div": div.value})


def mixup_pair(a, b, eta: float):
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must be in [0, 1], got {eta}")
    return eta * np.asarray(a, dtype=np.float64) + (1.0 - eta) * np.asarray(b, dtype=np.float64)


def mixup_target(model: MlpModel, x_i, x_j, eta: float) -> np.ndarray:
    """Mixed detached predictions; no gradient flows through this."""
    p_i = forward_cache(model, x_i).probs
    p_j = forward_cache(model, x_j).probs
    return mixup_pair(p_i, p_j, eta)


def mixup_consistency_loss(model: MlpModel, x_i, x_j, eta: float, target=None) -> LossValue:
    """KL between mixed predictions and the prediction on mixed inputs.

    ``target`` may be passed to reuse a precomputed (detached) mixed
    prediction.
    """
    x_i, x_j = as_matrix(x_i), as_matrix(x_j)
    _same_shape(x_i, x_j, "mixup batches")
    if target is None:
        target = mixup_target(model, x_i, x_j, eta)
    x_mix = mixup_pair(x_i, x_j, eta)
    cache = forward_cache(model, x_mix)
    kl = kl_divergence(target, cache.probs)
    return LossValue(kl.value, backward(model, x_mix, kl.grad, cache))


@dataclass(frozen=True)
class LossWeights:
    kd: float = 1.0
    im: float = 1.0
    mix: float = 1.0


def total_loss(model: MlpModel, batch, teacher_probs, eta: float, partner=None,
               weights: LossWeights = LossWeights(), perm=None) -> LossValue:
    """Distillation + information maximisation + mixup consistency.

    Each row is mixed with the matching row of ``partner`` (defaults to
    ``batch`` itself). Passing ``perm`` instead mixes the batch with
    ``batch[perm]`` and reuses the batch predictions for the mixed target.
    Terms with zero weight are skipped. ``parts`` holds unweighted components.
    """
    x = as_matrix(batch)
    t = as_matrix(teacher_probs, "teacher_probs")
    cache = forward_cache(model, x)
    mix_target = None
    if perm is not None:
        partner = x[perm]
        mix_target = mixup_pair(cache.probs, cache.probs[perm], eta)
    _same_shape(t, cache.probs, "teacher and student")
    parts = {"kd": 0.0, "im": 0.0, "mix": 0.0}
    grad_logits = np.zeros_like(cache.logits)
    if weights.kd:
        kd = kl_divergence(t, cache.probs)
        parts["kd"] = kd.value
        grad_logits += weights.kd * kd.grad
    if weights.im:
        im = im_loss(cache.probs)
        parts["im"] = im.value
        grad_logits += weights.im * im.grad
    grads = backward(model, x, grad_logits, cache)
    if weights.mix:
        mix = mixup_consistency_loss(model, x, x if partner is None else partner, eta,
                                     target=mix_target)
        parts["mix"] = mix.value
        grads = [g + weights.mix * gm for g, gm in zip(grads, mix.grad)]
    value = weights.kd * parts["kd"] + weights.im * parts["im"] + weights.mix * parts["mix"]
    return LossValue(value, grads, parts)


def im_objective(model: MlpModel, batch) -> LossValue:
    """Information maximisation alone, as used for the final fine-tune."""
    x = as_matrix(batch)
    cache = forward_cache(model, x)
    im = im_loss(cache.probs)
    return LossValue(im.value, backward(model, x, im.grad, cache), dict(im.parts))


def source_objective(model: MlpModel, batch, labels, gamma: float) -> LossValue:
    x = as_matrix(batch)
    cache = forward_cache(model, x)
    q = smooth_labels(one_hot(labels, model.n_classes), gamma)
    ce = cross_entropy_smoothed(cache.probs, q)
    return LossValue(ce.value, backward(model, x, ce.grad, cache))


def distill_objective(model: MlpModel, batch, teacher_probs) -> LossValue:
    x = as_matrix(batch)
    cache = forward_cache(model, x)
    kl = kl_divergence(teacher_probs, cache.probs)
    return LossValue(kl.value, backward(model, x, kl.grad, cache))
