"""Small dense network with hand-written backprop and momentum SGD.

Matrices are plain 2-D ``float64`` numpy arrays, one sample per row. The
network maps inputs through tanh hidden layers to a linear bottleneck (the
feature extractor) and then through a linear head whose softmax is the
classifier output.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class ShapeError(ValueError):
    """Raised when matrix dimensions do not line up."""


def as_matrix(x, name: str = "x") -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {arr.shape}")
    return arr


def softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


@dataclass
class MlpModel:
    """Weights are stored ``(fan_in, fan_out)`` so a layer is ``a @ W + b``.

    With ``layer_dims = [d_in, h_1, ..., h_m, bottleneck, K]`` the hidden
    layers use tanh, the bottleneck and head are linear. A model with only
    two entries in ``layer_dims`` is a bare linear classifier whose features
    are its inputs.
    """

    layer_dims: list[int]
    weights: list[np.ndarray]
    biases: list[np.ndarray]

    def __post_init__(self):
        if len(self.layer_dims) < 2:
            raise ShapeError("need at least input and output dims")
        if len(self.weights) != len(self.layer_dims) - 1 or len(self.biases) != len(self.weights):
            raise ShapeError("one weight matrix and bias per layer")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            expect = (self.layer_dims[i], self.layer_dims[i + 1])
            if w.shape != expect or b.shape != (expect[1],):
                raise ShapeError(f"layer {i}: weight {w.shape}, bias {b.shape}, expected {expect}")

    @property
    def n_layers(self) -> int:
        return len(self.weights)

    @property
    def n_classes(self) -> int:
        return self.layer_dims[-1]

    @property
    def feature_dim(self) -> int:
        return self.layer_dims[-2]

    def params(self) -> list[np.ndarray]:
        """Parameters in the fixed order ``[W0, b0, W1, b1, ...]``."""
        out = []
        for w, b in zip(self.weights, self.biases):
            out += [w, b]
        return out

    def copy(self) -> "MlpModel":
        return MlpModel(list(self.layer_dims),
                        [w.copy() for w in self.weights],
                        [b.copy() for b in self.biases])

    def digest(self) -> str:
        import hashlib
        h = hashlib.sha256(np.asarray(self.layer_dims, dtype=np.int64).tobytes())
        for p in self.params():
            h.update(np.ascontiguousarray(p).tobytes())
        return h.hexdigest()


def init_mlp(layer_dims, seed: int) -> MlpModel:
    """Glorot-uniform weights, zero biases."""
    rng = np.random.default_rng(seed)
    dims = [int(d) for d in layer_dims]
    weights, biases = [], []
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return MlpModel(dims, weights, biases)


def zeros_like_model(model: MlpModel) -> MlpModel:
    return MlpModel(list(model.layer_dims),
                    [np.zeros_like(w) for w in model.weights],
                    [np.zeros_like(b) for b in model.biases])


@dataclass
class ForwardCache:
    inputs: list[np.ndarray]   # input to each layer
    logits: np.ndarray
    features: np.ndarray
    probs: np.ndarray


def _hidden(i: int, n_layers: int) -> bool:
    # the last two layers (bottleneck, head) are linear
    return i < n_layers - 2


def forward_cache(model: MlpModel, x) -> ForwardCache:
    x = as_matrix(x)
    if x.shape[1] != model.layer_dims[0]:
        raise ShapeError(f"input has {x.shape[1]} columns, model expects {model.layer_dims[0]}")
    a = x
    inputs = []
    n = model.n_layers
    for i, (w, b) in enumerate(zip(model.weights, model.biases)):
        inputs.append(a)
        z = a @ w + b
        a = np.tanh(z) if _hidden(i, n) else z
    logits = a
    features = inputs[-1]
    return ForwardCache(inputs, logits, features, softmax(logits))


def forward(model: MlpModel, x) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(features, probs)``: bottleneck output and softmax of the head."""
    c = forward_cache(model, x)
    return c.features, c.probs


def predict_logits(model: MlpModel, x) -> np.ndarray:
    return forward_cache(model, x).logits


def backward(model: MlpModel, x, grad_logits, cache: ForwardCache | None = None) -> list[np.ndarray]:
    """Parameter gradients for an upstream gradient on the logits.

    Returned in ``model.params()`` order.
    """
    if cache is None:
        cache = forward_cache(model, x)
    g = as_matrix(grad_logits, "grad_logits")
    if g.shape != cache.logits.shape:
        raise ShapeError(f"gradient shape {g.shape} does not match logits {cache.logits.shape}")
    n = model.n_layers
    grads: list[np.ndarray] = [None] * (2 * n)
    for i in range(n - 1, -1, -1):
        a_in = cache.inputs[i]
        grads[2 * i] = a_in.T @ g
        grads[2 * i + 1] = g.sum(axis=0)
        if i == 0:
            break
        g = g @ model.weights[i].T
        if _hidden(i - 1, n):
            # a_in = tanh(z) for the previous layer
            g = g * (1.0 - a_in ** 2)
    return grads


def add_grads(a: list[np.ndarray], b: list[np.ndarray], scale: float = 1.0) -> list[np.ndarray]:
    return [ga + scale * gb for ga, gb in zip(a, b)]


@dataclass
class OptimizerState:
    learning_rate: float = 1e-2
    momentum: float = 0.9
    weight_decay: float = 1e-3
    velocity: list[np.ndarray] = field(default_factory=list)

    @classmethod
    def for_model(cls, model: MlpModel, learning_rate=1e-2, momentum=0.9, weight_decay=1e-3):
        return cls(learning_rate, momentum, weight_decay,
                   [np.zeros_like(p) for p in model.params()])


def sgd_step(model: MlpModel, grads: list[np.ndarray], opt: OptimizerState) -> MlpModel:
    """In-place momentum step: ``v = mu*v - lr*(g + wd*p); p += v``."""
    params = model.params()
    if len(grads) != len(params) or len(opt.velocity) != len(params):
        raise ShapeError("gradient / velocity count does not match parameters")
    for p, g, v in zip(params, grads, opt.velocity):
        if g.shape != p.shape or v.shape != p.shape:
            raise ShapeError(f"shape mismatch: param {p.shape}, grad {g.shape}, velocity {v.shape}")
        v *= opt.momentum
        v -= opt.learning_rate * (g + opt.weight_decay * p)
        p += v
    return model
