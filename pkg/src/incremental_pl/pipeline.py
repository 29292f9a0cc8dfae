"""Black-box adaptation by incremental pseudo-labeling.

The flow is:

1. a source model is trained on labeled source data and exports soft
   predictions for the target inputs (the only thing that crosses over);
2. a crude target model is distilled from those predictions with KD + mixup;
3. a student is distilled (KD only) to get target features for prototypes;
4. warm-up: samples passing the softmax / prototype / similarity gate form
   the high-confidence pool H, and a model is retrained on H from the crude
   model's weights;
5. incremental rounds: the current model relabels the low-confidence pool L,
   agreeing and similar samples move to H, and a fresh copy of the crude
   model is retrained on H, until ``|L| / n < lambda_stop``;
6. the last model is fine-tuned with information maximisation.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import selector
from .datagen import LabeledSet, TargetSet, iterate_batches
from .losses import (LossWeights, distill_objective, im_objective, source_objective,
                     total_loss)
from .nn import MlpModel, OptimizerState, forward, init_mlp, sgd_step

log = logging.getLogger(__name__)


class DivergenceError(RuntimeError):
    """Training produced a non-finite loss."""


class SelectionError(RuntimeError):
    """No sample could be selected as high-confidence."""


@dataclass(frozen=True)
class Hyperparams:
    alpha: float = 0.8
    beta: float = 0.3
    lambda_stop: float = 0.1
    delta: float = 0.6
    theta: float = 0.3
    gamma: float = 0.1
    omega: float = 0.3
    theta_step: float = 0.05
    theta_cap: float = 0.9
    lr: float = 1e-2
    momentum: float = 0.9
    weight_decay: float = 1e-3
    batch_size: int = 64
    hidden: tuple = (64,)
    bottleneck: int = 32
    epochs_source: int = 20
    epochs_crude: int = 20
    epochs_student: int = 20
    epochs_warm: int = 10
    epochs_round: int = 10
    epochs_finetune: int = 10
    max_rounds: int = 20
    stall_limit: int = 2
    w_kd: float = 1.0
    w_im: float = 1.0
    w_mix: float = 1.0
    finetune: str = "im"   # "im", "full" or "none"
    seed: int = 0

    def __post_init__(self):
        for name in ("alpha", "delta", "theta", "lambda_stop"):
            v = getattr(self, name)
            lo = -1.0 if name == "delta" else 0.0
            if not lo <= v <= 1.0:
                raise ValueError(f"{name} must be in [{lo}, 1], got {v}")
        if self.beta < 0:
            raise ValueError("beta must be non-negative")
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be at least 1")
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError("gamma must be in [0, 1)")
        if self.omega <= 0:
            raise ValueError("omega must be positive")
        if self.batch_size < 1:
            raise ValueError("batch_size must be positive")
        if self.finetune not in ("im", "full", "none"):
            raise ValueError(f"unknown finetune objective {self.finetune!r}")

    @property
    def weights(self) -> LossWeights:
        return LossWeights(self.w_kd, self.w_im, self.w_mix)

    def layer_dims(self, d_in: int, K: int) -> list[int]:
        return [d_in, *self.hidden, self.bottleneck, K]

    def with_(self, **kw) -> "Hyperparams":
        return replace(self, **kw)


PROFILES = {
    "office": dict(alpha=0.8, beta=0.3, lambda_stop=0.1),
    "office-home": dict(alpha=0.6, beta=0.2, lambda_stop=0.2),
    "visda": dict(alpha=0.7, beta=0.2, lambda_stop=0.25),
    "custom": {},
}

ABLATIONS = {
    "L_kd": LossWeights(1.0, 0.0, 0.0),
    "L_kd&L_im": LossWeights(1.0, 1.0, 0.0),
    "L_kd&L_mix": LossWeights(1.0, 0.0, 1.0),
    "L_kd&L_im&L_mix": LossWeights(1.0, 1.0, 1.0),
}


def profile(name: str, **overrides) -> Hyperparams:
    if name not in PROFILES:
        raise KeyError(f"unknown profile {name!r}; choose from {sorted(PROFILES)}")
    return Hyperparams(**{**PROFILES[name], **overrides})


def hyperparam_names() -> list[str]:
    return [f.name for f in fields(Hyperparams)]


# -- soft predictions: the black-box wire format ------------------------------

@dataclass
class SoftPredictionSet:
    ids: np.ndarray
    probs: np.ndarray

    @property
    def K(self) -> int:
        return self.probs.shape[1]

    @property
    def hard(self) -> np.ndarray:
        return np.argmax(self.probs, axis=1)

    def __len__(self):
        return self.probs.shape[0]


def _format_row(row: np.ndarray) -> list[str]:
    # print every entry to 9 significant digits, except the largest which
    # absorbs the rounding residue so the printed row still sums to one
    top = int(np.argmax(row))
    out = [f"{v:.9g}" for v in row]
    rest = sum(float(s) for i, s in enumerate(out) if i != top)
    out[top] = f"{1.0 - rest:.9g}"
    return out


def format_predictions(preds: SoftPredictionSet) -> str:
    lines = [f"K={preds.K} n={len(preds)}"]
    for i, row in zip(preds.ids, preds.probs):
        lines.append(",".join([str(int(i))] + _format_row(row)))
    return "\n".join(lines) + "\n"


def parse_predictions(text: str) -> SoftPredictionSet:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    try:
        head = dict(tok.split("=") for tok in lines[0].split())
        K, n = int(head["K"]), int(head["n"])
    except (IndexError, KeyError, ValueError) as exc:
        raise ValueError("predictions: header must be 'K=<count> n=<count>'") from exc
    rows = [[f.strip() for f in ln.split(",")] for ln in lines[1:]]
    if len(rows) != n or any(len(r) != K + 1 for r in rows):
        raise ValueError(f"predictions: expected {n} records of {K + 1} fields")
    ids = np.array([int(r[0]) for r in rows], dtype=np.int64)
    probs = np.array([[float(v) for v in r[1:]] for r in rows], dtype=np.float64).reshape(n, K)
    if not np.all(np.isfinite(probs)) or np.any(probs < 0):
        raise ValueError("predictions: probabilities must be finite and non-negative")
    if np.any(np.abs(probs.sum(axis=1) - 1.0) > 1e-6):
        raise ValueError("predictions: every row must sum to one")
    if len(np.unique(ids)) != n:
        raise ValueError("predictions: duplicate sample ids")
    order = np.argsort(ids, kind="stable")
    return SoftPredictionSet(ids[order], probs[order])


def soft_predictions(model: MlpModel, x) -> SoftPredictionSet:
    """Predictions exactly as they would read back from an exported file."""
    _, probs = forward(model, x)
    return parse_predictions(format_predictions(SoftPredictionSet(np.arange(len(probs)), probs)))


def export_predictions(model: MlpModel, target_inputs, path) -> SoftPredictionSet:
    _, probs = forward(model, target_inputs)
    text = format_predictions(SoftPredictionSet(np.arange(len(probs)), probs))
    Path(path).write_text(text)
    return parse_predictions(text)


def load_predictions(path) -> SoftPredictionSet:
    return parse_predictions(Path(path).read_text())


# -- checkpoints ---------------------------------------------------------------

CHECKPOINT_MAGIC = "IPL-CHECKPOINT"
CHECKPOINT_VERSION = 1


def save_checkpoint(model: MlpModel, path, role: str) -> None:
    lines = [f"{CHECKPOINT_MAGIC} v{CHECKPOINT_VERSION} role={role}",
             "layer_dims " + " ".join(str(d) for d in model.layer_dims)]
    for i, p in enumerate(model.params()):
        kind = "W" if i % 2 == 0 else "b"
        lines.append(f"{kind}{i // 2} " + " ".join(str(s) for s in p.shape))
        lines.append(" ".join(repr(float(v)) for v in p.ravel()))
    Path(path).write_text("\n".join(lines) + "\n")


def checkpoint_role(path) -> str | None:
    """Role recorded in a checkpoint header, or ``None`` if not a checkpoint."""
    try:
        with open(path, "r", errors="replace") as fh:
            first = fh.readline().split()
    except (OSError, UnicodeDecodeError):
        return None
    if not first or first[0] != CHECKPOINT_MAGIC:
        return None
    roles = [t.split("=", 1)[1] for t in first[2:] if t.startswith("role=")]
    return roles[0] if roles else ""


def load_checkpoint(path) -> tuple[MlpModel, str]:
    lines = Path(path).read_text().splitlines()
    head = lines[0].split()
    if head[:2] != [CHECKPOINT_MAGIC, f"v{CHECKPOINT_VERSION}"]:
        raise ValueError(f"{path}: not a v{CHECKPOINT_VERSION} checkpoint")
    role = checkpoint_role(path)
    dims = [int(v) for v in lines[1].split()[1:]]
    weights, biases = [], []
    for j in range(2 * (len(dims) - 1)):
        shape = tuple(int(v) for v in lines[2 + 2 * j].split()[1:])
        arr = np.array([float(v) for v in lines[3 + 2 * j].split()]).reshape(shape)
        (weights if j % 2 == 0 else biases).append(arr)
    return MlpModel(dims, weights, biases), role


# -- confidence pools --------------------------------------------------------

class ConfidencePools:
    """Disjoint high (H) / low (L) confidence pools over ``n`` target samples.

    Samples only ever move from L to H. Each H sample carries the soft
    pseudo-label it was promoted with and the round of promotion.
    """

    def __init__(self, n: int, K: int):
        self.n, self.K = n, K
        self.in_high = np.zeros(n, dtype=bool)
        self.soft = np.zeros((n, K))
        self.promoted_round = np.full(n, -1, dtype=np.int64)
        self.round_promoted: list[int] = []

    @property
    def H(self) -> np.ndarray:
        return np.flatnonzero(self.in_high)

    @property
    def L(self) -> np.ndarray:
        return np.flatnonzero(~self.in_high)

    @property
    def hard(self) -> np.ndarray:
        """Hard pseudo-labels (meaningful for H only)."""
        return np.argmax(self.soft, axis=1)

    @property
    def low_fraction(self) -> float:
        return float((~self.in_high).sum()) / self.n

    def promote(self, indices, soft_rows, round_: int) -> int:
        idx = np.asarray(indices, dtype=np.int64)
        if idx.size and np.any(self.in_high[idx]):
            raise ValueError("cannot promote samples that are already high-confidence")
        if len(np.unique(idx)) != idx.size:
            raise ValueError("duplicate indices in promotion")
        rows = np.asarray(soft_rows, dtype=np.float64).reshape(idx.size, self.K)
        self.in_high[idx] = True
        self.soft[idx] = rows
        self.promoted_round[idx] = round_
        self.round_promoted.append(int(idx.size))
        return int(idx.size)

    def check(self) -> None:
        h, l = set(self.H.tolist()), set(self.L.tolist())
        assert not (h & l) and len(h | l) == self.n, "pool partition broken"
        assert np.all((self.promoted_round >= 0) == self.in_high), "promotion log out of sync"


# -- training loops ------------------------------------------------------------

def _rng(hp: Hyperparams, *tag: int) -> np.random.Generator:
    return np.random.default_rng([hp.seed, *tag])


def _stream(hp: Hyperparams, *tag: int) -> int:
    """A derived integer seed for a named phase."""
    return int(_rng(hp, *tag).integers(2 ** 31))


def _optimizer(model: MlpModel, hp: Hyperparams) -> OptimizerState:
    return OptimizerState.for_model(model, hp.lr, hp.momentum, hp.weight_decay)


def _fit(model: MlpModel, n: int, hp: Hyperparams, epochs: int, step, tag: tuple, label: str):
    """Minibatch SGD. ``step(model, idx, rng)`` returns a LossValue with parameter grads.

    Returns per-epoch mean loss and mean parts.
    """
    opt = _optimizer(model, hp)
    batch_seed = _stream(hp, *tag, 0)
    rng = _rng(hp, *tag, 1)
    history = []
    for epoch in range(epochs):
        total, parts, count = 0.0, {}, 0
        for idx in iterate_batches(n, hp.batch_size, batch_seed, epoch):
            loss = step(model, idx, rng)
            if not np.isfinite(loss.value):
                raise DivergenceError(f"{label}: loss became {loss.value} at epoch {epoch}")
            sgd_step(model, loss.grad, opt)
            total += loss.value * idx.size
            for k, v in loss.parts.items():
                parts[k] = parts.get(k, 0.0) + v * idx.size
            count += idx.size
        history.append((total / count, {k: v / count for k, v in parts.items()}))
    return history


# phase tags keep random streams independent
_SOURCE, _CRUDE, _STUDENT, _ROUND, _FINETUNE = 1, 2, 3, 4, 5


def train_source(data: LabeledSet, K: int, hp: Hyperparams, history: list | None = None) -> MlpModel:
    """Source classifier trained with label-smoothed cross-entropy."""
    y = np.asarray(data.labels)
    if np.any(y < 0) or np.any(y >= K):
        raise ValueError(f"source labels must lie in [0, {K})")
    x = data.features
    model = init_mlp(hp.layer_dims(x.shape[1], K), _stream(hp, _SOURCE))
    h = _fit(model, len(x), hp, hp.epochs_source,
             lambda m, idx, rng: source_objective(m, x[idx], y[idx], hp.gamma),
             (_SOURCE,), "source")
    if history is not None:
        history.extend(h)
    return model


def _eta(rng: np.random.Generator, hp: Hyperparams) -> float:
    return float(rng.beta(hp.omega, hp.omega))


def _l_t_step(x: np.ndarray, teacher: np.ndarray, hp: Hyperparams, weights: LossWeights):
    def step(model, idx, rng):
        eta = _eta(rng, hp)
        perm = rng.permutation(idx.size)
        return total_loss(model, x[idx], teacher[idx], eta, weights=weights, perm=perm)
    return step


def train_crude_target(target_inputs, src_probs, hp: Hyperparams, history: list | None = None,
                       mix_weight: float = 1.0) -> MlpModel:
    """Crude target model distilled from source predictions with KD + mixup on all samples."""
    x = np.asarray(target_inputs, dtype=np.float64)
    t = np.asarray(src_probs, dtype=np.float64)
    if t.shape[0] != x.shape[0]:
        raise ValueError("source predictions must cover every target sample")
    model = init_mlp(hp.layer_dims(x.shape[1], t.shape[1]), _stream(hp, _CRUDE))
    w = LossWeights(kd=1.0, im=0.0, mix=mix_weight)
    h = _fit(model, len(x), hp, hp.epochs_crude, _l_t_step(x, t, hp, w), (_CRUDE,), "crude")
    if history is not None:
        history.extend(h)
    return model


def train_student(target_inputs, src_probs, hp: Hyperparams, history: list | None = None) -> MlpModel:
    """Student distilled with KL alone; its bottleneck features drive the warm-up prototypes."""
    x = np.asarray(target_inputs, dtype=np.float64)
    t = np.asarray(src_probs, dtype=np.float64)
    model = init_mlp(hp.layer_dims(x.shape[1], t.shape[1]), _stream(hp, _STUDENT))
    h = _fit(model, len(x), hp, hp.epochs_student,
             lambda m, idx, rng: distill_objective(m, x[idx], t[idx]),
             (_STUDENT,), "student")
    if history is not None:
        history.extend(h)
    return model


def train_on_high(phi0: MlpModel, x: np.ndarray, pools: ConfidencePools, hp: Hyperparams,
                  round_: int, epochs: int) -> tuple[MlpModel, dict]:
    """Fresh copy of the crude model trained on H with the full objective."""
    model = phi0.copy()
    h_idx = pools.H
    xh, th = x[h_idx], pools.soft[h_idx]
    hist = _fit(model, len(h_idx), hp, epochs, _l_t_step(xh, th, hp, hp.weights),
                (_ROUND, round_), f"round {round_}")
    return model, (hist[-1][1] if hist else {})


def finetune_im(model: MlpModel, x: np.ndarray, hp: Hyperparams, epochs: int) -> MlpModel:
    _fit(model, len(x), hp, epochs, lambda m, idx, rng: im_objective(m, x[idx]),
         (_FINETUNE,), "finetune")
    return model


# -- evaluation ----------------------------------------------------------------

@dataclass
class Evaluation:
    accuracy: float
    per_class: np.ndarray   # NaN for classes absent from the labels

    def __repr__(self):
        return f"Evaluation(accuracy={self.accuracy:.4f})"


def accuracy_from_predictions(pred, labels, K: int) -> Evaluation:
    pred, labels = np.asarray(pred), np.asarray(labels)
    if pred.shape != labels.shape:
        raise ValueError("predictions and labels differ in length")
    correct = pred == labels
    per = np.full(K, np.nan)
    for k in range(K):
        m = labels == k
        if m.any():
            per[k] = correct[m].mean()
    return Evaluation(float(correct.mean()) if correct.size else float("nan"), per)


def evaluate(model: MlpModel, features, labels) -> Evaluation:
    _, probs = forward(model, features)
    return accuracy_from_predictions(np.argmax(probs, axis=1), labels, model.n_classes)


# -- the incremental procedure -------------------------------------------------

METRIC_FIELDS = ("round", "H_size", "L_size", "H_purity", "target_acc", "L_kd", "L_im", "L_mix")


@dataclass
class RoundRecord:
    round: int
    H_size: int
    L_size: int
    H_purity: float
    target_acc: float
    L_kd: float
    L_im: float
    L_mix: float
    promoted: int = 0

    def as_line(self) -> str:
        vals = [getattr(self, f) for f in METRIC_FIELDS]
        return ",".join(str(v) if isinstance(v, (int, np.integer)) else f"{v:.9g}" for v in vals)


@dataclass
class RunState:
    x: np.ndarray
    src: SoftPredictionSet
    phi0: MlpModel
    phi0_digest: str
    model: MlpModel
    pools: ConfidencePools
    round: int = 0
    stalls: int = 0
    history: list = field(default_factory=list)
    eval_labels: np.ndarray | None = None


@dataclass
class RunResult:
    model: MlpModel
    phi0: MlpModel
    pools: ConfidencePools
    history: list
    status: str
    rounds: int
    crude_acc: float
    final_acc: float
    src_acc: float
    final_eval: Evaluation | None = None

    @property
    def improvement(self) -> float:
        return self.final_acc - self.crude_acc


def _record(state: RunState, parts: dict, promoted: int) -> RoundRecord:
    pools = state.pools
    h = pools.H
    purity = acc = float("nan")
    if state.eval_labels is not None:
        y = state.eval_labels
        if h.size:
            purity = float(np.mean(pools.hard[h] == y[h]))
        acc = evaluate(state.model, state.x, y).accuracy
    rec = RoundRecord(state.round, int(h.size), int(pools.n - h.size), purity, acc,
                      parts.get("kd", 0.0), parts.get("im", 0.0), parts.get("mix", 0.0), promoted)
    state.history.append(rec)
    log.info("round %d: |H|=%d |L|=%d purity=%.4f acc=%.4f", rec.round, rec.H_size,
             rec.L_size, rec.H_purity, rec.target_acc)
    return rec


def warmup_selection(features, student_probs, src: SoftPredictionSet, hp: Hyperparams):
    """Gate every sample with student features; returns the decision and its inputs."""
    protos = selector.prototype_labels(features, student_probs)
    hard_src = src.hard
    sim = selector.intra_class_similarity(features, hard_src, hp.delta, src.K)
    decision = selector.warmup_gate(src.probs, hard_src, protos.labels_refined, protos.margins,
                                    sim.ts, hp.alpha, hp.beta, hp.theta)
    return decision, protos, sim


def warmup(state: RunState, student: MlpModel, hp: Hyperparams) -> RunState:
    """Warm-up selection from source predictions, then train the first model on H."""
    pools = state.pools
    if pools.in_high.any():
        raise ValueError("warm-up expects an empty high-confidence pool")
    feats, sprobs = forward(student, state.x)
    decision, _, _ = warmup_selection(feats, sprobs, state.src, hp)
    chosen = np.flatnonzero(decision.promote)
    if chosen.size == 0:
        raise SelectionError("warm-up selected no samples: thresholds too strict")
    pools.promote(chosen, state.src.probs[chosen], 1)
    state.round = 1
    state.model, parts = train_on_high(state.phi0, state.x, pools, hp, 1, hp.epochs_warm)
    _record(state, parts, chosen.size)
    return state


def incremental_selection(model: MlpModel, x: np.ndarray, pools: ConfidencePools,
                          hp: Hyperparams, round_: int):
    feats, probs = forward(model, x)
    hard = np.argmax(probs, axis=1)
    protos = selector.prototype_labels(feats, probs)
    sim = selector.intra_class_similarity(feats, hard, hp.delta, pools.K)
    decision = selector.incremental_gate(hard, protos.labels_refined, protos.margins, sim.ts,
                                         hp.beta, hp.theta, round_, hp.theta_step, hp.theta_cap)
    # only low-confidence samples are candidates
    decision.reason[pools.in_high] = selector.Reason.ALREADY_HIGH
    decision.promote &= ~pools.in_high
    return decision, probs


def incremental_round(state: RunState, hp: Hyperparams) -> RunState:
    """Relabel L with the current model, promote agreeing samples, retrain from the crude model."""
    if state.round < 1:
        raise ValueError("incremental rounds start after warm-up")
    r = state.round + 1
    decision, probs = incremental_selection(state.model, state.x, state.pools, hp, r)
    chosen = np.flatnonzero(decision.promote)
    # promoted samples take the current model's prediction as their pseudo-label
    state.pools.promote(chosen, probs[chosen], r)
    state.stalls = 0 if chosen.size else state.stalls + 1
    state.round = r
    state.model, parts = train_on_high(state.phi0, state.x, state.pools, hp, r, hp.epochs_round)
    _record(state, parts, chosen.size)
    return state


def run_full(target: TargetSet | np.ndarray, src: SoftPredictionSet, hp: Hyperparams,
             callback=None) -> RunResult:
    """Crude model, student, warm-up, incremental rounds, final fine-tune.

    ``target`` supplies the inputs; if it is a :class:`TargetSet` with
    evaluation labels those are used only to fill in accuracy metrics.
    ``callback(state)`` is invoked after warm-up and after every round.
    """
    if isinstance(target, TargetSet):
        x = np.asarray(target.features, dtype=np.float64)
        labels = target.evaluation_labels() if target.has_labels else None
    else:
        x, labels = np.asarray(target, dtype=np.float64), None
    if len(src) != len(x):
        raise ValueError(f"{len(src)} predictions for {len(x)} target samples")
    if not np.array_equal(src.ids, np.arange(len(x))):
        raise ValueError("prediction ids must be 0..n-1")

    phi0 = train_crude_target(x, src.probs, hp)
    student = train_student(x, src.probs, hp)
    state = RunState(x, src, phi0, phi0.digest(), phi0, ConfidencePools(len(x), src.K),
                     eval_labels=labels)
    warmup(state, student, hp)
    if callback:
        callback(state)

    status = "converged"
    while state.pools.low_fraction >= hp.lambda_stop:
        if state.round >= hp.max_rounds:
            status = "max_rounds"
            break
        incremental_round(state, hp)
        if callback:
            callback(state)
        if state.stalls >= hp.stall_limit:
            status = "stalled"
            break
    if state.phi0.digest() != state.phi0_digest:
        raise RuntimeError("crude model was modified during adaptation")

    if hp.finetune == "im" and hp.w_im:
        finetune_im(state.model, x, hp, hp.epochs_finetune)
    elif hp.finetune == "full":
        state.model, _ = train_on_high(state.model, x, state.pools, hp, state.round + 1,
                                       hp.epochs_finetune)

    crude_acc = final_acc = src_acc = float("nan")
    final_eval = None
    if labels is not None:
        crude_acc = evaluate(phi0, x, labels).accuracy
        final_eval = evaluate(state.model, x, labels)
        final_acc = final_eval.accuracy
        src_acc = float(np.mean(src.hard == labels))
    return RunResult(state.model, phi0, state.pools, state.history, status, state.round,
                     crude_acc, final_acc, src_acc, final_eval)


# -- metrics file ----------------------------------------------------------------

def format_metrics(history: list[RoundRecord]) -> str:
    return ",".join(METRIC_FIELDS) + "\n" + "".join(r.as_line() + "\n" for r in history)


def write_metrics(history: list[RoundRecord], path) -> None:
    Path(path).write_text(format_metrics(history))


def read_metrics(path) -> list[dict]:
    lines = Path(path).read_text().splitlines()
    keys = lines[0].split(",")
    out = []
    for ln in lines[1:]:
        vals = ln.split(",")
        out.append({k: (int(v) if k in ("round", "H_size", "L_size") else float(v))
                    for k, v in zip(keys, vals)})
    return out


def hyperparams_dict(hp: Hyperparams) -> dict:
    return asdict(hp)
