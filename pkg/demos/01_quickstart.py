"""Adapt a classifier to a shifted domain using only its soft predictions.

Run from the repository root:  python demos/01_quickstart.py
"""

import numpy as np

from incremental_pl import make_domain_pair, profile, run_full, soft_predictions, train_source
from incremental_pl.pipeline import evaluate

# A labeled source domain and a rotated, translated, noisier target domain.
pair = make_domain_pair(K=5, dim=16, seed=0)
print(pair.target)

hp = profile("office", seed=0)
source_model = train_source(pair.source, pair.K, hp)
y_t = pair.target.evaluation_labels()
print("source model on source:", round(evaluate(source_model, pair.source.features, pair.source.labels).accuracy, 3))
print("source model on target:", round(evaluate(source_model, pair.target.features, y_t).accuracy, 3))

# Only these probability rows cross over to the adaptation side.
preds = soft_predictions(source_model, pair.target.features)
print("predictions:", preds.probs.shape, "rows sum to", np.unique(preds.probs.sum(axis=1).round(6)))

result = run_full(pair.target, preds, hp)

# round-by-round growth of the high-confidence pool
for rec in result.history:
    print(f"round {rec.round}: |H|={rec.H_size:4d}  purity={rec.H_purity:.3f}  acc={rec.target_acc:.3f}")

print("status:", result.status)
print(f"crude {result.crude_acc:.3f} -> final {result.final_acc:.3f}")
print("per-class final accuracy:", np.round(result.final_eval.per_class, 3))
