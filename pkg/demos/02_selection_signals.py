"""Look at the three signals that decide which samples are trusted first.

Run from the repository root:  python demos/02_selection_signals.py
"""

import numpy as np

from incremental_pl import make_domain_pair, profile, soft_predictions, train_source
from incremental_pl import selector
from incremental_pl.nn import forward
from incremental_pl.pipeline import train_student, warmup_selection

pair = make_domain_pair(seed=1)
hp = profile("office", seed=1)
preds = soft_predictions(train_source(pair.source, pair.K, hp), pair.target.features)
y = pair.target.evaluation_labels()
correct = preds.hard == y
print("source pseudo-label accuracy:", round(correct.mean(), 3))

# Student features give the prototypes.
student = train_student(pair.target.features, preds.probs, hp)
feats, sprobs = forward(student, pair.target.features)
decision, protos, sim = warmup_selection(feats, sprobs, preds, hp)

# Each signal on its own separates right from wrong pseudo-labels to some degree.
conf = preds.probs.max(axis=1)
agree = protos.labels_refined == preds.hard
for name, v in [("max prob", conf), ("margin d_t", np.minimum(protos.margins, 10)), ("ts", sim.ts)]:
    print(f"{name:10s}  mean if right {v[correct].mean():.3f}   mean if wrong {v[~correct].mean():.3f}")
print("prototype agrees with source label:", round(agree.mean(), 3),
      " accuracy where it agrees:", round(correct[agree].mean(), 3))

# The combined gate.
chosen = decision.promote
print(f"warm-up selects {chosen.sum()} of {len(y)}; accuracy inside: {correct[chosen].mean():.3f}")
for r in selector.Reason:
    print(f"  {r.name:15s} {np.sum(decision.reason == r)}")

# Later rounds demand more similarity.
print("theta per round:", [round(selector.theta_for_round(hp.theta, r), 2) for r in range(1, 15, 2)])
