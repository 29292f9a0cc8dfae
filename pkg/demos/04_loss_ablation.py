"""Switch the adaptation loss terms on and off over a few seeds.

Run from the repository root:  python demos/04_loss_ablation.py
"""

import numpy as np

from incremental_pl import make_domain_pair, profile, run_full, soft_predictions, train_source
from incremental_pl.pipeline import ABLATIONS

seeds = [0, 1, 2]
scores = {name: [] for name in ABLATIONS}
for seed in seeds:
    pair = make_domain_pair(seed=seed)
    hp = profile("office", seed=seed)
    preds = soft_predictions(train_source(pair.source, pair.K, hp), pair.target.features)
    for name, w in ABLATIONS.items():
        res = run_full(pair.target, preds, hp.with_(w_kd=w.kd, w_im=w.im, w_mix=w.mix))
        scores[name].append(res.final_acc)

for name, accs in scores.items():
    print(f"{name:18s} " + "  ".join(f"{a:.3f}" for a in accs) + f"   mean {np.mean(accs):.3f}")
