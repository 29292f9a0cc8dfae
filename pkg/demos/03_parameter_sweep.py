"""Sweep the softmax threshold alpha and the stop fraction lambda.

Run from the repository root:  python demos/03_parameter_sweep.py
"""

from incremental_pl import make_domain_pair, profile, run_full, soft_predictions, train_source

pair = make_domain_pair(seed=2)
base = profile("office", seed=2)
preds = soft_predictions(train_source(pair.source, pair.K, base), pair.target.features)

print(" alpha  |H| warm  purity  rounds  final")
for alpha in (0.5, 0.7, 0.8, 0.9, 0.99):
    res = run_full(pair.target, preds, base.with_(alpha=alpha))
    first = res.history[0]
    print(f"{alpha:6.2f}  {first.H_size:8d}  {first.H_purity:6.3f}  {res.rounds:6d}  {res.final_acc:.3f}")

# lambda = 1 stops right after warm-up
print("\nlambda  rounds  status      final")
for lam in (0.05, 0.1, 0.3, 1.0):
    res = run_full(pair.target, preds, base.with_(lambda_stop=lam))
    print(f"{lam:6.2f}  {res.rounds:6d}  {res.status:10s}  {res.final_acc:.3f}")
