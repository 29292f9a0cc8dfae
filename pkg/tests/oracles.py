"""Independent reference implementations for the tests.

Plain Python loops over lists and ``math``; nothing here calls into the
package's vectorised code.
"""

import math

import numpy as np

FLOOR = 1e-12


def softmax_row(z):
    m = max(z)
    e = [math.exp(v - m) for v in z]
    s = sum(e)
    return [v / s for v in e]


def mlp_forward(layer_dims, weights, biases, x_row):
    """Returns (features, probs) for one sample."""
    a = list(x_row)
    n = len(weights)
    feats = a
    for i in range(n):
        if i == n - 1:
            feats = a
        w, b = weights[i], biases[i]
        z = [b[j] + sum(a[k] * w[k][j] for k in range(len(a))) for j in range(len(b))]
        a = [math.tanh(v) for v in z] if i < n - 2 else z
    return feats, softmax_row(a)


def naive_ce(probs, q):
    n = len(probs)
    return sum(-sum(qk * math.log(max(pk, FLOOR)) for pk, qk in zip(p, qq))
               for p, qq in zip(probs, q)) / n


def naive_kl(teacher, student):
    total = 0.0
    for t, s in zip(teacher, student):
        for tk, sk in zip(t, s):
            if tk > 0:
                total += tk * (math.log(max(tk, FLOOR)) - math.log(max(sk, FLOOR)))
    return total / len(teacher)


def naive_entropy(probs):
    total = 0.0
    for p in probs:
        total += -sum(pk * math.log(max(pk, FLOOR)) for pk in p if pk > 0)
    return total / len(probs)


def naive_diversity(probs):
    n, K = len(probs), len(probs[0])
    mean = [sum(p[k] for p in probs) / n for k in range(K)]
    return sum(m * math.log(max(m, FLOOR)) for m in mean if m > 0)


def naive_weighted_centroids(features, probs):
    n, d, K = len(features), len(features[0]), len(probs[0])
    out = []
    for k in range(K):
        num = [0.0] * d
        den = 0.0
        for i in range(n):
            den += probs[i][k]
            for j in range(d):
                num[j] += probs[i][k] * features[i][j]
        out.append([v / den for v in num])
    return out


def _norm(v):
    return math.sqrt(sum(x * x for x in v))


def cos_dist(a, b):
    na, nb = _norm(a), _norm(b)
    if na == 0 or nb == 0:
        return 1.0
    c = sum(x * y for x, y in zip(a, b)) / (na * nb)
    return min(max(1.0 - c, 0.0), 2.0)


def naive_assign(features, centroids):
    labels, dists = [], []
    for g in features:
        row = [cos_dist(g, c) for c in centroids]
        best = 0
        for k in range(1, len(row)):
            if row[k] < row[best]:
                best = k
        labels.append(best)
        dists.append(row)
    return labels, dists


def naive_refine(features, labels, centroids_c0):
    K, d = len(centroids_c0), len(features[0])
    c1 = []
    for k in range(K):
        members = [g for g, y in zip(features, labels) if y == k]
        if members:
            c1.append([sum(m[j] for m in members) / len(members) for j in range(d)])
        else:
            c1.append(list(centroids_c0[k]))
    new_labels, dists = naive_assign(features, c1)
    return c1, new_labels, dists


def naive_margin(row, cap=1e12):
    s = sorted(row)
    if s[0] == 0:
        return cap if s[1] > 0 else 0.0
    return min((s[1] - s[0]) / s[0], cap)


def naive_ts(features, labels, delta):
    n = len(features)
    ts = []
    for i in range(n):
        members = [j for j in range(n) if labels[j] == labels[i]]
        hits = 0
        for j in members:
            if i == j:
                s = 0.0 if _norm(features[i]) == 0 else 1.0
            else:
                a, b = features[i], features[j]
                na, nb = _norm(a), _norm(b)
                s = 0.0 if na == 0 or nb == 0 else sum(x * y for x, y in zip(a, b)) / (na * nb)
            if s > delta:
                hits += 1
        ts.append(hits / len(members))
    return ts


def central_difference(f, params, step=1e-5):
    """Numerical gradient of scalar ``f()`` w.r.t. every entry of ``params`` (modified in place)."""
    grads = []
    for p in params:
        g = np.zeros_like(p)
        it = np.nditer(p, flags=["multi_index"])
        for _ in it:
            idx = it.multi_index
            old = p[idx]
            p[idx] = old + step
            fp = f()
            p[idx] = old - step
            fm = f()
            p[idx] = old
            g[idx] = (fp - fm) / (2 * step)
        grads.append(g)
    return grads


def relative_error(analytic, numeric):
    a = np.concatenate([g.ravel() for g in analytic])
    b = np.concatenate([g.ravel() for g in numeric])
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(a), np.linalg.norm(b), 1e-12))
