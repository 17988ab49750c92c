"""Straight-line recomputation of the hand-derived test fixtures."""

import math
import sys

failures = []


def check(name, got, want, tol):
    ok = abs(got - want) <= tol
    print(f"{'ok  ' if ok else 'FAIL'} {name}: {got:.7f} (want {want:.7f})")
    if not ok:
        failures.append(name)


# MetaMax trace: K=3, beta=3, a=[3,2,1], class 1 model rho=0 kappa=1 lambda=2,
# no translation. Rank 1 is the argmax (skipped), rank 3 has weight 0.
beta = 3
a0, a1, a2 = 3.0, 2.0, 1.0
w_rank2 = (beta - 2) / beta
surv1 = math.exp(-((a1 / 2.0) ** 1.0))
m1 = 1.0 - w_rank2 * surv1
m0, m2 = 1.0, 1.0
r0, r1, r2 = a0 * m0, a1 * m1, a2 * m2
aK = (a0 - a0 * m0) + (a1 - a1 * m1) + (a2 - a2 * m2)
z = math.exp(r0) + math.exp(r1) + math.exp(r2) + math.exp(aK)
check("trace m_1", m1, 0.877374, 1e-6)
check("trace a_3", aK, 0.245252, 1e-6)
for name, v, want in [("p0", r0, 0.6726), ("p1", r1, 0.1936), ("p2", r2, 0.0910), ("p3", aK, 0.0428)]:
    check("trace " + name, math.exp(v) / z, want, 1e-4)

# K=2, beta=2, a=[3,1]: no ranks revised, softmax over [3, 1, 0].
z2 = math.exp(3) + math.exp(1) + 1
check("k2 p0", math.exp(3) / z2, 0.8438, 1e-4)
check("k2 p2", 1 / z2, 0.0420, 1e-4)

# OpenMax MAV example: rows (0,0), (0,4), (3,0).
mav = (1.0, 4.0 / 3.0)
dists = [math.hypot(x - mav[0], y - mav[1]) for x, y in [(0, 0), (0, 4), (3, 0)]]
check("mav d0", dists[0], 5 / 3, 1e-12)
check("mav d1", dists[1], math.sqrt(73) / 3, 1e-12)
check("mav d2", dists[2], math.sqrt(52) / 3, 1e-12)

# Confusion toy: preds [0,0,1,2,U], truths [0,1,1,2,U].
preds = [0, 0, 1, 2, 3]
truth = [0, 1, 1, 2, 3]
f1s = []
for c in range(4):
    tp = sum(1 for p, t in zip(preds, truth) if p == c and t == c)
    fp = sum(1 for p, t in zip(preds, truth) if p == c and t != c)
    fn = sum(1 for p, t in zip(preds, truth) if p != c and t == c)
    f1s.append(2 * tp / (2 * tp + fp + fn))
for c, want in enumerate([2 / 3, 2 / 3, 1, 1]):
    check(f"f1 class {c}", f1s[c], want, 1e-12)
check("macro f1", sum(f1s) / 4, 0.8333, 1e-4)

# AUROC example by pair counting.
scores = [0.1, 0.4, 0.35, 0.8]
pos = [False, False, True, True]
pairs = [(s, t) for s, p in zip(scores, pos) if p for t, q in zip(scores, pos) if not q]
check("auroc", sum(1.0 if s > t else 0.5 if s == t else 0.0 for s, t in pairs) / len(pairs), 0.75, 0)

# Activation-distance correlation on rows (0,0), (1,1), (2,2), probe column 1.
xs = [0.0, 1.0, 2.0]
ds = [math.hypot(v - 1.0, v - 1.0) for v in xs]
mx, md = sum(xs) / 3, sum(ds) / 3
cov = sum((x - mx) * (d - md) for x, d in zip(xs, ds))
check("correlation", cov / math.sqrt(sum((x - mx) ** 2 for x in xs) * sum((d - md) ** 2 for d in ds)), 0.0, 1e-12)

sys.exit(1 if failures else 0)
