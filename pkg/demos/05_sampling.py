"""
Estimating a rate by repeated trials
====================================

Simulate L coincidence trials at the normalized rate and report l/L with its
binomial interval.
"""

import numpy as np

from immoptics import coverage, estimate_rate, haar_random_unitary, normalized_rate, required_trials

V = haar_random_unitary(3, seed=5)
p = normalized_rate(V, [2, 1], 0.8)
print("exact normalized rate:", p)

L = required_trials(p, 0.005)
print("trials for +/-0.005:", L)
rep = estimate_rate(V, [2, 1], 0.8, trials=L, seed=42)
print(f"estimate {rep.estimate:.4f} in [{rep.low:.4f}, {rep.high:.4f}]")

# how often the 95% interval actually contains p
for q in (0.1, 0.3, 0.5):
    print(q, coverage(q, 1000, 1000, seed=2024))

# the Wald interval collapses when no events are seen; the Wilson interval does not
rep0 = estimate_rate(np.array([[1, 1], [1, -1]]) / np.sqrt(2), [2], 1.0, trials=200, seed=0)
print(rep0.estimate, rep0.half_width)
