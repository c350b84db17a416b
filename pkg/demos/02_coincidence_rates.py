"""
Coincidence rates vs delay
==========================

Rates for a balanced beamsplitter and for a random 3x3 block of a larger
interferometer, swept over the delay unit tau.
"""

import numpy as np

from immoptics import haar_random_unitary, normalized_rate, rate_direct, state_norm, submatrix

bs = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
taus = np.linspace(0, 3, 13)

# symmetric input: the coincidence dip is complete at every delay
print("tau   [2]      [1,1] normalized")
for tau in taus:
    sym = rate_direct(bs, [2], tau)
    anti = normalized_rate(bs, [1, 1], tau) if tau > 0 else float("nan")
    print(f"{tau:4.2f}  {sym:.1e}  {anti:.6f}")

# three photons into channels 1,2,3 of a 6-mode Haar unitary, detected at 2,4,6
U = haar_random_unitary(6, seed=3)
V = submatrix(U, [0, 1, 2], [1, 3, 5])
for lam in ([3], [2, 1], [1, 1, 1]):
    raw = [rate_direct(V, lam, t) for t in taus]
    print(lam, np.round(raw, 5))

# the state norm interpolates between 0 (or n!) at tau=0 and 1 at large tau
for lam in ([3], [2, 1], [1, 1, 1]):
    print(lam, [round(state_norm(lam, t), 4) for t in (0.0, 0.5, 1.0, 4.0)])
