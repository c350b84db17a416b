"""
Immanants and characters
========================

Character tables of small symmetric groups, and the immanants they define.
"""

import numpy as np

from immoptics import character_table, determinant, immanant, permanent

# rows are irreps, columns are cycle types from the identity class to the n-cycle
irreps, classes, table = character_table(4)
print("classes:", [list(c) for c in classes])
for lam, row in zip(irreps, table):
    print(f"{str(lam):>10}", row)

# the trivial irrep gives the permanent, the sign irrep the determinant
rng = np.random.default_rng(1)
M = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
print("per  naive vs Ryser:", immanant(M, [4]), permanent(M))
print("det  naive vs LU:   ", immanant(M, [1, 1, 1, 1]), determinant(M))

# every immanant other than the permanent vanishes on the all-ones matrix
ones = np.ones((4, 4))
for lam in irreps:
    print(lam, immanant(ones, lam).real)
