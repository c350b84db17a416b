"""
Beamsplitter decomposition
==========================

Factor a Haar-random unitary into two-channel layers and rebuild it.
"""

import numpy as np

from immoptics import decompose, haar_random_unitary, reconstruct

U = haar_random_unitary(5, seed=11)
d = decompose(U)
print(len(d.layers), "layers for m = 5")
for layer in d.layers[:4]:
    print(f"  channels {layer.i + 1},{layer.j + 1}  theta={layer.theta:.4f}  phi={layer.phi:.4f}")
print("final phases:", np.round(d.phases, 4))
print("reconstruction error:", np.linalg.norm(reconstruct(d) - U))

# the 2x2 block is the only nontrivial part of a layer
print(np.round(d.layers[0].block(), 4))
