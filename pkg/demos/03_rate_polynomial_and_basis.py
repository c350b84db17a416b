"""
Rates as polynomials in the overlap factor
==========================================

With equally spaced delays every overlap is a power of G = exp(-sigma0^2 tau^2),
so each rate is a polynomial in G. The same overlaps can be regrouped over a
few row permutations whose immanants span all the others.
"""

import numpy as np

from immoptics import (
    Permutation,
    immanant_relations,
    independent_coefficients,
    project_polynomial_onto_basis,
    rate_direct,
    rate_polynomial,
)

rng = np.random.default_rng(7)
U = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))

poly = rate_polynomial(U, [2, 2])
print("populated powers of G:", poly.populated_exponents())
print("sum of coefficients (rate at tau=0):", poly.evaluate(1.0))
for tau in (0.4, 1.1):
    print(tau, poly.at(tau), rate_direct(U, [2, 2], tau))

# 6 row-permuted [2,1] immanants, only 4 independent
print("relations among [2,1] immanants:", len(immanant_relations([2, 1])))

basis = [Permutation.identity(3)] + [Permutation.from_cycles(c, 3) for c in ("(23)", "(12)", "(123)")]
reduced = independent_coefficients(project_polynomial_onto_basis([2, 1], basis))
for (s, t), c in reduced.items():
    print(f"{str(s):>8} {str(t):>8}", np.round(np.real_if_close(c), 6) + 0.0)
