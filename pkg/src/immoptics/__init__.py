"""Matrix immanants and coincidence rates of time-bin-entangled photons.

Submodules
----------
permutations    symmetric-group elements, composition, row/column action
characters      partitions and Murnaghan-Nakayama characters
immanants       immanant, permanent (Ryser), determinant, quadratic forms
optics          Gaussian overlaps, coincidence rates, rate polynomials
interferometer  Haar unitaries, submatrices, beamsplitter decomposition
sampler         binomial sampling and confidence intervals
io              JSON matrix and decomposition files
"""

from .characters import Partition, character, character_table, dimension, partitions
from .errors import (
    BasisSpanError,
    DegenerateStateError,
    DependentBasisError,
    DimensionError,
    ImmopticsError,
    InternalConsistencyError,
    SizeLimitError,
    UnitarityError,
    UnsupportedSchemeError,
)
from .immanants import column_permuted_immanant_sum, determinant, immanant, permanent, quadratic_form
from .interferometer import BeamsplitterLayer, Decomposition, decompose, haar_random_unitary, reconstruct, submatrix
from .optics import (
    DelayScheme,
    OverlapCoefficient,
    RatePolynomial,
    SpectralProfile,
    delay_vector,
    immanant_relations,
    independent_coefficients,
    max_degree,
    normalized_rate,
    overlap_coefficient,
    project_onto_basis,
    project_polynomial_onto_basis,
    rate_direct,
    rate_polynomial,
    rate_via_immanants,
    state_norm,
)
from .permutations import Permutation, all_permutations, compose, cycle_type, parity, permute_rows
from .sampler import SamplingReport, coverage, estimate_rate, required_trials, simulate

__version__ = "0.1.0"
