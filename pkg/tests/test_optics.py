import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from immoptics.characters import character, partitions
from immoptics.errors import (
    BasisSpanError,
    DegenerateStateError,
    DependentBasisError,
    DimensionError,
    InternalConsistencyError,
    SizeLimitError,
    UnsupportedSchemeError,
)
from immoptics.characters import hook_length_dimension
from immoptics.immanants import immanant, permanent, quadratic_form
from immoptics.optics import (
    DelayScheme,
    RateClampWarning,
    SpectralProfile,
    _finalize_rate,
    coefficient_maps_by_exponent,
    delay_vector,
    exponent_matrix,
    immanant_coefficient_map,
    immanant_relations,
    independent_coefficients,
    max_degree,
    normalized_rate,
    overlap_coefficient,
    overlap_matrix,
    overlap_quadrature,
    project_onto_basis,
    project_polynomial_onto_basis,
    rate_direct,
    rate_polynomial,
    rate_quadruple_sum,
    rate_via_immanants,
    state_norm,
)
from immoptics.interferometer import haar_random_unitary
from immoptics.permutations import Permutation, all_permutations, permute_rows

from conftest import random_complex

P = Permutation.from_cycles
BS = np.array([[1, 1], [1, -1]]) / np.sqrt(2)


def close(a, b, scale, rtol=1e-10):
    return abs(a - b) <= rtol * max(abs(a), abs(b), scale)


def far_field_rate(U, lam):
    """Rate with all pairs decohered: (1/n!) sum_p |imm(permute_rows(U, p))|^2."""
    n = U.shape[0]
    return sum(abs(immanant(permute_rows(U, p), lam)) ** 2 for p in all_permutations(n)) / math.factorial(n)


# -- delays and overlaps ---------------------------------------------------

def test_delay_vectors():
    np.testing.assert_allclose(delay_vector(2, 0.7).vector, [0.7, -0.7])
    np.testing.assert_allclose(delay_vector(3, 0.7).vector, [0.7, 0, -0.7])
    np.testing.assert_allclose(delay_vector(4, 0.5).vector, [1.5, 0.5, -0.5, -1.5])
    for n in range(1, 9):
        assert abs(delay_vector(n, 1.3).vector.sum()) < 1e-12
    with pytest.raises(ValueError):
        DelayScheme(2, -1.0)


@pytest.mark.parametrize("n", range(1, 9))
def test_max_degree(n):
    steps = [(n + 1 - 2 * i) ** 2 for i in range(1, n + 1)]
    expected = 2 * sum(steps) if n % 2 == 0 else sum(steps) // 2
    assert max_degree(n) == expected
    assert [max_degree(k) for k in (2, 3, 4)] == [4, 4, 40]


def test_overlap_examples():
    tau = 0.8
    for n in (2, 3, 4):
        for p in all_permutations(n)[:5]:
            c = overlap_coefficient(p, p, DelayScheme(n, tau))
            assert c.value == pytest.approx(1 / math.factorial(n)) and c.exponent == 0
    c = overlap_coefficient(Permutation.identity(2), P("(12)", 2), DelayScheme(2, tau))
    assert c.value == pytest.approx(0.5 * math.exp(-4 * tau**2)) and c.exponent == 4
    assert overlap_coefficient(Permutation.identity(4), P("(14)(23)", 4), DelayScheme(4, tau)).exponent == 40
    assert overlap_coefficient(Permutation.identity(3), P("(13)", 3), DelayScheme(3, tau)).exponent == 4
    assert overlap_coefficient(Permutation.identity(3), P("(13)", 3), [0.1, 0.2, 0.3]).exponent is None


@pytest.mark.parametrize("n", [2, 3, 4])
def test_overlap_symmetry_and_exponent_range(n):
    ex = exponent_matrix(n)
    np.testing.assert_array_equal(ex, ex.T)
    assert ex.min() == 0 and ex.max() == max_degree(n)
    A = overlap_matrix(n, DelayScheme(n, 0.9))
    np.testing.assert_allclose(A, A.T)
    np.testing.assert_allclose(A, np.exp(-(0.9**2) * ex) / math.factorial(n))
    assert np.all(np.linalg.eigvalsh(A) > -1e-12)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_overlap_quadrature(n, rng):
    perms = all_permutations(n)
    for _ in range(25):
        p1, p2 = perms[rng.integers(len(perms))], perms[rng.integers(len(perms))]
        for tau in (0.3, 1.0, 2.0):
            for profile in (SpectralProfile(), SpectralProfile(omega0=5.0, sigma0=0.7)):
                closed = overlap_coefficient(p1, p2, DelayScheme(n, tau), profile).value
                quad = overlap_quadrature(p1, p2, DelayScheme(n, tau), profile)
                assert abs(closed - quad) < 1e-8


def test_quadrature_resolution_limit():
    # 64 nodes stop resolving exp(-i a x) once a = sqrt(2) sigma0 |D| exceeds ~15
    reversal = P("(14)(23)", 4)
    e = Permutation.identity(4)
    assert abs(overlap_quadrature(e, reversal, DelayScheme(4, 1.7)) - overlap_coefficient(e, reversal, DelayScheme(4, 1.7)).value) < 1e-8
    ok = overlap_quadrature(e, reversal, DelayScheme(4, 2.5), nodes=256)
    assert abs(ok - overlap_coefficient(e, reversal, DelayScheme(4, 2.5)).value) < 1e-8


def test_damping_is_monotone():
    n = 4
    taus = np.linspace(0, 3, 31)
    values = np.array([overlap_matrix(n, DelayScheme(n, t)) for t in taus])
    assert np.all(np.diff(values, axis=0) <= 1e-15)


def test_non_integer_scheme():
    with pytest.raises(UnsupportedSchemeError):
        exponent_matrix(2, [0.0, 0.3])
    with pytest.raises(UnsupportedSchemeError):
        rate_polynomial(random_complex(2, 0), [2], [0.0, 0.3])
    assert exponent_matrix(2, [2.0, 0.0]).max() == 4


# -- rates -----------------------------------------------------------------

def test_rate_identity_permanent():
    assert rate_direct(np.eye(2), [2], 0.0) == pytest.approx(2.0)
    assert rate_quadruple_sum(np.eye(2), [2], 0.0) == pytest.approx(2.0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_rate_vanishes_at_zero_delay(n):
    U = random_complex(n, n)
    for lam in partitions(n)[1:]:
        assert abs(rate_direct(U, lam, 0.0)) < 1e-12 * far_field_rate(U, lam)
    assert rate_direct(U, [n], 0.0) == pytest.approx(math.factorial(n) * abs(permanent(U)) ** 2, rel=1e-10)


@pytest.mark.parametrize("tau", [0.0, 0.4, 1.0, 3.0])
def test_beamsplitter(tau):
    assert rate_direct(BS, [2], tau) == 0.0 or abs(rate_direct(BS, [2], tau)) < 1e-15
    assert abs(rate_quadruple_sum(BS, [2], tau)) < 1e-15
    assert normalized_rate(BS, [2], tau) < 1e-15


def test_beamsplitter_antisymmetric_far_field():
    assert rate_quadruple_sum(BS, [1, 1], 10.0) == pytest.approx(1.0, abs=1e-12)
    assert rate_direct(BS, [1, 1], 10.0) == pytest.approx(1.0, abs=1e-12)
    assert state_norm([1, 1], 10.0) == pytest.approx(1.0, abs=1e-12)
    assert normalized_rate(BS, [1, 1], 10.0) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("tau", [0.0, 0.6, 1.7])
def test_direct_matches_quadruple_sum(n, tau):
    U = random_complex(n, 10 + n)
    for lam in partitions(n):
        a, b = rate_direct(U, lam, tau), rate_quadruple_sum(U, lam, tau)
        assert close(a, b, far_field_rate(U, lam))


def test_direct_matches_quadruple_sum_arbitrary_delays():
    U = random_complex(3, 3)
    delays = [0.37, -1.1, 0.52]
    profile = SpectralProfile(omega0=2.0, sigma0=1.4)
    for lam in partitions(3):
        a = rate_direct(U, lam, delays, profile)
        b = rate_quadruple_sum(U, lam, delays, profile)
        c = rate_via_immanants(U, lam, delays, profile)
        scale = far_field_rate(U, lam)
        assert close(a, b, scale) and close(a, c, scale)


def test_via_immanants_examples():
    U3 = random_complex(3, 21)
    assert close(rate_via_immanants(U3, [2, 1], 0.7), rate_direct(U3, [2, 1], 0.7), 1.0)
    U4 = random_complex(4, 22)
    assert close(rate_via_immanants(U4, [2, 2], 1.1), rate_direct(U4, [2, 2], 1.1), 1.0)
    total = sum(immanant_coefficient_map(3, 0.7).values())
    assert rate_via_immanants(U3, [3], 0.7) == pytest.approx(abs(permanent(U3)) ** 2 * total, rel=1e-10)


def test_character_amplitudes_are_row_permuted_immanants():
    U = random_complex(3, 5)
    lam = (2, 1)
    from immoptics.optics import pair_amplitudes

    f = pair_amplitudes(U, lam)
    for k, p in enumerate(all_permutations(3)):
        assert np.isclose(f[k], immanant(permute_rows(U, p.inverse()), lam))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_far_field_limit(n):
    U = random_complex(n, 30 + n)
    for lam in partitions(n):
        assert rate_direct(U, lam, 50.0) == pytest.approx(far_field_rate(U, lam), rel=1e-10)


def test_omega0_independence():
    U = random_complex(3, 40)
    for lam in partitions(3):
        ref = rate_direct(U, lam, 0.8, SpectralProfile(0.0))
        for w0 in (5.0, 100.0):
            assert abs(rate_direct(U, lam, 0.8, SpectralProfile(w0)) - ref) <= 1e-12 * max(1, ref)
            assert abs(rate_via_immanants(U, lam, 0.8, SpectralProfile(w0)) - ref) <= 1e-12 * max(1, ref)


def test_rate_errors():
    with pytest.raises(DimensionError):
        rate_direct(np.eye(3), [2], 0.5)
    with pytest.raises(SizeLimitError):
        rate_direct(np.eye(6), [6], 0.5)
    with pytest.raises(SizeLimitError):
        rate_quadruple_sum(np.eye(4), [4], 0.5)
    with pytest.raises(DimensionError):
        rate_direct(np.eye(2), [2], [0.1, 0.2, 0.3])


def test_finalize_rate_clamp_and_errors():
    with pytest.warns(RateClampWarning):
        assert _finalize_rate(complex(-1e-14, 0), 1.0) == 0.0
    with pytest.raises(InternalConsistencyError):
        _finalize_rate(complex(-1e-6, 0), 1.0)
    with pytest.raises(InternalConsistencyError):
        _finalize_rate(complex(1.0, 1e-3), 1.0)
    assert _finalize_rate(complex(0.25, 1e-14), 1.0) == 0.25


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 4), st.integers(0, 10**6), st.floats(0, 3))
def test_rate_nonnegative(n, seed, tau):
    U = random_complex(n, seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RateClampWarning)
        for lam in partitions(n):
            assert rate_direct(U, lam, tau) >= 0.0


# -- polynomial collection ---------------------------------------------------

@pytest.mark.parametrize("n", [2, 3, 4])
def test_polynomial_structure(n):
    U = random_complex(n, 50 + n)
    for lam in partitions(n):
        poly = rate_polynomial(U, lam)
        scale = far_field_rate(U, lam)
        assert poly.max_exponent == max_degree(n)
        assert len(poly.coefficients) == max_degree(n) + 1
        if lam == (n,):
            assert poly.coefficients.sum() == pytest.approx(rate_direct(U, lam, 0.0), rel=1e-10)
        else:
            assert abs(poly.coefficients.sum()) < 1e-10 * scale
        if n % 2 == 0:
            assert all(k % 2 == 0 for k in poly.populated_exponents())
            assert np.all(poly.coefficients[1::2] == 0)
        for tau in (0.2, 0.9):
            for sigma0 in (1.0, 1.7):
                profile = SpectralProfile(sigma0=sigma0)
                assert close(poly.at(tau, sigma0), rate_direct(U, lam, tau, profile), scale)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_polynomial_identity(n):
    poly = rate_polynomial(np.eye(n), [n])
    assert poly.coefficients[0] > 0
    assert poly.coefficients.sum() == pytest.approx(math.factorial(n))
    assert poly.evaluate(0.0) == pytest.approx(state_norm([n], 100.0))


# -- normalization -----------------------------------------------------------

def test_state_norm_examples():
    assert state_norm([1, 1], 0.0) == 0.0
    assert state_norm([2], 0.0) == pytest.approx(2.0)
    for n in (2, 3, 4):
        for lam in partitions(n):
            chi_sq = sum(character(lam, p.cycle_type()) ** 2 for p in all_permutations(n)) / math.factorial(n)
            assert state_norm(lam, 40.0) == pytest.approx(chi_sq)
    with pytest.raises(DimensionError):
        state_norm([2, 1], 0.5, n=4)


def test_normalized_rate():
    for lam in partitions(3):
        assert normalized_rate(np.eye(3), lam, 0.8) == pytest.approx(1.0)
    with pytest.raises(DegenerateStateError):
        normalized_rate(BS, [1, 1], 0.0)


@pytest.mark.parametrize("seed", range(4))
def test_normalized_rate_is_probability(seed):
    for n in (2, 3, 4):
        U = haar_random_unitary(n, seed)
        for lam in partitions(n):
            for tau in (0.3, 1.2):
                assert 0.0 <= normalized_rate(U, lam, tau) <= 1.0 + 1e-10


# -- basis projection ---------------------------------------------------------

BASIS_21 = [P(c, 3) for c in ("()", "(23)", "(12)", "(123)")]


def test_project_21():
    cmap = immanant_coefficient_map(3, 0.8)
    reduced = project_onto_basis(cmap, [2, 1], BASIS_21)
    assert len(reduced) == 16
    ind = independent_coefficients(reduced)
    assert len(ind) == 10
    for M in (random_complex(3, 901), random_complex(3, 902)):
        full = quadratic_form(M, [2, 1], cmap)
        assert np.isclose(quadratic_form(M, [2, 1], reduced), full, rtol=1e-9)


def test_project_trivial_shape():
    cmap = immanant_coefficient_map(3, 0.6)
    e = Permutation.identity(3)
    reduced = project_onto_basis(cmap, [3], [e])
    assert list(reduced) == [(e, e)]
    assert reduced[(e, e)] == pytest.approx(sum(cmap.values()))


def test_project_errors():
    cmap = immanant_coefficient_map(3, 0.8)
    with pytest.raises(DependentBasisError):
        project_onto_basis(cmap, [2, 1], list(all_permutations(3)))
    with pytest.raises(BasisSpanError):
        project_onto_basis(cmap, [2, 1], BASIS_21[:2])
    with pytest.raises(DimensionError):
        project_onto_basis(cmap, [2, 1], [Permutation.identity(2)])


def test_polynomial_projection_matches_pointwise():
    poly = project_polynomial_onto_basis([2, 1], BASIS_21)
    tau = 0.65
    pointwise = project_onto_basis(immanant_coefficient_map(3, tau), [2, 1], BASIS_21)
    g = math.exp(-(tau**2))
    for pair, coeffs in poly.items():
        assert np.isclose(np.polynomial.polynomial.polyval(g, coeffs), pointwise[pair], atol=1e-9)
    maps = coefficient_maps_by_exponent(3)
    assert sorted(maps) == [0, 1, 3, 4]


@pytest.mark.parametrize("lam", [(2, 1), (3,), (1, 1, 1), (3, 1), (2, 2)])
def test_immanant_relations_count(lam):
    n = sum(lam)
    # row translates of the character span a two-sided ideal of dimension dim(lam)^2
    rank = hook_length_dimension(lam) ** 2
    relations = immanant_relations(lam)
    assert len(relations) == math.factorial(n) - rank
    M = random_complex(n, 77)
    g = np.array([immanant(permute_rows(M, p), lam) for p in all_permutations(n)])
    assert np.allclose(relations @ g, 0, atol=1e-8 * np.abs(g).max())
