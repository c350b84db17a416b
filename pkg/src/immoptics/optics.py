"""Coincidence rates for time-bin-entangled photons in a linear interferometer.

Each photon carries a Gaussian spectral amplitude and the input state is a
character-weighted superposition of delay assignments. The coincidence rate
is a Hermitian form in the amplitudes

    f(pi) = sum_sigma chi(sigma) prod_i U[i, sigma^-1(pi(i))]
          = imm(permute_rows(U, pi^-1))

with Gram matrix ``a(pi1, pi2) = (1/n!) exp(-sigma0^2/2 * sum_j D_j^2)``,
``D_j = tau[pi1^-1(j)] - tau[pi2^-1(j)]``. For equally spaced delays every
``sum_j D_j^2 / (2 tau^2)`` is an integer ``k``, so the rate is a polynomial
in ``exp(-sigma0^2 tau^2)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from numbers import Real

import numpy as np
import scipy.linalg

from .characters import Partition, character
from .errors import (
    BasisSpanError,
    DependentBasisError,
    DegenerateStateError,
    DimensionError,
    InternalConsistencyError,
    SizeLimitError,
    UnsupportedSchemeError,
)
from .immanants import _square, character_vector, immanant, quadratic_form
from .permutations import Permutation, all_permutations, compose, permutation_array, permute_rows

MAX_RATE_N = 5
MAX_QUADRUPLE_N = 3
NORM_THRESHOLD = 1e-12
NEGATIVE_TOL = 1e-12
IMAG_TOL = 1e-10


class RateClampWarning(UserWarning):
    """A slightly negative rate (rounding) was clamped to zero."""


@dataclass(frozen=True)
class SpectralProfile:
    """Gaussian single-photon spectrum with carrier ``omega0`` and bandwidth ``sigma0``."""

    omega0: float = 0.0
    sigma0: float = 1.0

    def __post_init__(self):
        if not self.sigma0 > 0:
            raise ValueError(f"sigma0 must be positive, got {self.sigma0}")

    def amplitude(self, omega):
        omega = np.asarray(omega, dtype=float)
        return np.exp(-((omega - self.omega0) ** 2) / (4 * self.sigma0**2)) / (2 * np.pi * self.sigma0**2) ** 0.25

    def power_spectrum(self, omega):
        return self.amplitude(omega) ** 2

    def transform(self, t):
        """``int |phi(w)|^2 exp(-i w t) dw`` in closed form."""
        t = np.asarray(t, dtype=float)
        return np.exp(-1j * self.omega0 * t - 0.5 * self.sigma0**2 * t**2)


DEFAULT_PROFILE = SpectralProfile()


@dataclass(frozen=True)
class DelayScheme:
    """Equally spaced delays, symmetric about zero, in units of ``tau``.

    ``multipliers[i] = n + 1 - 2(i+1)`` for even ``n`` and half that for odd
    ``n``, so odd ``n`` gives integer steps and even ``n`` odd-integer steps.
    """

    n: int
    tau: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if self.tau < 0:
            raise ValueError(f"tau must be nonnegative, got {self.tau}")

    @property
    def multipliers(self) -> np.ndarray:
        steps = self.n + 1 - 2 * np.arange(1, self.n + 1)
        return steps.astype(float) if self.n % 2 == 0 else steps / 2.0

    @property
    def vector(self) -> np.ndarray:
        return self.multipliers * self.tau


def delay_vector(n: int, tau: float) -> DelayScheme:
    return DelayScheme(n, tau)


def _delays(n: int, tau) -> np.ndarray:
    if isinstance(tau, DelayScheme):
        if tau.n != n:
            raise DimensionError(f"delay scheme for {tau.n} photons used with n={n}")
        return tau.vector
    if isinstance(tau, Real):
        return DelayScheme(n, float(tau)).vector
    vec = np.asarray(tau, dtype=float)
    if vec.shape != (n,):
        raise DimensionError(f"expected {n} delays, got shape {vec.shape}")
    return vec


def max_degree(n: int) -> int:
    """Largest power of ``exp(-sigma0^2 tau^2)`` reachable with equally spaced delays."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if n % 2 == 0:
        return 2 * n * (n * n - 1) // 3
    return n * (n * n - 1) // 6


@dataclass(frozen=True)
class OverlapCoefficient:
    p1: Permutation
    p2: Permutation
    value: float
    exponent: int | None = None


def delay_differences(p1: Permutation, p2: Permutation, delays) -> np.ndarray:
    """``D_j = delays[p1^-1(j)] - delays[p2^-1(j)]``."""
    if p1.n != p2.n:
        raise DimensionError("permutations act on different numbers of symbols")
    tau = _delays(p1.n, delays)
    return tau[list(p1.inverse().image)] - tau[list(p2.inverse().image)]


def _integer_exponent(sq_sum: float) -> int:
    k = sq_sum / 2.0
    rounded = round(k)
    if abs(k - rounded) > 1e-9:
        raise UnsupportedSchemeError(f"non-integer Gaussian exponent {k}")
    return int(rounded)


def overlap_coefficient(p1: Permutation, p2: Permutation, delays, profile: SpectralProfile = DEFAULT_PROFILE) -> OverlapCoefficient:
    """Closed-form Gaussian overlap for the permutation pair ``(p1, p2)``.

    The exponent is filled in only when ``delays`` is a :class:`DelayScheme`.
    """
    n = p1.n
    diff = delay_differences(p1, p2, delays)
    # sum(diff) == 0 because both sides are rearrangements of the same delays,
    # so the carrier phase exp(-i omega0 sum(diff)) is exactly 1
    value = math.exp(-0.5 * profile.sigma0**2 * float(diff @ diff)) / math.factorial(n)
    exponent = None
    if isinstance(delays, DelayScheme):
        unit = delay_differences(p1, p2, delays.multipliers)
        exponent = _integer_exponent(float(unit @ unit))
    return OverlapCoefficient(p1, p2, value, exponent)


def overlap_quadrature(p1: Permutation, p2: Permutation, delays, profile: SpectralProfile = DEFAULT_PROFILE, nodes: int = 64) -> complex:
    """Overlap integral by Gauss-Hermite quadrature of each frequency factor.

    Uses ``w = omega0 + sqrt(2) sigma0 x`` so that ``|phi(w)|^2 dw`` becomes
    ``exp(-x^2) dx / sqrt(pi)``.
    """
    if p1.n != p2.n:
        raise DimensionError("permutations act on different numbers of symbols")
    n = p1.n
    tau = _delays(n, delays)
    # phase (w_p1 - w_p2) . tau with (w_p)_i = w[p(i)], collected per frequency
    diff = np.zeros(n)
    for i in range(n):
        diff[p1(i)] += tau[i]
        diff[p2(i)] -= tau[i]
    x, w = np.polynomial.hermite.hermgauss(nodes)
    omega = profile.omega0 + math.sqrt(2.0) * profile.sigma0 * x
    factors = (w[None, :] * np.exp(-1j * np.outer(diff, omega))).sum(axis=1) / math.sqrt(math.pi)
    return complex(np.prod(factors) / math.factorial(n))


@lru_cache(maxsize=None)
def _inverse_array(n: int) -> np.ndarray:
    return np.argsort(permutation_array(n), axis=1)


def _square_distance_matrix(n: int, tau: np.ndarray) -> np.ndarray:
    """``S[a, b] = sum_j D_j^2`` for all permutation pairs in lexicographic order."""
    placed = tau[_inverse_array(n)]
    diff = placed[:, None, :] - placed[None, :, :]
    return np.einsum("abj,abj->ab", diff, diff)


def overlap_matrix(n: int, delays, profile: SpectralProfile = DEFAULT_PROFILE) -> np.ndarray:
    """``(n!, n!)`` matrix of closed-form overlaps, indexed like ``all_permutations(n)``."""
    if n > MAX_RATE_N:
        raise SizeLimitError(f"rate engine limited to n <= {MAX_RATE_N}, got {n}")
    sq = _square_distance_matrix(n, _delays(n, delays))
    return np.exp(-0.5 * profile.sigma0**2 * sq) / math.factorial(n)


def exponent_matrix(n: int, scheme: DelayScheme | None = None) -> np.ndarray:
    """Integer exponents ``k(pi1, pi2)`` for all pairs; raises for non-integer schemes."""
    if n > MAX_RATE_N:
        raise SizeLimitError(f"rate engine limited to n <= {MAX_RATE_N}, got {n}")
    unit = DelayScheme(n).multipliers if scheme is None else _unit_delays(n, scheme)
    half = _square_distance_matrix(n, unit) / 2.0
    rounded = np.rint(half)
    if np.max(np.abs(half - rounded)) > 1e-9:
        raise UnsupportedSchemeError("delay scheme yields non-integer Gaussian exponents")
    return rounded.astype(np.int64)


def _unit_delays(n: int, scheme) -> np.ndarray:
    if isinstance(scheme, DelayScheme):
        if scheme.n != n:
            raise DimensionError(f"delay scheme for {scheme.n} photons used with n={n}")
        return scheme.multipliers
    vec = np.asarray(scheme, dtype=float)
    if vec.shape != (n,):
        raise DimensionError(f"expected {n} delay multipliers, got shape {vec.shape}")
    return vec


@lru_cache(maxsize=None)
def _character_convolution(lam: Partition) -> np.ndarray:
    """``C[pi, s] = chi(pi o s^-1)`` over lexicographically ordered ``S_n``."""
    perms = all_permutations(lam.n)
    cache = {}
    C = np.empty((len(perms), len(perms)), dtype=np.int64)
    for a, pi in enumerate(perms):
        for b, s in enumerate(perms):
            mu = compose(pi, s.inverse()).cycle_type()
            if mu not in cache:
                cache[mu] = character(lam, mu)
            C[a, b] = cache[mu]
    C.setflags(write=False)
    return C


def _check_rate_inputs(U, lam):
    U = _square(U)
    lam = Partition(lam)
    n = U.shape[0]
    if lam.n != n:
        raise DimensionError(f"partition {lam} does not match a {n}x{n} matrix")
    if n > MAX_RATE_N:
        raise SizeLimitError(f"rate engine limited to n <= {MAX_RATE_N}, got {n}")
    return U, lam, n


def pair_amplitudes(U, lam) -> np.ndarray:
    """Character-weighted amplitudes ``f(pi)`` for every ``pi`` in lexicographic order.

    Computed as ``sum_s chi(pi o s^-1) prod_i U[i, s(i)]`` without forming
    any immanant explicitly.
    """
    U, lam, n = _check_rate_inputs(U, lam)
    monomials = np.prod(U[np.arange(n), permutation_array(n)], axis=1)
    return _character_convolution(lam) @ monomials


def _finalize_rate(value: complex, scale: float) -> float:
    scale = max(scale, 1.0)
    if abs(value.imag) > IMAG_TOL * scale:
        raise InternalConsistencyError(f"rate has imaginary part {value.imag:.3e} (scale {scale:.3e})")
    rate = value.real
    if rate < 0:
        if rate < -NEGATIVE_TOL * scale:
            raise InternalConsistencyError(f"rate {rate:.3e} is negative beyond rounding")
        warnings.warn(f"clamping rate {rate:.3e} to zero", RateClampWarning, stacklevel=3)
        rate = 0.0
    return float(rate)


def rate_direct(U, lam, tau, profile: SpectralProfile = DEFAULT_PROFILE) -> float:
    """Coincidence rate as a double sum over permutation pairs.

    ``tau`` is a scalar delay unit (equally spaced scheme), a
    :class:`DelayScheme`, or an explicit length-``n`` delay vector.
    """
    U, lam, n = _check_rate_inputs(U, lam)
    f = pair_amplitudes(U, lam)
    A = overlap_matrix(n, _delays(n, tau), profile)
    value = complex(f @ A @ f.conj())
    scale = float(np.abs(f) @ A @ np.abs(f))
    return _finalize_rate(value, scale)


def rate_quadruple_sum(U, lam, tau, profile: SpectralProfile = DEFAULT_PROFILE) -> float:
    """Literal four-fold permutation sum; a slow reference for ``n <= 3``."""
    U, lam, n = _check_rate_inputs(U, lam)
    if n > MAX_QUADRUPLE_N:
        raise SizeLimitError(f"quadruple sum limited to n <= {MAX_QUADRUPLE_N}, got {n}")
    delays = _delays(n, tau)
    perms = all_permutations(n)
    chi = {p: character(lam, p.cycle_type()) for p in perms}
    mono = {p: np.prod([U[i, p(i)] for i in range(n)]) for p in perms}
    total = 0j
    for s1 in perms:
        for s2 in perms:
            weight = chi[s1] * chi[s2]
            if weight == 0:
                continue
            for t1 in perms:
                for t2 in perms:
                    a = overlap_coefficient(compose(s1, t1), compose(s2, t2), delays, profile).value
                    total += weight * mono[t1] * np.conj(mono[t2]) * a
    return float(total.real)


def immanant_coefficient_map(n: int, delays, profile: SpectralProfile = DEFAULT_PROFILE) -> dict:
    """Overlaps keyed for :func:`~immoptics.immanants.quadratic_form`.

    The amplitude for ``pi`` is the immanant of ``permute_rows(U, pi^-1)``,
    so the overlap ``a(pi1, pi2)`` is stored under ``(pi1^-1, pi2^-1)``.
    """
    perms = all_permutations(n)
    inv = [p.inverse() for p in perms]
    A = overlap_matrix(n, _delays(n, delays), profile)
    return {(inv[a], inv[b]): float(A[a, b]) for a in range(len(perms)) for b in range(len(perms))}


def coefficient_maps_by_exponent(n: int, scheme: DelayScheme | None = None) -> dict[int, dict]:
    """Split the coefficient map by power of ``exp(-sigma0^2 tau^2)``.

    ``result[k]`` holds ``1/n!`` at every pair whose overlap carries power ``k``.
    """
    perms = all_permutations(n)
    inv = [p.inverse() for p in perms]
    exps = exponent_matrix(n, scheme)
    weight = 1.0 / math.factorial(n)
    out: dict[int, dict] = {}
    for a in range(len(perms)):
        for b in range(len(perms)):
            out.setdefault(int(exps[a, b]), {})[(inv[a], inv[b])] = weight
    return dict(sorted(out.items()))


def rate_via_immanants(U, lam, tau, profile: SpectralProfile = DEFAULT_PROFILE) -> float:
    """Coincidence rate as a quadratic form in immanants of row-permuted ``U``."""
    U, lam, n = _check_rate_inputs(U, lam)
    coeffs = immanant_coefficient_map(n, tau, profile)
    value = quadratic_form(U, lam, coeffs)
    imms = np.array([abs(immanant(permute_rows(U, p), lam)) for p in all_permutations(n)])
    scale = float(imms.max() ** 2 * sum(abs(a) for a in coeffs.values()))
    return _finalize_rate(value, scale)


@dataclass(frozen=True)
class RatePolynomial:
    """Rate collected by powers of ``G = exp(-sigma0^2 tau^2)``.

    ``coefficients[k]`` multiplies ``G**k``. ``max_exponent`` is the largest
    power carried by any permutation pair, whether or not its coefficient
    happens to vanish.
    """

    lam: Partition
    coefficients: np.ndarray
    max_exponent: int
    pair_counts: np.ndarray = field(repr=False)

    def evaluate(self, gtilde) -> float:
        return float(np.polynomial.polynomial.polyval(gtilde, self.coefficients))

    def at(self, tau: float, sigma0: float = 1.0) -> float:
        return self.evaluate(math.exp(-(sigma0**2) * tau**2))

    @property
    def degree(self) -> int:
        nonzero = np.nonzero(np.abs(self.coefficients) > 1e-12 * max(1.0, np.abs(self.coefficients).max()))[0]
        return int(nonzero[-1]) if nonzero.size else 0

    def populated_exponents(self) -> list[int]:
        return [int(k) for k in np.nonzero(self.pair_counts)[0]]

    def as_dict(self) -> dict[int, float]:
        return {k: float(c) for k, c in enumerate(self.coefficients)}


def rate_polynomial(U, lam, scheme: DelayScheme | None = None) -> RatePolynomial:
    """Collect the rate as a polynomial in ``exp(-sigma0^2 tau^2)``.

    ``scheme`` fixes the delay multipliers (default: equally spaced); its
    ``tau`` is irrelevant. Coefficients do not depend on ``sigma0``.
    """
    U, lam, n = _check_rate_inputs(U, lam)
    exps = exponent_matrix(n, scheme)
    f = pair_amplitudes(U, lam)
    contrib = np.outer(f, f.conj()) / math.factorial(n)
    if np.abs(contrib.imag.sum()) > IMAG_TOL * max(1.0, np.abs(contrib).sum()):
        raise InternalConsistencyError("pair contributions do not cancel to a real polynomial")
    size = int(exps.max()) + 1
    coeffs = np.bincount(exps.ravel(), weights=contrib.real.ravel(), minlength=size)
    counts = np.bincount(exps.ravel(), minlength=size)
    return RatePolynomial(lam, coeffs, int(exps.max()), counts)


def state_norm(lam, tau, profile: SpectralProfile = DEFAULT_PROFILE, n: int | None = None) -> float:
    """Norm of the entangled input state: the rate through the identity interferometer."""
    lam = Partition(lam)
    n = lam.n if n is None else n
    if n != lam.n:
        raise DimensionError(f"partition {lam} is not a partition of {n}")
    return rate_direct(np.eye(n, dtype=complex), lam, tau, profile)


def normalized_rate(U, lam, tau, profile: SpectralProfile = DEFAULT_PROFILE) -> float:
    """Rate divided by the input-state norm (a probability for unitary ``U``)."""
    lam = Partition(lam)
    norm = state_norm(lam, tau, profile)
    if norm <= NORM_THRESHOLD:
        raise DegenerateStateError(f"input state for {lam} has norm {norm:.3e} at tau={tau}")
    return rate_direct(U, lam, tau, profile) / norm


def _random_matrices(n: int, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.normal(size=(count, n, n)) + 1j * rng.normal(size=(count, n, n))


def _fit_basis(lam: Partition, basis, targets_for, samples, seed, residual_tol):
    basis = list(basis)
    b = len(basis)
    n = lam.n
    if any(p.n != n for p in basis):
        raise DimensionError(f"basis permutations must act on {n} symbols")
    if len(set(basis)) != b:
        raise DependentBasisError("basis contains repeated permutations")
    count = max(samples or 0, 2 * b * b)
    mats = _random_matrices(n, count, seed)
    features = np.empty((count, b * b), dtype=complex)
    targets = []
    for s, M in enumerate(mats):
        g = np.array([immanant(permute_rows(M, p), lam) for p in basis])
        features[s] = np.outer(g, g.conj()).ravel()
        targets.append(targets_for(M))
    targets = np.array(targets, dtype=complex).reshape(count, -1)
    col_scale = np.linalg.norm(features, axis=0)
    X = features / col_scale
    sv = np.linalg.svd(X, compute_uv=False)
    if sv[-1] < 1e-9 * sv[0]:
        raise DependentBasisError(f"basis immanants for {lam} are linearly dependent (condition {sv[0] / sv[-1]:.2e})")
    sol, *_ = np.linalg.lstsq(X, targets, rcond=None)
    residual = np.linalg.norm(X @ sol - targets, axis=0)
    norms = np.linalg.norm(targets, axis=0)
    worst = float(np.max(residual / np.maximum(norms, 1e-300) * (norms > 0)))
    if worst > residual_tol:
        raise BasisSpanError(f"basis does not span the form (relative residual {worst:.2e})")
    sol = sol / col_scale[:, None]
    pairs = [(s, t) for s in basis for t in basis]
    return pairs, sol


def project_onto_basis(rate_map: dict, lam, basis, *, samples: int | None = None, seed: int = 0, residual_tol: float = 1e-8) -> dict:
    """Re-express a coefficient map over a smaller set of row permutations.

    Finds ``b`` with ``quadratic_form(M, lam, rate_map) == quadratic_form(M, lam, b)``
    for all ``M`` by least squares on random complex matrices. The returned map
    is keyed by ordered pairs of ``basis`` elements.

    Raises
    ------
    DependentBasisError
        The basis immanants are linearly dependent.
    BasisSpanError
        The least-squares residual exceeds ``residual_tol``.
    """
    lam = Partition(lam)
    pairs, sol = _fit_basis(lam, basis, lambda M: quadratic_form(M, lam, rate_map), samples, seed, residual_tol)
    return {pair: complex(sol[i, 0]) for i, pair in enumerate(pairs)}


def project_polynomial_onto_basis(lam, basis, scheme: DelayScheme | None = None, *, samples: int | None = None, seed: int = 0, residual_tol: float = 1e-8) -> dict:
    """Reduced coefficients as polynomials in ``exp(-sigma0^2 tau^2)``.

    Returns ``{(s, t): coefficients}`` where ``coefficients[k]`` multiplies the
    ``k``-th power.
    """
    lam = Partition(lam)
    maps = coefficient_maps_by_exponent(lam.n, scheme)
    size = max(maps) + 1

    def targets(M):
        row = np.zeros(size, dtype=complex)
        for k, m in maps.items():
            row[k] = quadratic_form(M, lam, m)
        return row

    pairs, sol = _fit_basis(lam, basis, targets, samples, seed, residual_tol)
    return {pair: sol[i] for i, pair in enumerate(pairs)}


def independent_coefficients(reduced: dict, atol: float = 1e-9) -> dict:
    """Collapse a Hermitian reduced map to one entry per unordered pair.

    Off-diagonal entries are returned as the single coefficient ``a[s,t]``;
    the partner ``a[t,s]`` must equal its conjugate.
    """
    out = {}
    for (s, t), a in reduced.items():
        partner = reduced.get((t, s))
        if partner is None or np.max(np.abs(np.asarray(a) - np.conj(partner))) > atol:
            raise ValueError(f"reduced map is not Hermitian at ({s}, {t})")
        key = (s, t) if s <= t else (t, s)
        out.setdefault(key, a if s <= t else np.conj(a))
    return out


def immanant_relations(lam, *, samples: int | None = None, seed: int = 0, rtol: float = 1e-9) -> np.ndarray:
    """Linear relations among immanants of row-permuted matrices.

    Returns an orthonormal basis of vectors ``c`` (indexed like
    ``all_permutations(n)``) with ``sum_p c[p] imm(permute_rows(M, p)) == 0``
    for random ``M``.
    """
    lam = Partition(lam)
    n = lam.n
    perms = all_permutations(n)
    count = samples or 3 * len(perms)
    G = np.array([[immanant(permute_rows(M, p), lam) for p in perms] for M in _random_matrices(n, count, seed)])
    return scipy.linalg.null_space(G, rcond=rtol).T


def compare_reduced_coefficients(computed: dict, reference: dict, taus, sigma0: float = 1.0, atol: float = 1e-8, offdiagonal_factors=(1.0,)) -> list[dict]:
    """Compare reduced polynomial coefficients against reference closed forms.

    ``computed`` maps basis pairs to polynomial coefficients (as returned by
    :func:`project_polynomial_onto_basis`); ``reference`` maps the same pairs
    (either ordering) to callables ``f(tau, sigma0)``. An off-diagonal pair
    matches if ``factor * computed`` agrees with the reference for any factor
    in ``offdiagonal_factors`` (e.g. ``2.0`` when a reference lumps ``(s, t)``
    with ``(t, s)``).

    Returns one record per reference entry with ``match`` set accordingly.
    """
    taus = np.asarray(taus, dtype=float)
    g = np.exp(-(sigma0**2) * taus**2)
    records = []
    for (s, t), ref in reference.items():
        poly = computed.get((s, t))
        if poly is None:
            poly = np.conj(computed[(t, s)])
        ours = np.polynomial.polynomial.polyval(g, np.real_if_close(poly))
        theirs = np.array([ref(float(x), sigma0) for x in taus])
        factors = (1.0,) if s == t else offdiagonal_factors
        errors = {f: float(np.max(np.abs(f * ours - theirs))) for f in factors}
        best = min(errors, key=errors.get)
        records.append(
            {
                "pair": [str(s), str(t)],
                "match": errors[best] <= atol,
                "factor": best,
                "max_abs_error": errors[best],
                "taus": taus.tolist(),
                "computed": (best * ours).real.tolist(),
                "reference": np.real_if_close(theirs).real.tolist(),
            }
        )
    return records
