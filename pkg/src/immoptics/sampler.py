"""Repeated-trial coincidence sampling and binomial confidence intervals."""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .optics import DEFAULT_PROFILE, SpectralProfile, normalized_rate

BERNOULLI_LIMIT = 10**6
P_SLACK = 1e-10


@dataclass(frozen=True)
class SamplingReport:
    """Outcome of ``trials`` repetitions with ``successes`` coincidences.

    ``center +/- half_width`` is the confidence interval. For the Wald
    interval ``center == estimate``; the Wilson interval shifts it.
    """

    trials: int
    successes: int
    estimate: float
    z: float
    half_width: float
    seed: int | None
    center: float
    method: str = "wald"
    p: float | None = None

    @property
    def low(self) -> float:
        return self.center - self.half_width

    @property
    def high(self) -> float:
        return self.center + self.half_width

    def covers(self, p: float) -> bool:
        return self.low <= p <= self.high

    def to_dict(self) -> dict:
        return asdict(self)


def wald_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """``(l/L, (z/L) sqrt(l (L - l) / L))``."""
    l, L = successes, trials
    return l / L, z / L * math.sqrt(l * (L - l) / L)


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval as ``(center, half_width)``."""
    l, L = successes, trials
    z2 = z * z
    center = (l + z2 / 2) / (L + z2)
    half = z / (L + z2) * math.sqrt(l * (L - l) / L + z2 / 4)
    return center, half


def report(successes: int, trials: int, z: float = 1.96, seed=None, method: str = "wald", p=None) -> SamplingReport:
    if not 0 <= successes <= trials or trials < 1:
        raise ValueError(f"need 0 <= successes <= trials and trials >= 1, got {successes}/{trials}")
    if method == "wald":
        center, half = wald_interval(successes, trials, z)
    elif method == "wilson":
        center, half = wilson_interval(successes, trials, z)
    else:
        raise ValueError(f"unknown interval method {method!r}")
    return SamplingReport(trials, successes, successes / trials, z, half, seed, center, method, p)


def _draw(p: float, trials: int, rng: np.random.Generator) -> int:
    if trials <= BERNOULLI_LIMIT:
        return int(np.count_nonzero(rng.random(trials) < p))
    return int(rng.binomial(trials, p))


def simulate(p: float, trials: int, seed=None, z: float = 1.96, method: str = "wald") -> SamplingReport:
    """Draw ``successes ~ Binomial(trials, p)`` with a seeded generator.

    Up to ``BERNOULLI_LIMIT`` trials are drawn as individual Bernoulli
    events; larger runs use numpy's binomial sampler.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    successes = _draw(p, trials, np.random.default_rng(seed))
    return report(successes, trials, z, seed, method, p)


def required_trials(p_guess: float, epsilon: float, z: float = 1.96) -> int:
    """Smallest ``L`` with ``z * sqrt(p (1 - p) / L) <= epsilon``."""
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if not 0 <= p_guess <= 1:
        raise ValueError(f"p_guess must lie in [0, 1], got {p_guess}")
    if p_guess in (0, 1):
        warnings.warn("degenerate p_guess, using worst case p = 1/2", stacklevel=2)
        p_guess = 0.5
    exact = z * z * p_guess * (1 - p_guess) / epsilon**2
    # absorb rounding in exact, e.g. 1.96**2 * 0.25 / 1e-4 = 9604.000000000002
    return max(1, math.ceil(exact * (1 - 1e-12)))


def estimate_rate(U, lam, tau, profile: SpectralProfile = DEFAULT_PROFILE, trials: int = 10_000, seed=None, z: float = 1.96, method: str = "wald") -> SamplingReport:
    """Sample the normalized coincidence rate; the report keeps the exact ``p``."""
    p = normalized_rate(U, lam, tau, profile)
    if p > 1 + P_SLACK or p < 0:
        raise ValueError(f"normalized rate {p} is not a probability; is U a submatrix of a unitary?")
    return simulate(min(p, 1.0), trials, seed, z, method)


def replication_seeds(seed: int, replications: int) -> list[np.random.SeedSequence]:
    """Independent child seeds derived from ``(seed, replication index)``."""
    return np.random.SeedSequence(seed).spawn(replications)


def coverage(p: float, trials: int, replications: int, seed: int = 0, z: float = 1.96, method: str = "wald") -> float:
    """Fraction of replications whose interval contains ``p``."""
    hits = 0
    for child in replication_seeds(seed, replications):
        if simulate(p, trials, child, z, method).covers(p):
            hits += 1
    return hits / replications
