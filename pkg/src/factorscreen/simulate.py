"""Seeded generators for the four simulation designs.

All randomness comes from ``numpy.random.SeedSequence(seed, spawn_key=(r,))``
for replicate ``r`` (plain ``SeedSequence(seed)`` when no replicate is
given), so every replicate owns an independent, reproducible stream.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from ._errors import InvalidSpikeCounts, NotPositiveDefinite

EX1_BETA = (5.0, 5.0, 5.0, -15.0)
EX2_BETA = (5.0, 5.0, 5.0, -15.0, 5.0)
EX4_BETA = (5.0, 4.0, 3.0, 2.0)
EX3_DECOY_COEF = 0.8
EX3_DECOY_NOISE_VAR = 0.01
EX4_SNR = 5.0


@dataclass(frozen=True)
class SimulationSpec:
    example_id: int
    n: int
    p: int
    phi: float | None = None
    d_spike: int | None = None
    m_spike: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.example_id not in (1, 2, 3, 4):
            raise ValueError(f"example_id must be 1-4, got {self.example_id}")
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.example_id == 4:
            if self.d_spike is None or self.m_spike is None:
                raise InvalidSpikeCounts("example 4 needs d_spike and m_spike")
        elif self.phi is None:
            raise ValueError(f"example {self.example_id} needs phi")


@dataclass(frozen=True, eq=False)
class GeneratedDataset:
    X_raw: np.ndarray
    y_raw: np.ndarray
    true_beta: np.ndarray
    spec: SimulationSpec | None = None

    @property
    def true_support(self) -> np.ndarray:
        """0-based indices of the nonzero coefficients."""
        return np.flatnonzero(self.true_beta)


@dataclass(frozen=True)
class SpikeModelSpec:
    d: int
    m: int
    n: int
    noise_sd: float = 1.0

    @property
    def weights(self) -> np.ndarray:
        """``n ** (-(s + 9) / (m + 10))`` for s = 1..m."""
        s = np.arange(1, self.m + 1)
        return float(self.n) ** (-(s + 9) / (self.m + 10))


def replicate_rng(seed: int, replicate: int | None = None) -> np.random.Generator:
    if replicate is None:
        return np.random.default_rng(np.random.SeedSequence(seed))
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(int(replicate),)))


def example_covariance(p: int, phi: float, isolate_fifth: bool = False) -> np.ndarray:
    """Equicorrelation ``phi`` with the fourth variable at ``sqrt(phi)``.

    With ``isolate_fifth`` the fifth variable is made uncorrelated with the
    rest.
    """
    need = 5 if isolate_fifth else 4
    if p < need:
        raise ValueError(f"p must be at least {need}, got {p}")
    if not 0.0 < phi < 1.0:
        raise ValueError(f"phi must lie in (0, 1), got {phi}")
    S = np.full((p, p), float(phi))
    S[3, :] = S[:, 3] = math.sqrt(phi)
    if isolate_fifth:
        S[4, :] = S[:, 4] = 0.0
    np.fill_diagonal(S, 1.0)
    return S


@functools.lru_cache(maxsize=8)
def _cholesky(p: int, phi: float, isolate_fifth: bool) -> np.ndarray:
    S = example_covariance(p, phi, isolate_fifth)
    try:
        L = np.linalg.cholesky(S)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(f"covariance with phi={phi}, p={p} is not positive definite") from exc
    L.flags.writeable = False
    return L


def _coefficients(p, head):
    beta = np.zeros(p)
    beta[: len(head)] = head
    return beta


def _gaussian_design(rng, n, p, phi, isolate_fifth):
    L = _cholesky(p, float(phi), isolate_fifth)
    return rng.standard_normal((n, p)) @ L.T


def gen_example1(n: int, p: int, phi: float, seed: int, replicate: int | None = None,
                 x4_coef: float = EX1_BETA[3]) -> GeneratedDataset:
    """Equicorrelated Gaussian design, ``y = 5x1 + 5x2 + 5x3 - 15x4 + e``.

    ``x4_coef`` overrides the fourth coefficient; ``-15 * sqrt(phi)`` makes
    ``x4`` exactly uncorrelated with ``y``.
    """
    rng = replicate_rng(seed, replicate)
    X = _gaussian_design(rng, n, p, phi, isolate_fifth=False)
    beta = _coefficients(p, EX1_BETA[:3] + (x4_coef,))
    y = X @ beta + rng.standard_normal(n)
    spec = SimulationSpec(1, n, p, phi=phi, seed=seed)
    return GeneratedDataset(X, y, beta, spec)


def gen_example2(n: int, p: int, phi: float, seed: int, replicate: int | None = None,
                 x4_coef: float = EX2_BETA[3]) -> GeneratedDataset:
    rng = replicate_rng(seed, replicate)
    X = _gaussian_design(rng, n, p, phi, isolate_fifth=True)
    beta = _coefficients(p, EX2_BETA[:3] + (x4_coef, EX2_BETA[4]))
    y = X @ beta + rng.standard_normal(n)
    return GeneratedDataset(X, y, beta, SimulationSpec(2, n, p, phi=phi, seed=seed))


def gen_example3(n: int, p: int, phi: float, seed: int, replicate: int | None = None,
                 x4_coef: float = EX2_BETA[3]) -> GeneratedDataset:
    """Example 2 with ``x6`` replaced by the near copy ``0.8 x5 + N(0, 0.01)``.

    The response is built after the replacement; ``x6`` has a zero
    coefficient so it only acts as a correlated decoy.
    """
    if p < 6:
        raise ValueError(f"p must be at least 6, got {p}")
    rng = replicate_rng(seed, replicate)
    X = _gaussian_design(rng, n, p, phi, isolate_fifth=True)
    X[:, 5] = EX3_DECOY_COEF * X[:, 4] + math.sqrt(EX3_DECOY_NOISE_VAR) * rng.standard_normal(n)
    beta = _coefficients(p, EX2_BETA[:3] + (x4_coef, EX2_BETA[4]))
    y = X @ beta + rng.standard_normal(n)
    return GeneratedDataset(X, y, beta, SimulationSpec(3, n, p, phi=phi, seed=seed))


def gen_example4_spike(n: int, p: int, d_spike: int, m_spike: int, seed: int,
                       replicate: int | None = None) -> GeneratedDataset:
    """Spiked factor design ``X = Z diag(w) B^T + E``.

    ``d_spike`` factors get weight 1, the next ``m_spike`` decay as
    ``n ** (-(s + 9) / (m + 10))``.  The noise variance is the sample
    variance of ``X beta`` divided by 5.
    """
    if d_spike < 0 or m_spike < 0 or d_spike + m_spike >= n:
        raise InvalidSpikeCounts(f"need d + m < n, got d={d_spike}, m={m_spike}, n={n}")
    if p < 4:
        raise ValueError(f"p must be at least 4, got {p}")
    rng = replicate_rng(seed, replicate)
    spike = SpikeModelSpec(d_spike, m_spike, n)
    w = np.concatenate([np.ones(d_spike), spike.weights])
    Z = rng.standard_normal((n, d_spike + m_spike))
    B = rng.standard_normal((d_spike + m_spike, p))
    X = (Z * w) @ B + spike.noise_sd * rng.standard_normal((n, p))
    beta = _coefficients(p, EX4_BETA)
    signal = X @ beta
    sigma = math.sqrt(signal.var(ddof=1) / EX4_SNR)
    y = signal + sigma * rng.standard_normal(n)
    spec = SimulationSpec(4, n, p, d_spike=d_spike, m_spike=m_spike, seed=seed)
    return GeneratedDataset(X, y, beta, spec)


def generate(spec: SimulationSpec, replicate: int | None = None, **kwargs) -> GeneratedDataset:
    if spec.example_id == 4:
        return gen_example4_spike(spec.n, spec.p, spec.d_spike, spec.m_spike, spec.seed,
                                  replicate=replicate)
    gen = {1: gen_example1, 2: gen_example2, 3: gen_example3}[spec.example_id]
    return gen(spec.n, spec.p, spec.phi, spec.seed, replicate=replicate, **kwargs)
