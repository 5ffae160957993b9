"""Spin-network nullification and the energy released into a reservoir."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np


@dataclass
class SpinNetwork:
    """Ising spins with symmetric couplings and a uniform field.

    Energy is sum_{i<j} J_ij s_i s_j + H * sum_i s_i, so a positive field
    makes the up state unfavourable.
    """

    sigma: np.ndarray
    J: np.ndarray
    H: float = 0.0
    T: float = 0.0
    rng_seed: int = 0
    rng: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        self.sigma = np.asarray(self.sigma, dtype=float).copy()
        self.J = np.asarray(self.J, dtype=float).copy()
        n = self.sigma.shape[0]
        if self.J.shape != (n, n):
            raise ValueError("coupling matrix shape does not match spin count")
        if not np.all(np.isin(self.sigma, (-1.0, 1.0))):
            raise ValueError("spins must be +1 or -1")
        if np.any(np.diag(self.J) != 0.0) or not np.array_equal(self.J, self.J.T):
            raise ValueError("couplings must be symmetric without self-coupling")
        if self.T < 0:
            raise ValueError("temperature must be nonnegative")
        self.rng = np.random.default_rng(self.rng_seed)

    @classmethod
    def from_pairs(
        cls,
        n: int,
        couplings: Mapping[tuple[int, int], float],
        sigma=None,
        H: float = 0.0,
        T: float = 0.0,
        rng_seed: int = 0,
    ) -> "SpinNetwork":
        """Couplings keyed by unordered pairs; (i, j) and (j, i) name the same bond."""
        J = np.zeros((n, n))
        seen = set()
        for (i, j), v in couplings.items():
            if i == j:
                raise ValueError("self-coupling is not allowed")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"pair {key} given twice")
            seen.add(key)
            J[i, j] = J[j, i] = v
        sigma = np.ones(n) if sigma is None else sigma
        return cls(sigma, J, H, T, rng_seed)

    @classmethod
    def random(
        cls, n: int, coupling_scale: float, seed: int, sigma=None, H: float = 0.0, T: float = 0.0
    ) -> "SpinNetwork":
        rng = np.random.default_rng(seed)
        upper = np.triu(rng.uniform(-1.0, 1.0, size=(n, n)), k=1) * coupling_scale
        sigma = np.ones(n) if sigma is None else sigma
        return cls(sigma, upper + upper.T, H, T, rng_seed=seed)

    @property
    def n(self) -> int:
        return self.sigma.shape[0]

    def all_down(self) -> bool:
        return bool(np.all(self.sigma == -1.0))

    def max_row_coupling(self) -> float:
        return float(np.abs(self.J).sum(axis=1).max()) if self.n else 0.0


@dataclass(frozen=True)
class NullifyReport:
    sweeps_used: int
    energy_to_reservoir: float
    final_all_down: bool
    motor_share: float
    limbic_share: float


def energy(net: SpinNetwork) -> float:
    s = net.sigma
    return float(0.5 * s @ net.J @ s + net.H * s.sum())


def _flip_acceptance(dE: float, T: float) -> float:
    # 1 / (1 + exp(dE/T)), written to avoid overflow
    return 0.5 * (1.0 - math.tanh(0.5 * dE / T))


def glauber_sweep(net: SpinNetwork, temperature: float | None = None) -> tuple[SpinNetwork, float]:
    """One pass over all spins in random order; returns the accepted energy change."""
    T = net.T if temperature is None else temperature
    if T < 0:
        raise ValueError("temperature must be nonnegative")
    s, J, H = net.sigma, net.J, net.H
    total = 0.0
    for i in net.rng.permutation(net.n):
        dE = -2.0 * s[i] * (float(J[i] @ s) + H)
        if T == 0.0:
            accept = dE < 0.0
        else:
            accept = net.rng.random() < _flip_acceptance(dE, T)
        if accept:
            s[i] = -s[i]
            total += dE
    return net, total


def nullify(
    net: SpinNetwork, field_strength: float, max_sweeps: int, routing_rho: float = 1.0
) -> NullifyReport:
    """Quench under a strong field at zero temperature, dumping the excess energy.

    ``routing_rho`` of the release goes to the motor channel (laughter), the
    rest to other regions. Stops early once a sweep changes nothing.
    """
    if max_sweeps < 1:
        raise ValueError("max_sweeps must be >= 1")
    if not 0.0 <= routing_rho <= 1.0:
        raise ValueError("routing_rho must lie in [0, 1]")
    net.H = float(field_strength)
    released = 0.0
    sweeps = 0
    while not net.all_down() and sweeps < max_sweeps:
        before = net.sigma.copy()
        _, dE = glauber_sweep(net, temperature=0.0)
        sweeps += 1
        released -= dE
        if np.array_equal(before, net.sigma):
            break
    motor = routing_rho * released
    limbic = released - motor
    return NullifyReport(sweeps, motor + limbic, net.all_down(), motor, limbic)


def _release(
    k: int,
    spins_per_image: int,
    coupling_scale: float,
    routing_rho: float,
    seed: int,
    field_strength: float,
    max_sweeps: int | None,
) -> NullifyReport:
    if k < 1:
        raise ValueError("content length must be >= 1")
    if spins_per_image < 1:
        raise ValueError("spins_per_image must be >= 1")
    n = k * spins_per_image
    net = SpinNetwork.random(n, coupling_scale, seed)
    return nullify(net, field_strength, max_sweeps or max(n, 1), routing_rho)


def laughter_from_retraction(
    event,
    spins_per_image: int = 4,
    coupling_scale: float = 0.0,
    routing_rho: float = 1.0,
    seed: int = 0,
    field_strength: float = 1.0,
    max_sweeps: int | None = None,
) -> NullifyReport:
    """Erase the retracted version: one all-up block of spins per retracted image."""
    return _release(
        len(event.old), spins_per_image, coupling_scale, routing_rho, seed, field_strength, max_sweeps
    )


def forced_deletion(
    content_length: int,
    spins_per_image: int = 4,
    coupling_scale: float = 0.0,
    routing_rho: float = 1.0,
    seed: int = 0,
    field_strength: float = 1.0,
    max_sweeps: int | None = None,
) -> NullifyReport:
    """Nervous laughter: the same erasure applied to unwanted content of a given length."""
    return _release(
        content_length, spins_per_image, coupling_scale, routing_rho, seed, field_strength, max_sweeps
    )
