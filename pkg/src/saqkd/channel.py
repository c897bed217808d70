"""Fiber loss, Poisson source statistics, and first-order rate formulas."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple


@dataclass(frozen=True)
class ChannelPoint:
    """A fiber segment with attenuation alpha (dB/km) over length_km."""

    alpha_db_per_km: float
    length_km: float
    eta_rho: float

    def __post_init__(self) -> None:
        if self.alpha_db_per_km < 0:
            raise ValueError("attenuation must be >= 0 dB/km")
        if self.length_km < 0:
            raise ValueError("fiber length must be >= 0 km")
        expected = 10.0 ** (-self.alpha_db_per_km * self.length_km / 10.0)
        if not 0.0 < self.eta_rho <= 1.0 or abs(self.eta_rho - expected) > 1e-12:
            raise ValueError("eta_rho inconsistent with alpha and length")


@dataclass(frozen=True)
class PulseStats:
    """Photon-number probabilities of a Poisson source with intensity mu."""

    mu: float
    p0: float
    p1: float
    p2: float
    p3: float

    def __post_init__(self) -> None:
        if self.mu <= 0:
            raise ValueError("mu must be > 0")
        for n, p in enumerate((self.p0, self.p1, self.p2, self.p3)):
            if abs(p - poisson_pmf(n, self.mu)) > 1e-12:
                raise ValueError(f"p{n} inconsistent with mu={self.mu}")


class RawRate(NamedTuple):
    exact: float
    approx: float


def transmission(alpha_db_per_km: float, length_km: float) -> ChannelPoint:
    """Channel transmittance eta_rho = 10^(-alpha*l/10)."""
    eta = 10.0 ** (-alpha_db_per_km * length_km / 10.0)
    return ChannelPoint(alpha_db_per_km, length_km, eta)


def poisson_pmf(n: int, mu: float) -> float:
    """P(n photons) = e^(-mu) mu^n / n! for a Poisson source."""
    if n < 0 or not isinstance(n, int) or isinstance(n, bool):
        raise ValueError("photon number n must be a nonnegative integer")
    if mu <= 0:
        raise ValueError("mu must be > 0")
    return math.exp(n * math.log(mu) - mu - math.lgamma(n + 1))


def pulse_stats(mu: float) -> PulseStats:
    """Photon-number probabilities up to n=3 for intensity mu."""
    return PulseStats(mu, *(poisson_pmf(n, mu) for n in range(4)))


def raw_rate(mu: float, eta_d: float, eta_rho: float) -> RawRate:
    """Raw detection rate of a Poisson source over a lossy link.

    Exact value of sum_{n>=1} p_n (1 - (1 - eta_d eta_rho)^n), which closes to
    1 - e^(-eta_d eta_rho mu), together with its first-order approximation
    eta_d eta_rho mu.
    """
    if mu <= 0:
        raise ValueError("mu must be > 0")
    if not 0.0 < eta_d <= 1.0 or not 0.0 < eta_rho <= 1.0:
        raise ValueError("eta_d and eta_rho must be in (0, 1]")
    x = eta_d * eta_rho * mu
    return RawRate(exact=-math.expm1(-x), approx=x)


def sifted_rate(a: float, mu: float, eta_d: float, eta_rho: float) -> float:
    """First-order sifted-key rate (1+a)/4 * eta_d eta_rho mu."""
    if not 0.0 <= a <= 1.0:
        raise ValueError("selecting parameter a must be in [0, 1]")
    return (1.0 + a) / 4.0 * raw_rate(mu, eta_d, eta_rho).approx


def mu_for_a(a: float, mu_b: float) -> float:
    """Source intensity 2 mu_B / (1 + a) that keeps the sifted rate equal to
    the BB84 baseline (a=1 at intensity mu_B) for every a."""
    if not 0.0 <= a <= 1.0:
        raise ValueError("selecting parameter a must be in [0, 1]")
    if mu_b <= 0:
        raise ValueError("mu_b must be > 0")
    return 2.0 * mu_b / (1.0 + a)
