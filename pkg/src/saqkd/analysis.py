"""Distance sweeps, optimal selecting parameter, and robustness limits.

All curves use the rate-equalized source intensity mu_a = 2*mu_b/(1+a), so
protocols with different a are compared at identical sifted-key rates. The
storage curve rises with a while the IRUD curve falls with a, which makes the
best achievable eavesdropper information a minimax problem in a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .attacks import best_attack_info, irud_attack, storage_attack
from .channel import mu_for_a, transmission


@dataclass(frozen=True)
class CurvePoint:
    """One (length, a) evaluation of the attack information curves."""

    length_km: float
    a: float
    info_storage: float
    info_irud: float
    info_best: float
    a_optimal: float | None = None

    def __post_init__(self) -> None:
        values = (self.info_storage, self.info_irud, self.info_best)
        if any(not 0.0 <= v <= 1.0 for v in values):
            raise ValueError("information values must lie in [0, 1]")
        if abs(self.info_best - max(self.info_storage, self.info_irud)) > 1e-12:
            raise ValueError("info_best must be the larger attack information")


@dataclass(frozen=True)
class FixedA:
    """Policy that runs the protocol at one fixed selecting parameter."""

    a: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.a <= 1.0:
            raise ValueError("selecting parameter a must be in [0, 1]")


@dataclass(frozen=True)
class OptimalA:
    """Policy that re-optimizes the selecting parameter at every distance."""


Policy = Union[FixedA, OptimalA]


@dataclass(frozen=True)
class LimitReport:
    """Smallest distance at which Eve reaches full information."""

    policy: Policy
    limit_km: float
    bracket_low_km: float
    bracket_high_km: float
    info_at_limit: float

    @property
    def found(self) -> bool:
        return math.isfinite(self.limit_km)


@dataclass(frozen=True)
class TheoremViolation:
    attack: str
    a: float
    length_km: float
    derivative: float


@dataclass(frozen=True)
class TheoremReport:
    """Finite-difference check of the attack curves' monotonicity in a."""

    fd_step: float
    storage_checked: int
    storage_excluded: int
    irud_checked: int
    irud_excluded: int
    violations: tuple[TheoremViolation, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return not self.violations


def sweep(
    a_values: Iterable[float],
    l_min: float,
    l_max: float,
    steps: int,
    mu_b: float = 0.1,
    alpha_db_per_km: float = 0.25,
) -> list[CurvePoint]:
    """Evaluate both attack curves on a length grid for each a."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if l_min < 0 or l_max < l_min:
        raise ValueError("need 0 <= l_min <= l_max")
    lengths = np.linspace(l_min, l_max, steps)
    points: list[CurvePoint] = []
    for a in a_values:
        mu = mu_for_a(a, mu_b)
        for length in lengths:
            eta = transmission(alpha_db_per_km, float(length)).eta_rho
            info_s = min(1.0, storage_attack(a, eta, mu).eve_info)
            info_i = min(1.0, irud_attack(eta, mu).eve_info)
            points.append(CurvePoint(float(length), a, info_s, info_i, max(info_s, info_i)))
    return points


def optimize_a(
    length_km: float,
    mu_b: float = 0.1,
    alpha_db_per_km: float = 0.25,
    tol: float = 1e-4,
) -> tuple[float, float]:
    """Selecting parameter that minimizes Eve's best-attack information.

    The storage information is nondecreasing and the IRUD information is
    nonincreasing in a, so the minimax sits at an endpoint or at the curve
    crossing. The crossing is located by bisection on their difference; a
    101-point grid scan backs the result up and wins if it found a lower
    value.
    """
    if tol <= 0:
        raise ValueError("tol must be > 0")
    eta = transmission(alpha_db_per_km, length_km).eta_rho

    def curves(a: float) -> tuple[float, float]:
        mu = mu_for_a(a, mu_b)
        return storage_attack(a, eta, mu).eve_info, irud_attack(eta, mu).eve_info

    def gap(a: float) -> float:
        info_s, info_i = curves(a)
        return info_s - info_i

    if gap(0.0) >= 0.0:
        a_star = 0.0
    elif gap(1.0) <= 0.0:
        a_star = 1.0
    else:
        lo, hi = 0.0, 1.0
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if gap(mid) < 0.0:
                lo = mid
            else:
                hi = mid
        a_star = 0.5 * (lo + hi)
    info_star = max(curves(a_star))

    grid = np.linspace(0.0, 1.0, 101)
    grid_vals = [max(curves(float(x))) for x in grid]
    best = int(np.argmin(grid_vals))
    if grid_vals[best] < info_star - 1e-9:
        a_star, info_star = float(grid[best]), grid_vals[best]
    return a_star, min(1.0, info_star)


def ultimate_limit(
    policy: Policy,
    mu_b: float = 0.1,
    alpha_db_per_km: float = 0.25,
    tol_km: float = 0.01,
) -> LimitReport:
    """Bisection for the smallest distance with full eavesdropper information.

    The information curves are nondecreasing in distance, so a doubling
    bracket from 1 km followed by bisection pins the unique onset. Searches
    are capped at 500 km; an unreachable limit is reported as infinite.
    """
    if not 0.0 < tol_km <= 0.1:
        raise ValueError("tol_km must be in (0, 0.1]")

    def info_at(length: float) -> float:
        if isinstance(policy, FixedA):
            eta = transmission(alpha_db_per_km, length).eta_rho
            return best_attack_info(policy.a, eta, mu_b)
        return optimize_a(length, mu_b, alpha_db_per_km)[1]

    full = 1.0 - 1e-12
    lo, hi = 0.0, 1.0
    while info_at(hi) < full:
        lo, hi = hi, 2.0 * hi
        if hi > 500.0:
            return LimitReport(policy, math.inf, lo, math.inf, info_at(500.0))
    while hi - lo > tol_km:
        mid = 0.5 * (lo + hi)
        if info_at(mid) < full:
            lo = mid
        else:
            hi = mid
    return LimitReport(policy, hi, lo, hi, info_at(hi))


def verify_theorem(
    a_values: Sequence[float],
    lengths_km: Sequence[float],
    mu_b: float = 0.1,
    alpha_db_per_km: float = 0.25,
    fd_step: float = 1e-3,
) -> TheoremReport:
    """Check the attack curves' monotonicity in a by finite differences.

    At every grid point where the whole stencil is unsaturated, the storage
    information must increase and the IRUD information must decrease with a.
    Saturated stencils are excluded (the clamped branches are constant in a
    or identically 1) and counted in the report.
    """
    if not 0.0 < fd_step < 0.5:
        raise ValueError("fd_step must be in (0, 0.5)")
    storage_checked = storage_excluded = 0
    irud_checked = irud_excluded = 0
    violations: list[TheoremViolation] = []

    for a in a_values:
        lo_a = max(0.0, a - fd_step)
        hi_a = min(1.0, a + fd_step)
        for length in lengths_km:
            eta = transmission(alpha_db_per_km, length).eta_rho

            storage = [storage_attack(x, eta, mu_for_a(x, mu_b)) for x in (lo_a, hi_a)]
            if any(r.saturated for r in storage):
                storage_excluded += 1
            else:
                storage_checked += 1
                fd = (storage[1].eve_info - storage[0].eve_info) / (hi_a - lo_a)
                if fd <= 0.0:
                    violations.append(TheoremViolation("storage", a, length, fd))

            irud = [irud_attack(eta, mu_for_a(x, mu_b)) for x in (lo_a, hi_a)]
            if any(r.saturated for r in irud):
                irud_excluded += 1
            else:
                irud_checked += 1
                fd = (irud[1].eve_info - irud[0].eve_info) / (hi_a - lo_a)
                if fd >= 0.0:
                    violations.append(TheoremViolation("irud", a, length, fd))

    return TheoremReport(
        fd_step, storage_checked, storage_excluded, irud_checked, irud_excluded,
        tuple(violations),
    )
