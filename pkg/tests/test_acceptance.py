"""Acceptance gate: one test per shipped guarantee, one printed line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the PASS/FAIL lines.
Statistical checks use pinned seeds; tolerances are part of the contract and
must not be widened.
"""

import math
import subprocess
import sys
import time

import numpy as np

from saqkd.analysis import FixedA, OptimalA, optimize_a, ultimate_limit, verify_theorem
from saqkd.attacks import (
    monte_carlo_irud,
    monte_carlo_storage,
    peres_info,
    sample_irud_outcomes,
)
from saqkd.channel import raw_rate, transmission
from saqkd.protocol import ProtocolParams, run_session
from saqkd.qstates import (
    FourState,
    construct_irud_measurement,
    inner,
    irud_outcome_probabilities,
    tensor_power,
)

SQRT_HALF = 1.0 / math.sqrt(2.0)


def check(number: int, name: str, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] criterion {number:02d} {name}: {detail}")
    assert ok, f"criterion {number:02d} {name}: {detail}"


def test_criterion_01_sifted_rate_law():
    start = time.perf_counter()
    worst = 0.0
    n = 1_000_000
    for a in (0.0, 0.5, 1.0):
        stats = run_session(ProtocolParams(a=a), n, np.random.default_rng(4))
        p = (1.0 + a) / 4.0
        sigma = math.sqrt(p * (1.0 - p) / n)
        worst = max(worst, abs(stats.sifted_fraction - p) / (3.0 * sigma))
    elapsed = time.perf_counter() - start
    check(
        1, "sifted-rate law", worst < 1.0 and elapsed < 5.0,
        f"worst deviation {worst:.2f} of 3 sigma over a in {{0, 0.5, 1}}, {elapsed:.1f}s",
    )


def test_criterion_02_zero_qber():
    errors = 0
    for a in (0.0, 0.25, 0.5, 0.75, 1.0):
        for params in (ProtocolParams(a=a), ProtocolParams(a=a, length_km=40.0, eta_d=0.5)):
            errors += run_session(params, 200_000, np.random.default_rng(1)).errors
    check(2, "zero QBER without eavesdropping", errors == 0, f"total errors {errors}")


def h2(x: float) -> float:
    if x in (0.0, 1.0):
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def test_criterion_03_two_state_information_bound():
    closed = peres_info(SQRT_HALF)
    # independent oracle: scan projective measurements against two real qubits
    # at overlap cos(pi/4); information = H(p) - mean conditional entropy
    half_angle = math.pi / 8.0
    best = 0.0
    for k in range(10_000):
        theta = math.pi * k / 10_000
        p_u = math.cos(theta - half_angle) ** 2
        p_v = math.cos(theta + half_angle) ** 2
        info = h2(0.5 * (p_u + p_v)) - 0.5 * (h2(p_u) + h2(p_v))
        best = max(best, info)
    ok = (
        abs(closed - 0.399124) <= 1e-4
        and best <= closed + 1e-6
        and abs(best - closed) <= 1e-4
    )
    check(
        3, "two-state information bound", ok,
        f"closed form {closed:.6f}, scan max {best:.6f}",
    )


def test_criterion_04_discrimination_measurement():
    phis = construct_irud_measurement()
    worst = 0.0
    for i, state in enumerate(FourState):
        psi = tensor_power(state, 3)
        for j, phi in enumerate(phis):
            target = SQRT_HALF if i == j else 0.0
            worst = max(worst, abs(inner(psi, phi) - target))
    for i in range(4):
        for j in range(4):
            worst = max(worst, abs(inner(phis[i], phis[j]) - float(i == j)))
    table = irud_outcome_probabilities()
    conclusive_defect = float(np.abs(table[:, :4].sum(axis=1) - 0.5).max())

    rng = np.random.default_rng(15)
    states = rng.integers(0, 4, 100_000)
    outcomes = sample_irud_outcomes(states, rng)
    conclusive = outcomes < 4
    misidentified = int((conclusive & (outcomes != states)).sum())
    sigma = math.sqrt(0.25 / states.size)
    empirical = float(conclusive.mean())

    ok = (
        worst <= 1e-10
        and conclusive_defect <= 1e-10
        and abs(empirical - 0.5) <= 3.0 * sigma
        and misidentified == 0
    )
    check(
        4, "unambiguous discrimination measurement", ok,
        f"max vector defect {worst:.2e}, conclusive {empirical:.4f}, "
        f"misidentified {misidentified}",
    )


def test_criterion_05_fixed_sifting_limit():
    start = time.perf_counter()
    report = ultimate_limit(FixedA(0.0))
    elapsed = time.perf_counter() - start
    ok = abs(report.limit_km - 102.5) <= 2.5 and elapsed < 1.0
    check(
        5, "robustness limit at a=0", ok,
        f"limit {report.limit_km:.2f} km in 102.5 +- 2.5, {elapsed:.2f}s",
    )


def test_criterion_06_adaptive_limit():
    report = ultimate_limit(OptimalA())
    ok = abs(report.limit_km - 124.9) <= 2.0
    check(6, "robustness limit with optimal a", ok, f"limit {report.limit_km:.2f} km in 124.9 +- 2")


def test_criterion_07_crossover_distance():
    first = None
    length = 80.0
    while length <= 95.0:
        if optimize_a(length)[0] > 0.0:
            first = length
            break
        length += 0.25
    ok = first is not None and abs(first - 86.7) <= 2.5
    check(
        7, "optimal a leaves zero", ok,
        f"first length with a*>0 is {first} km, expected 86.7 +- 2.5",
    )


def test_criterion_08_monotonicity_in_a():
    report = verify_theorem(np.linspace(0.0, 1.0, 11), np.linspace(5.0, 80.0, 31))
    ok = report.passed and report.storage_checked > 0 and report.irud_checked > 0
    check(
        8, "attack curves monotone in a", ok,
        f"storage {report.storage_checked} checked/{report.storage_excluded} excluded, "
        f"irud {report.irud_checked}/{report.irud_excluded}, "
        f"{len(report.violations)} violations",
    )


def test_criterion_09_monte_carlo_agreement():
    start = time.perf_counter()
    n = 10_000_000

    eta = transmission(0.25, 40.0).eta_rho
    storage = monte_carlo_storage(1.0, eta, 0.1, n, np.random.default_rng(16)).result
    rate_target = eta * 0.1
    rate_sigma = math.sqrt(rate_target * (1.0 - rate_target) / n)
    storage_ok = (
        abs(storage.eve_info - 0.4265) <= 0.02
        and abs(storage.delivered_rate - rate_target) <= 3.0 * rate_sigma
    )

    eta = transmission(0.25, 80.0).eta_rho
    irud = monte_carlo_irud(0.0, eta, 0.2, n, np.random.default_rng(14)).result
    irud_ok = abs(irud.eve_info - 0.2709) <= 0.02
    elapsed = time.perf_counter() - start

    check(
        9, "Monte-Carlo matches analytics", storage_ok and irud_ok and elapsed < 30.0,
        f"storage info {storage.eve_info:.4f} (target 0.4265 +- 0.02), "
        f"irud info {irud.eve_info:.4f} (target 0.2709 +- 0.02), {elapsed:.1f}s",
    )


def test_criterion_10_raw_rate_identity():
    rng = np.random.default_rng(20260814)
    worst = 0.0
    for _ in range(100):
        mu = float(rng.uniform(0.01, 0.5))
        eta_d = float(rng.uniform(0.05, 1.0))
        eta_rho = float(rng.uniform(0.001, 1.0))
        series = 0.0
        survival = eta_d * eta_rho
        n = 1
        while True:
            term = math.exp(-mu) * mu**n / math.factorial(n)
            series += term * (1.0 - (1.0 - survival) ** n)
            if term < 1e-13:
                break
            n += 1
        worst = max(worst, abs(raw_rate(mu, eta_d, eta_rho).exact - series))
    check(
        10, "raw-rate closed form equals series", worst <= 1e-9,
        f"max |closed - series| = {worst:.2e} over 100 random triples",
    )


def test_criterion_11_cli_determinism():
    commands = [
        ["simulate", "--a", "0.5", "--pulses", "1000000", "--seed", "7"],
        ["attack-sim", "--a", "0", "--l", "60", "--pulses", "300000", "--seed", "5"],
        ["sweep", "--a", "0,0.5,1", "--l-min", "0", "--l-max", "60", "--l-step", "20"],
        ["optimize", "--l", "110"],
        ["limits", "--policy", "optimal"],
        ["verify-theorem"],
    ]
    mismatched = []
    for argv in commands:
        runs = [
            subprocess.run(
                [sys.executable, "-m", "saqkd", *argv], capture_output=True
            )
            for _ in range(2)
        ]
        if not all(r.returncode == 0 for r in runs) or runs[0].stdout != runs[1].stdout:
            mismatched.append(argv[0])
    check(
        11, "CLI output is byte-deterministic", not mismatched,
        f"{len(commands)} commands replayed, mismatches: {mismatched or 'none'}",
    )
