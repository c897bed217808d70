"""Figure rendering for the report command."""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .analysis import CurvePoint


def plot_information_curves(points: Sequence[CurvePoint], path: str | Path) -> Path:
    """Eve's best-attack information against distance, one curve per a."""
    by_a: dict[float, list[CurvePoint]] = defaultdict(list)
    for p in points:
        by_a[p.a].append(p)

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for a in sorted(by_a):
        curve = sorted(by_a[a], key=lambda p: p.length_km)
        ax.plot(
            [p.length_km for p in curve],
            [p.info_best for p in curve],
            label=f"a = {a:g}",
        )
    ax.set_xlabel("fiber length l [km]")
    ax.set_ylabel("Eve's information per sifted bit")
    ax.set_ylim(0.0, 1.05)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_optimal_selecting(
    lengths_km: Sequence[float],
    a_stars: Sequence[float],
    info_stars: Sequence[float],
    path: str | Path,
) -> Path:
    """Minimized information (solid) and its optimizer a* (dotted) against
    distance."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.plot(lengths_km, info_stars, label="minimized Eve information")
    ax.plot(lengths_km, a_stars, linestyle=":", label="optimal selecting parameter a*")
    ax.set_xlabel("fiber length l [km]")
    ax.set_ylabel("information / selecting parameter")
    ax.set_ylim(0.0, 1.05)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
