"""Qubit state inventory for the selecting-announcement protocol.

The protocol uses the four states +x, -x, +z, -z. Same-basis pairs are
orthogonal, cross-basis overlaps all have magnitude 1/sqrt(2). This module
holds the symbolic state labels, their amplitude vectors, tensor powers for
multiphoton pulses, and the three-photon measurement that identifies one of
the four states unambiguously with probability 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

SQRT_HALF = 1.0 / math.sqrt(2.0)

MAX_TENSOR_PHOTONS = 10


class MeasBasis(Enum):
    """Measurement basis choices available to Bob."""

    X = 0
    Z = 1


class FourState(Enum):
    """The four signal states. Integer codes: bit 1 is the basis, bit 0 the sign."""

    PLUS_X = 0
    MINUS_X = 1
    PLUS_Z = 2
    MINUS_Z = 3

    @property
    def basis(self) -> MeasBasis:
        return MeasBasis(self.value >> 1)

    @property
    def sign(self) -> int:
        """0 for the + state of a basis, 1 for the - state."""
        return self.value & 1

    def orthogonal_partner(self) -> "FourState":
        """The same-basis state orthogonal to this one."""
        return FourState(self.value ^ 1)

    def nonorthogonal_partners(self) -> tuple["FourState", "FourState"]:
        """Both opposite-basis states, each at overlap magnitude 1/sqrt(2)."""
        base = ((self.value >> 1) ^ 1) << 1
        return FourState(base), FourState(base | 1)


# Amplitudes in the computational (z) basis; +/-x are the real equal-weight
# superpositions with the sign carried by the second amplitude.
_AMPLITUDES: dict[FourState, tuple[float, float]] = {
    FourState.PLUS_X: (SQRT_HALF, SQRT_HALF),
    FourState.MINUS_X: (SQRT_HALF, -SQRT_HALF),
    FourState.PLUS_Z: (1.0, 0.0),
    FourState.MINUS_Z: (0.0, 1.0),
}


@dataclass(frozen=True)
class StateVector:
    """A normalized pure state on one or more qubits."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=float)
        object.__setattr__(self, "amplitudes", amps)
        if amps.ndim != 1 or amps.size < 2:
            raise ValueError("state vector must be a 1-D array of dimension >= 2")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state vector norm {norm!r} is not 1 within 1e-12")

    @property
    def dim(self) -> int:
        return int(self.amplitudes.size)


def inner(u: StateVector, v: StateVector) -> float:
    """Inner product <u|v> (real, all protocol states have real amplitudes)."""
    if u.dim != v.dim:
        raise ValueError("inner product requires equal dimensions")
    return float(np.dot(u.amplitudes, v.amplitudes))


def overlap(s1: FourState, s2: FourState) -> float:
    """Magnitude of the overlap between two signal states.

    1 for identical states, 0 for same-basis partners, 1/sqrt(2) otherwise.
    """
    if s1 == s2:
        return 1.0
    if s1.basis == s2.basis:
        return 0.0
    return SQRT_HALF


def embed(state: FourState) -> StateVector:
    """Amplitude vector of a signal state in the computational basis."""
    return StateVector(np.array(_AMPLITUDES[state]))


def tensor_power(state: FourState, n: int) -> StateVector:
    """|state>^(x)n, the n-photon pulse carrying one signal state.

    n is capped at MAX_TENSOR_PHOTONS to keep dimensions sane.
    """
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError("photon number n must be an integer")
    if not 1 <= n <= MAX_TENSOR_PHOTONS:
        raise ValueError(f"photon number n must be in [1, {MAX_TENSOR_PHOTONS}], got {n}")
    single = embed(state).amplitudes
    out = single
    for _ in range(n - 1):
        out = np.kron(out, single)
    return StateVector(out)


@lru_cache(maxsize=1)
def construct_irud_measurement() -> tuple[StateVector, StateVector, StateVector, StateVector]:
    """Conclusive vectors of the three-photon unambiguous discrimination POVM.

    Returns orthonormal Phi_1..Phi_4 (dimension 8, ordered like FourState) with
    <Psi_i|Phi_j> = delta_ij / sqrt(2), where Psi_i = embed(s_i)^(x)3. The POVM
    {|Phi_j><Phi_j|} plus the complement element then identifies the pulse
    state without error with conclusive probability 1/2.

    Construction: the in-span part of Phi_j is R_j/sqrt(2) with R_j the
    reciprocal vectors of the Psi family (columns of Psi @ G^-1 for Gram
    matrix G), which pins the required cross products. Orthonormality is
    restored by adding components from the orthogonal complement of
    span(Psi) whose Gram matrix must equal I - G^-1/2; that matrix is PSD
    (eigenvalues 2/3, 2/3, 0, 0), so a symmetric square root supplies them.
    """
    psi = np.column_stack([tensor_power(s, 3).amplitudes for s in FourState])
    gram = psi.T @ psi
    gram_inv = np.linalg.inv(gram)
    reciprocal = psi @ gram_inv

    complement_gram = np.eye(4) - 0.5 * gram_inv
    eigvals, eigvecs = np.linalg.eigh(complement_gram)
    eigvals = np.clip(eigvals, 0.0, None)  # two eigenvalues are exact zeros
    root = (eigvecs * np.sqrt(eigvals)) @ eigvecs.T

    u, _, _ = np.linalg.svd(psi)
    complement_basis = u[:, 4:]

    phi = reciprocal * SQRT_HALF + complement_basis @ root
    return tuple(StateVector(phi[:, j]) for j in range(4))  # type: ignore[return-value]


def irud_outcome_probabilities() -> np.ndarray:
    """4x5 table: row i gives P(outcome j | Psi_i) for j in FourState order,
    with column 4 the inconclusive outcome."""
    phis = construct_irud_measurement()
    table = np.zeros((4, 5))
    for i, s in enumerate(FourState):
        psi = tensor_power(s, 3)
        for j, phi in enumerate(phis):
            table[i, j] = inner(phi, psi) ** 2
        table[i, 4] = max(0.0, 1.0 - table[i, :4].sum())
    return table
