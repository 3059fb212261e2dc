"""Atom-field entanglement via the reduced atomic density matrix.

The global state is pure, so the field and atomic entropies coincide and the
degree of entanglement can be read off the 3x3 atomic density matrix.  Its
eigenvalues come from the closed-form (trigonometric Cardano) solution of the
characteristic cubic, with a symmetric eigensolver fallback reserved for
near-triple-degenerate spectra where the closed form is ill-conditioned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .evolution import JointState

# Discriminant below this is treated as a (near-)triple-degenerate spectrum.
DEGENERACY_FLOOR = 1e-14

MAX_ENTROPY = math.log(3.0)


@dataclass(frozen=True)
class AtomDensityMatrix:
    """Reduced atomic state with its eigenvalue decomposition bookkeeping.

    xi holds the three eigenvalues clamped into [0, 1] and sorted descending;
    alpha1..alpha3 are the characteristic-polynomial coefficients
    lambda^3 + alpha1*lambda^2 + alpha2*lambda + alpha3, and beta the Cardano
    angle (NaN when the eigensolver fallback was used).
    """

    rho: np.ndarray
    xi: tuple[float, float, float]
    alpha1: float
    alpha2: float
    alpha3: float
    beta: float
    used_fallback: bool = False

    def __post_init__(self):
        rho = np.array(self.rho, dtype=complex)
        rho.flags.writeable = False
        object.__setattr__(self, "rho", rho)


def reduced_density(state: JointState) -> AtomDensityMatrix:
    """Trace the field out of |psi><psi|.

    Diagonal and same-photon-sector elements pair equal Fock indices; the
    row-1 coherences pair q_{n+1} with q_n* because level |1> holds one photon
    fewer than levels |2>, |3>.
    """
    q = state.q.q
    P = state.q.P
    A, B, C = state.A, state.B, state.C

    shift = q[1:] * np.conj(q[:-1])  # q_{n+1} q_n*, n = 0 .. n_max-1
    rho11 = np.sum(P * np.abs(A) ** 2)
    rho22 = np.sum(P * np.abs(B) ** 2)
    rho33 = np.sum(P * np.abs(C) ** 2)
    rho12 = np.sum(shift * A[1:] * np.conj(B[:-1]))
    rho13 = np.sum(shift * A[1:] * np.conj(C[:-1]))
    rho23 = np.sum(P * B * np.conj(C))

    rho = np.array(
        [
            [rho11, rho12, rho13],
            [np.conj(rho12), rho22, rho23],
            [np.conj(rho13), np.conj(rho23), rho33],
        ],
        dtype=complex,
    )
    xi, a1, a2, a3, beta, fell_back = _eigenvalues_with_coefficients(rho)
    return AtomDensityMatrix(
        rho=rho, xi=xi, alpha1=a1, alpha2=a2, alpha3=a3, beta=beta, used_fallback=fell_back
    )


def _characteristic_coefficients(rho: np.ndarray) -> tuple[float, float, float]:
    d = np.real(np.diag(rho))
    a1 = -float(d.sum())
    a2 = float(
        d[0] * d[1]
        + d[1] * d[2]
        + d[2] * d[0]
        - abs(rho[0, 1]) ** 2
        - abs(rho[1, 2]) ** 2
        - abs(rho[0, 2]) ** 2
    )
    det = (
        rho[0, 0] * (rho[1, 1] * rho[2, 2] - rho[1, 2] * rho[2, 1])
        - rho[0, 1] * (rho[1, 0] * rho[2, 2] - rho[1, 2] * rho[2, 0])
        + rho[0, 2] * (rho[1, 0] * rho[2, 1] - rho[1, 1] * rho[2, 0])
    )
    a3 = -float(np.real(det))
    return a1, a2, a3


def _eigenvalues_with_coefficients(rho: np.ndarray):
    a1, a2, a3 = _characteristic_coefficients(rho)
    disc = a1 * a1 - 3.0 * a2
    if disc < DEGENERACY_FLOOR:
        # Closed form divides by disc^{3/2}; fall back to a symmetric solver.
        vals = np.linalg.eigvalsh(rho)
        xi = _clamp_sorted(vals)
        return xi, a1, a2, a3, float("nan"), True
    ratio = (9.0 * a1 * a2 - 2.0 * a1**3 - 27.0 * a3) / (2.0 * disc**1.5)
    beta = math.acos(min(1.0, max(-1.0, ratio))) / 3.0
    radius = (2.0 / 3.0) * math.sqrt(disc)
    vals = [-a1 / 3.0 + radius * math.cos(beta + 2.0 * math.pi * j / 3.0) for j in range(3)]
    xi = _clamp_sorted(vals)
    return xi, a1, a2, a3, beta, False


def _clamp_sorted(vals) -> tuple[float, float, float]:
    clamped = sorted((min(1.0, max(0.0, float(v))) for v in vals), reverse=True)
    return clamped[0], clamped[1], clamped[2]


def cardano_eigenvalues(rho: np.ndarray) -> tuple[float, float, float]:
    """Eigenvalues of a Hermitian unit-trace 3x3 matrix, descending in [0, 1].

    Uses the trigonometric closed form of the characteristic cubic; switches
    to numpy's symmetric eigensolver when the spectrum is nearly triple
    degenerate (documented fallback, not an error).
    """
    xi, *_ = _eigenvalues_with_coefficients(np.asarray(rho, dtype=complex))
    return xi


def von_neumann_entropy(xi) -> float:
    """S = -sum xi_j ln xi_j in nats, with the 0*ln(0) = 0 convention."""
    s = 0.0
    for v in xi:
        v = min(1.0, max(0.0, float(v)))
        if v > 0.0:
            s -= v * math.log(v)
    return s


def entanglement_entropy(state: JointState) -> float:
    """Field (equivalently atomic) entropy of the evolved pure joint state."""
    return von_neumann_entropy(reduced_density(state).xi)
