"""Closed-form time evolution of the joint atom-field state.

At exact two-photon resonance with equal couplings the state stays in the
family

    |psi(tau)> = sum_n q_n [ A(n) |1,n> + B(n+1) |2,n+1> + C(n+1) |3,n+1> ],

with amplitudes driven only through the shape-function integral Theta:

    A(n)   = cos(sqrt(2) * lam * Theta * sqrt(n+1) * g(n+1))
    B(n+1) = C(n+1) = sin(same) / (i*sqrt(2))

so every observable downstream is a single pass over the Fock index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import FieldAmplitudes, ModelParams, eval_g, g_ladder, theta

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class JointState:
    """Analytic wavefunction at scaled time tau.

    A[n] holds A(n,tau); B[n] and C[n] hold B(n+1,tau) and C(n+1,tau), i.e.
    the amplitudes sitting on |2,n+1> and |3,n+1>.  B and C are stored
    separately (despite being equal here) so downstream comparisons can catch
    symmetry-breaking bugs.
    """

    tau: float
    params: ModelParams
    q: FieldAmplitudes
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        for name in ("A", "B", "C"):
            arr = np.array(getattr(self, name), dtype=complex)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def n_max(self) -> int:
        return self.params.n_max


def rabi_argument(n: int, tau: float, params: ModelParams) -> float:
    """Phase sqrt(2)*lam*Theta(tau)*sqrt(n+1)*g(n+1) driving Fock sector n."""
    return (
        SQRT2
        * params.lam
        * theta(params, tau)
        * math.sqrt(n + 1)
        * eval_g(params.nonlinearity, n + 1)
    )


def evolve(params: ModelParams, q: FieldAmplitudes, tau: float) -> JointState:
    """Evaluate the closed-form amplitudes for every Fock index at time tau."""
    n = np.arange(params.n_max + 1, dtype=float)
    phase = (
        SQRT2
        * params.lam
        * theta(params, tau)
        * np.sqrt(n + 1.0)
        * g_ladder(params.nonlinearity, params.n_max)
    )
    A = np.cos(phase).astype(complex)
    half_sin = np.sin(phase) / SQRT2
    B = -1j * half_sin  # 1/(i*sqrt(2)) factor
    C = -1j * half_sin
    return JointState(tau=tau, params=params, q=q, A=A, B=B, C=C)


def atomic_populations(state: JointState) -> tuple[float, float, float]:
    """Diagonal of the reduced atomic density matrix (rho_11, rho_22, rho_33)."""
    P = state.q.P
    rho11 = float(np.sum(P * np.abs(state.A) ** 2))
    rho22 = float(np.sum(P * np.abs(state.B) ** 2))
    rho33 = float(np.sum(P * np.abs(state.C) ** 2))
    return rho11, rho22, rho33
