"""Photon-number statistics and quadrature variances of the cavity field.

All quantities reduce to single sums over the Fock index because the analytic
state is a superposition of one |1,n>, |2,n+1>, |3,n+1> triple per photon
sector.  P_n denotes |q_n|^2 throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import TruncationError, UndefinedStatisticError
from .evolution import JointState

# Mean photon number below which the Mandel parameter is undefined.
VACUUM_MEAN_FLOOR = 1e-12


@dataclass(frozen=True)
class FieldMoments:
    """Cached field moments: <n>, <n^2>, and <a^r> for the requested orders."""

    mean_n: float
    mean_n2: float
    a_r: dict[int, complex]


def _branch_weights(state: JointState):
    P = state.q.P
    w_top = P * np.abs(state.A) ** 2  # photon number n
    w_low = P * (np.abs(state.B) ** 2 + np.abs(state.C) ** 2)  # photon number n+1
    return w_top, w_low


def mean_photon_number(state: JointState) -> float:
    """<a† a> = sum_n P_n [ n|A|^2 + (n+1)(|B|^2 + |C|^2) ]."""
    n = np.arange(state.n_max + 1, dtype=float)
    w_top, w_low = _branch_weights(state)
    return float(np.sum(n * w_top + (n + 1.0) * w_low))


def second_moment(state: JointState) -> float:
    """<(a† a)^2> = sum_n P_n [ n^2|A|^2 + (n+1)^2(|B|^2 + |C|^2) ]."""
    n = np.arange(state.n_max + 1, dtype=float)
    w_top, w_low = _branch_weights(state)
    return float(np.sum(n**2 * w_top + (n + 1.0) ** 2 * w_low))


def mandel_q(state: JointState) -> float:
    """Mandel parameter Q = (<n^2> - <n>^2)/<n> - 1; Q < 0 is sub-Poissonian."""
    mean = mean_photon_number(state)
    if mean < VACUUM_MEAN_FLOOR:
        raise UndefinedStatisticError(
            f"Mandel parameter undefined: mean photon number {mean:.3e} is at vacuum level"
        )
    return (second_moment(state) - mean**2) / mean - 1.0


def field_moment(state: JointState, r: int) -> complex:
    """<a^r> for non-negative integer r (the adjoint moment is its conjugate).

    Factorial ratios sqrt((n+r)!/n!) are accumulated multiplicatively, so the
    sum stays in floating range for any practical truncation.
    """
    if r < 0:
        raise TruncationError(f"moment order must be non-negative, got r={r}")
    n_max = state.n_max
    if r > n_max:
        raise TruncationError(f"moment order r={r} exceeds the Fock truncation n_max={n_max}")
    q = state.q.q
    A, B, C = state.A, state.B, state.C
    n = np.arange(n_max + 1 - r, dtype=float)
    fac_top = np.ones_like(n)
    fac_low = np.ones_like(n)
    for k in range(1, r + 1):
        fac_top *= np.sqrt(n + k)
        fac_low *= np.sqrt(n + 1.0 + k)
    shift = np.conj(q[: len(n)]) * q[r:]
    terms = shift * (
        fac_top * np.conj(A[: len(n)]) * A[r:]
        + fac_low * (np.conj(B[: len(n)]) * B[r:] + np.conj(C[: len(n)]) * C[r:])
    )
    return complex(np.sum(terms))


def collect_moments(state: JointState, orders=(0, 1, 2)) -> FieldMoments:
    return FieldMoments(
        mean_n=mean_photon_number(state),
        mean_n2=second_moment(state),
        a_r={r: field_moment(state, r) for r in orders},
    )


def quadrature_squeezing(state: JointState) -> tuple[float, float]:
    """Variance parameters (V_x, V_p); a value in (-1, 0) flags squeezing.

    V_x = 2<a†a> + <a^2> + <a†^2> - (<a> + <a†>)^2 and V_p with the signs of
    the coherence terms flipped; both equal 4*(quadrature variance) - 1 with
    x = (a + a†)/2, p = (a - a†)/2i, and vanish for a coherent state.
    """
    mean = mean_photon_number(state)
    a1 = field_moment(state, 1)
    a2 = field_moment(state, 2)
    v_x = 2.0 * mean + 2.0 * a2.real - (2.0 * a1.real) ** 2
    v_p = 2.0 * mean - 2.0 * a2.real - (2.0 * a1.imag) ** 2
    return float(v_x), float(v_p)
