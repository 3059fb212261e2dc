"""Brute-force validation path: direct integration of the Schrodinger equation.

The interaction generator is built as an explicit sparse matrix on the
truncated joint basis |level j, Fock n> and the state is propagated with
fixed-step classical RK4, entirely independent of the closed-form amplitudes.
Because the generator at different times differs only by the scalar shape
factor, the closed form is exact and the integrator must converge to it at
fourth order; `compare` measures the residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .errors import ConfigurationError, StepSizeError
from .evolution import JointState
from .model import FieldAmplitudes, ModelParams, Motion, g_ladder

MAX_STEP = 0.01  # largest allowed RK4 step in scaled time
NORM_DRIFT_TOL = 1e-6


@dataclass(frozen=True)
class OracleState:
    """Dense state vector on the 3*(n_max+1)-dimensional joint space.

    Index layout: psi[j*(n_max+1) + n] is the amplitude on |level j+1, n>.
    """

    psi: np.ndarray
    tau: float
    params: ModelParams

    def __post_init__(self):
        psi = np.array(self.psi, dtype=complex)
        psi.flags.writeable = False
        object.__setattr__(self, "psi", psi)

    def level_block(self, j: int) -> np.ndarray:
        """Amplitudes over Fock states for atomic level j (1-based)."""
        size = self.params.n_max + 1
        return self.psi[(j - 1) * size : j * size]


def shape_function(params: ModelParams, tau: float) -> float:
    """f evaluated along the trajectory: sin(p*tau) when moving, else 1."""
    if params.motion is Motion.STATIC:
        return 1.0
    return math.sin(params.p * tau)


def _coupling_matrix(params: ModelParams) -> sparse.csr_matrix:
    """Dimensionless symmetric coupling pattern shared by V(t) at all times.

    Element sqrt(n+1) g(n+1) joins |1,n> to |2,n+1> and to |3,n+1>; the
    deformed lowering operator annihilates every |j,0>, and the topmost
    |1,n_max> has no partner inside the truncation (its weight is bounded by
    the coherent tail tolerance).
    """
    size = params.n_max + 1
    g = g_ladder(params.nonlinearity, params.n_max)
    rows, cols, vals = [], [], []
    for n in range(params.n_max):
        elem = math.sqrt(n + 1) * g[n]
        upper = n + 1
        for level in (1, 2):  # levels |2>, |3> (0-based blocks 1 and 2)
            rows.append(n)
            cols.append(level * size + upper)
            vals.append(elem)
            rows.append(level * size + upper)
            cols.append(n)
            vals.append(elem)
    return sparse.csr_matrix(
        (np.asarray(vals, dtype=complex), (rows, cols)), shape=(3 * size, 3 * size)
    )


def build_interaction_generator(params: ModelParams, tau: float) -> sparse.csr_matrix:
    """Interaction-picture generator V(tau) = lam * f(p*tau) * coupling pattern."""
    return (params.lam * shape_function(params, tau)) * _coupling_matrix(params)


def initial_vector(params: ModelParams, q: FieldAmplitudes) -> np.ndarray:
    """psi(0) = sum_n q_n |1, n>."""
    size = params.n_max + 1
    if len(q.q) != size:
        raise ConfigurationError(
            f"field amplitudes sized {len(q.q)} do not match n_max={params.n_max}"
        )
    psi = np.zeros(3 * size, dtype=complex)
    psi[:size] = q.q
    return psi


def integrate(
    params: ModelParams, q: FieldAmplitudes, tau_end: float, dtau: float = MAX_STEP
) -> OracleState:
    """Propagate i dpsi/dtau = (V(tau)/lam) psi with fixed-step RK4.

    No renormalization is applied: norm drift is the step-size diagnostic, and
    exceeding the tolerance raises StepSizeError.
    """
    if tau_end < 0:
        raise ConfigurationError(f"tau_end must be non-negative, got {tau_end}")
    if not 0 < dtau <= MAX_STEP * (1 + 1e-12):
        raise ConfigurationError(f"step must satisfy 0 < dtau <= {MAX_STEP}, got {dtau}")
    kernel = _coupling_matrix(params)
    psi = initial_vector(params, q)
    norm0 = np.linalg.norm(psi)

    def rhs(tau, vec):
        return (-1j * shape_function(params, tau)) * (kernel @ vec)

    whole_steps = int(math.floor(tau_end / dtau + 1e-9))
    remainder = tau_end - whole_steps * dtau
    plan = [dtau] * whole_steps
    if remainder > 1e-9 * dtau:
        plan.append(remainder)
    tau = 0.0
    for h in plan:
        k1 = rhs(tau, psi)
        k2 = rhs(tau + 0.5 * h, psi + (0.5 * h) * k1)
        k3 = rhs(tau + 0.5 * h, psi + (0.5 * h) * k2)
        k4 = rhs(tau + h, psi + h * k3)
        psi = psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        tau += h
        drift = abs(np.linalg.norm(psi) - norm0)
        if drift > NORM_DRIFT_TOL:
            raise StepSizeError(
                f"norm drifted by {drift:.3e} at tau={tau:.4f}; reduce dtau below {dtau:g}"
            )
    return OracleState(psi=psi, tau=tau_end, params=params)


def joint_vector(state: JointState) -> np.ndarray:
    """Map the analytic amplitudes onto the truncated joint basis.

    q_n A(n) lands on |1,n>, q_n B(n+1) on |2,n+1>, q_n C(n+1) on |3,n+1>.
    The n = n_max contribution to levels 2 and 3 would sit at Fock n_max+1,
    outside the truncation; its weight is below the coherent tail tolerance
    and is dropped.
    """
    size = state.params.n_max + 1
    psi = np.zeros(3 * size, dtype=complex)
    q = state.q.q
    psi[:size] = q * state.A
    psi[size + 1 : 2 * size] = (q * state.B)[:-1]
    psi[2 * size + 1 :] = (q * state.C)[:-1]
    return psi


def compare(oracle: OracleState, analytic: JointState) -> float:
    """Largest per-basis-state amplitude deviation between the two routes."""
    if oracle.params.n_max != analytic.params.n_max:
        raise ConfigurationError(
            f"dimension mismatch: oracle n_max={oracle.params.n_max}, "
            f"analytic n_max={analytic.params.n_max}"
        )
    if not math.isclose(oracle.tau, analytic.tau, rel_tol=0.0, abs_tol=1e-12):
        raise ConfigurationError(
            f"states sampled at different times: {oracle.tau} vs {analytic.tau}"
        )
    return float(np.max(np.abs(oracle.psi - joint_vector(analytic))))


def partial_trace_atom(psi: np.ndarray) -> np.ndarray:
    """3x3 atomic density matrix from a dense joint vector (any Fock size)."""
    if len(psi) % 3:
        raise ConfigurationError(f"joint vector length {len(psi)} is not divisible by 3")
    blocks = np.asarray(psi, dtype=complex).reshape(3, -1)
    return blocks @ blocks.conj().T
