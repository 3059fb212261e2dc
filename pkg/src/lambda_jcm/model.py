"""Physical inputs of the model: coupling menu, atomic-motion shape integral,
and the initial cavity-field amplitudes.

Conventions used throughout the package:

* time is the dimensionless scaled time ``tau = lambda * t`` (the CLI converts);
* the cavity field starts in a coherent state ``|alpha>`` truncated at Fock
  index ``n_max``;
* the intensity dependence of the atom-field coupling enters through a real
  profile ``g``, evaluated at photon numbers 1 .. n_max+1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ConfigurationError, TruncationError

# Magnitude below which the trapped-ion Laguerre denominator counts as a root.
LAGUERRE_DENOM_FLOOR = 1e-12
# Largest coherent-weight mass allowed beyond the Fock cutoff.
TAIL_MASS_TOL = 1e-12


class Motion(Enum):
    """Whether the atom crosses the cavity mode or sits still."""

    MOVING = "moving"
    STATIC = "static"


@dataclass(frozen=True)
class Identity:
    """Constant coupling profile, g(n) = 1 (no intensity dependence)."""


@dataclass(frozen=True)
class Harmonious:
    """g(n) = 1/sqrt(n); cancels the sqrt(n+1) ladder factor exactly."""


@dataclass(frozen=True)
class PoschlTeller:
    """g(n) = sqrt(n + nu) for a potential parameter nu > 0."""

    nu: float

    def __post_init__(self):
        if not (self.nu > 0 and math.isfinite(self.nu)):
            raise ConfigurationError(f"PoschlTeller requires nu > 0, got nu={self.nu}")


@dataclass(frozen=True)
class TrappedIon:
    """Lamb-Dicke-like profile built from generalized Laguerre polynomials.

    For the amplitude at Fock index n (profile argument n+1) the coupling is
    L^1_n(eta^2) / [(n+1) * L^0_n(eta^2)].  Values of eta that put eta^2 on a
    Laguerre root inside the truncation are rejected at configuration time.
    """

    eta: float

    def __post_init__(self):
        if not math.isfinite(self.eta):
            raise ConfigurationError(f"TrappedIon requires finite eta, got eta={self.eta}")


@dataclass(frozen=True)
class CustomTable:
    """Tabulated profile: values[k] is g evaluated at photon number k+1."""

    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ConfigurationError("CustomTable requires at least one value")
        if not all(math.isfinite(v) for v in vals):
            raise ConfigurationError("CustomTable values must all be finite reals")
        object.__setattr__(self, "values", vals)


NonlinearityKind = Identity | TrappedIon | Harmonious | PoschlTeller | CustomTable


def laguerre(k: int, order: int, x: float) -> float:
    """Generalized Laguerre polynomial L^order_k(x) by the three-term recurrence.

    Total function: upward recurrence in the degree k is stable for the
    moderate degrees (k <~ 100) and arguments used here.
    """
    if k < 0 or order < 0:
        raise ConfigurationError(f"laguerre requires k, order >= 0, got k={k}, order={order}")
    return float(laguerre_sequence(k, order, x)[k])


def laguerre_sequence(k_max: int, order: int, x: float) -> np.ndarray:
    """All of L^order_0(x) .. L^order_{k_max}(x) in one upward sweep."""
    out = np.empty(k_max + 1)
    out[0] = 1.0
    if k_max == 0:
        return out
    out[1] = 1.0 + order - x
    for k in range(1, k_max):
        out[k + 1] = ((2 * k + 1 + order - x) * out[k] - (k + order) * out[k - 1]) / (k + 1)
    return out


def eval_g(kind: NonlinearityKind, n: int) -> float:
    """Coupling profile g at photon number n (1-based, n <= n_max+1)."""
    if n < 1:
        raise ConfigurationError(f"g is only evaluated at photon numbers >= 1, got n={n}")
    if isinstance(kind, Identity):
        return 1.0
    if isinstance(kind, Harmonious):
        return 1.0 / math.sqrt(n)
    if isinstance(kind, PoschlTeller):
        return math.sqrt(n + kind.nu)
    if isinstance(kind, TrappedIon):
        # Photon number n corresponds to polynomial index n-1.
        k = n - 1
        x = kind.eta**2
        denom = n * laguerre(k, 0, x)
        if abs(denom) < LAGUERRE_DENOM_FLOOR:
            raise ConfigurationError(
                f"trapped-ion coupling singular at n={n}: |{n}*L0_{k}(eta^2)| < "
                f"{LAGUERRE_DENOM_FLOOR:g} for eta={kind.eta}"
            )
        return laguerre(k, 1, x) / denom
    if isinstance(kind, CustomTable):
        if n > len(kind.values):
            raise ConfigurationError(
                f"CustomTable holds {len(kind.values)} values; photon number {n} is out of range"
            )
        return kind.values[n - 1]
    raise ConfigurationError(f"unknown nonlinearity kind: {kind!r}")


def g_ladder(kind: NonlinearityKind, n_max: int) -> np.ndarray:
    """g evaluated at photon numbers 1 .. n_max+1, as an array indexed by n=0..n_max.

    Entry n is the factor multiplying sqrt(n+1) in the coupling of the
    |1,n> <-> |2,n+1>, |3,n+1> transitions.
    """
    m = np.arange(1, n_max + 2, dtype=float)
    if isinstance(kind, Identity):
        return np.ones(n_max + 1)
    if isinstance(kind, Harmonious):
        return 1.0 / np.sqrt(m)
    if isinstance(kind, PoschlTeller):
        return np.sqrt(m + kind.nu)
    if isinstance(kind, TrappedIon):
        x = kind.eta**2
        l0 = laguerre_sequence(n_max, 0, x)
        l1 = laguerre_sequence(n_max, 1, x)
        denom = m * l0
        bad = np.nonzero(np.abs(denom) < LAGUERRE_DENOM_FLOOR)[0]
        if bad.size:
            n_bad = int(bad[0]) + 1
            raise ConfigurationError(
                f"trapped-ion coupling singular at n={n_bad}: Laguerre denominator below "
                f"{LAGUERRE_DENOM_FLOOR:g} for eta={kind.eta}"
            )
        return l1 / denom
    if isinstance(kind, CustomTable):
        if len(kind.values) < n_max + 1:
            raise ConfigurationError(
                f"CustomTable holds {len(kind.values)} values but n_max={n_max} needs {n_max + 1}"
            )
        return np.asarray(kind.values[: n_max + 1], dtype=float)
    raise ConfigurationError(f"unknown nonlinearity kind: {kind!r}")


def default_n_max(alpha: complex) -> int:
    """Poisson-tail-safe Fock cutoff: ceil(|alpha|^2 + 10|alpha| + 20)."""
    aa = abs(alpha) ** 2
    return math.ceil(aa + 10.0 * math.sqrt(aa) + 20.0)


@dataclass(frozen=True)
class ModelParams:
    """All physical inputs of a simulation run.

    lam     -- atom-field coupling constant (sets the time scale tau = lam*t)
    p       -- number of half-wavelengths of the cavity mode along the path
    alpha   -- complex coherent amplitude of the initial field
    nonlinearity -- intensity-dependence profile g
    n_max   -- Fock truncation index; None selects a Poisson-tail-safe default
    motion  -- moving atom (sinusoidal shape function) or static atom
    """

    lam: float = 1.0
    p: int = 1
    alpha: complex = 0j
    nonlinearity: NonlinearityKind = field(default_factory=Identity)
    n_max: int | None = None
    motion: Motion = Motion.MOVING

    def __post_init__(self):
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise ConfigurationError(f"coupling constant must be positive, got lam={self.lam}")
        if self.motion is Motion.MOVING and (int(self.p) != self.p or self.p < 1):
            raise ConfigurationError(f"moving atom requires integer p >= 1, got p={self.p}")
        object.__setattr__(self, "alpha", complex(self.alpha))
        if self.n_max is None:
            object.__setattr__(self, "n_max", default_n_max(self.alpha))
        if self.n_max < 0:
            raise ConfigurationError(f"n_max must be non-negative, got {self.n_max}")
        # Fails fast on both an undersized cutoff and a singular trapped-ion eta.
        g_ladder(self.nonlinearity, self.n_max)
        coherent_amplitudes(self.alpha, self.n_max)

    @property
    def mean_photons(self) -> float:
        return abs(self.alpha) ** 2


@dataclass(frozen=True)
class FieldAmplitudes:
    """Initial field expansion q_n over Fock states, with weights P_n = |q_n|^2."""

    q: np.ndarray
    P: np.ndarray = field(init=False)

    def __post_init__(self):
        q = np.array(self.q, dtype=complex)  # private copy; instances are read-only
        q.flags.writeable = False
        object.__setattr__(self, "q", q)
        P = np.abs(q) ** 2
        P.flags.writeable = False
        object.__setattr__(self, "P", P)
        total = float(np.sum(P))
        if not (1.0 - TAIL_MASS_TOL <= total <= 1.0 + 64 * np.finfo(float).eps):
            raise TruncationError(
                f"field amplitudes carry total weight {total:.16f}; "
                f"must lie within {TAIL_MASS_TOL:g} of 1 (increase n_max or renormalize)"
            )

    @property
    def n_max(self) -> int:
        return len(self.q) - 1


def coherent_amplitudes(alpha: complex, n_max: int) -> FieldAmplitudes:
    """Coherent-state amplitudes q_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!).

    Built by the ratio recursion q_{n+1} = q_n * alpha / sqrt(n+1), which never
    forms a factorial.  Raises TruncationError when the discarded tail mass
    exceeds the package tolerance.
    """
    alpha = complex(alpha)
    q = np.empty(n_max + 1, dtype=complex)
    q[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(n_max):
        q[n + 1] = q[n] * alpha / math.sqrt(n + 1)
    tail = 1.0 - float(np.sum(np.abs(q) ** 2))
    if tail > TAIL_MASS_TOL:
        raise TruncationError(
            f"coherent tail mass {tail:.3e} beyond n_max={n_max} exceeds {TAIL_MASS_TOL:g}; "
            f"increase n_max (default rule suggests {default_n_max(alpha)})"
        )
    return FieldAmplitudes(q)


def fock_amplitudes(m: int, n_max: int) -> FieldAmplitudes:
    """Number-state preparation q_n = delta_{n,m} (handy for tests and checks)."""
    if not 0 <= m <= n_max:
        raise ConfigurationError(f"Fock index m={m} outside truncation n_max={n_max}")
    q = np.zeros(n_max + 1, dtype=complex)
    q[m] = 1.0
    return FieldAmplitudes(q)


def theta(params: ModelParams, tau: float) -> float:
    """Time integral of the shape function, in units of 1/lam.

    Moving atom: Theta = (1 - cos(p*tau)) / (p*lam), vanishing whenever
    p*tau is a multiple of 2*pi (exact revivals).  Static atom: Theta = t,
    i.e. tau/lam.
    """
    if params.motion is Motion.STATIC:
        return tau / params.lam
    return (1.0 - math.cos(params.p * tau)) / (params.p * params.lam)
