"""Exact dynamics and nonclassicality diagnostics for a moving Lambda-type
three-level atom coupled to a single cavity mode with intensity-dependent
coupling strength."""

from .entanglement import (
    AtomDensityMatrix,
    cardano_eigenvalues,
    entanglement_entropy,
    reduced_density,
    von_neumann_entropy,
)
from .entropic import (
    COHERENT_ENTROPY,
    ENTROPY_SUM_BOUND,
    EntropyPair,
    QuadratureGrid,
    entropy_pair,
    entropy_squeezing,
    fock_position_wavefunction,
    momentum_distribution,
    position_distribution,
    shannon_entropy,
)
from .errors import (
    ConfigParseError,
    ConfigurationError,
    GridError,
    SimulationError,
    StepSizeError,
    TruncationError,
    UndefinedStatisticError,
)
from .evolution import JointState, atomic_populations, evolve, rabi_argument
from .fieldstats import (
    FieldMoments,
    collect_moments,
    field_moment,
    mandel_q,
    mean_photon_number,
    quadrature_squeezing,
    second_moment,
)
from .model import (
    CustomTable,
    FieldAmplitudes,
    Harmonious,
    Identity,
    ModelParams,
    Motion,
    NonlinearityKind,
    PoschlTeller,
    TrappedIon,
    coherent_amplitudes,
    default_n_max,
    eval_g,
    fock_amplitudes,
    g_ladder,
    laguerre,
    theta,
)
from .schrodinger import (
    OracleState,
    build_interaction_generator,
    compare,
    integrate,
    joint_vector,
    partial_trace_atom,
)

__version__ = "0.1.0"
