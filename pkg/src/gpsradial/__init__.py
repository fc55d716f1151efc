"""Mapped Legendre pseudospectral bound-state solver for screened Coulomb potentials."""

from .collocation import (
    CollocationGrid,
    barycentric_interpolate,
    barycentric_weights,
    build_grid,
    cardinal_d2,
    quadrature,
    symmetrized_d2,
)
from .mapping import (
    RadialMap,
    curvature_potential,
    map_derivatives,
    map_r,
    mapping_potential,
    radius_to_x,
)
from .operator import (
    BOUND_THRESHOLD,
    AssemblyError,
    BoundState,
    DiscreteHamiltonian,
    LabelingError,
    PartialSpectrumWarning,
    SolverError,
    assemble,
    eigensolve,
    extract_states,
    solve_channel,
)
from .potentials import (
    ChannelSpec,
    ELL_LETTERS,
    Family,
    PotentialSpec,
    effective_potential,
    evaluate,
    parse_state_label,
    scale_energy,
    state_label,
)
from .observables import (
    DensityProfile,
    QuadratureAccuracyWarning,
    cumulative_norm,
    expectation_r_power,
    psi_at,
    radial_density,
)
from .analysis import (
    DEFAULT_R_MAX_SCHEDULE,
    ConvergenceReport,
    SweepResult,
    UnboundStateError,
    converge_r_max,
    critical_screening_estimate,
    hulthen_exact_s,
    s_state_critical,
    stable_decimals,
    sweep_screening,
    truncate_digits,
)

__version__ = "0.1.0"
