"""spinorlab: spin-1/2 wave packets on periodic spectral grids.

Exact construction and verification of the Pauli/Dirac matrix algebra
behind the first-order two-spinor dynamics, spectral propagation of the
two-component wave equation in electromagnetic potentials, the full
probability-current decomposition including the divergence-free spin term,
and Bohmian trajectories driven by that current.
"""

from .algebra import (
    DiracRep,
    anticommutator,
    check_dirac_algebra,
    check_linearization_conditions,
    dirac_rep,
    fifth_matrix,
    kron,
    pauli,
    sigma_dot,
    theta_symbol,
)
from .bohm import (
    Plane,
    Trajectory,
    arrival_times,
    flow_from_states,
    integrate_trajectory,
    sample_density,
    transport,
    velocity_field,
)
from .currents import (
    CurrentDecomposition,
    auxiliary_spinor,
    continuity_residual,
    decompose_current,
    dual_route_max_diff,
    levy_leblond_current,
    levy_leblond_residual,
    mita_current,
    moment_from_spin_current,
    spin_current,
    spin_from_mita,
)
from .evolve import (
    PropagationError,
    PropagatorConfig,
    RunRecord,
    propagate,
    step_krylov,
    step_splitstep,
)
from .exact import ExactComplex, ExactMatrix
from .fields import EMPotential, GaugeFunction, gauge_transform, preset, zeeman_uniform
from .grids import Grid, make_grid
from .state import (
    BispinorField,
    ScalarField,
    SpinorField,
    VectorField,
    apply_hamiltonian,
    density,
    expect_energy,
    expect_moment,
    expect_momentum,
    expect_position,
    expect_spin,
    init_gaussian,
    inner,
    norm,
    position_variance,
    spin_density,
)

__version__ = "0.1.0"
