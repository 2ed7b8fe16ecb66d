"""Leapfrogging of two coaxial circular vortex filaments.

Reduced Hamiltonian systems for equal and opposite vorticity signs, exact
leapfrogging criteria, an adaptive Dormand-Prince integrator, the full
physical fields, a discretised filament model and phase-portrait data.
"""

from .core import (
    CanonicalSetup,
    ModelParams,
    PhysicalState,
    ReducedState,
    Regime,
    Verdict,
    VerdictKind,
    canonicalize,
    physical_to_reduced,
    reduced_to_physical,
    singular_angle,
)
from .errors import *  # noqa: F401,F403
from .filament3d import DiscreteFilament, pde_rhs, sample_circular_pair
from .fullode import (
    AugmentedState,
    ParallelSetup,
    field_augmented,
    field_physical,
    field_pointvortex,
    parallel_exact,
)
from .integrate import OrbitReport, Termination, Trajectory, detect_closed_orbit, integrate
from .opposite import (
    EquilibriumReportOpp,
    classify_opp,
    equilibria_opp,
    field_opp,
    gamma_star,
    hamiltonian_opp,
)
from .portrait import Motion, PortraitGrid, hamiltonian_grid, orbit_period
from .reduced import classify, classify_physical, equilibria, field, hamiltonian
from .same import EquilibriumReportSame, classify_same, equilibria_same, field_same, hamiltonian_same

__version__ = "0.1.0"
