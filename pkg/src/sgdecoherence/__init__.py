"""
sgdecoherence
=============

Gravitational self-decoherence of a spin-1/2 particle in a Stern-Gerlach
interferometer.

- ``constants``: physical constants, experiment parameters, phase ``T``.
- ``dynamics``: discrete N-site Schrodinger-Newton evolution (exact and RK4).
- ``stern_gerlach``: closed-form two-arm interferometer and x-spin statistics.
- ``experiment``: theta sweeps, feasibility reports, consistency runs.
- ``serialize``: CSV / JSON output.
- ``cli``: the ``sgdecoherence`` command.
"""

from .constants import (
    CODATA,
    ExperimentParams,
    PhysConstants,
    dimensionless_phase,
    kinetic_potential_ratio,
    planck_mass,
)
from .dynamics import (
    DiscreteState,
    ExternalPotential,
    StepPolicy,
    Trajectory,
    exact_potential_solution,
    integrate,
    self_potential,
    site_probabilities,
)
from .errors import (
    ConfigurationError,
    ConsistencyError,
    DegenerateGeometryError,
    InvariantError,
    OutputError,
    SGDecoherenceError,
)
from .experiment import (
    FeasibilityReport,
    SweepResult,
    SweepSpec,
    consistency_run,
    count_extrema,
    feasibility,
    run_sweep,
)
from .stern_gerlach import (
    PhasePair,
    SpinorAmplitudes,
    delta_omega,
    evolve_split,
    phase_frequencies,
    prepare,
    prob_difference,
    prob_x_plus,
    prob_x_plus_qm,
)

__version__ = "0.1.0"
